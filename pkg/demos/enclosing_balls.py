#!/usr/bin/env python3
"""Minimal enclosing balls: move-to-front solver vs brute force, Jung ratio."""

import argparse
import math

import numpy as np

from infconv.grid import FunctionSpec, GridDomain, sample
from infconv.minball import enclosing_ball, radius_of_level_set


def brute(points):
    # smallest circumball over all support subsets of size <= dim+1
    from itertools import combinations
    m, dim = points.shape
    best = None
    for k in range(1, min(m, dim + 1) + 1):
        for idx in combinations(range(m), k):
            S = points[list(idx)]
            q = S - S[0]
            G = q @ q.T
            try:
                lam = np.linalg.lstsq(2.0 * G, np.diag(G), rcond=None)[0]
            except np.linalg.LinAlgError:
                continue
            ctr = S[0] + lam @ q
            r = float(np.linalg.norm(points - ctr, axis=1).max())
            if best is None or r < best:
                best = r
    return best


ap = argparse.ArgumentParser()
ap.add_argument("--sets", type=int, default=30)
ap.add_argument("--seed", type=int, default=7)
args = ap.parse_args()

rng = np.random.default_rng(args.seed)
worst_gap = 0.0
worst_jung = 0.0
for i in range(args.sets):
    dim = 1 + i % 3
    pts = rng.normal(size=(int(rng.integers(2, 13)), dim))
    ball = enclosing_ball(pts)
    worst_gap = max(worst_gap, abs(ball.radius - brute(pts)))
    diam = max(float(np.linalg.norm(pts - p, axis=1).max()) for p in pts)
    # Jung: radius <= diam * sqrt(dim / (2 dim + 2)), tight for simplices
    worst_jung = max(worst_jung,
                     ball.radius / (diam * math.sqrt(dim / (2.0 * dim + 2.0))))
print(f"{args.sets} random sets, dims 1-3:")
print(f"  worst |radius - brute| = {worst_gap:.2e}")
print(f"  worst Jung ratio       = {worst_jung:.6f} (must stay <= 1)")

# conventions: empty set -> point ball at the origin, unbounded -> whole space
empty = enclosing_ball(np.empty((0, 2)))
print(f"empty set ball: center {empty.center.tolist()}, radius {empty.radius}")

# level-set radii of a sampled function feed the hat/check transforms
dom = GridDomain(2, 4.0, 65)
f = sample(FunctionSpec.quadratic(1.0), dom)
for xi in (0.5, 2.0, 8.0):
    r, _ = radius_of_level_set(f, xi, upper=False)
    print(f"lower level set {{f <= {xi:3.1f}}}: radius {r:.4f} "
          f"(continuum {math.sqrt(xi):.4f})")

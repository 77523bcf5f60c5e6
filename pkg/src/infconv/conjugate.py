"""Discrete Legendre-Fenchel conjugation.

f*(y) = sup_x ( x . y - f(x) ) with x ranging over the primal grid nodes;
nodes where f is +inf drop out of the sup.  The evaluation points y live on a
dual grid whose half-width P bounds the slopes the conjugate can resolve; by
default P is an estimated maximum gradient of f times a safety factor.

In one dimension the sup can be taken over the lower convex hull of the
sample points (the conjugate cannot see anything below the convex hull), a
two-pointer scan that matches the brute force exactly and is cross-checked
in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import OUTSIDE_PLUS_INF, GridDomain, GridFunction

__all__ = [
    "DualGrid",
    "make_dual_grid",
    "legendre_at",
    "legendre",
    "scaled_conjugate",
    "biconjugate",
]

_SLOPE_SAFETY = 1.25
_CHUNK = 1024


@dataclass(frozen=True)
class DualGrid:
    """Slope-space grid for conjugate values: the box [-P, P]^N."""

    grid: GridDomain

    @property
    def slope_half_width(self) -> float:
        return self.grid.half_width


def estimate_slope_bound(f: GridFunction) -> float:
    """Max finite-difference gradient magnitude over finite node pairs."""
    vals = f.values
    h = f.domain.h
    best = 0.0
    for axis in range(f.domain.dim):
        a = np.moveaxis(vals, axis, -1)
        d = np.abs(np.diff(a, axis=-1)) / h
        d = d[np.isfinite(d)]
        if d.size:
            best = max(best, float(np.max(d)))
    return best


def make_dual_grid(f: GridFunction, n: int | None = None,
                   slope_half_width: float | None = None,
                   safety: float = _SLOPE_SAFETY) -> DualGrid:
    """Dual grid sized to the slopes present in f."""
    if slope_half_width is None:
        slope_half_width = estimate_slope_bound(f) * safety
        if slope_half_width <= 0:
            slope_half_width = 1.0
    if n is None:
        n = f.domain.n
    return DualGrid(GridDomain(f.domain.dim, float(slope_half_width), int(n)))


def _legendre_brute(points: np.ndarray, node_pts: np.ndarray,
                    node_vals: np.ndarray) -> np.ndarray:
    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], _CHUNK):
        block = points[start:start + _CHUNK]
        scores = block @ node_pts.T - node_vals[None, :]
        out[start:start + _CHUNK] = scores.max(axis=1)
    return out


def _lower_hull(x: np.ndarray, v: np.ndarray):
    """Indices of the lower convex hull vertices of (x, v), x increasing."""
    keep = []
    for i in range(x.size):
        while len(keep) >= 2:
            i0, i1 = keep[-2], keep[-1]
            # drop i1 if it lies on or above the chord i0 -> i
            lhs = (v[i1] - v[i0]) * (x[i] - x[i0])
            rhs = (v[i] - v[i0]) * (x[i1] - x[i0])
            if lhs >= rhs:
                keep.pop()
            else:
                break
        keep.append(i)
    return np.asarray(keep, dtype=np.int64)


def _legendre_hull_1d(slopes: np.ndarray, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Exact 1-D conjugate via the lower hull; equals the brute force."""
    hull = _lower_hull(x, v)
    hx, hv = x[hull], v[hull]
    if hx.size == 1:
        return slopes * hx[0] - hv[0]
    seg = np.diff(hv) / np.diff(hx)          # increasing hull slopes
    idx = np.searchsorted(seg, slopes, side="left")
    pick_x, pick_v = hx[idx], hv[idx]
    return slopes * pick_x - pick_v


def legendre_at(f: GridFunction, points: np.ndarray, method: str = "auto") -> np.ndarray:
    """Conjugate values sup_x (x . y - f(x)) at arbitrary points y.

    Returns -inf everywhere when f is identically +inf (improper input).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != f.domain.dim:
        raise ValueError("evaluation points must match the primal dimension")
    if np.any(f.values == -math.inf):
        raise ValueError("conjugate requires f > -inf everywhere")
    finite = np.isfinite(f.values.ravel())
    if not finite.any():
        return np.full(points.shape[0], -math.inf)
    node_pts = f.domain.points()[finite]
    node_vals = f.values.ravel()[finite]

    if method == "auto":
        method = "hull" if f.domain.dim == 1 else "brute"
    if method == "hull":
        if f.domain.dim != 1:
            raise ValueError("hull path is 1-D only")
        order = np.argsort(node_pts[:, 0], kind="stable")
        return _legendre_hull_1d(points[:, 0], node_pts[order, 0], node_vals[order])
    if method != "brute":
        raise ValueError(f"unknown method {method!r}")
    return _legendre_brute(points, node_pts, node_vals)


def legendre(f: GridFunction, dual: DualGrid | None = None,
             method: str = "auto") -> GridFunction:
    """Conjugate of f sampled on a dual grid."""
    if dual is None:
        dual = make_dual_grid(f)
    vals = legendre_at(f, dual.grid.points(), method)
    return GridFunction(dual.grid, vals.reshape(dual.grid.shape), OUTSIDE_PLUS_INF)


def scaled_conjugate(H: GridFunction, t: float, out_domain: GridDomain,
                     method: str = "auto") -> GridFunction:
    """(tH)*(x) = t H*(x/t) evaluated on the nodes of out_domain.

    Computed directly as sup_w ( x . w - t H(w) ) over the nodes of H's own
    grid, which keeps the scaling identity exact.
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"time scale must be finite and positive, got {t}")
    scaled = H.with_values(np.where(np.isfinite(H.values), t * H.values, H.values))
    vals = legendre_at(scaled, out_domain.points(), method)
    return GridFunction(out_domain, vals.reshape(out_domain.shape), OUTSIDE_PLUS_INF)


def biconjugate(f: GridFunction, dual: DualGrid | None = None,
                method: str = "auto") -> GridFunction:
    """f** on the primal grid: the closed convex hull seen by the dual grid."""
    if dual is None:
        dual = make_dual_grid(f)
    star = legendre(f, dual, method)
    vals = legendre_at(star, f.domain.points(), method)
    return GridFunction(f.domain, vals.reshape(f.domain.shape), f.outside_mode)

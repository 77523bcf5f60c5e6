"""Minimal enclosing balls of finite point sets in dimension 1, 2 or 3.

The solver is Welzl's move-to-front algorithm with support sets of at most
N+1 points.  Recursion is on the support size only, so the Python recursion
depth is bounded by N+2 regardless of the number of input points.  Large
inputs in dimension >= 2 are first reduced to their convex hull vertices,
which leaves the ball unchanged.

Conventions: the ball of the empty set is the degenerate ball {0} with radius
0, and a set flagged unbounded gets the whole space, radius +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from scipy.spatial import ConvexHull, QhullError
except ImportError:  # pragma: no cover - scipy is a hard dependency
    ConvexHull = None

from .grid import GridFunction, LevelSet, level_set_lower, level_set_upper

__all__ = ["Ball", "enclosing_ball", "radius_of_level_set", "CONTAINMENT_RTOL"]

# relative containment slack: points must lie within radius*(1+tol) + tol
CONTAINMENT_RTOL = 1e-9

# hull reduction threshold; below this Welzl on the raw set is cheap anyway
_HULL_MIN_POINTS = 48


@dataclass(frozen=True)
class Ball:
    """Closed ball given by center and radius; radius +inf means all of R^N."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    @property
    def is_whole_space(self) -> bool:
        return self.radius == math.inf

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def contains(self, points: np.ndarray, rtol: float = CONTAINMENT_RTOL) -> bool:
        if self.is_whole_space:
            return True
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        d = np.linalg.norm(pts - self.center, axis=1)
        return bool(np.all(d <= self.radius * (1 + rtol) + rtol))


def _ball_of_support(S: list) -> tuple:
    """Smallest ball with all points of S on its boundary (|S| <= N+1).

    Returns (center, squared_radius).  The empty support yields a null ball
    that contains nothing, which is what the recursion needs.
    """
    if not S:
        return None, -math.inf
    if len(S) == 1:
        return S[0], 0.0
    p0 = S[0]
    A = np.array([q - p0 for q in S[1:]])
    b = 0.5 * np.einsum("ij,ij->i", A, A)
    # center = p0 + A^T y with A A^T y = b; lstsq tolerates degenerate supports
    y, *_ = np.linalg.lstsq(A @ A.T, b, rcond=None)
    center = p0 + A.T @ y
    r2 = float(np.max(np.einsum("ij,ij->i", np.array(S) - center, np.array(S) - center)))
    return center, r2


def _welzl_mtf(points: np.ndarray) -> Ball:
    dim = points.shape[1]
    rng = np.random.default_rng(0)
    order = [points[i] for i in rng.permutation(len(points))]

    def solve(m: int, support: list) -> tuple:
        center, r2 = _ball_of_support(support)
        if len(support) == dim + 1:
            return center, r2
        i = 0
        while i < m:
            p = order[i]
            d2 = math.inf if center is None else float(np.dot(p - center, p - center))
            if d2 > r2 * (1 + 1e-12) + 1e-30:
                center, r2 = solve(i, support + [p])
                order.insert(0, order.pop(i))
            i += 1
        return center, r2

    center, r2 = solve(len(order), [])
    return Ball(center, math.sqrt(max(r2, 0.0)))


def _hull_reduce(points: np.ndarray) -> np.ndarray:
    """Replace a large point set by its convex hull vertices when possible."""
    if points.shape[1] < 2 or len(points) < _HULL_MIN_POINTS:
        return points
    try:
        hull = ConvexHull(points)
    except QhullError:
        # degenerate (collinear/coplanar) input; Welzl handles it directly
        return points
    return points[hull.vertices]


def enclosing_ball(points: np.ndarray, unbounded: bool = False) -> Ball:
    """Minimal closed ball containing the given points.

    Args:
        points: array of shape (k, dim) with dim in {1, 2, 3}; k may be 0.
        unbounded: declare the conceptual set unbounded; returns radius +inf.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if points.size == 0:
        dim = points.shape[1] if points.ndim == 2 and points.shape[1] else 1
        if unbounded:
            return Ball(np.zeros(dim), math.inf)
        return Ball(np.zeros(dim), 0.0)
    dim = points.shape[1]
    if dim not in (1, 2, 3):
        raise ValueError(f"dimension must be 1, 2 or 3, got {dim}")
    if not np.isfinite(points).all():
        raise ValueError("points must be finite")
    if unbounded:
        return Ball(np.zeros(dim), math.inf)

    if dim == 1:
        lo, hi = float(points.min()), float(points.max())
        return Ball(np.array([(lo + hi) / 2.0]), (hi - lo) / 2.0)

    return _welzl_mtf(_hull_reduce(points))


def radius_of_level_set(f: GridFunction, xi: float, upper: bool = True) -> tuple:
    """Enclosing-ball radius of a strict level set of f.

    A level set touching the box boundary is declared unbounded and reported
    with radius +inf; the empty set has radius 0.  Returns (radius, ball).
    """
    ls: LevelSet = level_set_upper(f, xi) if upper else level_set_lower(f, xi)
    if ls.is_empty:
        ball = Ball(np.zeros(f.domain.dim), 0.0)
        return 0.0, ball
    if ls.touches_boundary:
        ball = Ball(np.zeros(f.domain.dim), math.inf)
        return math.inf, ball
    ball = enclosing_ball(ls.points())
    return ball.radius, ball

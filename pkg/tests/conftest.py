"""Shared oracles for the test suite."""

import itertools

import numpy as np


def brute_min_ball(points):
    """Smallest enclosing ball by exhaustive support enumeration.

    The minimal ball is determined by a boundary support of at most dim+1
    points; every subset of that size is tried, its circumsphere built by
    least squares, and the smallest ball containing all points wins.  O(m^4)
    in the worst case, fine for the small sets the tests use.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m, dim = pts.shape
    best_r, best_c = np.inf, None
    for k in range(1, dim + 2):
        for sub in itertools.combinations(range(m), k):
            chosen = pts[list(sub)]
            if k == 1:
                c = chosen[0]
            else:
                p0 = chosen[0]
                A = chosen[1:] - p0
                b = 0.5 * np.einsum("ij,ij->i", A, A)
                y, *_ = np.linalg.lstsq(A @ A.T, b, rcond=None)
                c = p0 + A.T @ y
            d = np.linalg.norm(pts - c, axis=1)
            r = float(np.linalg.norm(chosen - c, axis=1).max())
            if float(d.max()) <= r * (1 + 1e-9) + 1e-12 and r < best_r:
                best_r, best_c = r, c
    return best_c, best_r

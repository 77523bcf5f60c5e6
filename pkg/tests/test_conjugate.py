"""Discrete Legendre transform: hull path, closed forms, biconjugate."""

import math

import numpy as np
import pytest

from infconv.grid import FunctionSpec, GridDomain, GridFunction, sample
from infconv.conjugate import (
    biconjugate,
    estimate_slope_bound,
    legendre,
    legendre_at,
    make_dual_grid,
    scaled_conjugate,
)


def test_hull_path_matches_brute():
    dom = GridDomain(1, 4.0, 129)
    rng = np.random.default_rng(13)
    f = GridFunction(dom, np.abs(dom.axis) ** 1.5 + 0.1 * rng.uniform(size=dom.n))
    ys = np.linspace(-3, 3, 41)[:, None]
    assert np.allclose(legendre_at(f, ys, method="hull"),
                       legendre_at(f, ys, method="brute"), rtol=0, atol=1e-12)


def test_quadratic_conjugate_closed_form():
    # (c x^2)* = y^2 / (4c); the node max sits within half a cell of the
    # true argmax, so the sampling error is bounded by c h^2 / 4
    dom = GridDomain(1, 4.0, 257)
    c = 0.8
    q = sample(FunctionSpec.quadratic(c), dom)
    dual = make_dual_grid(q, slope_half_width=4.0)
    star = legendre(q, dual)
    ref = dual.grid.axis ** 2 / (4.0 * c)
    err = np.max(np.abs(star.values - ref))
    assert err <= c * dom.h ** 2 / 4.0 + 1e-12


def test_abs_conjugate_is_interval_indicator():
    dom = GridDomain(1, 4.0, 257)
    f = sample(FunctionSpec.abs_norm(), dom)
    ys = np.array([[-2.0], [-1.0], [-0.5], [0.0], [0.5], [1.0], [2.0]])
    star = legendre_at(f, ys)
    # |.|* is 0 on [-1, 1]; beyond that the sup is attained at the box edge
    assert np.allclose(star[1:6], 0.0, atol=1e-12)
    assert math.isclose(star[0], 4.0)         # sup_x (-2x - |x|) = L at x=-L
    assert math.isclose(star[6], 4.0)


def test_indicator_conjugate_is_support_function():
    dom = GridDomain(1, 4.0, 257)
    f = sample(FunctionSpec.indicator(1.5), dom)
    ys = np.array([[-2.0], [0.0], [3.0]])
    star = legendre_at(f, ys)
    # sup over the ball of y.x is |y| r, up to the node rounding of r
    assert np.allclose(star.ravel(), [3.0, 0.0, 4.5], atol=2 * dom.h * 3.0)


def test_biconjugate_of_convex_is_identity():
    dom = GridDomain(1, 2.0, 129)
    f = sample(FunctionSpec.abs_norm(), dom)
    back = biconjugate(f, make_dual_grid(f, slope_half_width=2.0))
    assert np.allclose(back.values, f.values, rtol=0, atol=1e-12)


def test_biconjugate_never_exceeds_f():
    dom = GridDomain(1, 2.0, 129)
    rng = np.random.default_rng(31)
    f = GridFunction(dom, rng.uniform(0, 1, dom.n) + dom.axis ** 2)
    back = biconjugate(f)
    assert np.all(back.values <= f.values + 1e-9)
    # and it is convex along the axis where finite
    v = back.values
    assert np.all(np.diff(np.diff(v)) >= -1e-9)


def test_scaled_conjugate_matches_scaling_identity():
    # (tH)*(x) = t H*(x/t) for the quadratic: t (x/t)^2 / 4 = x^2 / (4t)
    dom = GridDomain(1, 6.0, 257)
    H = sample(FunctionSpec.quadratic(1.0), dom)
    out_dom = GridDomain(1, 2.0, 65)
    for t in (0.5, 2.0):
        got = scaled_conjugate(H, t, out_dom)
        ref = out_dom.axis ** 2 / (4.0 * t)
        assert np.max(np.abs(got.values - ref)) <= t * dom.h ** 2 / 4.0 + 1e-12
    with pytest.raises(ValueError):
        scaled_conjugate(H, 0.0, out_dom)
    with pytest.raises(ValueError):
        scaled_conjugate(H, math.inf, out_dom)


def test_estimate_slope_bound_on_known_slopes():
    dom = GridDomain(1, 4.0, 257)
    f = sample(FunctionSpec.abs_norm(), dom)
    b = estimate_slope_bound(f)
    assert 0.9 <= b <= 1.1
    dual = make_dual_grid(f)
    assert dual.slope_half_width >= b         # safety margin is built in


def test_improper_and_invalid_inputs():
    dom = GridDomain(1, 2.0, 9)
    all_inf = GridFunction(dom, np.full(dom.n, math.inf))
    assert np.all(legendre_at(all_inf, np.array([[0.0]])) == -math.inf)
    bad = GridFunction(dom, np.array([0, 0, 0, 0, -math.inf, 0, 0, 0, 0], dtype=float))
    with pytest.raises(ValueError):
        legendre_at(bad, np.array([[0.0]]))
    f = sample(FunctionSpec.triangle(), dom)
    with pytest.raises(ValueError):
        legendre_at(f, np.zeros((3, 2)))      # wrong dimension
    with pytest.raises(ValueError):
        legendre_at(f, np.array([[0.0]]), method="nope")
    f2 = sample(FunctionSpec.triangle(), GridDomain(2, 2.0, 9))
    with pytest.raises(ValueError):
        legendre_at(f2, np.zeros((1, 2)), method="hull")


def test_2d_conjugate_quadratic():
    dom = GridDomain(2, 3.0, 49)
    q = sample(FunctionSpec.quadratic(0.5), dom)
    ys = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, -0.5]])
    star = legendre_at(q, ys)
    ref = (ys ** 2).sum(axis=1) / 2.0         # y^2/(4c) with c = 1/2
    assert np.allclose(star, ref, atol=dom.h ** 2)

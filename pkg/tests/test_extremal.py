"""Lattice convolution ops: fast paths, identities, dualities, bounds."""

import math

import numpy as np
import pytest

from infconv.grid import (
    OUTSIDE_MINUS_INF,
    OUTSIDE_PLUS_INF,
    FunctionSpec,
    GridDomain,
    GridFunction,
    level_set_upper,
    reciprocal,
    sample,
)
from infconv.extremal import (
    extremal_bounds_check,
    inf_conv,
    inf_max,
    level_sum_mask,
    minkowski_sum_masks,
    sup_min,
    sup_min_via_level_sets,
)


def _neg(f, mode):
    return GridFunction(f.domain, -f.values, mode)


# ---------------------------------------------------------------------------
# inf_conv paths agree

def test_quadratic_path_matches_brute():
    dom = GridDomain(1, 4.0, 129)
    f = sample(FunctionSpec.abs_norm(), dom)
    g = sample(FunctionSpec.quadratic(0.7), dom)
    fast = inf_conv(f, g)                      # auto routes through the tag
    slow = inf_conv(f, g, method="brute")
    # envelope and brute sum the same terms in different orders
    assert np.allclose(fast.values, slow.values, rtol=0, atol=1e-12)


def test_quadratic_path_matches_brute_2d():
    dom = GridDomain(2, 2.0, 17)
    f = sample(FunctionSpec.indicator(0.8), dom)
    g = sample(FunctionSpec.quadratic(1.3), dom)
    assert np.allclose(inf_conv(f, g, method="quadratic").values,
                       inf_conv(f, g, method="brute").values, rtol=0, atol=1e-12)


def test_window_path_matches_brute():
    dom = GridDomain(1, 4.0, 129)
    f = sample(FunctionSpec.triangle(), dom)
    g = sample(FunctionSpec.indicator(1.0), dom)
    fast = inf_conv(f, g)                      # auto routes through the window
    slow = inf_conv(f, g, method="brute")
    assert np.array_equal(fast.values, slow.values)


def test_inf_conv_commutes():
    dom = GridDomain(1, 4.0, 65)
    f = sample(FunctionSpec.power(1.5, 1.0), dom)
    g = sample(FunctionSpec.triangle(), dom)
    assert np.array_equal(inf_conv(f, g, method="brute").values,
                          inf_conv(g, f, method="brute").values)


def test_inf_conv_with_zero_indicator_is_identity():
    # the one-node window at the origin is the neutral element
    dom = GridDomain(1, 4.0, 65)
    f = sample(FunctionSpec.triangle(), dom)
    e = GridFunction(dom, np.where(np.arange(65) == dom.center_index, 0.0, math.inf))
    assert np.array_equal(inf_conv(f, e, method="brute").values, f.values)


# ---------------------------------------------------------------------------
# shift identities

def test_value_shift_moves_through_inf_conv():
    dom = GridDomain(1, 4.0, 65)
    f = sample(FunctionSpec.triangle(), dom)
    g = sample(FunctionSpec.abs_norm(), dom)
    base = inf_conv(f, g, method="brute")
    shifted = inf_conv(f, g.shift_by(0.75), method="brute")
    assert np.array_equal(shifted.values, base.values + 0.75)


def test_node_shift_moves_through_inf_conv():
    # shifting an operand by a lattice vector shifts the output the same way
    dom = GridDomain(1, 4.0, 257)
    v = 0.5                                    # 16 cells at h = 1/32
    k = round(v / dom.h)
    f = sample(FunctionSpec.indicator(0.5), dom)
    g = sample(FunctionSpec.triangle(), dom)
    base = inf_conv(f, g, method="brute")
    moved = inf_conv(f, sample(FunctionSpec.triangle(shift=(v,)), dom), method="brute")
    assert np.array_equal(moved.values[k:], base.values[:-k])


# ---------------------------------------------------------------------------
# sup_min / inf_max basics

def test_sup_min_with_constant_is_clipped_max():
    dom = GridDomain(1, 4.0, 65)
    f = sample(FunctionSpec.triangle(), dom, OUTSIDE_MINUS_INF)
    c = sample(FunctionSpec.constant(0.4), dom, OUTSIDE_MINUS_INF)
    out = sup_min(f, c)
    assert np.all(out.values == min(f.node_max, 0.4))


def test_inf_max_with_constant_is_clipped_min():
    dom = GridDomain(1, 4.0, 65)
    f = sample(FunctionSpec.triangle(), dom)
    c = sample(FunctionSpec.constant(0.4), dom)
    out = inf_max(f, c)
    assert np.all(out.values == max(f.node_min, 0.4))


def test_sup_min_commutes():
    rng = np.random.default_rng(3)
    dom = GridDomain(1, 2.0, 33)
    f = GridFunction(dom, rng.uniform(0, 1, 33), OUTSIDE_MINUS_INF)
    g = GridFunction(dom, rng.uniform(0, 1, 33), OUTSIDE_MINUS_INF)
    assert np.array_equal(sup_min(f, g).values, sup_min(g, f).values)


# ---------------------------------------------------------------------------
# dualities

def test_negation_duality():
    # inf-max is the negation mirror of sup-min
    rng = np.random.default_rng(7)
    dom = GridDomain(1, 2.0, 41)
    a = rng.uniform(-1, 2, 41)
    b = rng.uniform(-1, 2, 41)
    f = GridFunction(dom, a, OUTSIDE_PLUS_INF)
    g = GridFunction(dom, b, OUTSIDE_PLUS_INF)
    lhs = inf_max(f, g).values
    rhs = -sup_min(_neg(f, OUTSIDE_MINUS_INF), _neg(g, OUTSIDE_MINUS_INF)).values
    assert np.array_equal(lhs, rhs)


def test_reciprocal_duality():
    # for nonnegative data, 1/(f /\ g) = (1/f) \/ (1/g) node-wise
    rng = np.random.default_rng(11)
    dom = GridDomain(1, 2.0, 41)
    a = rng.uniform(0, 2, 41)
    b = rng.uniform(0, 2, 41)
    a[5] = 0.0                                 # exercise 1/0 = +inf
    f = GridFunction(dom, a, OUTSIDE_MINUS_INF)
    g = GridFunction(dom, b, OUTSIDE_MINUS_INF)
    lhs = reciprocal(sup_min(f, g)).values
    rf = reciprocal(f).with_outside_mode(OUTSIDE_PLUS_INF)
    rg = reciprocal(g).with_outside_mode(OUTSIDE_PLUS_INF)
    rhs = inf_max(rf, rg).values
    assert np.array_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# level-set route

def test_level_sum_mask_matches_direct_sup_min():
    # upper level sets of f /\ g are clipped node sums of the operand sets
    rng = np.random.default_rng(19)
    dom = GridDomain(1, 2.0, 33)
    f = GridFunction(dom, rng.uniform(0, 1, 33), OUTSIDE_MINUS_INF)
    g = GridFunction(dom, rng.uniform(0, 1, 33), OUTSIDE_MINUS_INF)
    direct = sup_min(f, g)
    for xi in (0.1, 0.35, 0.6, 0.9):
        assert np.array_equal(level_sum_mask(f, g, xi),
                              level_set_upper(direct, xi).mask)


def test_minkowski_shift_and_fft_agree():
    rng = np.random.default_rng(23)
    for shape in [(101,), (21, 21)]:
        a = rng.uniform(size=shape) < 0.4
        b = rng.uniform(size=shape) < 0.4
        center = (shape[0] - 1) // 2
        s = minkowski_sum_masks(a, b, center, method="shift")
        ff = minkowski_sum_masks(a, b, center, method="fft")
        assert np.array_equal(s, ff)


def test_minkowski_empty_operand_gives_empty():
    a = np.zeros(11, dtype=bool)
    b = np.ones(11, dtype=bool)
    assert not minkowski_sum_masks(a, b, 5).any()


def test_level_set_route_within_one_rung():
    dom = GridDomain(1, 4.0, 257)
    f = sample(FunctionSpec.triangle(), dom, OUTSIDE_MINUS_INF)
    g = sample(FunctionSpec.triangle(shift=(0.5,)), dom, OUTSIDE_MINUS_INF)
    direct = sup_min(f, g)
    rungs = 128
    ladder = sup_min_via_level_sets(f, g, rungs=rungs)
    finite = np.concatenate([f.values, g.values])
    step = (finite.max() - finite.min()) / (rungs - 1)
    assert np.max(np.abs(ladder.values - direct.values)) <= step + 1e-12


# ---------------------------------------------------------------------------
# node-statistic bounds

def test_bounds_report_on_nonneg_pair():
    dom = GridDomain(1, 4.0, 129)
    f = sample(FunctionSpec.triangle(), dom)
    g = sample(FunctionSpec.triangle(shift=(0.25,)), dom)
    rep = extremal_bounds_check(f, g)
    assert rep.ok
    assert rep.entry("sup_min_sup").relation == "eq"
    assert rep.entry("sandwich_upper").ok     # 0 <= f [] g <= 2 (f \/ g)
    with pytest.raises(KeyError):
        rep.entry("nope")


def test_bounds_report_skips_sandwich_for_signed_data():
    dom = GridDomain(1, 2.0, 33)
    f = GridFunction(dom, np.linspace(-1, 1, 33))
    g = sample(FunctionSpec.triangle(), dom)
    rep = extremal_bounds_check(f, g)
    names = {e.name for e in rep.entries}
    assert "sandwich_upper" not in names
    assert rep.ok


# ---------------------------------------------------------------------------
# error paths

def test_domain_mismatch_raises():
    f = sample(FunctionSpec.triangle(), GridDomain(1, 4.0, 65))
    g = sample(FunctionSpec.triangle(), GridDomain(1, 4.0, 33))
    with pytest.raises(ValueError):
        inf_conv(f, g)


def test_minus_inf_operand_raises():
    dom = GridDomain(1, 2.0, 5)
    f = GridFunction(dom, np.array([0.0, -math.inf, 0.0, 0.0, 0.0]))
    g = sample(FunctionSpec.triangle(), dom)
    with pytest.raises(ValueError):
        inf_conv(f, g)


def test_wrong_outside_mode_raises():
    dom = GridDomain(1, 2.0, 9)
    f = sample(FunctionSpec.triangle(), dom, OUTSIDE_MINUS_INF)
    g = sample(FunctionSpec.triangle(), dom, OUTSIDE_MINUS_INF)
    with pytest.raises(ValueError):
        inf_conv(f, g)
    with pytest.raises(ValueError):
        sup_min(f.with_outside_mode(OUTSIDE_PLUS_INF), g)
    with pytest.raises(ValueError):
        inf_max(f, g.with_outside_mode(OUTSIDE_PLUS_INF))


def test_quadratic_method_needs_tag():
    dom = GridDomain(1, 2.0, 9)
    f = sample(FunctionSpec.triangle(), dom)
    with pytest.raises(ValueError):
        inf_conv(f, f, method="quadratic")


def test_window_method_needs_window():
    dom1 = GridDomain(1, 2.0, 9)
    f = sample(FunctionSpec.triangle(), dom1)
    with pytest.raises(ValueError):
        inf_conv(f, f, method="window")
    dom2 = GridDomain(2, 2.0, 9)
    f2 = sample(FunctionSpec.triangle(), dom2)
    with pytest.raises(ValueError):
        inf_conv(f2, f2, method="window")

"""Inequality verification harness: checkers, instances, campaign, selftest."""

import math

import numpy as np
import pytest

from infconv.grid import (FunctionSpec, GridDomain, GridFunction, reciprocal,
                          sample)
from infconv.harness import (
    C_TOL,
    INEQUALITY_IDS,
    campaign,
    check_inequality,
    make_instance,
    random_instance,
    selftest,
)
from infconv.orlicz import YoungFunction, luxemburg_norm


P2 = YoungFunction.power(2.0)


# ---------------------------------------------------------------------------
# single checks

def test_unknown_id_and_domain_mismatch():
    dom = GridDomain(1, 4.0, 65)
    f = sample(FunctionSpec.triangle(), dom)
    with pytest.raises(ValueError):
        check_inequality("nope", f, f, P2)
    g = sample(FunctionSpec.triangle(), GridDomain(1, 4.0, 33))
    with pytest.raises(ValueError):
        check_inequality("L4_Eq12", f, g, P2)


def test_status_taxonomy():
    dom = GridDomain(1, 4.0, 129)
    tri = sample(FunctionSpec.triangle(), dom)

    # zeros in the data blow up both reciprocal sides: vacuously true
    rep = check_inequality("T7_Eq19", tri, tri, P2)
    assert rep.status == "vacuous" and rep.passed is True
    assert math.isinf(rep.rhs)

    # an infinite left side against a finite right side must escalate:
    # +inf spikes placed so their node sum falls outside the box
    v = np.zeros(dom.n)
    v[-2] = math.inf
    spiked = GridFunction(dom, v)
    rep = check_inequality("L6_Eq16", spiked, spiked.with_values(v.copy()), P2)
    assert rep.status == "escalated" and rep.passed is False

    # broken hypothesis gates report instead of deciding
    rep = check_inequality("L4_Eq12", tri, tri.scale_by(2.0), P2)
    assert rep.status == "hypothesis_not_met" and rep.passed is None
    assert "sup f = sup g" in rep.detail


def test_report_fields_are_recomputable():
    dom = GridDomain(1, 4.0, 129)
    f, g = random_instance(0, "bounded_pair", dom)
    rep = check_inequality("L4_Eq12", f, g, P2)
    assert rep.status == "pass"
    assert rep.margin == rep.rhs - rep.lhs
    assert rep.lhs <= rep.rhs + rep.tolerance
    d = rep.to_dict()
    assert d["id"] == "L4_Eq12" and d["pass"] is True
    assert set(d["inputs"]) == {"f", "g", "phi", "dim", "half_width", "n"}


def test_every_id_runs_on_its_planned_instances():
    summary = campaign(trials=2, configs=[(1, 4.0, 129)])
    assert summary.failures == 0 and summary.escalated == 0
    assert summary.exit_code == 0
    total = (summary.passes + summary.vacuous + summary.hypothesis_not_met)
    assert total == 2 * len(INEQUALITY_IDS)
    assert len(summary.rows) == total
    # decided checks never stray past their stated headroom
    assert all(v <= 1.0 + C_TOL for v in summary.max_ratio.values())
    assert all(k.endswith("@N1") for k in summary.max_ratio)


def test_infmax_bound_ratio_approaches_one_from_below():
    # f = 1, g = ell with the sup norm: lhs/rhs = ell/(ell+1), so the
    # constant 4 is approached but never beaten as ell grows
    dom = GridDomain(1, 4.0, 129)
    one = sample(FunctionSpec.constant(1.0), dom)
    phi = YoungFunction.indicator_unit()
    prev = 0.0
    for ell in (1.0, 2.0, 4.0, 8.0, 16.0, 64.0):
        rep = check_inequality("C8_Eq20", one,
                               sample(FunctionSpec.constant(ell), dom), phi)
        assert rep.status == "pass"
        ratio = rep.lhs / rep.rhs
        assert math.isclose(ratio, ell / (ell + 1.0), rel_tol=1e-12)
        assert prev < ratio < 1.0
        prev = ratio


def test_conjugate_bound_needs_check_transforms():
    # dropping the check transforms breaks the inf-conv bound: floor spikes
    # flatten f [] g (large lhs) yet leave the raw reciprocal norms small,
    # while check(g) collapses to the floor and keeps the real bound valid
    dom = GridDomain(1, 16.0, 4097)
    base = sample(FunctionSpec.quadratic(10.0, offset=1.0), dom)
    capped = np.minimum(base.values, 41.0)
    f = base.with_values(capped.copy())
    spiked = capped.copy()
    spiked[::32] = 1.0
    g = base.with_values(spiked)
    phi = YoungFunction.power(2)
    rep = check_inequality("T19_Eq33", f, g, phi)
    assert rep.status == "pass"
    naive_rhs = luxemburg_norm(reciprocal(f), phi) \
        + luxemburg_norm(reciprocal(g), phi)
    assert rep.lhs > 1.4 * naive_rhs


# ---------------------------------------------------------------------------
# instance generators

def test_instance_profiles_meet_their_gates():
    dom = GridDomain(1, 4.0, 257)
    for seed in range(6):
        inst = make_instance(seed, "coercive_convex", dom)
        assert inst.f.node_min + inst.g.node_min >= 0.25 - 1e-9
        assert "f_meta" in inst.params

        inst = make_instance(seed, "bounded_pair", dom)
        assert math.isclose(inst.f.node_max, inst.g.node_max, rel_tol=1e-12)
        assert inst.f.node_min >= 0 and inst.g.node_min >= 0

        inst = make_instance(seed, "nonneg_pair", dom)
        assert inst.f.node_min >= 0 and inst.g.node_min >= 0

        inst = make_instance(seed, "nonneg_pair", dom, strict_positive=True)
        assert inst.f.node_min > 0 and inst.g.node_min > 0
    with pytest.raises(KeyError):
        make_instance(0, "unheard_of", dom)


def test_instances_are_seed_deterministic():
    # 2-D needs h small enough for the bump width window: n = 65 at L = 4
    dom = GridDomain(2, 4.0, 65)
    a = make_instance(7, "coercive_convex", dom)
    b = make_instance(7, "coercive_convex", dom)
    assert np.array_equal(a.f.values, b.f.values)
    assert np.array_equal(a.g.values, b.g.values)
    c = make_instance(8, "coercive_convex", dom)
    assert not np.array_equal(a.f.values, c.f.values)


def test_random_instance_default_domain():
    f, g = random_instance(3, "nonneg_pair")
    assert f.domain.n == 257 and f.domain.dim == 1
    assert g.domain == f.domain


# ---------------------------------------------------------------------------
# campaign

def test_campaign_is_deterministic():
    a = campaign(ids=("L4_Eq12", "T7_Eq19", "HL_Eq42"), trials=3,
                 configs=[(1, 4.0, 129)])
    b = campaign(ids=("L4_Eq12", "T7_Eq19", "HL_Eq42"), trials=3,
                 configs=[(1, 4.0, 129)])
    fields = ("id", "seed", "dim", "n", "phi", "status",
              "lhs", "rhs", "margin", "tolerance", "detail")
    rows_a = [[getattr(r, k) for k in fields] for r in a.rows]
    rows_b = [[getattr(r, k) for k in fields] for r in b.rows]
    assert rows_a == rows_b
    assert a.max_ratio == b.max_ratio


def test_campaign_input_validation():
    with pytest.raises(ValueError):
        campaign(trials=0)


def test_campaign_two_dim_config():
    summary = campaign(ids=("L4_Eq12", "T18_Eq29"), trials=2,
                       configs=[(2, 4.0, 65)])
    assert summary.failures == 0 and summary.escalated == 0
    assert all("@N2" in k for k in summary.max_ratio)


# ---------------------------------------------------------------------------
# selftest

def test_selftest_is_exactly_sharp():
    rep = selftest()
    assert rep.ok
    assert rep.sharp.status == "pass"
    assert rep.sharp.lhs == 2.0 and rep.sharp.rhs == 2.0
    assert rep.sharp.tolerance == 0.0
    assert rep.weakened.status == "fail"
    assert rep.weakened.rhs == 1.95
    assert '"ok": true' in rep.to_json()

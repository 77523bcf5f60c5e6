"""Hamilton-Jacobi solvers, residual checks and long-time sweeps."""

import json
import math

import numpy as np
import pytest

from infconv.grid import FunctionSpec, GridDomain, GridFunction, sample
from infconv.hj import (
    HamiltonianSpec,
    SignConditionError,
    SweepConfig,
    hopf,
    hopf_lax,
    hopf_lax_kernel,
    is_grid_convex,
    level_sum_solution,
    longtime_sweep,
    pde_residual,
    sweep_preset,
)
from infconv.orlicz import YoungFunction


QUAD = HamiltonianSpec("quadratic_half")


# ---------------------------------------------------------------------------
# Hamiltonian catalog

def test_spec_validation_and_round_trip():
    with pytest.raises(ValueError):
        HamiltonianSpec("nope")
    with pytest.raises(ValueError):
        HamiltonianSpec("power_growth", {"a": 1.0, "d": 1.0})
    with pytest.raises(ValueError):
        HamiltonianSpec("power_growth", {"a": 2.0, "d": 0.0})
    with pytest.raises(ValueError):
        HamiltonianSpec("level_power_abs", {"alpha": 0.0})
    spec = HamiltonianSpec("power_growth", {"a": 3.0, "d": 0.5})
    assert HamiltonianSpec.from_json(json.dumps(spec.to_dict())) == spec


def test_slope_and_level_evaluations():
    y = np.array([[3.0, 4.0]])
    assert QUAD(y)[0] == 12.5
    assert HamiltonianSpec("norm")(y)[0] == 5.0
    assert HamiltonianSpec("power_growth", {"a": 2.0, "d": 2.0})(y)[0] == 50.0
    lev = HamiltonianSpec("level_exp_abs")
    out = lev.level_values(np.array([[0.0], [1.0], [math.e]]))
    assert out[0] == -math.inf and out[1] == 0.0 and math.isclose(out[2], 1.0)
    with pytest.raises(ValueError):
        lev(y)                                 # level kinds have no H(y)
    with pytest.raises(ValueError):
        QUAD.level_values(y)


# ---------------------------------------------------------------------------
# kernels

def test_quadratic_kernel_is_tagged():
    dom = GridDomain(1, 4.0, 129)
    k = hopf_lax_kernel(QUAD, 2.0, dom)
    assert k.quad_coeff == 0.25
    assert np.allclose(k.values, dom.axis ** 2 / 4.0)


def test_norm_kernel_is_a_ball_indicator():
    dom = GridDomain(1, 4.0, 257)
    k = hopf_lax_kernel(HamiltonianSpec("norm"), 1.5, dom)
    assert k.indicator_radius == 1.5
    inside = np.abs(dom.axis) <= 1.5
    assert np.all(k.values[inside] == 0.0)
    assert np.all(np.isinf(k.values[~inside]))


def test_power_growth_kernel_matches_quadratic_closed_form():
    # d = 1/2, a = 2 is the half-quadratic; the slope-grid conjugation
    # must land on the analytic kernel
    dom = GridDomain(1, 4.0, 257)
    k1 = hopf_lax_kernel(HamiltonianSpec("power_growth", {"a": 2.0, "d": 0.5}),
                         1.5, dom)
    k2 = hopf_lax_kernel(QUAD, 1.5, dom)
    assert np.max(np.abs(k1.values - k2.values)) <= 1e-3


def test_custom_grid_kernel_needs_its_samples():
    dom = GridDomain(1, 4.0, 65)
    with pytest.raises(ValueError):
        hopf_lax_kernel(HamiltonianSpec("custom_grid"), 1.0, dom)


# ---------------------------------------------------------------------------
# solvers

def test_moreau_envelope_of_abs():
    # quadratic Hamiltonian on g = |x|: u = x^2/2t inside |x| <= t, else |x| - t/2
    dom = GridDomain(1, 4.0, 257)
    g = sample(FunctionSpec.abs_norm(), dom)
    for t in (0.5, 1.0, 2.0):
        sol = hopf_lax(QUAD, g, t)
        x = dom.axis
        ref = np.where(np.abs(x) <= t, x ** 2 / (2 * t), np.abs(x) - t / 2)
        assert np.max(np.abs(sol.u.values - ref)) <= 3 * dom.h
        assert sol.formula == "hopf_lax"
        assert sol.feasibility.satisfied


def test_hopf_agrees_with_hopf_lax_on_convex_data():
    dom = GridDomain(1, 4.0, 257)
    g = sample(FunctionSpec.quadratic(0.5), dom)
    a = hopf(QUAD, g, 1.0)
    b = hopf_lax(QUAD, g, 1.0)
    assert np.max(np.abs(a.u.values - b.u.values)) <= 5e-3
    assert a.sandwich_excess is not None and a.sandwich_excess <= 1e-9
    # closed form for this pair: x^2 / 4 at t = 1
    assert np.max(np.abs(a.u.values - dom.axis ** 2 / 4.0)) <= 5e-3


def test_hopf_convexity_gate():
    dom = GridDomain(1, 4.0, 129)
    bump = sample(FunctionSpec.triangle(), dom)      # concave at the top
    assert not is_grid_convex(bump)
    with pytest.raises(ValueError):
        hopf(QUAD, bump, 1.0)
    sol = hopf(QUAD, bump, 1.0, assume_convex=True)  # explicit override runs
    assert math.isfinite(sol.u.node_min)
    convex = sample(FunctionSpec.quadratic(1.0), dom)
    assert is_grid_convex(convex)
    with pytest.raises(ValueError):
        hopf(QUAD, convex, 1.0, assume_convex=False)


def test_time_validation_and_kind_routing():
    dom = GridDomain(1, 2.0, 33)
    g = sample(FunctionSpec.quadratic(1.0), dom)
    lev = HamiltonianSpec("level_power_abs", {"alpha": 1.0})
    with pytest.raises(ValueError):
        hopf_lax(QUAD, g, 0.0)
    with pytest.raises(ValueError):
        hopf_lax(lev, g, 1.0)                  # level kinds take the other route
    with pytest.raises(ValueError):
        level_sum_solution(QUAD, g, 1.0)
    with pytest.raises(ValueError):
        level_sum_solution(lev, g.shift_by(-5.0), 1.0)   # needs g >= 0


def test_level_sum_matches_brute_force():
    dom = GridDomain(1, 2.0, 33)
    H = HamiltonianSpec("level_power_abs", {"alpha": 1.0})
    rng = np.random.default_rng(17)
    g = GridFunction(dom, rng.uniform(0.1, 1.0, dom.n))
    t = 2.0
    sol = level_sum_solution(H, g, t)
    hv = np.maximum(H.level_values(dom.points() / t).ravel(), 0.0)
    brute = np.empty(dom.n)
    for i in range(dom.n):
        best = math.inf
        for j in range(dom.n):
            k = i - j + dom.center_index
            if 0 <= k < dom.n:
                best = min(best, max(hv[k], g.values[j]))
        brute[i] = best
    assert np.array_equal(sol.u.values, brute)
    assert sol.u.node_min >= g.node_min        # the data floor is preserved


def test_level_sum_on_zero_data_is_zero():
    dom = GridDomain(1, 2.0, 33)
    H = HamiltonianSpec("level_power_abs", {"alpha": 1.0})
    g = sample(FunctionSpec.constant(0.0), dom)
    sol = level_sum_solution(H, g, 3.0)
    assert np.all(sol.u.values == 0.0)


# ---------------------------------------------------------------------------
# residual

def test_residual_small_on_smooth_solution():
    dom = GridDomain(1, 4.0, 257)
    g = sample(FunctionSpec.quadratic(0.5), dom)
    sols = [hopf_lax(QUAD, g, t) for t in (1.0, 1.25, 1.5)]
    rep = pde_residual(sols, QUAD)
    assert rep.max_residual <= 0.05
    assert rep.masked_fraction < 0.1
    assert rep.times == (1.0, 1.25, 1.5)


def test_residual_input_validation():
    dom = GridDomain(1, 4.0, 65)
    g = sample(FunctionSpec.quadratic(0.5), dom)
    sols = [hopf_lax(QUAD, g, t) for t in (1.0, 1.5)]
    with pytest.raises(ValueError):
        pde_residual(sols, QUAD)               # needs three times
    other = sample(FunctionSpec.quadratic(0.5), GridDomain(1, 4.0, 33))
    mixed = sols + [hopf_lax(QUAD, other, 2.0)]
    with pytest.raises(ValueError):
        pde_residual(mixed, QUAD)


# ---------------------------------------------------------------------------
# sweeps

def _tiny_sweep(**kw):
    base = dict(
        solver="hopf_lax",
        hamiltonian=QUAD,
        g_spec=FunctionSpec.quadratic(1.0, offset=1.0),
        phi=YoungFunction.power(2),
        t_values=(4.0, 8.0, 16.0, 32.0),
        base_half_width=40.0,
        target_spacing=1.0,
        drop=1,
    )
    base.update(kw)
    return SweepConfig(**base)


def test_sweep_is_deterministic():
    a = longtime_sweep(_tiny_sweep())
    b = longtime_sweep(_tiny_sweep())
    assert a.to_json() == b.to_json()
    assert len(a.entries) == 4
    assert all(e.norm > 0 for e in a.entries)


def test_sweep_csv_layout(tmp_path):
    rep = longtime_sweep(_tiny_sweep())
    path = tmp_path / "sweep.csv"
    rep.to_csv(str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,half_width,n,norm,sign_value"
    assert len(lines) == 1 + len(rep.entries)


def test_sweep_within_tol_tristate():
    rep = longtime_sweep(_tiny_sweep())
    assert rep.within_tol is None              # no theory slope configured
    rep2 = longtime_sweep(_tiny_sweep(theory_slope=0.25, slope_tol=0.2))
    assert rep2.within_tol is True


def test_sweep_sign_condition_failure():
    cfg = _tiny_sweep(g_spec=FunctionSpec.quadratic(1.0, offset=-0.5))
    with pytest.raises(SignConditionError) as exc:
        longtime_sweep(cfg)
    assert exc.value.times == (4.0, 8.0, 16.0, 32.0)


def test_sweep_unknown_solver():
    with pytest.raises(ValueError):
        longtime_sweep(_tiny_sweep(solver="nope"))


def test_sweep_domain_growth():
    cfg = _tiny_sweep(growth=1.0, base_half_width=10.0, target_spacing=0.5)
    d4 = cfg.domain_for(4.0)
    d16 = cfg.domain_for(16.0)
    assert d4.half_width == 14.0 and d16.half_width == 26.0
    assert d4.n % 2 == 1 and d16.n % 2 == 1
    assert d16.h <= 0.5 * 1.01


def test_presets():
    q = sweep_preset("quadratic")
    assert q.solver == "hopf_lax" and q.theory_slope == 0.25
    b = sweep_preset("ball")
    assert b.hamiltonian.kind == "norm" and b.theory_slope == 0.5
    lv = sweep_preset("level_power")
    assert lv.solver == "level_sum" and lv.theory_slope == 1.0
    with pytest.raises(ValueError):
        sweep_preset("nope")

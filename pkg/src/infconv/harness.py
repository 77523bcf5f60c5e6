"""Verification harness for the reciprocal-norm inequality family.

Seventeen checkable inequality ids cover the integral and Luxemburg-norm
bounds for the three extremal operations, the radial-transform reverse
bounds, the tail estimates with explicit constants, and the Hamilton-Jacobi
corollaries.  Each check recomputes both sides from grid primitives, gates
the stated hypotheses mechanically first, and compares against an additive
tolerance

    tolerance = C_TOL * h * (finite value range) * layers,

where ``layers`` counts the discretization layers the id traverses (one
inf-conv, one transform ladder, one norm, ...).  Sharpness cases built from
constants have zero range, hence zero tolerance, which is what lets the
weakened-constant self test detect a 2.5% change.

Conventions for infinite sides: rhs = +inf passes vacuously ('vacuous');
lhs = +inf against a finite rhs is never silently failed but escalated
('escalated') for review, since it can only arise from a broken hypothesis
or a genuine counterexample.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .extremal import inf_conv, inf_max, sup_min
from .grid import (
    OUTSIDE_MINUS_INF,
    OUTSIDE_PLUS_INF,
    FunctionSpec,
    GridDomain,
    GridFunction,
    integrate,
    positive_part,
    reciprocal,
    sample,
)
from .hj import HamiltonianSpec, hopf, hopf_lax, hopf_lax_kernel, is_grid_convex, level_sum_solution
from .orlicz import YoungFunction, luxemburg_norm
from .transform import LADDER_RUNGS, check as radial_check, hat as radial_hat

__all__ = [
    "INEQUALITY_IDS",
    "C_TOL",
    "HypothesisNotMet",
    "InequalityReport",
    "check_inequality",
    "Instance",
    "make_instance",
    "random_instance",
    "CampaignRow",
    "CampaignSummary",
    "campaign",
    "SelfTestReport",
    "selftest",
]

INEQUALITY_IDS = (
    "L4_Eq12", "L6_Eq16", "T7_Eq19", "C8_Eq20", "T18_Eq29",
    "T19_Eq33", "T19_Eq34", "C20_Eq35", "L21_Eq36", "L21_Eq37",
    "T23_Eq38", "HL_Eq42", "HL_Eq43", "HF_Eq47", "HF_Eq48",
    "LS_Eq52", "LS_Eq53",
)

C_TOL = 4.0

# discretization layers traversed per id (tolerance multiplier)
_LAYERS = {
    "L4_Eq12": 1, "L6_Eq16": 2, "T7_Eq19": 2, "C8_Eq20": 2,
    "T18_Eq29": 3, "T19_Eq33": 3, "T19_Eq34": 3, "C20_Eq35": 3,
    "L21_Eq36": 2, "L21_Eq37": 2, "T23_Eq38": 3,
    "HL_Eq42": 2, "HL_Eq43": 3, "HF_Eq47": 3, "HF_Eq48": 4,
    "LS_Eq52": 2, "LS_Eq53": 3,
}

_UNIT_BALL_VOLUME = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}


class HypothesisNotMet(Exception):
    """A stated hypothesis of the inequality fails on this input."""


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check.

    ``status`` is one of 'pass', 'fail', 'vacuous', 'escalated',
    'hypothesis_not_met'.  ``passed`` is True/False for decided checks and
    None when a hypothesis gate fired.  The pass flag is recomputable:
    lhs <= rhs + tolerance (with +inf rhs vacuously true).
    """

    id: str
    status: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    passed: bool | None
    inputs: dict
    m_fg: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "inputs": self.inputs,
            "m_fg": self.m_fg,
            "detail": self.detail,
        }


def _jsonable(obj):
    """Recursively replace non-finite floats so the JSON stays parseable."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _fingerprint(f: GridFunction) -> str:
    payload = f.values.tobytes() + np.asarray(
        [f.domain.dim, f.domain.half_width, f.domain.n], dtype=float).tobytes()
    return hashlib.sha1(payload).hexdigest()[:12]


def _finite_range(*arrays) -> float:
    worst = 0.0
    for a in arrays:
        fin = a[np.isfinite(a)]
        if fin.size:
            worst = max(worst, float(np.max(fin) - np.min(fin)))
    return worst


def _recip_vals(values: np.ndarray, domain: GridDomain, what: str) -> np.ndarray:
    """Node-wise reciprocal of a theoretically nonnegative quantity.

    Negative values beyond float slack mean a broken hypothesis upstream.
    """
    floor = -1e-9 * (1.0 + _finite_range(values))
    low = float(np.min(values))
    if low < floor:
        raise HypothesisNotMet(f"{what} has negative values (min {low:.3g})")
    return reciprocal(GridFunction(domain, np.maximum(values, 0.0))).values


def _nrm(values: np.ndarray, phi: YoungFunction, domain: GridDomain,
         mask: np.ndarray | None = None) -> float:
    return luxemburg_norm(GridFunction(domain, values), phi, mask=mask)


def _gate(cond: bool, msg: str) -> None:
    if not cond:
        raise HypothesisNotMet(msg)


def _as_supmin_pair(f: GridFunction, g: GridFunction):
    return (f.with_outside_mode(OUTSIDE_MINUS_INF),
            g.with_outside_mode(OUTSIDE_MINUS_INF))


def _as_infmode(f: GridFunction) -> GridFunction:
    return f.with_outside_mode(OUTSIDE_PLUS_INF)


# ---------------------------------------------------------------------------
# per-id checkers: return (lhs, rhs, m_fg, range_scale, detail)

def _check_L4_Eq12(f, g, phi, params):
    _gate(f.node_min >= 0 and g.node_min >= 0, "needs f, g >= 0")
    Mf, Mg = f.node_max, g.node_max
    _gate(math.isclose(Mf, Mg, rel_tol=1e-12, abs_tol=1e-12) or (Mf == Mg),
          f"needs sup f = sup g, got {Mf:.6g} vs {Mg:.6g}")
    fm, gm = _as_supmin_pair(f, g)
    s = sup_min(fm, gm)
    lhs = integrate(f) + integrate(g)
    rhs = integrate(GridFunction(f.domain, s.values))
    return lhs, rhs, None, _finite_range(f.values, g.values, s.values), ""


def _check_L6_Eq16(f, g, phi, params):
    _gate(f.node_min >= 0 and g.node_min >= 0, "needs f, g >= 0")
    Mf, Mg = f.node_max, g.node_max
    _gate(math.isclose(Mf, Mg, rel_tol=1e-12, abs_tol=1e-12) or (Mf == Mg),
          f"needs sup f = sup g, got {Mf:.6g} vs {Mg:.6g}")
    fm, gm = _as_supmin_pair(f, g)
    s = sup_min(fm, gm)
    lhs = max(_nrm(f.values, phi, f.domain), _nrm(g.values, phi, f.domain))
    rhs = _nrm(s.values, phi, f.domain)
    return lhs, rhs, None, _finite_range(f.values, g.values, s.values), ""


def _check_T7_Eq19(f, g, phi, params):
    mf, mg = f.node_min, g.node_min
    _gate(math.isfinite(mf) and math.isfinite(mg), "needs finite inf f, inf g")
    _gate(mf + mg >= -1e-12, f"needs inf f + inf g >= 0, got {mf + mg:.6g}")
    m = (mf - mg) / 2.0
    dom = f.domain
    rf = _recip_vals(f.values - m, dom, "f - m_fg")
    rg = _recip_vals(g.values + m, dom, "g + m_fg")
    conv = inf_conv(_as_infmode(f), _as_infmode(g))
    rc = _recip_vals(conv.values, dom, "f [] g")
    scale = params.get("constant_scale", 1.0)
    lhs = _nrm(rf, phi, dom) + _nrm(rg, phi, dom)
    rhs = 4.0 * scale * _nrm(rc, phi, dom)
    return lhs, rhs, m, _finite_range(rf, rg, rc), ""


def _check_C8_Eq20(f, g, phi, params):
    _gate(g.node_min >= 0, "needs g >= 0")
    _gate(np.isfinite(f.values).any(), "needs f not identically +inf")
    _gate(np.isfinite(g.values).any(), "needs g not identically +inf")
    fp = positive_part(f)
    m = (fp.node_min - g.node_min) / 2.0
    dom = f.domain
    rf = _recip_vals(fp.values - m, dom, "f+ - m")
    rg = _recip_vals(g.values + m, dom, "g + m")
    vee = inf_max(_as_infmode(fp), _as_infmode(g))
    rv = _recip_vals(vee.values, dom, "f \\/ g")
    lhs = _nrm(rf, phi, dom) + _nrm(rg, phi, dom)
    rhs = 4.0 * _nrm(rv, phi, dom)
    return lhs, rhs, m, _finite_range(rf, rg, rv), ""


def _check_T18_Eq29(f, g, phi, params):
    _gate(f.node_min >= 0 and g.node_min >= 0, "needs f, g >= 0")
    rungs = params.get("rungs", LADDER_RUNGS)
    fm, gm = _as_supmin_pair(f, g)
    s = sup_min(fm, gm)
    _, fhat = radial_hat(f, rungs)
    _, ghat = radial_hat(g, rungs)
    dom = f.domain
    lhs = _nrm(s.values, phi, dom)
    const = 2.0 ** (dom.dim - 1)
    rhs = const * (_nrm(fhat.values, phi, dom) + _nrm(ghat.values, phi, dom))
    return lhs, rhs, None, _finite_range(s.values, fhat.values, ghat.values), ""


def _t19_sides(f, g, phi, params, z, fch, gch):
    dom = f.domain
    rf = _recip_vals(fch.values - z, dom, "check(f) - z")
    rg = _recip_vals(gch.values + z, dom, "check(g) + z")
    const = 2.0 ** (dom.dim - 1)
    rhs = const * (_nrm(rf, phi, dom) + _nrm(rg, phi, dom))
    return rhs, _finite_range(rf, rg)


def _check_T19_Eq33(f, g, phi, params):
    mf, mg = f.node_min, g.node_min
    _gate(math.isfinite(mf) and math.isfinite(mg), "needs finite inf f, inf g")
    _gate(mf + mg >= -1e-12, f"needs inf f + inf g >= 0, got {mf + mg:.6g}")
    m = (mf - mg) / 2.0
    rungs = params.get("rungs", LADDER_RUNGS)
    dom = f.domain
    conv = inf_conv(_as_infmode(f), _as_infmode(g))
    rc = _recip_vals(conv.values, dom, "f [] g")
    _, fch = radial_check(f, rungs)
    _, gch = radial_check(g, rungs)
    lhs = _nrm(rc, phi, dom)
    rhs, rng = _t19_sides(f, g, phi, params, m, fch, gch)
    return lhs, rhs, m, max(rng, _finite_range(rc)), ""


def _check_T19_Eq34(f, g, phi, params):
    mf, mg = f.node_min, g.node_min
    _gate(math.isfinite(mf) and math.isfinite(mg), "needs finite inf f, inf g")
    _gate(mf + mg >= -1e-12, f"needs inf f + inf g >= 0, got {mf + mg:.6g}")
    m = (mf - mg) / 2.0
    z_values = params.get("z_values", (-mg, m, mf))
    for z in z_values:
        _gate(-mg - 1e-12 <= z <= mf + 1e-12,
              f"needs -inf g <= z <= inf f, got z = {z:.6g}")
    rungs = params.get("rungs", LADDER_RUNGS)
    dom = f.domain
    conv = inf_conv(_as_infmode(f), _as_infmode(g))
    rc = _recip_vals(conv.values, dom, "f [] g")
    lhs = _nrm(rc, phi, dom)
    _, fch = radial_check(f, rungs)
    _, gch = radial_check(g, rungs)
    worst = None
    for z in z_values:
        rhs, rng = _t19_sides(f, g, phi, params, z, fch, gch)
        cand = (rhs, max(rng, _finite_range(rc)), f"z = {z:.6g}")
        if worst is None or rhs < worst[0]:
            worst = cand
    rhs, rng, detail = worst
    return lhs, rhs, m, rng, detail


def _check_C20_Eq35(f, g, phi, params):
    _gate(g.node_min >= 0, "needs g >= 0")
    _gate(np.isfinite(f.values).any(), "needs f not identically +inf")
    _gate(np.isfinite(g.values).any(), "needs g not identically +inf")
    fp = positive_part(f)
    m = (fp.node_min - g.node_min) / 2.0
    rungs = params.get("rungs", LADDER_RUNGS)
    dom = f.domain
    vee = inf_max(_as_infmode(fp), _as_infmode(g))
    rv = _recip_vals(vee.values, dom, "f \\/ g")
    _, fpch = radial_check(fp, rungs)
    _, gch = radial_check(g, rungs)
    rf = _recip_vals(fpch.values - m, dom, "check(f+) - m")
    rg = _recip_vals(gch.values + m, dom, "check(g) + m")
    lhs = _nrm(rv, phi, dom)
    rhs = (2.0 ** dom.dim) * (_nrm(rf, phi, dom) + _nrm(rg, phi, dom))
    return lhs, rhs, m, _finite_range(rv, rf, rg), ""


def _l21_setup(f, params):
    c = params.get("c")
    alpha = params.get("alpha")
    r_b = params.get("r_B")
    _gate(c is not None and alpha is not None and r_b is not None,
          "needs tail parameters c, alpha, r_B")
    _gate(c > 0 and alpha > 0, "needs c > 0 and alpha > 0")
    dom = f.domain
    _gate(r_b > 0 and r_b < dom.half_width, "ball must sit inside the box")
    radii = dom.radii()
    hvals = c * radii ** alpha
    outside = radii >= r_b - 1e-12
    _gate(bool(np.all(f.values[outside] >= hvals[outside] - 1e-9)),
          "needs f >= c|x|^alpha outside B")
    return dom, radii, hvals, outside


def _check_L21_Eq36(f, g, phi, params):
    dom, radii, hvals, outside = _l21_setup(f, params)
    mf = f.node_min
    z = params.get("z", mf - 0.5)
    _gate(z < mf - 1e-12, f"needs z < inf f, got z = {z:.6g}, inf f = {mf:.6g}")
    _gate(bool(np.all(hvals[outside] >= 2.0 * z - 1e-9)),
          "needs c|x|^alpha >= 2z outside B")
    rungs = params.get("rungs", LADDER_RUNGS)
    _, fch = radial_check(f, rungs)
    rf = _recip_vals(fch.values - z, dom, "check(f) - z")
    lhs = _nrm(rf, phi, dom)
    rh = _recip_vals(hvals, dom, "c|x|^alpha")
    chi = (~outside).astype(float)
    rhs = (2.0 * _nrm(rh, phi, dom, mask=outside)
           + _nrm(chi, phi, dom) / (mf - z))
    return lhs, rhs, None, _finite_range(rf, rh[outside]), ""


def _check_L21_Eq37(f, g, phi, params):
    dom, radii, hvals, outside = _l21_setup(f, params)
    mf = f.node_min
    z = params.get("z", mf - 0.5)
    _gate(z < mf - 1e-12, f"needs z < inf f, got z = {z:.6g}, inf f = {mf:.6g}")
    _gate(bool(np.all(hvals[outside] >= 2.0 * z - 1e-9)),
          "needs c|x|^alpha >= 2z outside B")
    _gate(phi.invertible, f"needs an invertible Young function, got {phi.kind}")
    rungs = params.get("rungs", LADDER_RUNGS)
    _, fch = radial_check(f, rungs)
    rf = _recip_vals(fch.values - z, dom, "check(f) - z")
    lhs = _nrm(rf, phi, dom)
    rh = _recip_vals(hvals, dom, "c|x|^alpha")
    mu_b = float(np.count_nonzero(~outside)) * dom.cell_volume
    psi = float(phi.inverse(np.asarray([1.0 / mu_b]))[0])
    rhs = 2.0 * _nrm(rh, phi, dom, mask=outside) + 1.0 / ((mf - z) * psi)
    return lhs, rhs, None, _finite_range(rf, rh[outside]), ""


def _check_T23_Eq38(f, g, phi, params):
    _gate(phi.kind == "power", "estimate is stated for plain p-norms")
    p = phi.params["p"]
    c = params.get("c")
    alpha = params.get("alpha")
    r_b = params.get("r_B")
    t = params.get("t", 2.0)
    _gate(None not in (c, alpha, r_b), "needs tail parameters c, alpha, r_B")
    dom = f.domain
    N = dom.dim
    _gate(alpha * p > N, f"needs alpha > N/p, got alpha = {alpha:.6g}, p = {p:.6g}")
    _gate(t >= 1.0, f"needs t >= 1, got {t:.6g}")
    mf, mg = f.node_min, g.node_min
    _gate(t * mf + mg > 1e-12, "needs t inf f + inf g > 0")
    radii = dom.radii()
    hvals = c * radii ** alpha
    outside = radii >= r_b - 1e-12
    _gate(bool(np.all(f.values[outside] >= hvals[outside] - 1e-9)),
          "needs f >= c|x|^alpha outside B")
    _gate(c * r_b ** alpha >= mf + abs(mg) - 1e-9,
          "needs c|x|^alpha >= inf f + |inf g| outside B")
    _gate(r_b < dom.half_width, "ball must sit inside the box")

    # rescaled data t f(x/t), sampled exactly from the power-law description
    ft_spec = FunctionSpec.power(c * t ** (1.0 - alpha), alpha, offset=t * mf)
    ft = sample(ft_spec, dom)
    z = (t * mf - mg) / 2.0
    rungs = params.get("rungs", LADDER_RUNGS)
    _, ftch = radial_check(ft, rungs)
    rf = _recip_vals(ftch.values - z, dom, "check(t f(./t)) - m")
    lhs = _nrm(rf, phi, dom)

    omega = _UNIT_BALL_VOLUME[N]
    tail = (c ** (-p)) * N * omega * r_b ** (N - alpha * p) / (alpha * p - N)
    rhs = (2.0 * t ** (-1.0 + N / p) * tail ** (1.0 / p)
           + 2.0 / (t * mf + mg) * t ** (N / p) * (omega * r_b ** N) ** (1.0 / p))
    return lhs, rhs, z, _finite_range(rf), f"t = {t:.6g}"


def _hl_setup(g, params):
    H = params.get("H")
    _gate(isinstance(H, HamiltonianSpec), "needs a Hamiltonian")
    _gate(not H.is_level_kind, "needs a slope-space Hamiltonian")
    t = params.get("t", 1.0)
    mg = g.node_min
    _gate(mg >= -1e-12, f"needs -t H**(0) + inf g >= 0, got {mg:.6g}")
    return H, t, mg


def _check_HL_Eq42(f, g, phi, params):
    H, t, mg = _hl_setup(g, params)
    dom = g.domain
    sol = hopf_lax(H, g, t)
    kern = hopf_lax_kernel(H, t, dom)
    mstar = mg  # t H**(0) = 0 for the catalog Hamiltonians
    rk = _recip_vals(2.0 * kern.values + mstar, dom, "2(tH)* + m*")
    rg = _recip_vals(2.0 * g.values - mstar, dom, "2g - m*")
    ru = _recip_vals(sol.u.values, dom, "u(t,.)")
    lhs = _nrm(rk, phi, dom) + _nrm(rg, phi, dom)
    rhs = 2.0 * _nrm(ru, phi, dom)
    return lhs, rhs, -mstar / 2.0, _finite_range(rk, rg, ru), f"t = {t:.6g}"


def _check_HL_Eq43(f, g, phi, params):
    H, t, mg = _hl_setup(g, params)
    dom = g.domain
    rungs = params.get("rungs", LADDER_RUNGS)
    sol = hopf_lax(H, g, t)
    kern = hopf_lax_kernel(H, t, dom)
    mstar = mg
    ru = _recip_vals(sol.u.values, dom, "u(t,.)")
    lhs = _nrm(ru, phi, dom)
    _, kch = radial_check(kern, rungs)
    _, gch = radial_check(g, rungs)
    rk = _recip_vals(2.0 * kch.values + mstar, dom, "2 check((tH)*) + m*")
    rg = _recip_vals(2.0 * gch.values - mstar, dom, "2 check(g) - m*")
    const = 2.0 ** (dom.dim - 1)
    rhs = const * (_nrm(rk, phi, dom) + _nrm(rg, phi, dom))
    return lhs, rhs, -mstar / 2.0, _finite_range(ru, rk, rg), f"t = {t:.6g}"


def _check_HF_Eq47(f, g, phi, params):
    H, t, mg = _hl_setup(g, params)
    _gate(is_grid_convex(g), "Hopf formula needs convex initial data")
    dom = g.domain
    sol = hopf(H, g, t, assume_convex=True)
    kern = hopf_lax_kernel(H, t, dom)
    rk = _recip_vals(2.0 * kern.values + mg, dom, "2(tH)* + m*")
    rg = _recip_vals(2.0 * g.values - mg, dom, "2g - m*")
    ru = _recip_vals(sol.u.values, dom, "u(t,.)")
    lhs = _nrm(rk, phi, dom) + _nrm(rg, phi, dom)
    rhs = 2.0 * _nrm(ru, phi, dom)
    return lhs, rhs, -mg / 2.0, _finite_range(rk, rg, ru), f"t = {t:.6g}"


def _check_HF_Eq48(f, g, phi, params):
    H, t, mg = _hl_setup(g, params)
    _gate(is_grid_convex(g), "Hopf formula needs convex initial data")
    dom = g.domain
    rungs = params.get("rungs", LADDER_RUNGS)
    sol = hopf(H, g, t, assume_convex=True)
    kern = hopf_lax_kernel(H, t, dom)
    ru = _recip_vals(sol.u.values, dom, "u(t,.)")
    lhs = _nrm(ru, phi, dom)
    _, kch = radial_check(kern, rungs)
    _, gch = radial_check(g, rungs)
    rk = _recip_vals(2.0 * kch.values + mg, dom, "2 check((tL)*) + m*")
    rg = _recip_vals(2.0 * gch.values - mg, dom, "2 check(g) - m*")
    const = 2.0 ** (dom.dim - 1)
    rhs = const * (_nrm(rk, phi, dom) + _nrm(rg, phi, dom))
    return lhs, rhs, -mg / 2.0, _finite_range(ru, rk, rg), f"t = {t:.6g}"


def _ls_setup(g, params):
    H = params.get("H")
    _gate(isinstance(H, HamiltonianSpec) and H.is_level_kind,
          "needs a level-set Hamiltonian")
    t = params.get("t", 1.0)
    _gate(g.node_min >= 0, "needs g >= 0")
    return H, t, g.node_min


def _ls_kernel(H, t, dom):
    pts = dom.points() / t
    return np.maximum(H.level_values(pts).reshape(dom.shape), 0.0)


def _check_LS_Eq52(f, g, phi, params):
    H, t, mg = _ls_setup(g, params)
    dom = g.domain
    sol = level_sum_solution(H, g, t)
    kvals = _ls_kernel(H, t, dom)
    rk = _recip_vals(2.0 * kvals + mg, dom, "2 h_[t]+ + m_g")
    rg = _recip_vals(2.0 * g.values - mg, dom, "2g - m_g")
    ru = _recip_vals(sol.u.values, dom, "u(t,.)")
    lhs = _nrm(rk, phi, dom) + _nrm(rg, phi, dom)
    rhs = 2.0 * _nrm(ru, phi, dom)
    return lhs, rhs, -mg / 2.0, _finite_range(rk, rg, ru), f"t = {t:.6g}"


def _check_LS_Eq53(f, g, phi, params):
    H, t, mg = _ls_setup(g, params)
    dom = g.domain
    rungs = params.get("rungs", LADDER_RUNGS)
    sol = level_sum_solution(H, g, t)
    kvals = _ls_kernel(H, t, dom)
    ru = _recip_vals(sol.u.values, dom, "u(t,.)")
    lhs = _nrm(ru, phi, dom)
    kern = GridFunction(dom, kvals)
    _, kch = radial_check(kern, rungs)
    _, gch = radial_check(g, rungs)
    rk = _recip_vals(2.0 * kch.values + mg, dom, "2 check(h_[t]+) + m_g")
    rg = _recip_vals(2.0 * gch.values - mg, dom, "2 check(g) - m_g")
    const = 2.0 ** (dom.dim + 1)
    rhs = const * (_nrm(rk, phi, dom) + _nrm(rg, phi, dom))
    return lhs, rhs, -mg / 2.0, _finite_range(ru, rk, rg), f"t = {t:.6g}"


_CHECKERS = {
    "L4_Eq12": _check_L4_Eq12,
    "L6_Eq16": _check_L6_Eq16,
    "T7_Eq19": _check_T7_Eq19,
    "C8_Eq20": _check_C8_Eq20,
    "T18_Eq29": _check_T18_Eq29,
    "T19_Eq33": _check_T19_Eq33,
    "T19_Eq34": _check_T19_Eq34,
    "C20_Eq35": _check_C20_Eq35,
    "L21_Eq36": _check_L21_Eq36,
    "L21_Eq37": _check_L21_Eq37,
    "T23_Eq38": _check_T23_Eq38,
    "HL_Eq42": _check_HL_Eq42,
    "HL_Eq43": _check_HL_Eq43,
    "HF_Eq47": _check_HF_Eq47,
    "HF_Eq48": _check_HF_Eq48,
    "LS_Eq52": _check_LS_Eq52,
    "LS_Eq53": _check_LS_Eq53,
}


def check_inequality(id: str, f: GridFunction, g: GridFunction,
                     phi: YoungFunction, params: dict | None = None) -> InequalityReport:
    """Check one inequality id on a pair of grid functions.

    Hypothesis gates run first and produce a 'hypothesis_not_met' report.
    """
    if id not in _CHECKERS:
        raise ValueError(f"unknown inequality id {id!r}")
    if f.domain != g.domain:
        raise ValueError("f and g must share one grid")
    params = dict(params or {})
    inputs = {
        "f": _fingerprint(f), "g": _fingerprint(g), "phi": phi.kind,
        "dim": f.domain.dim, "half_width": f.domain.half_width, "n": f.domain.n,
    }
    try:
        lhs, rhs, m_fg, range_scale, detail = _CHECKERS[id](f, g, phi, params)
    except HypothesisNotMet as exc:
        return InequalityReport(id, "hypothesis_not_met", math.nan, math.nan,
                                math.nan, math.nan, None, inputs, None, str(exc))
    layers = _LAYERS[id]
    tolerance = C_TOL * f.domain.h * range_scale * layers
    margin = rhs - lhs
    if math.isinf(rhs) and rhs > 0:
        status, passed = "vacuous", True
    elif math.isinf(lhs) and lhs > 0:
        status, passed = "escalated", False
    elif lhs <= rhs + tolerance:
        status, passed = "pass", True
    else:
        status, passed = "fail", False
    return InequalityReport(id, status, float(lhs), float(rhs), float(margin),
                            float(tolerance), passed, inputs, m_fg, detail)


# ---------------------------------------------------------------------------
# instance generation

@dataclass(frozen=True)
class Instance:
    f: GridFunction
    g: GridFunction
    params: dict = field(default_factory=dict)


def _bump_spec(rng, domain: GridDomain, max_center: float):
    """A cone bump with support well inside the box."""
    w = float(rng.uniform(4 * domain.h + 0.25, domain.half_width / 4.0))
    ctr = rng.uniform(-max_center, max_center, size=domain.dim)
    amp = float(rng.uniform(0.5, 2.0))
    return ctr, w, amp


def _cone_values(domain: GridDomain, ctr, w, amp) -> np.ndarray:
    pts = domain.points()
    d = np.linalg.norm(pts - np.asarray(ctr), axis=1)
    return (amp * np.maximum(1.0 - d / w, 0.0)).reshape(domain.shape)


def _coercive_values(rng, domain: GridDomain, alpha_pool=(1.0, 1.5, 2.0),
                     center_scale: float = 0.125, offset_low: float = -0.3,
                     offset_high: float = 1.0, with_bump: bool = True):
    c = float(rng.uniform(0.4, 1.5))
    alpha = float(rng.choice(alpha_pool))
    ctr = rng.uniform(-center_scale * domain.half_width,
                      center_scale * domain.half_width, size=domain.dim)
    a = float(rng.uniform(offset_low, offset_high))
    pts = domain.points()
    d = np.linalg.norm(pts - ctr, axis=1)
    vals = (c * d ** alpha + a).reshape(domain.shape)
    if with_bump and rng.uniform() < 0.6:
        bc, bw, bamp = _bump_spec(rng, domain, domain.half_width / 3.0)
        vals = vals + _cone_values(domain, bc, bw, bamp)
    return vals, {"c": c, "alpha": alpha, "offset": a}


def make_instance(seed: int, profile: str, domain: GridDomain,
                  strict_positive: bool = False) -> Instance:
    """Deterministic test pair for a profile; gates are satisfied by build.

    Profiles:
      coercive_convex  power growth plus optional bump; inf f + inf g >= 0.25
      bounded_pair     confined cone bumps with sup f = sup g exactly
      nonneg_pair      confined nonnegative bumps (plateaus allowed)
    """
    rng = np.random.default_rng([seed, _PROFILE_TAG[profile]])
    if profile == "coercive_convex":
        fv, fmeta = _coercive_values(rng, domain)
        gv, gmeta = _coercive_values(rng, domain)
        deficit = 0.25 - (float(np.min(fv)) + float(np.min(gv)))
        if deficit > 0:
            gv = gv + deficit
        f = GridFunction(domain, fv)
        g = GridFunction(domain, gv)
        return Instance(f, g, {"f_meta": fmeta, "g_meta": gmeta})
    if profile == "bounded_pair":
        fc, fw, fa = _bump_spec(rng, domain, domain.half_width / 4.0)
        gc, gw, ga = _bump_spec(rng, domain, domain.half_width / 4.0)
        fv = _cone_values(domain, fc, fw, fa)
        gv = _cone_values(domain, gc, gw, ga)
        if float(np.max(gv)) <= 0 or float(np.max(fv)) <= 0:
            # supports always hold grid nodes by the width lower bound
            raise RuntimeError("degenerate bump")
        gv = gv * (float(np.max(fv)) / float(np.max(gv)))
        return Instance(GridFunction(domain, fv), GridFunction(domain, gv))
    if profile == "nonneg_pair":
        def one():
            ctr, w, amp = _bump_spec(rng, domain, domain.half_width / 4.0)
            vals = _cone_values(domain, ctr, w, amp)
            if rng.uniform() < 0.4:
                vals = np.minimum(vals, float(rng.uniform(0.3, 0.9)) * amp)
            return vals
        fv, gv = one(), one()
        if strict_positive:
            fv = fv + float(rng.uniform(0.2, 0.8))
            gv = gv + float(rng.uniform(0.2, 0.8))
        return Instance(GridFunction(domain, fv), GridFunction(domain, gv))
    raise ValueError(f"unknown profile {profile!r}")


_PROFILE_TAG = {"coercive_convex": 1, "bounded_pair": 2, "nonneg_pair": 3}


def random_instance(seed: int, profile: str,
                    domain: GridDomain | None = None):
    """(f, g) for a profile; same seed gives the same pair bit for bit."""
    if domain is None:
        domain = GridDomain(1, 4.0, 257)
    inst = make_instance(seed, profile, domain)
    return inst.f, inst.g


def _plan(id: str, seed: int, domain: GridDomain) -> Instance:
    """Instance whose construction satisfies the id's hypotheses."""
    rng = np.random.default_rng([seed, 100 + INEQUALITY_IDS.index(id)])
    if id in ("L4_Eq12", "L6_Eq16"):
        return make_instance(seed, "bounded_pair", domain)
    if id == "T18_Eq29":
        return make_instance(seed, "nonneg_pair", domain)
    if id in ("T7_Eq19", "T19_Eq33", "T19_Eq34"):
        return make_instance(seed, "coercive_convex", domain)
    if id in ("C8_Eq20", "C20_Eq35"):
        fv, fmeta = _coercive_values(rng, domain, offset_low=-0.5, offset_high=0.5)
        gv, gmeta = _coercive_values(rng, domain, offset_low=0.1, offset_high=1.0,
                                     with_bump=False)
        return Instance(GridFunction(domain, fv), GridFunction(domain, gv))
    if id in ("L21_Eq36", "L21_Eq37"):
        c = float(rng.uniform(0.4, 1.5))
        alpha = float(rng.choice((1.0, 1.5, 2.0)))
        a = float(rng.uniform(0.1, 1.0))
        fv = (c * np.linalg.norm(domain.points(), axis=1) ** alpha + a
              ).reshape(domain.shape)
        if rng.uniform() < 0.5:
            bc, bw, bamp = _bump_spec(rng, domain, domain.half_width / 3.0)
            fv = fv + _cone_values(domain, bc, bw, bamp)
        g = GridFunction(domain, np.zeros(domain.shape))
        mf = float(np.min(fv))
        z = mf - float(rng.uniform(0.3, 1.0))
        r_b = max(3 * domain.h,
                  (max(2.0 * z, 0.0) / c) ** (1.0 / alpha) * 1.2,
                  0.25 * domain.half_width)
        return Instance(GridFunction(domain, fv), g,
                        {"c": c, "alpha": alpha, "z": z, "r_B": r_b})
    if id == "T23_Eq38":
        c = float(rng.uniform(0.4, 1.5))
        alpha = 2.0
        a = float(rng.uniform(0.3, 1.0))
        fv = (c * np.linalg.norm(domain.points(), axis=1) ** alpha + a
              ).reshape(domain.shape)
        gv, _ = _coercive_values(rng, domain, offset_low=0.0, offset_high=0.8,
                                 with_bump=False)
        mg = float(np.min(gv))
        r_b = max(3 * domain.h,
                  ((a + abs(mg)) / c) ** (1.0 / alpha) * 1.1)
        r_b = min(r_b, 0.8 * domain.half_width)
        t = float(rng.uniform(1.0, 3.0))
        return Instance(GridFunction(domain, fv), GridFunction(domain, gv),
                        {"c": c, "alpha": alpha, "r_B": r_b, "t": t})
    if id in ("HL_Eq42", "HL_Eq43"):
        H = HamiltonianSpec("quadratic_half") if seed % 2 == 0 else HamiltonianSpec("norm")
        gv, _ = _coercive_values(rng, domain, offset_low=0.2, offset_high=1.0)
        t = float(rng.uniform(0.5, min(1.5, domain.half_width / 3.0)))
        return Instance(GridFunction(domain, gv), GridFunction(domain, gv),
                        {"H": H, "t": t})
    if id in ("HF_Eq47", "HF_Eq48"):
        H = HamiltonianSpec("quadratic_half") if seed % 2 == 0 else HamiltonianSpec("norm")
        c = float(rng.uniform(0.4, 1.5))
        alpha = float(rng.choice((1.5, 2.0)))
        ctr = rng.uniform(-domain.half_width / 8.0, domain.half_width / 8.0,
                          size=domain.dim)
        a = float(rng.uniform(0.2, 1.0))
        d = np.linalg.norm(domain.points() - ctr, axis=1)
        gv = (c * d ** alpha + a).reshape(domain.shape)
        t = float(rng.uniform(0.5, min(1.5, domain.half_width / 3.0)))
        g = GridFunction(domain, gv)
        return Instance(g, g, {"H": H, "t": t})
    if id in ("LS_Eq52", "LS_Eq53"):
        H = HamiltonianSpec("level_power_abs", {"alpha": float(rng.choice((1.0, 2.0)))})
        inst = make_instance(seed, "nonneg_pair", domain, strict_positive=True)
        t = float(rng.uniform(0.5, 2.0))
        return Instance(inst.g, inst.g, {"H": H, "t": t})
    raise ValueError(f"unknown inequality id {id!r}")


def _phi_pool() -> tuple:
    return (
        YoungFunction.power(1), YoungFunction.power(2), YoungFunction.power(3),
        YoungFunction.indicator_unit(), YoungFunction.one_plus(2),
        YoungFunction.one_inf(), YoungFunction.exp_inv_sq(),
    )


def _phi_for(id: str, seed: int, pool) -> YoungFunction:
    phi = pool[(seed * 7 + INEQUALITY_IDS.index(id)) % len(pool)]
    if id == "T23_Eq38" and phi.kind != "power":
        return YoungFunction.power(2)
    if id == "L21_Eq37" and not phi.invertible:
        return YoungFunction.power(2)
    return phi


# ---------------------------------------------------------------------------
# campaign

@dataclass(frozen=True)
class CampaignRow:
    id: str
    seed: int
    dim: int
    n: int
    phi: str
    status: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    detail: str
    seconds: float


@dataclass(frozen=True)
class CampaignSummary:
    rows: tuple
    passes: int
    vacuous: int
    hypothesis_not_met: int
    failures: int
    escalated: int
    max_ratio: dict
    seconds: float

    @property
    def exit_code(self) -> int:
        return 0 if (self.failures == 0 and self.escalated == 0) else 1

    def to_json(self) -> str:
        return json.dumps(_jsonable({
            "passes": self.passes,
            "vacuous": self.vacuous,
            "hypothesis_not_met": self.hypothesis_not_met,
            "failures": self.failures,
            "escalated": self.escalated,
            "exit_code": self.exit_code,
            "seconds": round(self.seconds, 3),
            "max_lhs_over_rhs": {k: v for k, v in sorted(self.max_ratio.items())},
            "rows": [vars(r) for r in self.rows],
        }))


def campaign(ids=None, trials: int = 25, configs=None,
             rungs: int = LADDER_RUNGS, seed_base: int = 0,
             keep_rows: bool = True) -> CampaignSummary:
    """Run every requested id over seeded instances and count outcomes.

    ``configs`` is a list of (dim, half_width, n) grids; seeds run from
    ``seed_base`` to ``seed_base + trials - 1``.  Trials are independent;
    results are aggregated in a single reduction, so the loop can be farmed
    out without changing semantics.
    """
    if ids is None:
        ids = INEQUALITY_IDS
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if configs is None:
        configs = [(1, 4.0, 257), (2, 4.0, 65)]
    pool = _phi_pool()
    rows = []
    counts = {"pass": 0, "vacuous": 0, "hypothesis_not_met": 0,
              "fail": 0, "escalated": 0}
    ratios: dict = {}
    t0 = time.perf_counter()
    for dim, half_width, n in configs:
        domain = GridDomain(dim, half_width, n)
        for id in ids:
            for seed in range(seed_base, seed_base + trials):
                inst = _plan(id, seed, domain)
                phi = _phi_for(id, seed, pool)
                started = time.perf_counter()
                rep = check_inequality(id, inst.f, inst.g, phi,
                                       {**inst.params, "rungs": rungs})
                secs = time.perf_counter() - started
                counts[rep.status] += 1
                if rep.status in ("pass", "fail") \
                        and math.isfinite(rep.lhs) and math.isfinite(rep.rhs) and rep.rhs > 0:
                    key = f"{id}@N{dim}"
                    ratios[key] = max(ratios.get(key, 0.0), rep.lhs / rep.rhs)
                if keep_rows:
                    rows.append(CampaignRow(id, seed, dim, n, phi.kind,
                                            rep.status, rep.lhs, rep.rhs,
                                            rep.margin, rep.tolerance,
                                            rep.detail, round(secs, 4)))
    total = time.perf_counter() - t0
    return CampaignSummary(tuple(rows), counts["pass"], counts["vacuous"],
                           counts["hypothesis_not_met"], counts["fail"],
                           counts["escalated"], ratios, total)


@dataclass(frozen=True)
class SelfTestReport:
    ok: bool
    sharp: InequalityReport
    weakened: InequalityReport

    def to_json(self) -> str:
        return json.dumps(_jsonable({
            "ok": self.ok,
            "sharp": self.sharp.to_dict(),
            "weakened": self.weakened.to_dict(),
        }))


def selftest(domain: GridDomain | None = None) -> SelfTestReport:
    """Constant-sharpness self check.

    f = g = 1 with the unit-indicator Young function makes both sides of the
    4-constant bound exactly 2 with zero tolerance; scaling the constant to
    3.9 must flip the verdict to a failure, proving the harness can fail.
    """
    if domain is None:
        domain = GridDomain(1, 4.0, 129)
    one = sample(FunctionSpec.constant(1.0), domain)
    phi = YoungFunction.indicator_unit()
    sharp = check_inequality("T7_Eq19", one, one, phi)
    weak = check_inequality("T7_Eq19", one, one, phi,
                            {"constant_scale": 3.9 / 4.0})
    ok = sharp.status == "pass" and weak.status == "fail"
    return SelfTestReport(ok, sharp, weak)

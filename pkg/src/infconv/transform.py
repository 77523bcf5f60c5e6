"""Radial rearrangement transforms built from enclosing-ball radii.

For a grid function f the upper radius function

    rho_plus(xi) = radius of the minimal ball enclosing {f > xi}

is nonincreasing in xi (level sets nest), with the conventions radius 0 for
the empty set and +inf for a level set that touches the box boundary (the
grid proxy for unboundedness).  Inverting it along a ladder of K thresholds
gives the radial profile

    gamma_plus(t) = inf { xi : rho_plus(xi) <= t }

and the hat transform  f_hat(x) = gamma_plus(|x|), a radial nonincreasing
majorant-like rearrangement of f.  The check transform is its order dual,
f_check = -((-f)_hat), equivalently built from strict lower level sets and
gamma_minus(t) = sup { xi : rho_minus(xi) <= t }; both routes are implemented
and compared in the tests.

All profile values are quantized to the threshold ladder, so identities that
are exact in the continuum hold here within one ladder step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import (
    GridFunction,
    GridDomain,
    positive_part,
    reciprocal,
)
from .minball import enclosing_ball
from .orlicz import YoungFunction, luxemburg_norm

__all__ = [
    "LADDER_RUNGS",
    "value_ladder",
    "rho_plus",
    "rho_minus",
    "RadialProfile",
    "hat",
    "check",
    "transform_property_suite",
    "TransformSuiteReport",
    "SuiteEntry",
]

LADDER_RUNGS = 256


def value_ladder(f: GridFunction, rungs: int = LADDER_RUNGS) -> np.ndarray:
    """Ascending thresholds spanning the finite node value range."""
    finite = f.values[np.isfinite(f.values)]
    if finite.size == 0:
        raise ValueError("value ladder needs at least one finite node")
    lo, hi = float(finite.min()), float(finite.max())
    if lo == hi:
        return np.array([lo])
    # symmetrized so that the ladder of -f is exactly the negated reversal;
    # the negate and direct check routes then quantize at identical floats
    up = np.linspace(lo, hi, rungs)
    dn = np.linspace(-hi, -lo, rungs)
    return 0.5 * (up - dn[::-1])


def _set_radius(pts: np.ndarray, boundary: np.ndarray, mask: np.ndarray) -> float:
    """Enclosing-ball radius of a node set under the open-ball convention.

    A set touching the box boundary counts as unbounded (+inf).  A set of at
    most one node gets -inf: the open ball it reconstructs to is empty, so
    the rung must never fire.  This is what collapses single-node spikes and
    keeps a uniquely attained maximum off the transform.
    """
    if bool((mask & boundary).any()):
        return math.inf
    if int(mask.sum()) <= 1:
        return -math.inf
    return enclosing_ball(pts[mask]).radius


def _rho(f: GridFunction, ladder: np.ndarray, upper: bool) -> np.ndarray:
    pts = f.domain.points()
    boundary = f.domain.boundary_mask().ravel()
    vals = f.values.ravel()
    out = np.empty(ladder.size)
    for k, xi in enumerate(ladder):
        mask = vals > xi if upper else vals < xi
        out[k] = _set_radius(pts, boundary, mask)
    return out


def rho_plus(f: GridFunction, ladder: np.ndarray) -> np.ndarray:
    """Enclosing-ball radius of {f > xi} for each ladder threshold."""
    return _rho(f, np.asarray(ladder, dtype=float), upper=True)


def rho_minus(f: GridFunction, ladder: np.ndarray) -> np.ndarray:
    """Enclosing-ball radius of {f < xi} for each ladder threshold."""
    return _rho(f, np.asarray(ladder, dtype=float), upper=False)


@dataclass(frozen=True)
class RadialProfile:
    """Piecewise-constant radial profile gamma(t), right-continuous in t.

    direction 'hat' stores gamma_plus built from (ladder, rho_plus); it is
    nonincreasing in t.  direction 'check' stores gamma_minus built from
    (ladder, rho_minus), nondecreasing in t.  Monotonicity of the stored rho
    array is enforced at construction to absorb solver jitter.

    ``slack`` widens every rung's ball at evaluation time.  Grid transforms
    set it to half a cell: level-set radii are floored to the node lattice
    and evaluation happens on the same lattice, so without the slack every
    qualifying test would lose a full cell instead of centering the error.
    ``rho_above`` (hat) / ``rho_below`` (check) carry the ball radius of the
    beyond-ladder set (+inf / -inf nodes), which overrides the ladder value
    where it fires.
    """

    direction: str
    ladder: np.ndarray
    rho: np.ndarray
    slack: float = 0.0
    rho_above: float = -math.inf
    rho_below: float = -math.inf

    def __post_init__(self):
        if self.direction not in ("hat", "check"):
            raise ValueError(f"direction must be 'hat' or 'check', got {self.direction!r}")
        if not (self.slack >= 0 and math.isfinite(self.slack)):
            raise ValueError("slack must be finite and nonnegative")
        lad = np.asarray(self.ladder, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        if lad.shape != rho.shape or lad.ndim != 1:
            raise ValueError("ladder and rho must be matching 1-D arrays")
        if lad.size > 1 and np.any(np.diff(lad) <= 0):
            raise ValueError("ladder must increase strictly")
        if self.direction == "hat":
            rho = np.minimum.accumulate(rho)      # nonincreasing in xi
        else:
            rho = np.maximum.accumulate(rho)      # nondecreasing in xi
        lad.setflags(write=False)
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "ladder", lad)
        object.__setattr__(self, "rho", rho)

    @property
    def step(self) -> float:
        """Ladder quantization step."""
        if self.ladder.size < 2:
            return 0.0
        return float(self.ladder[1] - self.ladder[0])

    def evaluate(self, t) -> np.ndarray:
        """gamma at radii t: the extreme rung whose slacked ball reaches t.

        A rung qualifies at t when rho >= t - slack; hat takes the largest
        qualifying rung, check the smallest.  With no qualifying rung the
        value clamps to the ladder end (bottom for hat, top for check).  The
        beyond-ladder radius, where it qualifies, overrides with +-inf.
        """
        t = np.asarray(t, dtype=float)
        theta = t - self.slack
        if self.direction == "hat":
            # rho is nonincreasing: qualifying rungs are a ladder prefix
            rev = self.rho[::-1]
            cnt = self.rho.size - np.searchsorted(rev, theta, side="left")
            out = self.ladder[np.maximum(cnt - 1, 0)]
            out = np.where(self.rho_above >= theta, math.inf, out)
        else:
            # rho is nondecreasing: qualifying rungs are a ladder suffix
            cnt = self.rho.size - np.searchsorted(self.rho, theta, side="left")
            out = self.ladder[self.ladder.size - np.maximum(cnt, 1)]
            out = np.where(self.rho_below >= theta, -math.inf, out)
        return out

    # -- serialization -------------------------------------------------------

    def to_csv(self, path: str) -> None:
        """Write breakpoint rows 't,gamma' (header included)."""
        ts = np.unique(self.rho[np.isfinite(self.rho)])
        gs = self.evaluate(ts)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,gamma\n")
            for t, g in zip(ts, gs):
                fh.write(f"{t:.12g},{_fmt(g)}\n")

    @staticmethod
    def from_csv(path: str, direction: str) -> "RadialProfile":
        ts, gs = [], []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline()
            if not header.startswith("t,"):
                raise ValueError("profile CSV must start with a 't,gamma' header")
            for line in fh:
                if not line.strip():
                    continue
                a, b = line.split(",")
                ts.append(float(a))
                gs.append(float(b.strip().replace("−", "-")))
        ts = np.asarray(ts)
        gs = np.asarray(gs)
        if ts.size == 0:
            raise ValueError("profile CSV has no finite breakpoints")
        # rebuild (ladder, rho) pairs; gamma values double as ladder rungs
        order = np.argsort(gs, kind="stable")
        lad, rho = [], []
        for i in order:
            if lad and gs[i] == lad[-1]:
                continue
            lad.append(gs[i])
            rho.append(ts[i])
        return RadialProfile(direction, np.asarray(lad), np.asarray(rho))


def _fmt(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return f"{v:.12g}"


def hat(f: GridFunction, rungs: int = LADDER_RUNGS) -> tuple:
    """Hat transform of f.  Returns (profile, grid function)."""
    ladder = value_ladder(f, rungs)
    pts = f.domain.points()
    boundary = f.domain.boundary_mask().ravel()
    above = _set_radius(pts, boundary, f.values.ravel() > ladder[-1])
    profile = RadialProfile("hat", ladder, rho_plus(f, ladder),
                            slack=f.domain.h / 2.0, rho_above=above)
    vals = profile.evaluate(f.domain.radii())
    gf = GridFunction(f.domain, vals, f.outside_mode, radial_nonincreasing=True)
    return profile, gf


def check(f: GridFunction, rungs: int = LADDER_RUNGS, method: str = "negate") -> tuple:
    """Check transform of f.  Returns (profile, grid function).

    method 'negate' computes -((-f)_hat) literally; 'direct' builds the
    profile from lower level sets.  The two agree exactly and the test suite
    keeps them honest against each other.
    """
    if method == "negate":
        neg = f.with_values(-f.values)
        p_neg, g_neg = hat(neg, rungs)
        profile = RadialProfile("check", -p_neg.ladder[::-1], p_neg.rho[::-1],
                                slack=p_neg.slack, rho_below=p_neg.rho_above)
        gf = GridFunction(f.domain, -g_neg.values, f.outside_mode)
        return profile, gf
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    ladder = value_ladder(f, rungs)
    pts = f.domain.points()
    boundary = f.domain.boundary_mask().ravel()
    below = _set_radius(pts, boundary, f.values.ravel() < ladder[0])
    profile = RadialProfile("check", ladder, rho_minus(f, ladder),
                            slack=f.domain.h / 2.0, rho_below=below)
    vals = profile.evaluate(f.domain.radii())
    return profile, GridFunction(f.domain, vals, f.outside_mode)


# ---------------------------------------------------------------------------
# property suite

@dataclass(frozen=True)
class SuiteEntry:
    name: str
    max_violation: float
    tol: float
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class TransformSuiteReport:
    entries: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def entry(self, name: str) -> SuiteEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def _max_abs_diff(a: np.ndarray, b: np.ndarray, cap: float | None = None) -> float:
    """Max |a - b| treating matching infinities as zero difference.

    With a cap both arrays are clipped first, which identifies values at or
    beyond the cap; used when one side saturates its ladder top.
    """
    if cap is not None:
        a = np.minimum(a, cap)
        b = np.minimum(b, cap)
    both_pinf = (a == math.inf) & (b == math.inf)
    both_minf = (a == -math.inf) & (b == -math.inf)
    skip = both_pinf | both_minf
    if skip.all():
        return 0.0
    d = np.abs(a[~skip] - b[~skip])
    return float(np.max(d)) if d.size else 0.0


def _lip_estimate(f: GridFunction) -> float:
    """Max finite-difference slope magnitude over axis neighbors.

    Pairs with a non-finite member are ignored; a jump between finite values
    (an indicator edge, a spike) contributes its full height / h, which is
    exactly the scale the node-quantization error bounds need.
    """
    v = f.values
    h = f.domain.h
    worst = 0.0
    for ax in range(f.domain.dim):
        a = np.moveaxis(v, ax, 0)
        with np.errstate(invalid="ignore"):
            d = a[1:] - a[:-1]
        ok = np.isfinite(d)
        if ok.any():
            worst = max(worst, float(np.max(np.abs(d[ok]))) / h)
    return worst


def transform_property_suite(f: GridFunction, phi: YoungFunction | None = None,
                             z: float = 1.0, c: float = 2.0,
                             rungs: int = LADDER_RUNGS) -> TransformSuiteReport:
    """Structural checks of the hat/check pair on one function.

    Each check compares two independently computed grid functions and must
    agree within a tolerance derived from the ladder steps involved.  Norm
    comparisons additionally carry the node-quantization term h * Lip(f):
    level-set radii are read off nodes, so a slope-L stretch can sit up to
    one cell short of its continuum radius.  Checks that need extra
    structure (an invertible phi, a radial tag, a spike, a strictly
    positive f) are skipped with a note when it is absent.
    """
    if not (c > 0 and math.isfinite(c)):
        raise ValueError("scale factor c must be finite and positive")
    entries = []
    prof, fh = hat(f, rungs)
    step = prof.step
    slop = 1e-9 * (1.0 + abs(f.node_max if math.isfinite(f.node_max) else 0.0))

    entries.append(SuiteEntry(
        "sup_not_raised", max(fh.node_max - f.node_max, 0.0)
        if math.isfinite(f.node_max) else 0.0,
        step + slop, fh.node_max <= f.node_max + step + slop))
    entries.append(SuiteEntry(
        "inf_not_lowered", max(f.node_min - fh.node_min, 0.0),
        step + slop, fh.node_min >= f.node_min - step - slop))

    _, fh_shift = hat(f.shift_by(z), rungs)
    viol = _max_abs_diff(fh_shift.values, fh.values + z)
    entries.append(SuiteEntry("shift_equivariance", viol, step + slop,
                              viol <= step + slop))

    _, fh_scale = hat(f.scale_by(c), rungs)
    viol = _max_abs_diff(fh_scale.values, np.where(np.isfinite(fh.values),
                                                   c * fh.values, fh.values))
    tol = c * step + slop
    entries.append(SuiteEntry("scale_equivariance", viol, tol, viol <= tol))

    # argument doubling: hat(f(2.)) = fhat(2.), with f continued past the box
    # by its edge values; exact for functions constant beyond the half box,
    # and both sides saturate identically for box-coercive ones
    half = f.domain.center_index
    idx = []
    for _ in range(f.domain.dim):
        off = np.arange(-half, half + 1)
        idx.append(np.clip(2 * off, -half, half) + half)
    f2_vals = f.values[np.ix_(*idx)]
    _, f2h = hat(f.with_values(f2_vals), rungs)
    target = fh.values[np.ix_(*idx)]
    viol = _max_abs_diff(f2h.values, target)
    tol = 2 * step + 3 * f.domain.h * _lip_estimate(f) + slop
    entries.append(SuiteEntry("argument_scaling", viol, tol, viol <= tol))

    # h <= f built by shrinking f toward its minimum
    if math.isfinite(f.node_min):
        hvals = f.node_min + 0.8 * (f.values - f.node_min)
        _, hh = hat(f.with_values(hvals), rungs)
        with np.errstate(invalid="ignore"):
            gap = hh.values - fh.values
        both_inf = np.isinf(hh.values) & np.isinf(fh.values)
        worst = float(np.max(gap[~both_inf])) if not both_inf.all() else 0.0
        tol = 2 * step + slop
        entries.append(SuiteEntry("monotone", worst, tol, worst <= tol))
    else:
        entries.append(SuiteEntry("monotone", 0.0, 0.0, True, "skipped: node_min infinite"))

    fp = positive_part(f)
    pos_min = float(np.min(fp.values))
    if pos_min > 0:
        # reciprocal duality: (f^-1)_hat = (f_check)^-1 for f > 0
        rec = reciprocal(fp)
        _, lhs = hat(rec, rungs)
        _, fcheck = check(fp, rungs)
        rhs = reciprocal(fcheck)
        cap = float(np.max(rec.values[np.isfinite(rec.values)]))
        rstep = _ladder_step(rec, rungs)
        fstep = _ladder_step(fp, rungs)
        tol = rstep + fstep * cap * cap + slop
        viol = _max_abs_diff(lhs.values, rhs.values, cap=cap)
        entries.append(SuiteEntry("reciprocal_duality", viol, tol, viol <= tol))
    else:
        entries.append(SuiteEntry("reciprocal_duality", 0.0, 0.0, True,
                                  "skipped: needs strictly positive values"))

    _, lhs = check(positive_part(f), rungs)
    _, ch = check(f, rungs)
    rhs = positive_part(ch)
    viol = _max_abs_diff(lhs.values, rhs.values)
    tol = _ladder_step(f, rungs) + _ladder_step(positive_part(f), rungs) + slop
    entries.append(SuiteEntry("positive_part_commutes", viol, tol, viol <= tol))

    if phi is not None and phi.invertible:
        comp = f.with_values(phi(fp.values))
        _, lhs = hat(comp, rungs)
        rhs_vals = phi(np.maximum(hat(fp, rungs)[1].values, 0.0))
        grid = np.linspace(0.0, max(float(np.max(fp.values[np.isfinite(fp.values)])), 1.0), 512)
        lip = float(np.max(np.diff(phi(grid)) / np.diff(grid)))
        tol = _ladder_step(comp, rungs) + lip * _ladder_step(fp, rungs) + slop
        viol = _max_abs_diff(lhs.values, rhs_vals)
        entries.append(SuiteEntry("compose_invertible", viol, tol, viol <= tol))
    elif phi is not None:
        entries.append(SuiteEntry("compose_invertible", 0.0, 0.0, True,
                                  "skipped: phi not invertible"))

    if phi is not None:
        nf = luxemburg_norm(fp, phi)
        nh = luxemburg_norm(hat(fp, rungs)[1], phi)
        if math.isinf(nh):
            entries.append(SuiteEntry("norm_dominated", 0.0, 0.0, True))
        elif math.isinf(nf):
            entries.append(SuiteEntry("norm_dominated", math.inf, 0.0, False))
        else:
            # ||f|| <= ||fhat|| + ||(f - fhat)+||, and the hat sits at most
            # one ladder step plus one cell of slope below f on the support
            spt = fp.with_values((fp.values > 0).astype(float))
            quant = _ladder_step(fp, rungs) + f.domain.h * _lip_estimate(fp)
            tol = quant * luxemburg_norm(spt, phi) + slop
            entries.append(SuiteEntry("norm_dominated", max(nf - nh, 0.0), tol,
                                      nf <= nh + tol))

    if f.radial_nonincreasing:
        viol = _max_abs_diff(fh.values, f.values)
        tol = step + f.domain.h * _lip_estimate(f) + slop
        entries.append(SuiteEntry("radial_fixed_point", viol, tol, viol <= tol))

    nonzero = np.count_nonzero(f.values)
    if nonzero == 1 and f.node_min == 0.0 and f.node_max > 0.0:
        viol = float(np.max(np.abs(fh.values)))
        entries.append(SuiteEntry("spike_collapses", viol, slop, viol <= slop))

    return TransformSuiteReport(tuple(entries))


def _ladder_step(f: GridFunction, rungs: int) -> float:
    finite = f.values[np.isfinite(f.values)]
    if finite.size == 0 or rungs < 2:
        return 0.0
    return (float(finite.max()) - float(finite.min())) / (rungs - 1)

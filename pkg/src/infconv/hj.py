"""Hamilton-Jacobi solution formulas and long-time norm sweeps.

Three solution operators for  u_t + H(Du) = 0,  u(0, .) = g  on [-L, L]^N:

  hopf_lax    u(t, .) = (tH)* [] g          (H convex; g arbitrary)
  hopf        u(t, .) = (tH + g*)*          (g convex; H arbitrary)
  level_sum   u(t, .) = h_[t]+ \\/ g         (level-set Hamiltonian H(s, x))

(tH)* has closed forms for the quadratic and norm Hamiltonians; otherwise it
is computed by grid conjugation.  Each solution records the sign condition
that makes the corresponding reciprocal-norm estimates meaningful, namely
-t H**(0) + m_g >= 0 for the convex formulas and m_g >= 0 for the level-set
formula.

The long-time sweep solves on a ladder of times, takes the Luxemburg norm of
the node-wise reciprocal 1/u(t, .) (with 1/0 = +inf and 1/inf = 0), and fits
a log-log slope, dropping the two smallest times where transients sit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import binary_dilation

from .conjugate import DualGrid, legendre_at, make_dual_grid, scaled_conjugate
from .extremal import inf_conv, inf_max
from .grid import (
    OUTSIDE_PLUS_INF,
    FunctionSpec,
    GridDomain,
    GridFunction,
    reciprocal,
    sample,
)
from .orlicz import YoungFunction, luxemburg_norm

__all__ = [
    "HamiltonianSpec",
    "Feasibility",
    "HJSolution",
    "SignConditionError",
    "hopf_lax",
    "hopf_lax_kernel",
    "is_grid_convex",
    "hopf",
    "level_sum_solution",
    "pde_residual",
    "ResidualReport",
    "SweepConfig",
    "SweepEntry",
    "SweepReport",
    "longtime_sweep",
    "sweep_preset",
]


class SignConditionError(ValueError):
    """Raised when a sweep's sign condition fails; carries the failing times."""

    def __init__(self, times):
        self.times = tuple(times)
        super().__init__(f"sign condition fails at t = {list(self.times)}")


@dataclass(frozen=True)
class HamiltonianSpec:
    """Hamiltonian H(y), or the level kind h(x) for the level-set formula.

    kinds:
        quadratic_half   H(y) = |y|^2 / 2
        norm             H(y) = |y|
        power_growth     H(y) = d |y|^a, a > 1        (grid conjugation)
        level_power_abs  h(x) = |x|^(1/alpha), h(0) = -inf
        level_exp_abs    h(x) = ln |x|, h(0) = -inf
        custom_grid      H sampled on a slope grid (carried by the caller)
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("quadratic_half", "norm", "power_growth",
                             "level_power_abs", "level_exp_abs", "custom_grid"):
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}")
        object.__setattr__(self, "params", dict(self.params))
        if self.kind == "power_growth":
            if self.params.get("a", 0) <= 1 or self.params.get("d", 0) <= 0:
                raise ValueError("power_growth needs d > 0 and exponent a > 1")
        if self.kind == "level_power_abs" and self.params.get("alpha", 0) <= 0:
            raise ValueError("level_power_abs needs alpha > 0")

    @property
    def is_level_kind(self) -> bool:
        return self.kind in ("level_power_abs", "level_exp_abs")

    def __call__(self, y: np.ndarray) -> np.ndarray:
        """Evaluate H at slope vectors y, shape (..., dim)."""
        y = np.asarray(y, dtype=float)
        r = np.linalg.norm(y, axis=-1)
        if self.kind == "quadratic_half":
            return 0.5 * r ** 2
        if self.kind == "norm":
            return r
        if self.kind == "power_growth":
            return self.params["d"] * r ** self.params["a"]
        raise ValueError(f"kind {self.kind!r} has no slope-space evaluation")

    def level_values(self, x_over_t: np.ndarray) -> np.ndarray:
        """h(x/t) at scaled points, -inf at the origin."""
        r = np.linalg.norm(np.asarray(x_over_t, dtype=float), axis=-1)
        if self.kind == "level_power_abs":
            with np.errstate(divide="ignore"):
                out = np.where(r > 0, r ** (1.0 / self.params["alpha"]), -math.inf)
            return out
        if self.kind == "level_exp_abs":
            with np.errstate(divide="ignore"):
                return np.where(r > 0, np.log(np.where(r > 0, r, 1.0)), -math.inf)
        raise ValueError(f"kind {self.kind!r} is not a level kind")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        d.update(self.params)
        return d

    @staticmethod
    def from_dict(d: dict) -> "HamiltonianSpec":
        d = dict(d)
        return HamiltonianSpec(d.pop("kind"), d)

    @staticmethod
    def from_json(text: str) -> "HamiltonianSpec":
        return HamiltonianSpec.from_dict(json.loads(text))


@dataclass(frozen=True)
class Feasibility:
    """Recorded sign condition -t H**(0) + m_g (or m_g for level formulas)."""

    value: float
    satisfied: bool
    description: str


@dataclass(frozen=True)
class HJSolution:
    t: float
    u: GridFunction
    formula: str
    feasibility: Feasibility
    sandwich_excess: float | None = None


def hopf_lax_kernel(H: HamiltonianSpec, t: float, domain: GridDomain,
            H_grid: GridFunction | None = None) -> GridFunction:
    """(tH)* on the given domain; closed form when one exists."""
    if H.kind == "quadratic_half":
        pts = domain.points()
        vals = (np.sum(pts ** 2, axis=1) / (2.0 * t)).reshape(domain.shape)
        return GridFunction(domain, vals, OUTSIDE_PLUS_INF, quad_coeff=1.0 / (2.0 * t))
    if H.kind == "norm":
        pts = domain.points()
        r = np.linalg.norm(pts, axis=1)
        vals = np.where(r <= t * (1 + 1e-12) + 1e-12, 0.0, math.inf).reshape(domain.shape)
        return GridFunction(domain, vals, OUTSIDE_PLUS_INF, indicator_radius=float(t))
    if H.kind == "power_growth":
        # the sup over w is attained where t d a |w|^(a-1) = |x|; cover the
        # largest |x| in the box with a 1.5 margin
        d, a = H.params["d"], H.params["a"]
        xmax = domain.half_width * math.sqrt(domain.dim)
        bound = 1.5 * (xmax / (t * d * a)) ** (1.0 / (a - 1.0))
        slope_grid = GridDomain(domain.dim, max(bound, 1e-6), domain.n)
        w = slope_grid.points()
        hv = GridFunction(slope_grid, H(w).reshape(slope_grid.shape), OUTSIDE_PLUS_INF)
        return scaled_conjugate(hv, t, domain)
    if H.kind == "custom_grid":
        if H_grid is None:
            raise ValueError("custom_grid Hamiltonian needs its sampled grid function")
        return scaled_conjugate(H_grid, t, domain)
    raise ValueError(f"kind {H.kind!r} is not a convex-formula Hamiltonian")


def _hstar_star_zero(H: HamiltonianSpec, H_grid: GridFunction | None) -> float:
    """H**(0); zero for the analytic kinds, computed for sampled ones."""
    if H.kind in ("quadratic_half", "norm", "power_growth"):
        return 0.0
    if H.kind == "custom_grid" and H_grid is not None:
        # H**(0) = sup_w (0 - H*(w)) = -inf_w H*(w)
        dual = make_dual_grid(H_grid)
        star_vals = legendre_at(H_grid, dual.grid.points())
        return float(-np.min(star_vals)) if np.isfinite(star_vals).any() else -math.inf
    raise ValueError("cannot evaluate H**(0) for this Hamiltonian")


def hopf_lax(H: HamiltonianSpec, g: GridFunction, t: float,
             H_grid: GridFunction | None = None,
             method: str = "auto") -> HJSolution:
    """u(t, .) = (tH)* [] g for convex H."""
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and positive, got {t}")
    if H.is_level_kind:
        raise ValueError("level kinds use level_sum_solution")
    kern = hopf_lax_kernel(H, t, g.domain, H_grid)
    u = inf_conv(kern, g, method=method)
    hss0 = _hstar_star_zero(H, H_grid)
    value = -t * hss0 + g.node_min
    feas = Feasibility(value, value >= -1e-12, "-t H**(0) + min g >= 0")
    return HJSolution(t, u, "hopf_lax", feas)


def is_grid_convex(f: GridFunction, tol: float | None = None) -> bool:
    """Discrete convexity gate used by the Hopf formula and the harness."""
    if tol is None:
        scale = abs(f.node_max) if math.isfinite(f.node_max) else 0.0
        tol = 1e-8 * (1.0 + scale)
    return _axis_convex(f.values, f.domain.h, tol)


def _axis_convex(values: np.ndarray, h: float, tol: float) -> bool:
    """Discrete convexity along axes and diagonals (necessary conditions)."""
    dim = values.ndim
    for offsets in np.ndindex(*(3,) * dim):
        e = tuple(o - 1 for o in offsets)
        if all(v == 0 for v in e):
            continue
        if next(v for v in e if v != 0) < 0:
            continue  # -e checks the same chords
        shifted_p = np.roll(values, shift=tuple(-v for v in e),
                            axis=tuple(range(dim)))
        shifted_m = np.roll(values, shift=e, axis=tuple(range(dim)))
        with np.errstate(invalid="ignore"):
            second = shifted_p + shifted_m - 2 * values
        interior = np.ones_like(values, dtype=bool)
        for ax, v in enumerate(e):
            if v != 0:
                keep = np.zeros(values.shape[ax], dtype=bool)
                keep[1:-1] = True
                shape = [1] * dim
                shape[ax] = -1
                interior &= keep.reshape(shape)
        sec = second[interior]
        sec = sec[np.isfinite(sec)]
        if sec.size and float(np.min(sec)) < -tol:
            return False
    return True


def hopf(H: HamiltonianSpec, g: GridFunction, t: float,
         dual: DualGrid | None = None,
         H_grid: GridFunction | None = None,
         assume_convex: bool | None = None) -> HJSolution:
    """u(t, .) = (tH + g*)* for convex initial data g.

    Convexity of g is verified by discrete second differences along grid
    directions unless ``assume_convex=True``; nonconvex data is rejected.
    The sandwich u <= (tH)* [] g is recorded when the kernel has a fast form.
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and positive, got {t}")
    if H.is_level_kind:
        raise ValueError("level kinds use level_sum_solution")
    if assume_convex is None:
        tol = 1e-8 * (1.0 + abs(g.node_max if math.isfinite(g.node_max) else 0.0))
        if not _axis_convex(g.values, g.domain.h, tol):
            raise ValueError("hopf formula requires convex initial data")
    elif assume_convex is False:
        raise ValueError("hopf formula requires convex initial data")

    if dual is None:
        dual = make_dual_grid(g)
    w = dual.grid.points()
    gstar = legendre_at(g, w)
    if H.kind == "custom_grid":
        if H_grid is None or H_grid.domain != dual.grid:
            raise ValueError("custom_grid Hamiltonian must be sampled on the dual grid")
        hvals = H_grid.values.ravel()
    else:
        hvals = H(w)
    total = GridFunction(dual.grid, (t * hvals + gstar).reshape(dual.grid.shape),
                         OUTSIDE_PLUS_INF)
    uvals = legendre_at(total, g.domain.points())
    u = GridFunction(g.domain, uvals.reshape(g.domain.shape), OUTSIDE_PLUS_INF)

    hss0 = 0.0 if H.kind != "custom_grid" else _hstar_star_zero(H, H_grid)
    value = -t * hss0 + g.node_min
    feas = Feasibility(value, value >= -1e-12, "-t H**(0) + min g >= 0")

    excess = None
    if H.kind in ("quadratic_half", "norm"):
        ref = inf_conv(hopf_lax_kernel(H, t, g.domain), g)
        gap = u.values - ref.values
        both_inf = np.isinf(u.values) & np.isinf(ref.values)
        excess = float(np.max(gap[~both_inf])) if not both_inf.all() else 0.0
    return HJSolution(t, u, "hopf", feas, sandwich_excess=excess)


def level_sum_solution(H: HamiltonianSpec, g: GridFunction, t: float) -> HJSolution:
    """u(t, .) = h_[t]+ \\/ g for the level-set Hamiltonians; needs g >= 0."""
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and positive, got {t}")
    if not H.is_level_kind:
        raise ValueError("level_sum_solution needs a level kind")
    if g.node_min < 0:
        raise ValueError("level-set formula requires g >= 0")
    dom = g.domain
    pts = dom.points() / t
    hvals = H.level_values(pts).reshape(dom.shape)
    kern = GridFunction(dom, np.maximum(hvals, 0.0), OUTSIDE_PLUS_INF)
    u = inf_max(kern, g.with_outside_mode(OUTSIDE_PLUS_INF))
    feas = Feasibility(g.node_min, g.node_min >= 0, "min g >= 0")
    return HJSolution(t, u, "level_sum", feas)


# ---------------------------------------------------------------------------
# residual

@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    masked_fraction: float
    times: tuple


def pde_residual(solutions, H: HamiltonianSpec, kink_factor: float = 10.0) -> ResidualReport:
    """Central-difference residual u_t + H(Du) at interior times and nodes.

    Nodes where a one-sided gradient jumps by more than ``kink_factor * h``
    are masked (dilated by one node), as are box-boundary nodes and +-inf
    values; the max is over what remains.
    """
    sols = sorted(solutions, key=lambda s: s.t)
    if len(sols) < 3:
        raise ValueError("residual needs at least three times")
    dom = sols[0].u.domain
    if any(s.u.domain != dom for s in sols):
        raise ValueError("solutions must share one grid")
    h = dom.h
    worst = 0.0
    masked = 0
    total = 0
    for i in range(1, len(sols) - 1):
        tm, t0, tp = sols[i - 1].t, sols[i].t, sols[i + 1].t
        um, u0, up = sols[i - 1].u.values, sols[i].u.values, sols[i + 1].u.values
        u_t = (up - um) / (tp - tm)
        grads = np.gradient(u0, h, edge_order=1)
        if dom.dim == 1:
            grads = [grads]
        grad_vec = np.stack(grads, axis=-1)
        res = u_t + H(grad_vec)

        mask = ~np.isfinite(u0) | ~np.isfinite(u_t) | ~np.isfinite(res)
        for ax in range(dom.dim):
            second = np.zeros_like(u0)
            sl_c = [slice(None)] * dom.dim
            sl_p = [slice(None)] * dom.dim
            sl_m = [slice(None)] * dom.dim
            sl_c[ax], sl_p[ax], sl_m[ax] = slice(1, -1), slice(2, None), slice(0, -2)
            second[tuple(sl_c)] = u0[tuple(sl_p)] + u0[tuple(sl_m)] - 2 * u0[tuple(sl_c)]
            with np.errstate(invalid="ignore"):
                mask |= ~np.isfinite(second)
                mask |= np.abs(second) / h > kink_factor * h
        mask |= dom.boundary_mask()
        mask = binary_dilation(mask)

        good = ~mask
        total += good.size
        masked += int(mask.sum())
        if good.any():
            worst = max(worst, float(np.max(np.abs(res[good]))))
    frac = masked / total if total else 1.0
    return ResidualReport(worst, frac, tuple(s.t for s in sols))


# ---------------------------------------------------------------------------
# long-time sweeps

@dataclass(frozen=True)
class SweepConfig:
    """One long-time norm sweep: solver, data, norm and grid growth rule.

    The grid for time t is the box of half-width base_half_width + growth * t
    with spacing ~target_spacing (node count rounded up to odd).  ``drop``
    leading times are excluded from the slope fit.
    """

    solver: str                      # 'hopf_lax' or 'level_sum'
    hamiltonian: HamiltonianSpec
    g_spec: FunctionSpec
    phi: YoungFunction
    dim: int = 1
    t_values: tuple = (4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0)
    base_half_width: float = 40.0
    growth: float = 0.0
    target_spacing: float = 0.25
    theory_slope: float | None = None
    slope_tol: float = 0.1
    drop: int = 2

    def domain_for(self, t: float) -> GridDomain:
        L = self.base_half_width + self.growth * t
        n = int(math.ceil(2.0 * L / self.target_spacing)) + 1
        if n % 2 == 0:
            n += 1
        return GridDomain(self.dim, L, max(n, 3))


@dataclass(frozen=True)
class SweepEntry:
    t: float
    half_width: float
    n: int
    norm: float
    sign_value: float


@dataclass(frozen=True)
class SweepReport:
    entries: tuple
    slope: float
    intercept: float
    theory_slope: float | None
    slope_tol: float
    dropped: int

    @property
    def within_tol(self) -> bool | None:
        if self.theory_slope is None:
            return None
        return abs(self.slope - self.theory_slope) <= self.slope_tol

    def to_json(self) -> str:
        return json.dumps({
            "entries": [vars(e) for e in self.entries],
            "slope": self.slope,
            "intercept": self.intercept,
            "theory_slope": self.theory_slope,
            "slope_tol": self.slope_tol,
            "within_tol": self.within_tol,
            "dropped": self.dropped,
        })

    def to_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,half_width,n,norm,sign_value\n")
            for e in self.entries:
                fh.write(f"{e.t:.12g},{e.half_width:.12g},{e.n},"
                         f"{e.norm:.12g},{e.sign_value:.12g}\n")


def longtime_sweep(config: SweepConfig) -> SweepReport:
    """Run one sweep and fit the log-log norm growth slope."""
    entries = []
    bad_times = []
    for t in config.t_values:
        dom = config.domain_for(t)
        g = sample(config.g_spec, dom)
        if config.solver == "hopf_lax":
            sol = hopf_lax(config.hamiltonian, g, t)
        elif config.solver == "level_sum":
            sol = level_sum_solution(config.hamiltonian, g, t)
        else:
            raise ValueError(f"unknown sweep solver {config.solver!r}")
        if not sol.feasibility.satisfied:
            bad_times.append(t)
            continue
        u = sol.u
        # tiny negative excursions are solver noise on exact-zero data
        if u.node_min < -1e-10 * (1 + abs(u.node_max)):
            raise ValueError(f"solution at t={t} is negative beyond tolerance")
        vals = np.maximum(u.values, 0.0)
        norm = luxemburg_norm(reciprocal(u.with_values(vals)), config.phi)
        entries.append(SweepEntry(t, dom.half_width, dom.n, norm,
                                  sol.feasibility.value))
    if bad_times:
        raise SignConditionError(bad_times)

    fit = [(e.t, e.norm) for e in entries[config.drop:]
           if math.isfinite(e.norm) and e.norm > 0]
    if len(fit) < 2:
        raise ValueError("not enough finite norms to fit a slope")
    ts = np.log([p[0] for p in fit])
    ns = np.log([p[1] for p in fit])
    slope, intercept = np.polyfit(ts, ns, 1)
    return SweepReport(tuple(entries), float(slope), float(intercept),
                       config.theory_slope, config.slope_tol, config.drop)


def sweep_preset(name: str) -> SweepConfig:
    """Built-in sweep configurations.

    'quadratic': quadratic Hamiltonian, strictly positive quadratic data,
        L^2 norm; expected slope N/(2p) = 1/4.
    'ball': norm Hamiltonian (moving-minimum kernel), same data; expected
        slope N/p = 1/2.
    'level_power': level formula with h(x) = |x| (alpha = 1), steep data
        vanishing off-node, L^1 + L^2 crossover norm; expected slope
        1/alpha = 1.
    """
    if name == "quadratic":
        return SweepConfig(
            solver="hopf_lax",
            hamiltonian=HamiltonianSpec("quadratic_half"),
            g_spec=FunctionSpec.quadratic(1.0, offset=1.0),
            phi=YoungFunction.power(2),
            base_half_width=200.0,
            growth=0.0,
            target_spacing=0.25,
            theory_slope=0.25,
            slope_tol=0.05,
        )
    if name == "ball":
        return SweepConfig(
            solver="hopf_lax",
            hamiltonian=HamiltonianSpec("norm"),
            g_spec=FunctionSpec.quadratic(1.0, offset=1.0),
            phi=YoungFunction.power(2),
            base_half_width=60.0,
            growth=1.0,
            target_spacing=0.25,
            theory_slope=0.5,
            slope_tol=0.05,
        )
    if name == "level_power":
        # alpha = 1 in dimension 1 sits on the boundary N*alpha = 1 of the
        # L^1+L^p membership condition 1 < N*alpha < p, so the continuum norm
        # of u(t,.)^{-1} is infinite and the grid value is carried by the
        # spacing cutoff at the origin.  The data zero is placed half a cell
        # off-node (node minimum c*(h/2)^2 > 0, the closest grid stand-in for
        # m_g = 0); c balances that one-node spike against the flat cap it
        # puts under the t/|x| bulk.  Fitted slopes land near 0.78 on this
        # ladder and approach 1 only logarithmically as spacing shrinks.
        spacing = 0.0005
        return SweepConfig(
            solver="level_sum",
            hamiltonian=HamiltonianSpec("level_power_abs", {"alpha": 1.0}),
            g_spec=FunctionSpec.power(440.0, 2.0, center=(spacing / 2.0,)),
            phi=YoungFunction.one_plus(2),
            base_half_width=8.0,
            growth=0.0,
            target_spacing=spacing,
            theory_slope=1.0,
            slope_tol=0.1,
        )
    raise ValueError(f"unknown sweep preset {name!r}")

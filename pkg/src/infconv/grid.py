"""Uniform grid domains, extended-real valued grid functions, and a catalog
of analytic test functions.

Functions f: R^N -> [-inf, +inf] are represented by their values on the nodes
of a uniform grid over the closed box [-L, L]^N.  The node count per axis is
odd so that the origin is always a node; this matters because several
operations (convolution-type minimizations, level-set sums) need 0 to be a
representable shift.  Values are IEEE float64 and may be +inf or -inf; NaN is
rejected at construction.  The sum (+inf) + (-inf) is undefined and every code
path that could produce it raises instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "GridDomain",
    "GridFunction",
    "FunctionSpec",
    "LevelSet",
    "OUTSIDE_PLUS_INF",
    "OUTSIDE_MINUS_INF",
    "make_domain",
    "sample",
    "integrate",
    "level_set_upper",
    "level_set_lower",
    "reciprocal",
    "positive_part",
    "ext_add_scalar",
    "load_values_csv",
    "save_values_csv",
]

OUTSIDE_PLUS_INF = "+inf"
OUTSIDE_MINUS_INF = "-inf"


@dataclass(frozen=True)
class GridDomain:
    """Uniform node lattice on the box [-half_width, half_width]^dim.

    Attributes:
        dim: spatial dimension N, one of 1, 2, 3.
        half_width: box half-width L > 0.
        n: nodes per axis, odd and >= 3 so the origin is a node.

    The spacing is h = 2L/(n-1) and each node owns a cell of volume h^dim.
    """

    dim: int
    half_width: float
    n: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise ValueError(f"half_width must be finite and > 0, got {self.half_width}")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"n must be odd and >= 3, got {self.n}")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def cell_volume(self) -> float:
        return self.h ** self.dim

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n ** self.dim

    @property
    def center_index(self) -> int:
        # index of the origin along each axis
        return (self.n - 1) // 2

    @property
    def axis(self) -> np.ndarray:
        """Node coordinates along one axis, shape (n,)."""
        return np.linspace(-self.half_width, self.half_width, self.n)

    def points(self) -> np.ndarray:
        """All node coordinates, shape (n^dim, dim), row-major node order."""
        ax = self.axis
        grids = np.meshgrid(*([ax] * self.dim), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def radii(self) -> np.ndarray:
        """Euclidean norm |x| of every node, shape (n,)*dim."""
        ax = self.axis
        sq = np.zeros(self.shape)
        for d in range(self.dim):
            view = ax.reshape((1,) * d + (-1,) + (1,) * (self.dim - d - 1))
            sq = sq + view ** 2
        return np.sqrt(sq)

    def boundary_mask(self) -> np.ndarray:
        """Boolean mask of nodes lying on the box boundary."""
        mask = np.zeros(self.shape, dtype=bool)
        for d in range(self.dim):
            sl = [slice(None)] * self.dim
            sl[d] = 0
            mask[tuple(sl)] = True
            sl[d] = self.n - 1
            mask[tuple(sl)] = True
        return mask

    def nearest_index(self, x: Sequence[float]) -> tuple:
        """Multi-index of the node closest to the point x."""
        x = np.asarray(x, dtype=float).reshape(self.dim)
        idx = np.rint((x + self.half_width) / self.h).astype(int)
        idx = np.clip(idx, 0, self.n - 1)
        return tuple(int(i) for i in idx)


def make_domain(dim: int, half_width: float, n: int) -> GridDomain:
    return GridDomain(dim=dim, half_width=float(half_width), n=int(n))


def _validate_values(domain: GridDomain, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != domain.shape:
        raise ValueError(f"values shape {values.shape} does not match domain shape {domain.shape}")
    if np.isnan(values).any():
        raise ValueError("grid function values must not contain NaN")
    out = values.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GridFunction:
    """Extended-real valued function sampled on a GridDomain.

    ``outside_mode`` records the conceptual extension of the function beyond
    the box: '+inf' for operands of inf-type operations (infimal convolution,
    inf-max) and '-inf' for sup-min operands.  Either way the extension can
    never win the inner optimization, so the operations only ever combine
    node values.

    ``quad_coeff`` is set when the function is an exact centered quadratic
    c|x|^2 (c > 0); separable fast paths key off it.  ``radial_nonincreasing``
    tags catalog entries known to be radial and nonincreasing in |x|.

    Instances are immutable; the value array is read-only.
    """

    domain: GridDomain
    values: np.ndarray
    outside_mode: str = OUTSIDE_PLUS_INF
    quad_coeff: float | None = None
    indicator_radius: float | None = None
    radial_nonincreasing: bool = False

    def __post_init__(self):
        if self.outside_mode not in (OUTSIDE_PLUS_INF, OUTSIDE_MINUS_INF):
            raise ValueError(f"unknown outside_mode {self.outside_mode!r}")
        object.__setattr__(self, "values", _validate_values(self.domain, self.values))

    @property
    def node_min(self) -> float:
        return float(np.min(self.values))

    @property
    def node_max(self) -> float:
        return float(np.max(self.values))

    @property
    def inf_value(self) -> float:
        """Infimum including the conceptual outside extension."""
        if self.outside_mode == OUTSIDE_MINUS_INF:
            return -math.inf
        return self.node_min

    @property
    def sup_value(self) -> float:
        """Supremum including the conceptual outside extension."""
        if self.outside_mode == OUTSIDE_PLUS_INF:
            return math.inf
        return self.node_max

    def with_values(self, values: np.ndarray, **tags) -> "GridFunction":
        """Same domain and outside_mode, new values; fast-path tags reset."""
        kw = dict(quad_coeff=None, indicator_radius=None, radial_nonincreasing=False)
        kw.update(tags)
        return GridFunction(self.domain, values, self.outside_mode, **kw)

    def with_outside_mode(self, mode: str) -> "GridFunction":
        return replace(self, outside_mode=mode)

    def shift_by(self, z: float) -> "GridFunction":
        """Pointwise f + z.  Requires z finite; +-inf values absorb the shift."""
        return self.with_values(ext_add_scalar(self.values, z))

    def scale_by(self, c: float) -> "GridFunction":
        """Pointwise c*f for c >= 0, with the convention 0*(+-inf) = 0."""
        if not (c >= 0 and math.isfinite(c)):
            raise ValueError(f"scale factor must be finite and >= 0, got {c}")
        if c == 0.0:
            return self.with_values(np.zeros(self.domain.shape))
        qc = self.quad_coeff * c if self.quad_coeff is not None else None
        return self.with_values(self.values * c, quad_coeff=qc,
                                radial_nonincreasing=self.radial_nonincreasing)


def ext_add_scalar(values: np.ndarray, z: float) -> np.ndarray:
    """values + z in extended arithmetic.  z must be finite."""
    if not math.isfinite(z):
        raise ValueError(f"shift must be finite, got {z}")
    out = values + z
    # +-inf + finite stays +-inf; no nan can appear
    return out


def reciprocal(f: GridFunction) -> GridFunction:
    """Node-wise 1/f for f >= 0, with 1/0 = +inf and 1/(+inf) = 0."""
    v = f.values
    if np.any(v < 0):
        raise ValueError("reciprocal requires f >= 0 at every node")
    with np.errstate(divide="ignore"):
        out = np.where(v == 0, np.inf, np.where(np.isinf(v), 0.0, 1.0 / np.where(v > 0, v, 1.0)))
    return f.with_values(out)


def positive_part(f: GridFunction) -> GridFunction:
    """Node-wise max(f, 0); -inf clamps to 0."""
    return f.with_values(np.maximum(f.values, 0.0))


def integrate(f: GridFunction) -> float:
    """Riemann sum of a nonnegative grid function: sum(values) * cell_volume.

    Any +inf node makes the result +inf.  Negative nodes are rejected rather
    than silently truncated.
    """
    v = f.values
    if np.any(v < 0):
        raise ValueError("integrate requires f >= 0 at every node")
    if np.isinf(v).any():
        return math.inf
    return float(np.sum(v)) * f.domain.cell_volume


@dataclass(frozen=True)
class LevelSet:
    """Index set of a strict level set together with its boundary status."""

    domain: GridDomain
    mask: np.ndarray

    @property
    def is_empty(self) -> bool:
        return not bool(self.mask.any())

    @property
    def touches_boundary(self) -> bool:
        return bool((self.mask & self.domain.boundary_mask()).any())

    def points(self) -> np.ndarray:
        """Coordinates of the member nodes, shape (k, dim)."""
        return self.domain.points()[self.mask.ravel()]

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    @property
    def measure(self) -> float:
        return self.count * self.domain.cell_volume


def level_set_upper(f: GridFunction, xi: float) -> LevelSet:
    """Strict upper level set {x : f(x) > xi} as a node mask."""
    return LevelSet(f.domain, f.values > xi)


def level_set_lower(f: GridFunction, xi: float) -> LevelSet:
    """Strict lower level set {x : f(x) < xi} as a node mask."""
    return LevelSet(f.domain, f.values < xi)


# ---------------------------------------------------------------------------
# function catalog

_CATALOG_KINDS = (
    "power", "quadratic", "abs", "indicator", "logplus", "constant",
    "spike", "triangle", "cantor", "custom",
)


@dataclass(frozen=True)
class FunctionSpec:
    """Serializable description of a catalog function.

    Every kind is evaluated as base(x - shift) + offset.  JSON form, e.g.::

        {"kind": "power", "c": 1.0, "alpha": 2.0, "shift": [0.0], "offset": 0.0}

    Kinds:
        power      c * |x - center|^alpha          (c >= 0, alpha > 0)
        quadratic  c * |x|^2
        abs        |x|
        indicator  0 on the closed ball B(center, radius), +inf outside
        logplus    max(ln|x|, 0)
        constant   value (may be +-inf)
        spike      height at the node nearest x0, base elsewhere
        triangle   max(1 - |x|, 0)
        cantor     height on the depth-k middle-thirds set scaled to [0, 1],
                   0 elsewhere (1-D profile applied to x_1; k <= 8)
        custom     values loaded row-major from a CSV file
    """

    kind: str
    params: dict = field(default_factory=dict)
    shift: tuple = ()
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in _CATALOG_KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}")
        object.__setattr__(self, "shift", tuple(float(s) for s in self.shift))
        params = dict(self.params)
        for key in ("center", "x0"):
            if key in params and params[key] is not None:
                params[key] = tuple(float(v) for v in params[key])
        object.__setattr__(self, "params", params)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def power(c: float = 1.0, alpha: float = 2.0, center: Sequence[float] = (),
              shift: Sequence[float] = (), offset: float = 0.0) -> "FunctionSpec":
        if c < 0:
            raise ValueError("power coefficient must be >= 0")
        if alpha <= 0:
            raise ValueError("power exponent must be > 0")
        return FunctionSpec("power", {"c": float(c), "alpha": float(alpha),
                                      "center": tuple(float(v) for v in center)},
                            shift, offset)

    @staticmethod
    def quadratic(c: float = 1.0, shift: Sequence[float] = (), offset: float = 0.0) -> "FunctionSpec":
        if c <= 0:
            raise ValueError("quadratic coefficient must be > 0")
        return FunctionSpec("quadratic", {"c": float(c)}, shift, offset)

    @staticmethod
    def abs_norm(shift: Sequence[float] = (), offset: float = 0.0) -> "FunctionSpec":
        return FunctionSpec("abs", {}, shift, offset)

    @staticmethod
    def indicator(radius: float, center: Sequence[float] = (),
                  shift: Sequence[float] = (), offset: float = 0.0) -> "FunctionSpec":
        if radius <= 0:
            raise ValueError("indicator radius must be > 0")
        return FunctionSpec("indicator", {"radius": float(radius),
                                          "center": tuple(float(v) for v in center)},
                            shift, offset)

    @staticmethod
    def logplus(shift: Sequence[float] = (), offset: float = 0.0) -> "FunctionSpec":
        return FunctionSpec("logplus", {}, shift, offset)

    @staticmethod
    def constant(value: float) -> "FunctionSpec":
        return FunctionSpec("constant", {"value": float(value)})

    @staticmethod
    def spike(height: float, x0: Sequence[float] = (), base: float = 0.0) -> "FunctionSpec":
        return FunctionSpec("spike", {"height": float(height),
                                      "x0": tuple(float(v) for v in x0),
                                      "base": float(base)})

    @staticmethod
    def triangle(shift: Sequence[float] = (), offset: float = 0.0) -> "FunctionSpec":
        return FunctionSpec("triangle", {}, shift, offset)

    @staticmethod
    def cantor(depth: int = 4, height: float = 1.0) -> "FunctionSpec":
        if not (0 <= depth <= 8):
            raise ValueError("cantor depth must be in 0..8")
        return FunctionSpec("cantor", {"depth": int(depth), "height": float(height)})

    @staticmethod
    def custom(path: str) -> "FunctionSpec":
        return FunctionSpec("custom", {"path": str(path)})

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        d.update(self.params)
        if self.shift:
            d["shift"] = list(self.shift)
        if self.offset:
            d["offset"] = self.offset
        for key in ("center", "x0"):
            if key in d and isinstance(d[key], tuple):
                d[key] = list(d[key])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @staticmethod
    def from_dict(d: dict) -> "FunctionSpec":
        d = dict(d)
        kind = d.pop("kind")
        shift = d.pop("shift", ())
        offset = float(d.pop("offset", 0.0))
        return FunctionSpec(kind, d, shift, offset)

    @staticmethod
    def from_json(text: str) -> "FunctionSpec":
        return FunctionSpec.from_dict(json.loads(text))


def _cantor_intervals(depth: int):
    """Closed intervals of the depth-k middle-thirds construction on [0, 1]."""
    intervals = [(0.0, 1.0)]
    for _ in range(depth):
        nxt = []
        for a, b in intervals:
            third = (b - a) / 3.0
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        intervals = nxt
    return intervals


def _base_values(spec: FunctionSpec, pts: np.ndarray, domain: GridDomain) -> np.ndarray:
    """Evaluate the unshifted base function at the given points."""
    kind, p = spec.kind, spec.params
    dim = pts.shape[1]
    if kind == "power":
        center = np.asarray(p.get("center") or (0.0,) * dim, dtype=float)
        r = np.linalg.norm(pts - center, axis=1)
        with np.errstate(divide="ignore"):
            return p["c"] * r ** p["alpha"]
    if kind == "quadratic":
        return p["c"] * np.sum(pts ** 2, axis=1)
    if kind == "abs":
        return np.linalg.norm(pts, axis=1)
    if kind == "indicator":
        center = np.asarray(p.get("center") or (0.0,) * dim, dtype=float)
        r = np.linalg.norm(pts - center, axis=1)
        # closed ball, with a half-spacing slack so nodes on the sphere count
        inside = r <= p["radius"] * (1 + 1e-12) + 1e-12
        out = np.full(pts.shape[0], np.inf)
        out[inside] = 0.0
        return out
    if kind == "logplus":
        r = np.linalg.norm(pts, axis=1)
        with np.errstate(divide="ignore"):
            return np.maximum(np.where(r > 0, np.log(np.where(r > 0, r, 1.0)), -np.inf), 0.0)
    if kind == "constant":
        return np.full(pts.shape[0], p["value"])
    if kind == "triangle":
        return np.maximum(1.0 - np.linalg.norm(pts, axis=1), 0.0)
    if kind == "cantor":
        # profile in the first coordinate; the set is scaled to live on [0, 1]
        x = pts[:, 0]
        out = np.zeros(pts.shape[0])
        for a, b in _cantor_intervals(p["depth"]):
            out[(x >= a - 1e-12) & (x <= b + 1e-12)] = p["height"]
        return out
    raise ValueError(f"kind {kind!r} has no pointwise evaluation")


def sample(spec: FunctionSpec, domain: GridDomain,
           outside_mode: str = OUTSIDE_PLUS_INF) -> GridFunction:
    """Sample a catalog function on the nodes of a domain."""
    if spec.kind == "spike":
        p = spec.params
        base = np.full(domain.shape, p["base"])
        x0 = p.get("x0") or (0.0,) * domain.dim
        base[domain.nearest_index(x0)] = p["height"]
        return GridFunction(domain, base + spec.offset if spec.offset else base,
                            outside_mode)
    if spec.kind == "custom":
        values = load_values_csv(spec.params["path"], domain)
        if spec.offset:
            values = ext_add_scalar(values, spec.offset)
        return GridFunction(domain, values, outside_mode)

    pts = domain.points()
    if spec.shift:
        sh = np.asarray(spec.shift, dtype=float)
        if sh.shape != (domain.dim,):
            raise ValueError(f"shift has dimension {sh.shape}, domain has {domain.dim}")
        pts = pts - sh
    vals = _base_values(spec, pts, domain).reshape(domain.shape)
    if spec.offset:
        vals = ext_add_scalar(vals, spec.offset)

    tags = {}
    if spec.kind == "quadratic" and not spec.shift and spec.offset == 0.0:
        tags["quad_coeff"] = spec.params["c"]
    if spec.kind == "indicator" and not spec.shift and spec.offset == 0.0 \
            and not any(spec.params.get("center") or ()):
        tags["indicator_radius"] = spec.params["radius"]
    if spec.kind in ("triangle", "constant") and not spec.shift:
        tags["radial_nonincreasing"] = True
    return GridFunction(domain, vals, outside_mode, **tags)


# ---------------------------------------------------------------------------
# CSV I/O for raw node values

def _parse_ext(token: str) -> float:
    t = token.strip().replace("−", "-").lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    return float(t)


def _format_ext(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return f"{v:.12g}"


def load_values_csv(path: str, domain: GridDomain) -> np.ndarray:
    """Load node values, one per line in row-major node order.

    The literals ``inf`` and ``-inf`` are accepted (unicode minus included).
    """
    with open(path, "r", encoding="utf-8") as fh:
        tokens = [line.strip() for line in fh if line.strip()]
    if len(tokens) != domain.size:
        raise ValueError(f"expected {domain.size} values, file has {len(tokens)}")
    values = np.array([_parse_ext(t) for t in tokens])
    return values.reshape(domain.shape)


def save_values_csv(path: str, f: GridFunction) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in f.values.ravel():
            fh.write(_format_ext(float(v)) + "\n")

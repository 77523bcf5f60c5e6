"""Command-line interface.

Subcommands: conv, transform, norm, hj, sweep, verify, selftest.  Function
and Young-function inputs are JSON specs, e.g.

    infconv conv --op inf_conv --f '{"kind": "quadratic", "c": 1}' \\
        --g '{"kind": "abs"}' --n 513

Numeric output is printed with 12 significant digits; grid values go out as
one-value-per-line CSV in row-major node order.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from .extremal import inf_conv, inf_max, sup_min
from .grid import (
    OUTSIDE_MINUS_INF,
    FunctionSpec,
    GridDomain,
    GridFunction,
    sample,
)
from .harness import INEQUALITY_IDS, campaign, selftest as run_selftest
from .hj import (
    HamiltonianSpec,
    hopf,
    hopf_lax,
    level_sum_solution,
    longtime_sweep,
    sweep_preset,
)
from .orlicz import YoungFunction, luxemburg_norm
from .transform import LADDER_RUNGS, check as radial_check, hat as radial_hat


def _fmt(v: float) -> str:
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    if v != v:
        return "nan"
    return f"{v:.12g}"


def _emit(lines, out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _values_lines(f: GridFunction, fmt: str) -> list:
    vals = [float(v) for v in f.values.ravel()]
    if fmt == "json":
        payload = {
            "dim": f.domain.dim,
            "half_width": f.domain.half_width,
            "n": f.domain.n,
            "values": [_fmt(v) if not math.isfinite(v) else v for v in vals],
        }
        return [json.dumps(payload)]
    return [_fmt(v) for v in vals]


def _domain_from(args) -> GridDomain:
    return GridDomain(args.dim, args.half_width, args.n)


def _add_grid_flags(p) -> None:
    p.add_argument("--dim", type=int, default=1, help="dimension (1, 2 or 3)")
    p.add_argument("--half-width", type=float, default=4.0,
                   help="box half width L")
    p.add_argument("--n", type=int, default=257, help="odd nodes per axis")


def _add_io_flags(p) -> None:
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _cmd_conv(args) -> int:
    domain = _domain_from(args)
    f = sample(FunctionSpec.from_json(args.f), domain)
    g = sample(FunctionSpec.from_json(args.g), domain)
    if args.op == "inf_conv":
        result = inf_conv(f, g)
    elif args.op == "sup_min":
        result = sup_min(f.with_outside_mode(OUTSIDE_MINUS_INF),
                         g.with_outside_mode(OUTSIDE_MINUS_INF))
    elif args.op == "inf_max":
        result = inf_max(f, g)
    else:
        raise ValueError(f"unknown op {args.op!r}")
    _emit(_values_lines(result, args.format), args.out)
    return 0


def _cmd_transform(args) -> int:
    domain = _domain_from(args)
    f = sample(FunctionSpec.from_json(args.f), domain)
    if args.direction == "hat":
        profile, gf = radial_hat(f, args.rungs)
    else:
        profile, gf = radial_check(f, args.rungs)
    if args.values:
        _emit(_values_lines(gf, args.format), args.out)
        return 0
    ts = np.unique(profile.rho[np.isfinite(profile.rho)])
    gs = profile.evaluate(ts)
    if args.format == "json":
        payload = {"direction": args.direction,
                   "breakpoints": [[float(t), _fmt(float(g))] for t, g in zip(ts, gs)]}
        _emit([json.dumps(payload)], args.out)
    else:
        lines = ["t,gamma"] + [f"{t:.12g},{_fmt(float(g))}" for t, g in zip(ts, gs)]
        _emit(lines, args.out)
    return 0


def _cmd_norm(args) -> int:
    domain = _domain_from(args)
    f = sample(FunctionSpec.from_json(args.f), domain)
    phi = YoungFunction.from_json(args.phi)
    value = luxemburg_norm(f, phi)
    _emit([_fmt(value)], args.out)
    return 0


def _cmd_hj(args) -> int:
    domain = _domain_from(args)
    g = sample(FunctionSpec.from_json(args.g), domain)
    H = HamiltonianSpec.from_json(args.hamiltonian)
    if args.solver == "hopf_lax":
        sol = hopf_lax(H, g, args.t)
    elif args.solver == "hopf":
        sol = hopf(H, g, args.t)
    else:
        sol = level_sum_solution(H, g, args.t)
    if not sol.feasibility.satisfied:
        sys.stderr.write(f"warning: sign condition violated "
                         f"({sol.feasibility.description} = "
                         f"{_fmt(sol.feasibility.value)})\n")
    _emit(_values_lines(sol.u, args.format), args.out)
    return 0


def _cmd_sweep(args) -> int:
    config = sweep_preset(args.preset)
    if args.t_values:
        ts = tuple(float(s) for s in args.t_values.split(","))
        config = dataclasses.replace(config, t_values=ts)
    report = longtime_sweep(config)
    base = args.out or f"sweep_{args.preset}"
    report.to_csv(base + ".csv")
    with open(base + ".json", "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    status = ""
    if report.theory_slope is not None:
        verdict = "ok" if report.within_tol else "off"
        status = (f"  theory {_fmt(report.theory_slope)} "
                  f"+- {_fmt(report.slope_tol)} [{verdict}]")
    print(f"slope {_fmt(report.slope)}{status}")
    print(f"wrote {base}.csv and {base}.json")
    return 0 if (report.within_tol is not False) else 1


def _cmd_verify(args) -> int:
    ids = INEQUALITY_IDS if args.ids == "all" else tuple(args.ids.split(","))
    for id in ids:
        if id not in INEQUALITY_IDS:
            sys.stderr.write(f"unknown inequality id {id!r}\n")
            return 2
    if args.dim is not None:
        configs = [(args.dim, args.half_width, args.n)]
    else:
        configs = None
    summary = campaign(ids, trials=args.trials, configs=configs,
                       rungs=args.rungs, seed_base=args.seed)
    text = summary.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text)
    print(f"passes {summary.passes}  vacuous {summary.vacuous}  "
          f"hypothesis_not_met {summary.hypothesis_not_met}  "
          f"failures {summary.failures}  escalated {summary.escalated}",
          file=sys.stderr)
    return summary.exit_code


def _cmd_selftest(args) -> int:
    report = run_selftest()
    print(report.to_json())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infconv",
        description="Extremal operations, radial transforms, Orlicz norms "
                    "and Hamilton-Jacobi formulas on grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("conv", help="infimal convolution / sup-min / inf-max")
    p.add_argument("--op", choices=("inf_conv", "sup_min", "inf_max"),
                   default="inf_conv")
    p.add_argument("--f", required=True, help="function spec JSON")
    p.add_argument("--g", required=True, help="function spec JSON")
    _add_grid_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_conv)

    p = sub.add_parser("transform", help="hat/check radial transform")
    p.add_argument("--f", required=True, help="function spec JSON")
    p.add_argument("--direction", choices=("hat", "check"), default="hat")
    p.add_argument("--rungs", type=int, default=LADDER_RUNGS)
    p.add_argument("--values", action="store_true",
                   help="emit transformed grid values instead of the profile")
    _add_grid_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("norm", help="Luxemburg norm of a function spec")
    p.add_argument("--f", required=True, help="function spec JSON")
    p.add_argument("--phi", required=True, help="Young function JSON")
    _add_grid_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("hj", help="one Hamilton-Jacobi solve")
    p.add_argument("--solver", choices=("hopf_lax", "hopf", "level_sum"),
                   default="hopf_lax")
    p.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON")
    p.add_argument("--g", required=True, help="initial data spec JSON")
    p.add_argument("--t", type=float, required=True)
    _add_grid_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_hj)

    p = sub.add_parser("sweep", help="long-time reciprocal-norm sweep")
    p.add_argument("--preset", choices=("quadratic", "ball", "level_power"),
                   required=True)
    p.add_argument("--t-values", default=None,
                   help="comma list overriding the time ladder")
    p.add_argument("--out", default=None, help="output base path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="inequality campaign")
    p.add_argument("--ids", default="all", help="comma list or 'all'")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0,
                   help="first seed of the trial range")
    p.add_argument("--rungs", type=int, default=LADDER_RUNGS)
    p.add_argument("--dim", type=int, default=None,
                   help="restrict to one grid instead of the default two")
    p.add_argument("--half-width", type=float, default=4.0)
    p.add_argument("--n", type=int, default=257)
    p.add_argument("--out", default=None, help="summary JSON path")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("selftest", help="weakened-constant sharpness check")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

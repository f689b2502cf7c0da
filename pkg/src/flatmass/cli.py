"""Command-line front end.

Exit codes: 0 success, 1 domain or class failure, 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from .bounds import bound_sweep, choose_delta, flat_distance_bound
from .embedding import build_embedding
from .errors import FlatmassError, SpecError
from .families import sweep
from .geometry import DEFAULT_R_MAX, mass_of
from .serialization import (
    dumps,
    format_float,
    load_metric_spec,
    report_to_json,
    sweep_csv,
)
from .validators import validate

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value


def _mass_list(text: str) -> list[float]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mass list: {text!r}") from None


def _g(x: float) -> str:
    return format_float(float(x))


def cmd_validate(args) -> int:
    report = validate(load_metric_spec(args.spec))
    print(f"member               {str(report.is_member).lower()}")
    print(f"boundary             {report.boundary_condition.value}")
    print(f"monotonicity defect  {_g(report.worst_monotonicity_defect)}")
    print(f"min scalar slack     {_g(report.min_scalar_slack)}")
    for note in report.notes:
        print(f"note: {note}")
    return EXIT_OK if report.is_member else EXIT_FAIL


def cmd_mass(args) -> int:
    est = mass_of(load_metric_spec(args.spec))
    print(f"mass       {_g(est.value)}")
    print(f"truncated  {str(est.truncated).lower()}")
    return EXIT_OK


def cmd_embed(args) -> int:
    profile = load_metric_spec(args.spec)
    emb = build_embedding(profile, args.z_min)
    print("r,F,Fprime")
    for r in np.linspace(profile.r_min, profile.r_max, args.points):
        print(f"{_g(r)},{_g(emb.height(r))},{_g(emb.slope(r))}")
    return EXIT_OK


def cmd_bound(args) -> int:
    profile = load_metric_spec(args.spec)
    report = flat_distance_bound(profile, args.eps, args.D, args.alpha0)
    if args.json:
        print(report_to_json(report))
    else:
        print(f"{'region':<8}{'analytic bound':>26}{'numeric volume':>26}")
        for reg in report.regions:
            print(f"{reg.name:<8}{_g(reg.analytic_bound):>26}{_g(reg.numeric_volume):>26}")
        print(f"total flat bound         {_g(report.total_flat_bound)}")
        print(f"analytic total           {_g(report.analytic_total)}")
        print(f"volume difference bound  {_g(report.volume_difference_bound)}")
        print(f"delta used               {_g(report.delta_used)}")
        print(f"delta*                   {_g(report.delta_star)}")
        print(f"certified                {str(report.certified).lower()}")
    if not report.certified:
        print(f"warning: mass {_g(report.mass)} is not below delta* = "
              f"{_g(report.delta_star)}; bound is not certified", file=sys.stderr)
    return EXIT_OK


def cmd_delta(args) -> int:
    budget = choose_delta(args.eps, args.D, args.alpha0, args.dim)
    if args.json:
        print(dumps({"delta": budget.delta,
                     "constraints": [c._asdict() for c in budget.constraints]}))
        return EXIT_OK
    print(f"delta  {_g(budget.delta)}")
    for c in budget.constraints:
        print(f"{c.name:<8} lhs {_g(c.lhs):>24}  rhs {_g(c.rhs):>24}  slack {_g(c.slack)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.masses:
        print("error: empty mass list", file=sys.stderr)
        return EXIT_USAGE
    items = sweep(args.family, args.masses, args.dim, args.r_max, args.q_peak, args.blend_width)
    rows = bound_sweep([(i.mass, i.profile, i.error) for i in items],
                       args.eps, args.D, args.alpha0, jobs=args.jobs)
    text = sweep_csv(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _bound_options(p):
    p.add_argument("--eps", type=_positive_float, required=True)
    p.add_argument("--D", type=_positive_float, required=True)
    p.add_argument("--alpha0", type=_positive_float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flatmass", description=(
        "Hawking-mass profiles of rotationally symmetric asymptotically "
        "hyperbolic manifolds and flat-distance bounds to hyperbolic space."))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check class membership of a metric spec")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mass", help="print the total mass")
    p.add_argument("spec")
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("embed", help="print the graph height F(r) as CSV")
    p.add_argument("spec")
    p.add_argument("--z-min", type=float, default=0.0)
    p.add_argument("--points", type=_positive_int, default=41)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("bound", help="flat-distance bound for a metric spec")
    p.add_argument("spec")
    _bound_options(p)
    p.add_argument("--json", action="store_true", help="print the full report as JSON")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("delta", help="largest admissible delta and its budget")
    _bound_options(p)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("sweep", help="bounds over a list of masses, as CSV")
    p.add_argument("--family", choices=("ads_schwarzschild", "gravity_well"), required=True)
    p.add_argument("--masses", type=_mass_list, required=True,
                   help="comma-separated masses, e.g. 1e-1,1e-2")
    _bound_options(p)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--r-max", type=_positive_float, default=DEFAULT_R_MAX)
    p.add_argument("--q-peak", type=float, default=0.99)
    p.add_argument("--blend-width", type=_positive_float, default=None)
    p.add_argument("--out")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FlatmassError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

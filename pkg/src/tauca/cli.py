"""Command-line entry point.

Every subcommand writes one CSV (header row, data rows, ``#`` footer lines)
to ``--out`` or stdout::

    tauca trace     --N 100 --steps 1000            digit/carry trace
    tauca ca        --N 100 --a-max 50 --variant full
    tauca oracle    --t-max 2 --h 1e-5 --stride 100 RK4 reference (t, u, v)
    tauca compare   --N 100,200,400 --t-max 0.5     curve error vs N + limit
    tauca lln       --N 100 --steps 10000           carry averaging error vs n
    tauca rng-stats --count 1000000                 LCG mean / variance
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import analysis, ca_solver, oracle, tau_machine
from .errors import TauCAError
from .tau_arith import TauRadix


def _positive_int(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not np.isfinite(v) or v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return v


def _radix(text: str) -> int:
    v = _positive_int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("N must be at least 2")
    return v


def _radix_list(text: str) -> list[int]:
    values = [_radix(part.strip()) for part in text.split(",") if part.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected a comma-separated list of radices")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tauca", description="Tau-radix digit machine and averaged solver.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_out(p):
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout, default)")

    p = sub.add_parser("trace", help="run the digit machine on the built-in system and dump digits and carries")
    p.add_argument("--N", type=_radix, default=100, help="radix N = 1/tau (default 100)")
    p.add_argument("--p", type=_positive_int, default=3, help="highest retained power of tau (default 3)")
    p.add_argument("--steps", type=_nonneg_int, default=1000, help="number of steps (default 1000)")
    p.add_argument("--method", choices=("auto", "generic", "explicit"), default="auto")
    add_out(p)

    p = sub.add_parser("ca", help="averaged solver curve (a, n_a, t, u, v)")
    p.add_argument("--N", type=_radix, default=100)
    p.add_argument("--a-max", type=_nonneg_int, default=50, help="last layer index (must be < N)")
    p.add_argument("--variant", choices=ca_solver.VARIANTS, default="full")
    add_out(p)

    p = sub.add_parser("oracle", help="RK4 reference trajectory (t, u, v)")
    p.add_argument("--t-max", type=_positive_float, default=2.0)
    p.add_argument("--h", type=_positive_float, default=oracle.DEFAULT_ORACLE_STEP)
    p.add_argument("--stride", type=_positive_int, default=100, help="write every stride-th node (default 100)")
    add_out(p)

    p = sub.add_parser("compare", help="curve error against RK4 for several N, fitted order and limit")
    p.add_argument("--N", type=_radix_list, default=[100, 200, 400], help="comma list, e.g. 100,200,400")
    p.add_argument("--t-max", type=_positive_float, default=0.5)
    p.add_argument("--variant", choices=ca_solver.VARIANTS, default="full")
    p.add_argument("--h", type=_positive_float, default=oracle.DEFAULT_ORACLE_STEP)
    p.add_argument("--grid-points", type=_positive_int, default=51, help="time grid size for the limit curve")
    add_out(p)

    p = sub.add_parser(
        "lln",
        help="carry averaging error vs n (defaults N=100, up to 10000 steps; "
        "only steps before the first carry into digit 0 are used)",
    )
    p.add_argument("--N", type=_radix, default=100)
    p.add_argument("--steps", type=_positive_int, default=10_000)
    p.add_argument("--carry", choices=("delta", "omega"), default="delta", help="u carry (delta) or v carry (omega)")
    add_out(p)

    p = sub.add_parser("rng-stats", help="mean and variance of a normalized LCG stream")
    p.add_argument("--seed", type=_nonneg_int, default=analysis.MINSTD.seed)
    p.add_argument("--lcg-b", type=_nonneg_int, default=analysis.MINSTD.b)
    p.add_argument("--lcg-c", type=_nonneg_int, default=analysis.MINSTD.c)
    p.add_argument("--lcg-p", type=_radix, default=analysis.MINSTD.P)
    p.add_argument("--count", type=_positive_int, default=1_000_000)
    add_out(p)
    return parser


def _validate(args, parser: argparse.ArgumentParser) -> None:
    if args.out != "-":
        parent = os.path.dirname(os.path.abspath(args.out))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            parser.error(f"--out directory {parent} is not writable")
    if args.command == "ca":
        if args.a_max >= args.N:
            parser.error(f"--a-max must be below --N ({args.a_max} >= {args.N})")
        if args.variant == "asymptotic" and 2 * args.a_max >= args.N:
            parser.error("asymptotic variant needs 2 * --a-max < --N")
    elif args.command == "compare":
        if len(set(args.N)) != len(args.N) or len(args.N) < 2:
            parser.error("--N needs at least two distinct radices")
        if len(args.N) < 3:
            parser.error("--N needs at least three radices for the fitted order")
    elif args.command == "rng-stats":
        try:
            analysis.LcgParams(args.lcg_b, args.lcg_c, args.lcg_p, args.seed)
        except ValueError as exc:
            parser.error(str(exc))
        if args.count < 2:
            parser.error("--count must be at least 2")


def _cmd_trace(args) -> str:
    trace = tau_machine.run(tau_machine.paper_system(), TauRadix(args.N, args.p), args.steps, method=args.method)
    return tau_machine.trace_csv(trace)


def _cmd_ca(args) -> str:
    return ca_solver.curve_csv(ca_solver.solve(args.a_max, args.N, args.variant))


def _cmd_oracle(args) -> str:
    traj = oracle.rk4_solve(tau_machine.paper_system(), args.t_max, args.h)
    return oracle.trajectory_csv(traj, stride=args.stride)


def compare(Ns, t_max: float, variant: str = "full", h: float = oracle.DEFAULT_ORACLE_STEP, grid_points: int = 51):
    """Curve errors vs N, the fitted order and the extrapolated limit.

    Returns ``(report, footer)`` where ``footer`` carries the limit-curve
    error, the best single-N error on the same grid and the median observed
    order on interior grid points.
    """
    Ns = sorted(Ns)
    ref = oracle.rk4_solve(tau_machine.paper_system(), t_max, h)
    curves = [ca_solver.solve_to_time(t_max, N, variant) for N in Ns]
    errors = [analysis.curve_error(c, ref, t_max) for c in curves]
    report = analysis.error_report(Ns, errors)
    grid = np.linspace(0.0, t_max, grid_points)
    exact = oracle.sample(ref, grid)
    lim = ca_solver.limit_extrapolate(curves, grid)

    def grid_err(states):
        return float(np.max(np.hypot(*(states - exact).T)))

    footer = {
        "variant": variant,
        "t_max": t_max,
        "extrapolated_error": grid_err(lim.states),
        "best_single_error": min(grid_err(c.at(grid)) for c in curves),
    }
    if lim.order is not None:
        interior = lim.order[1:-1]
        footer["observed_order_u"] = float(np.nanmedian(interior[:, 0]))
        footer["observed_order_v"] = float(np.nanmedian(interior[:, 1]))
    return report, footer


def _cmd_compare(args) -> str:
    report, footer = compare(args.N, args.t_max, args.variant, args.h, args.grid_points)
    return analysis.report_csv(report, footer)


def _cmd_lln(args) -> str:
    trace = tau_machine.run(tau_machine.paper_system(), TauRadix(args.N, 3), args.steps)
    report = analysis.lln_error(trace, args.N, carry=args.carry)
    return analysis.report_csv(report, {"N": args.N, "carry": args.carry, "steps_used": report.meta["steps_used"]})


def _cmd_rng(args) -> str:
    params = analysis.LcgParams(args.lcg_b, args.lcg_c, args.lcg_p, args.seed)
    xs = analysis.lcg_stream(params, args.count) / params.P
    mean, var = analysis.moment_stats(xs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["statistic", "value", "ideal"])
    writer.writerow(["mean", repr(mean), repr(0.5)])
    writer.writerow(["variance", repr(var), repr(1.0 / 12.0)])
    buf.write(f"# b={params.b} c={params.c} P={params.P} seed={params.seed} count={args.count}\n")
    return buf.getvalue()


COMMANDS = {
    "trace": _cmd_trace,
    "ca": _cmd_ca,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
    "lln": _cmd_lln,
    "rng-stats": _cmd_rng,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = COMMANDS[args.command](args)
    except (TauCAError, ValueError) as exc:
        print(f"tauca {args.command}: error: {exc}", file=sys.stderr)
        return 1
    if args.out == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"tauca {args.command}: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

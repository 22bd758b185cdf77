"""Command-line front end.

Every table command writes CSV (default) or JSON to stdout or ``--output``.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 degenerate
computation.
"""

import argparse
import csv
import io
import json
import sys
import warnings

import numpy as np

from . import __version__
from .errors import DenseCodingError, PostSelectionImpossible
from .protocol import (
    DegenerateStrengthWarning,
    find_capacity_threshold,
    find_min_chi1,
    optimal_reversal_strength,
    rho2_closed_form,
    sweep,
)
from .trajectory import simulate_plan_b

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

PLAN_COLUMNS = ("d", "p", "q", "S_rho", "S_rho_star", "chi", "T", "chi_times_T", "degenerate")
OPTIMIZE_COLUMNS = ("threshold_d", "d_min", "chi_min")
MC_COLUMNS = ("d", "p", "q", "trials", "successes", "t_hat", "t_stderr", "seed",
              "T", "sigma_distance", "state_max_dev", "state_bound")


class UsageError(Exception):
    pass


def _unit(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is outside [0, 1]")
    return value


def _unit_or_auto(text: str):
    return "auto" if text == "auto" else _unit(text)


def _grid(text: str) -> tuple[str, tuple[float, float, int]]:
    try:
        axis, spec = text.split("=", 1)
        start, stop, steps = spec.split(":")
        start, stop, steps = _unit(start), _unit(stop), int(steps)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise argparse.ArgumentTypeError(
            f"bad grid {text!r}; expected axis=start:stop:steps ({exc})"
        ) from None
    axis = axis.strip()
    if axis not in ("d", "p", "q"):
        raise argparse.ArgumentTypeError(f"unknown grid axis {axis!r}")
    if steps < 2:
        raise argparse.ArgumentTypeError("grid steps must be at least 2")
    return axis, (start, stop, steps)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=("csv", "json"), default="csv")
    output.add_argument("--output", metavar="PATH", help="write here instead of stdout")

    gridded = argparse.ArgumentParser(add_help=False)
    gridded.add_argument("--grid", action="append", type=_grid, default=[],
                         metavar="AXIS=START:STOP:STEPS",
                         help="sweep an axis over evenly spaced points (repeatable)")

    parser = argparse.ArgumentParser(
        prog="densecoding",
        description="Dense coding capacity through amplitude damping, with weak "
                    "and reversal measurement protection.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("plan-a", parents=[output, gridded],
                        help="unprotected capacity vs damping")
    pa.add_argument("--d", type=_unit)

    pb = sub.add_parser("plan-b", parents=[output, gridded],
                        help="capacity with weak/reversal measurement")
    pb.add_argument("--d", type=_unit)
    pb.add_argument("--p", type=_unit)
    pb.add_argument("--q", type=_unit_or_auto, help="reversal strength or 'auto' for q*")

    sub.add_parser("optimize", parents=[output],
                   help="minimum of the unprotected capacity and its one-bit threshold")
    sub.add_parser("verify", parents=[output], help="run the internal consistency checks")

    mc = sub.add_parser("mc", parents=[output], help="Monte Carlo estimate of T and rho2")
    mc.add_argument("--d", type=_unit, required=True)
    mc.add_argument("--p", type=_unit, required=True)
    mc.add_argument("--q", type=_unit_or_auto, required=True)
    mc.add_argument("--trials", type=_positive_int, required=True)
    mc.add_argument("--seed", type=_seed, default=0)
    return parser


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render(rows: list[dict], columns, fmt: str, meta: dict) -> str:
    if fmt == "json":
        clean = [{k: _jsonable(row[k]) for k in columns} for row in rows]
        return json.dumps({"meta": meta, "rows": clean}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[k]) for k in columns])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return {"re": value.real.tolist(), "im": value.imag.tolist()}
    return value


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _axes(args, names) -> tuple[dict, dict]:
    """Collect per-axis grids from scalar flags and ``--grid`` specs."""
    grids = {}
    meta = {}
    for axis, (start, stop, steps) in args.grid:
        if axis not in names:
            raise UsageError(f"axis {axis!r} cannot be swept by {args.command}")
        if axis in grids:
            raise UsageError(f"axis {axis!r} given more than once")
        grids[axis] = np.linspace(start, stop, steps).tolist()
        meta[axis] = {"start": start, "stop": stop, "steps": steps}
    for axis in names:
        value = getattr(args, axis, None)
        if value is not None and value != "auto":
            if axis in grids:
                raise UsageError(f"axis {axis!r} given both as --{axis} and --grid")
            grids[axis] = [value]
            meta[axis] = value
        elif axis not in grids and value != "auto":
            raise UsageError(f"missing --{axis} (or --grid {axis}=...)")
    return grids, meta


def cmd_plan_a(args) -> int:
    grids, meta = _axes(args, ("d",))
    table = sweep(grids, "plan_a")
    rows = [r.as_row() for r in table.rows]
    _emit(render(rows, PLAN_COLUMNS, args.format,
                 {"command": "plan-a", "version": __version__, "grids": meta, "seed": None}),
          args.output)
    return EXIT_OK


def cmd_plan_b(args) -> int:
    auto = args.q == "auto"
    if auto and any(axis == "q" for axis, _ in args.grid):
        raise UsageError("--q auto cannot be combined with a q grid")
    grids, meta = _axes(args, ("d", "p", "q"))
    if auto:
        meta["q"] = "auto"
    table = sweep(grids, "plan_b_qstar" if auto else "plan_b")
    rows = [r.as_row() for r in table.rows]
    if len(rows) == 1 and table.rows[0].degenerate:
        r = table.rows[0]
        print(f"densecoding: post-selection impossible at d={r.d}, p={r.p}, q={r.q} "
              f"(T={r.success_prob:.3e})", file=sys.stderr)
        return EXIT_DEGENERATE
    _emit(render(rows, PLAN_COLUMNS, args.format,
                 {"command": "plan-b", "version": __version__, "grids": meta, "seed": None}),
          args.output)
    return EXIT_OK


def cmd_optimize(args) -> int:
    d_min, chi_min = find_min_chi1()
    row = {"threshold_d": find_capacity_threshold(), "d_min": d_min, "chi_min": chi_min}
    _emit(render([row], OPTIMIZE_COLUMNS, args.format,
                 {"command": "optimize", "version": __version__, "grids": {}, "seed": None}),
          args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    results = run_checks()
    if args.format == "json":
        payload = {
            "meta": {"command": "verify", "version": __version__, "grids": {}, "seed": None},
            "rows": [{"check": r.name, "max_dev": r.value, "tol": r.tol, "passed": r.passed}
                     for r in results],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in results)
    _emit(text, args.output)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"densecoding: {len(failed)} check(s) failed: {', '.join(failed)}",
              file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_mc(args) -> int:
    d, p = args.d, args.p
    if args.q == "auto":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateStrengthWarning)
            q = optimal_reversal_strength(d, p)
    else:
        q = args.q
    est = simulate_plan_b(d, p, q, args.trials, args.seed)
    try:
        rho2, t_exact = rho2_closed_form(d, p, q)
    except PostSelectionImpossible:
        rho2, t_exact = None, 0.0
    diff = abs(est.t_hat - t_exact)
    if est.t_stderr > 0:
        sigma = diff / est.t_stderr
    else:
        sigma = 0.0 if diff <= 1e-12 else float("inf")
    state_dev = bound = None
    if est.state_hat is not None and rho2 is not None:
        state_dev = float(np.max(np.abs(est.state_hat - rho2)))
        bound = 5.0 / np.sqrt(est.successes)
    row = {
        "d": d, "p": p, "q": q, "trials": est.trials, "successes": est.successes,
        "t_hat": est.t_hat, "t_stderr": est.t_stderr, "seed": est.seed,
        "T": t_exact, "sigma_distance": sigma, "state_max_dev": state_dev,
        "state_bound": bound,
    }
    columns = MC_COLUMNS
    if args.format == "json":
        row["state_hat"] = est.state_hat
        columns = MC_COLUMNS + ("state_hat",)
    meta = {"command": "mc", "version": __version__,
            "grids": {"d": d, "p": p, "q": "auto" if args.q == "auto" else q},
            "seed": args.seed}
    _emit(render([row], columns, args.format, meta), args.output)
    return EXIT_OK


COMMANDS = {
    "plan-a": cmd_plan_a,
    "plan-b": cmd_plan_b,
    "optimize": cmd_optimize,
    "verify": cmd_verify,
    "mc": cmd_mc,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"densecoding {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PostSelectionImpossible as exc:
        print(f"densecoding: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DenseCodingError as exc:
        print(f"densecoding: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

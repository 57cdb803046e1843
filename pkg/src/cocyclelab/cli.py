"""Command-line front end.

Exit status: 0 success or solved, 1 obstructed (a result, not a failure),
2 no witness at the requested level, 3 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any, Optional, Sequence

from . import observables, serialize, solver, systems, witness
from .errors import CocycleLabError, ParseError, PeriodicAtHorizon, UnsupportedSystem

EXIT_OK = 0
EXIT_OBSTRUCTED = 1
EXIT_PERIODIC = 2
EXIT_INPUT = 3

GRID_ENV = "COCYCLELAB_GRID"
SWEEP_HEADER = [
    "n",
    "r_n",
    "sup_phi",
    "sup_phi_decimal",
    "quotient_lb",
    "amplification",
    "support_disjoint",
    "expanded_matches_direct",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cocyclelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, cocycle=False, fmt=True):
        p.add_argument("--system", required=True, help="JSON record or @path")
        if cocycle:
            p.add_argument("--cocycle", required=True, help="JSON record or @path")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    common(sub.add_parser("solve", help="solve u o f - u = phi"), cocycle=True)
    common(sub.add_parser("check", help="test phi for obstructions"), cocycle=True)
    p = sub.add_parser("witness", help="instability witness at one level")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", help="base point: index or rational coordinate")
    p = sub.add_parser("sweep", help="witness reports for levels 1..n-max")
    common(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--seed")
    p.add_argument("--parallel", action="store_true")
    common(sub.add_parser("info", help="describe a system"))
    return parser


def load_record(arg: str) -> Any:
    text = arg
    if arg.startswith("@"):
        try:
            with open(arg[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {arg[1:]}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from None


def grid_density() -> int:
    raw = os.environ.get(GRID_ENV, "100000")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ParseError(f"{GRID_ENV} must be a positive integer, got {raw!r}")
    return value


def emit_sweep_csv(reports: Sequence[witness.WitnessReport]) -> str:
    if not reports:
        raise ValueError("no reports to write")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in reports:
        w.writerow(
            [
                r.n,
                serialize.fmt(r.r_n),
                serialize.fmt(r.sup_phi),
                serialize.decimal(r.sup_phi),
                serialize.fmt(r.quotient_lb),
                serialize.fmt(r.amplification),
                str(r.support_disjoint).lower(),
                str(r.expanded_matches_direct).lower(),
            ]
        )
    return buf.getvalue()


def _flatten(record: Any, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(record, dict):
        rows = []
        for k, v in record.items():
            rows += _flatten(v, f"{prefix}.{k}" if prefix else k)
        return rows
    if isinstance(record, list):
        rows = []
        for i, v in enumerate(record):
            rows += _flatten(v, f"{prefix}[{i}]")
        return rows
    if isinstance(record, bool):
        return [(prefix, str(record).lower())]
    return [(prefix, str(record))]


def _render(record: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(_flatten(record))
    return buf.getvalue()


def _grid_check(sys_, report: witness.WitnessReport, grid: int) -> str:
    u = witness.build_un(sys_, report.x_n, report.r_n, report.n)
    phi = witness.build_phin_direct(sys_, u)
    return serialize.decimal(observables.grid_sup_norm(sys_, phi, grid))


def _witness_record(sys_, report, grid):
    rec = serialize.report_to_record(report)
    rec["grid_sup_phi_decimal"] = _grid_check(sys_, report, grid)
    return rec


def _info_record(sys_) -> dict:
    rec: dict[str, Any] = {"system": serialize.system_to_record(sys_), "period": systems.period(sys_)}
    if isinstance(sys_, systems.FinitePermutation):
        rec["cycles"] = [list(c) for c in sys_.cycles]
        rec["cohomology_dimension"] = solver.cohomology_dimension(sys_)
    longest = max(
        (systems.orbit_length(sys_, x) for x in _orbit_reps(sys_)), default=1
    )
    level = 0
    while witness.witness_horizon(level + 1) < longest:
        level += 1
    rec["max_witness_level"] = level
    return rec


def _orbit_reps(sys_):
    if isinstance(sys_, systems.FinitePermutation):
        return [systems.FinitePoint(c[0]) for c in sys_.cycles]
    return [systems.CirclePoint(0)]


def execute(args) -> tuple[int, str]:
    sys_ = serialize.system_from_record(load_record(args.system))
    cmd = args.command

    if cmd in ("solve", "check"):
        phi = serialize.observable_from_record(load_record(args.cocycle))
        observables.check_observable(sys_, phi)
        if cmd == "solve":
            outcome = solver.periodic_solve(sys_, phi)
            code = EXIT_OK if isinstance(outcome, solver.Solution) else EXIT_OBSTRUCTED
            return code, _render(serialize.outcome_to_record(outcome), args.format)
        cert = solver.obstruction_test(sys_, phi)
        integrals = [
            {"orbit": serialize.point_to_str(x), "integral": serialize.fmt(v)}
            for x, v in solver.invariant_measure_integrals(sys_, phi)
        ]
        if cert is None:
            rec = {"status": "coboundary", "integrals": integrals}
            return EXIT_OK, _render(rec, args.format)
        rec = serialize.outcome_to_record(solver.Obstruction(cert))
        rec["integrals"] = integrals
        return EXIT_OBSTRUCTED, _render(rec, args.format)

    if cmd == "witness":
        if args.n < 1:
            raise ParseError("--n must be >= 1")
        seed = serialize.parse_point(sys_, args.seed) if args.seed is not None else None
        report = witness.witness_report(sys_, witness.WitnessParams(args.n, seed))
        if args.format == "csv":
            return EXIT_OK, emit_sweep_csv([report])
        return EXIT_OK, _render(_witness_record(sys_, report, grid_density()), "json")

    if cmd == "sweep":
        if args.n_max < 1:
            raise ParseError("--n-max must be >= 1")
        seed = serialize.parse_point(sys_, args.seed) if args.seed is not None else None
        reports = witness.instability_sweep(sys_, args.n_max, seed=seed, parallel=args.parallel)
        if args.format == "csv":
            return EXIT_OK, emit_sweep_csv(reports)
        grid = grid_density()
        return EXIT_OK, _render([_witness_record(sys_, r, grid) for r in reports], "json")

    if cmd == "info":
        return EXIT_OK, _render(_info_record(sys_), args.format)
    raise UsageError(f"unknown command {cmd!r}")


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Run one command; returns (exit status, standard-output text).

    Diagnostics for failures go to standard error.
    """
    try:
        args = build_parser().parse_args(argv)
        return execute(args)
    except UsageError as exc:
        print(f"cocyclelab: {exc}", file=sys.stderr)
        return EXIT_INPUT, ""
    except PeriodicAtHorizon as exc:
        print(f"cocyclelab: periodic at horizon: {exc}", file=sys.stderr)
        return EXIT_PERIODIC, ""
    except (ParseError, UnsupportedSystem, CocycleLabError) as exc:
        print(f"cocyclelab: {exc}", file=sys.stderr)
        return EXIT_INPUT, ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line interface: ``ulamkac <command> [options]``.

Exit codes: 0 ok, 1 check failure, 2 usage error, 3 resource budget exceeded.
Non-integer rationals are written as ``"p/q"`` strings. Output is deterministic given the
flags (wall time is only emitted with ``--timing``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import acceptance
from .combinatorics import basis_size
from .pathspace import CapExceeded, SimConfig, enumerate_distribution, min_star_chain_length, simulate
from .recurrence import BudgetExceeded, default_budget, exact_moments
from .spectral import moment_constant

SCHEMA_VERSION = 1
EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
CONSTANTS_M_MAX = 12


@dataclass
class RunReport:
    command: str
    parameters: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    checks: list[acceptance.Check] = field(default_factory=list)
    wall_time: float = 0.0
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(not c.passed for c in self.checks)

    def to_json(self, timing: bool = False) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "parameters": self.parameters,
            "columns": self.columns,
            "rows": [[_cell(v) for v in row] for row in self.rows],
            **{k: _cell(v) for k, v in self.extra.items()},
            "checks": [
                {"criterion": c.criterion, "name": c.name, "tag": c.tag, "expected": c.expected,
                 "observed": c.observed, "status": c.status}
                for c in self.checks
            ],
        }
        if timing:
            doc["wall_time"] = self.wall_time
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self, timing: bool = False) -> str:
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION} command={self.command}\n")
        for k, v in self.extra.items():
            buf.write(f"# {k}={_cell(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        if self.checks:
            w.writerow(["criterion", "name", "tag", "expected", "observed", "status"])
            for c in self.checks:
                w.writerow([c.criterion, c.name, c.tag, c.expected, c.observed, c.status])
        else:
            w.writerow(self.columns)
            for row in self.rows:
                w.writerow([_cell(v) for v in row])
        if timing:
            buf.write(f"# wall_time={self.wall_time:.3f}\n")
        return buf.getvalue()


def _cell(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def cmd_constants(m_max: int, tol: float = 1e-12) -> RunReport:
    if not 1 <= m_max <= CONSTANTS_M_MAX:
        raise ValueError(f"--m must be in 1..{CONSTANTS_M_MAX}")
    rows, checks = [], []
    for m in range(1, m_max + 1):
        r = moment_constant(m, tol)
        lo, hi = r.conjectured_band
        rows.append([m, basis_size(m), r.lam, r.c, 2 * m, lo, hi, math.log(r.c), r.in_conjectured_band])
        if not r.within_bounds:
            checks.append(acceptance.Check(10, f"bounds_m{m}", "REFERENCE", f"{2 * m} <= c_m", f"{r.c}", False))
    return RunReport(
        "constants", {"m": m_max, "tol": tol},
        ["m", "basis_size", "lambda", "c", "lower_bound", "log_c_band_lo", "log_c_band_hi", "log_c", "in_band"],
        rows, checks,
    )


def cmd_moments(m: int, N: int, budget: int | None = None) -> RunReport:
    table = exact_moments(m, N, budget)
    return RunReport("moments", {"m": m, "n": N}, ["n", f"E[X_n^{m}]"], [list(r) for r in table.rows])


def cmd_verify(level: str = "fast") -> RunReport:
    checks = acceptance.run_all(level)
    return RunReport("verify", {"level": level}, [], [], checks)


def cmd_fit(lo: int, hi: int, precision: int = 256) -> RunReport:
    points = acceptance.m3_log_points(lo, hi, precision)
    slope, intercept, rms = acceptance.least_squares_slope(points)
    return RunReport(
        "fit", {"lo": lo, "hi": hi, "precision_bits": precision},
        ["slope", "intercept", "rms_residual"], [[slope, intercept, rms]],
    )


def cmd_simulate(config: SimConfig) -> RunReport:
    estimates = simulate(config)
    rows = [[e.m, e.n, e.mean, e.sd, e.stderr] for e in estimates]
    params = {"n": config.n_max, "samples": config.samples, "seed": config.seed,
              "m": list(config.orders), "streams": config.streams}
    return RunReport("simulate", params, ["m", "n", "mean", "sd", "stderr"], rows)


def cmd_enumerate(n: int) -> RunReport:
    dist = enumerate_distribution(n)
    return RunReport("enumerate", {"n": n}, ["value", "probability"], [[v, p] for v, p in dist.pmf.items()],
                     extra={"paths": dist.paths})


def cmd_chains(target: int, extra: int = 0) -> RunReport:
    stats = min_star_chain_length(target, extra)
    rows = [[k, c, stats.probability(k)] for k, c in sorted(stats.count_by_length.items())]
    return RunReport("chains", {"target": target, "extra": extra}, ["length", "star_chains", "probability"], rows,
                     extra={"min_length": stats.min_length})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--budget", type=int, default=None,
                        help="max state updates for exact tables (default from ULAMKAC_BUDGET or 1e7)")
    common.add_argument("--timing", action="store_true", help="include wall time in the output")

    parser = argparse.ArgumentParser(prog="ulamkac", description="Exact moments and growth constants of the Ulam-Kac adder.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", parents=[common], help="table of lambda_m and c_m for m = 1..M")
    p.add_argument("--m", type=int, default=4, help="largest moment order")
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("moments", parents=[common], help="exact E[X_n^m] for n = 0..N")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")

    p = sub.add_parser("fit", parents=[common], help="least-squares slope of (sqrt n, ln E[X_n^3])")
    p.add_argument("--lo", type=int, default=900)
    p.add_argument("--hi", type=int, default=1000)
    p.add_argument("--precision-bits", type=int, default=256)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo moment estimates")
    p.add_argument("--m", type=int, nargs="+", default=[1])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--streams", type=int, default=8)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("enumerate", parents=[common], help="exact law of X_n by path enumeration")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("chains", parents=[common], help="shortest star chain and chain counts")
    p.add_argument("--target", "--n", dest="target", type=int, required=True)
    p.add_argument("--extra", type=int, default=0, help="also count chains this many steps longer")
    return parser


def dispatch(args) -> RunReport:
    if args.command == "constants":
        return cmd_constants(args.m, args.tol)
    if args.command == "moments":
        return cmd_moments(args.m, args.n, args.budget if args.budget is not None else default_budget())
    if args.command == "verify":
        return cmd_verify(args.level)
    if args.command == "fit":
        return cmd_fit(args.lo, args.hi, args.precision_bits)
    if args.command == "simulate":
        cfg = SimConfig(n_max=args.n, samples=args.samples, seed=args.seed, orders=tuple(args.m),
                        streams=args.streams, workers=args.workers)
        return cmd_simulate(cfg)
    if args.command == "enumerate":
        return cmd_enumerate(args.n)
    if args.command == "chains":
        return cmd_chains(args.target, args.extra)
    raise ValueError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report = dispatch(args)
    except (BudgetExceeded, CapExceeded) as exc:
        print(f"ulamkac: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"ulamkac: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.wall_time = time.perf_counter() - t0

    text = report.to_json(args.timing) if args.format == "json" else report.to_csv(args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify":
        for c in report.checks:
            print(c.line(), file=sys.stderr)
    return EXIT_CHECK if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

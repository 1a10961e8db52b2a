"""Command line: ``celljump solve | bench | gen``.

Every option can also be set through an environment variable named
``CELLJUMP_<OPTION>`` (e.g. ``CELLJUMP_TIME_LIMIT=60``); flags win.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from fractions import Fraction

from . import bench
from .engine import EngineConfig
from .generator import CAMPAIGN, SMALL, RfParams, write_campaign
from .smtlib import DEFAULT_MAX_CNF_CLAUSES


def _env(name: str, default):
    return os.environ.get("CELLJUMP_" + name, default)


def _engine_options(p: argparse.ArgumentParser, time_flag: str) -> None:
    p.add_argument(time_flag, dest="time_limit", type=float,
                   default=float(_env("TIME_LIMIT", 1200.0)),
                   help="wall-clock budget in seconds")
    p.add_argument("--seed", type=int, default=int(_env("SEED", 0)))
    p.add_argument("--pp", type=Fraction, default=Fraction(_env("PP", "1")))
    p.add_argument("--tt", type=int, default=int(_env("TT", 10)))
    p.add_argument("--sp", type=Fraction, default=Fraction(_env("SP", "3/1000")))
    p.add_argument("--max-iterations", type=int, default=int(_env("MAX_ITERATIONS", 10_000)),
                   help="iteration cap per restart")
    p.add_argument("--max-cnf-blowup", type=int,
                   default=int(_env("MAX_CNF_BLOWUP", DEFAULT_MAX_CNF_CLAUSES)),
                   help="reject inputs whose CNF needs more clauses than this")


def _config(args, trace: bool = False) -> EngineConfig:
    return EngineConfig(pp=args.pp, sp=args.sp, tt=args.tt, max_time=args.time_limit,
                        max_iterations=args.max_iterations, seed=args.seed, trace=trace)


def _range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(",")
    return int(lo), int(hi or lo)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="celljump",
                                     description="Cell-jump local search for QF_NRA formulas.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one SMT-LIB file ('-' reads stdin)")
    s.add_argument("file")
    _engine_options(s, "--time-limit")
    s.add_argument("--trace", action="store_true", default=bool(_env("TRACE", "")),
                   help="print one line per executed move on stderr")

    b = sub.add_parser("bench", help="solve every .smt2 file in a directory")
    b.add_argument("dir")
    _engine_options(b, "--timeout")
    b.add_argument("--jobs", type=int, default=int(_env("JOBS", 1)))
    b.add_argument("--csv", default=_env("CSV", None), help="write per-instance results here")
    b.add_argument("--subprocess", action="store_true", default=bool(_env("SUBPROCESS", "")),
                   help="isolate each instance in its own process")

    g = sub.add_parser("gen", help="write random rf instances as SMT-LIB files")
    g.add_argument("--preset", choices=["campaign", "small"], default="small")
    for flag, help_ in [("--vars", "number of variables"), ("--polys", "number of polynomials"),
                        ("--degree", "polynomial degree"), ("--poly-vars", "variables per polynomial"),
                        ("--monomials", "monomials per polynomial"), ("--clauses", "number of clauses"),
                        ("--clause-len", "atoms per clause")]:
        g.add_argument(flag, type=_range, help=help_ + " as LO,HI (overrides the preset)")
    g.add_argument("--count", type=int, default=int(_env("COUNT", 10)))
    g.add_argument("--seed", type=int, default=int(_env("SEED", 0)))
    g.add_argument("--out-dir", default=_env("OUT_DIR", "instances"))
    g.add_argument("--planted", action="store_true", default=bool(_env("PLANTED", "")),
                   help="guarantee satisfiability with a hidden integer witness")
    return parser


def cmd_solve(args) -> int:
    cfg = _config(args, trace=args.trace)
    record, result = bench.solve_file(args.file, cfg, args.max_cnf_blowup)
    if record.outcome in (bench.PARSE_ERROR, bench.UNSUPPORTED):
        print(record.message, file=sys.stderr)
        print("unknown" if record.outcome == bench.UNSUPPORTED else "error")
        return bench.EXIT_CODES[record.outcome]
    if result is not None and args.trace:
        for ev in result.trace:
            print(f"; r{ev.restart} it{ev.iteration} {ev.phase} {ev.kind} score={ev.score} "
                  f"moved={list(ev.moved)}", file=sys.stderr)
    if record.outcome == bench.SAT:
        print("sat")
        print(record.model)
    else:
        print("unknown")
    print(f"; iterations {record.iterations} restarts {record.restarts} "
          f"time {record.wall_time:.3f} reason {record.message}", file=sys.stderr)
    return bench.EXIT_CODES[record.outcome]


def cmd_bench(args) -> int:
    cfg = _config(args)
    records = bench.run_benchmark(args.dir, cfg, timeout=args.time_limit, jobs=args.jobs,
                                  use_subprocess=args.subprocess, max_clauses=args.max_cnf_blowup)
    table = bench.records_to_csv(records)
    if args.csv:
        bench.write_csv(records, args.csv)
    else:
        sys.stdout.write(table)
    sys.stdout.write(bench.summarize(records))
    return 0


def cmd_gen(args) -> int:
    base = CAMPAIGN if args.preset == "campaign" else SMALL
    params = RfParams(
        args.vars or base.var_range,
        args.polys or base.polynum_range,
        args.degree or base.degree_range,
        args.poly_vars or base.nvars_per_poly_range,
        args.monomials or base.monomials_range,
        args.clauses or base.clausenum_range,
        args.clause_len or base.clauselen_range,
    )
    paths = write_campaign(args.out_dir, params, args.count, args.seed, planted=args.planted,
                           prefix="planted" if args.planted else "rf")
    for p in paths:
        print(p)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return {"solve": cmd_solve, "bench": cmd_bench, "gen": cmd_gen}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

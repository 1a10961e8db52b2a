"""Solve files, run benchmark directories and tabulate results."""

from __future__ import annotations

import csv
import io
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .engine import EngineConfig, SearchResult, solve_with_restarts
from .formula import Formula, UnsupportedError, check_model
from .smtlib import DEFAULT_MAX_CNF_CLAUSES, SmtSyntaxError, model_to_smtlib, parse_model, parse_smtlib

SAT = "sat"
UNKNOWN = "unknown"
TIMEOUT = "timeout"
UNSUPPORTED = "unsupported"
PARSE_ERROR = "parse-error"

EXIT_CODES = {SAT: 0, UNKNOWN: 1, TIMEOUT: 2, UNSUPPORTED: 3, PARSE_ERROR: 4}
CSV_COLUMNS = ["instance", "outcome", "wall_time", "iterations", "restarts", "model"]
TIME_MARKS = (0.01, 0.1, 1.0, 10.0, 60.0, 300.0, 1200.0)


@dataclass
class RunRecord:
    instance: str
    outcome: str
    wall_time: float
    iterations: int = 0
    restarts: int = 0
    model: str | None = None
    message: str = ""

    def row(self) -> list[str]:
        model = " ".join(self.model.split()) if self.model else ""
        return [self.instance, self.outcome, f"{self.wall_time:.3f}", str(self.iterations),
                str(self.restarts), model]


def load_formula(path: str | Path, max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> Formula:
    data = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    return parse_smtlib(data, max_clauses)


def verify_model_text(path: str | Path, model_text: str,
                      max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> bool:
    """Re-parse the instance and check a printed model against it from scratch."""
    formula = load_formula(path, max_clauses)
    return check_model(formula, parse_model(model_text, formula)) is None


def solve_file(path: str | Path, cfg: EngineConfig,
               max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> tuple[RunRecord, SearchResult | None]:
    start = time.monotonic()
    name = str(path)
    try:
        formula = load_formula(path, max_clauses)
    except SmtSyntaxError as e:
        return RunRecord(name, PARSE_ERROR, time.monotonic() - start, message=str(e)), None
    except UnsupportedError as e:
        return RunRecord(name, UNSUPPORTED, time.monotonic() - start, message=str(e)), None
    if cfg.max_time is not None:
        remaining = max(cfg.max_time - (time.monotonic() - start), 0.0)
        cfg = replace(cfg, max_time=remaining)
    result = solve_with_restarts(formula, cfg)
    elapsed = time.monotonic() - start
    record = RunRecord(name, SAT if result.is_sat else UNKNOWN, elapsed,
                       result.stats.iterations, result.stats.restarts,
                       message=result.stats.reason)
    if result.is_sat:
        record.model = model_to_smtlib(formula, result.model)
    elif result.stats.reason == "timeout":
        record.outcome = TIMEOUT
    return record, result


def _solve_in_process(args) -> RunRecord:
    path, cfg, max_clauses = args
    try:
        record, _ = solve_file(path, cfg, max_clauses)
    except Exception as e:  # one bad instance must not stop the campaign
        record = RunRecord(str(path), UNKNOWN, 0.0, message=f"error: {e!r}")
    return _reverified(record, max_clauses)


def _reverified(record: RunRecord, max_clauses: int) -> RunRecord:
    if record.outcome == SAT:
        try:
            ok = record.model is not None and verify_model_text(record.instance, record.model, max_clauses)
        except Exception:
            ok = False
        if not ok:
            record.outcome = UNKNOWN
            record.message = "model failed independent verification"
            record.model = None
    return record


def _solve_subprocess(args) -> RunRecord:
    path, cfg, max_clauses = args
    cmd = [sys.executable, "-m", "celljump", "solve", str(path), "--seed", str(cfg.seed),
           "--pp", str(cfg.pp), "--tt", str(cfg.tt), "--sp", str(cfg.sp),
           "--max-cnf-blowup", str(max_clauses)]
    if cfg.max_time is not None:
        cmd += ["--time-limit", str(cfg.max_time)]
    start = time.monotonic()
    grace = None if cfg.max_time is None else cfg.max_time + 5.0
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=grace)
    except subprocess.TimeoutExpired:
        return RunRecord(str(path), TIMEOUT, time.monotonic() - start, message="killed")
    elapsed = time.monotonic() - start
    outcome = {v: k for k, v in EXIT_CODES.items()}.get(proc.returncode, UNKNOWN)
    record = RunRecord(str(path), outcome, elapsed, message=proc.stderr.strip()[-200:])
    if outcome == SAT:
        lines = proc.stdout.split("\n", 1)
        record.model = lines[1].strip() if len(lines) > 1 else None
    for line in proc.stderr.splitlines():
        if line.startswith("; iterations "):
            _, _, it, _, rs = line.split()[:5]
            record.iterations, record.restarts = int(it), int(rs)
    return _reverified(record, max_clauses)


def run_benchmark(directory: str | Path, cfg: EngineConfig, timeout: float | None = None,
                  jobs: int = 1, use_subprocess: bool = False,
                  max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> list[RunRecord]:
    """Solve every ``.smt2`` file under ``directory`` (sorted by path)."""
    files = sorted(Path(directory).rglob("*.smt2"))
    if timeout is not None:
        cfg = replace(cfg, max_time=timeout)
    work = [(p, cfg, max_clauses) for p in files]
    worker = _solve_subprocess if use_subprocess else _solve_in_process
    if jobs <= 1 or len(work) <= 1:
        return [worker(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, work))


def records_to_csv(records: list[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def summarize(records: list[RunRecord]) -> str:
    if not records:
        return "0 instances\n"
    lines = [f"{len(records)} instances"]
    counts = {k: 0 for k in EXIT_CODES}
    for r in records:
        counts[r.outcome] = counts.get(r.outcome, 0) + 1
    lines.extend(f"  {k:12s} {v}" for k, v in counts.items())
    lines.append("solved within time:")
    times = sorted(r.wall_time for r in records if r.outcome == SAT)
    for mark in TIME_MARKS:
        lines.append(f"  <= {mark:>8g}s  {sum(1 for t in times if t <= mark)}")
    return "\n".join(lines) + "\n"


def write_csv(records: list[RunRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records))

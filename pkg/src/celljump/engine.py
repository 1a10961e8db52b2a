"""Local search over rational assignments driven by cell-jumps.

Each iteration tries, in order: axis/equality moves from atoms of falsified
clauses, the same from false atoms of satisfied clauses, and (after a PAWS
weight update) direction jumps for both groups.  Only moves with positive
score are executed; a tabu list forbids undoing recent changes.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .formula import Atom, Formula, Relation, UnsupportedError, check_model, eq_atom_eligible
from .jumps import DIRECTION, JumpOperation, atom_moves, direction_jump
from .scoring import atom_distance, paws_update

log = logging.getLogger(__name__)

SAT = "sat"
UNKNOWN = "unknown"

# phases, in priority order
PHASE_FAL = "axis-falsified"
PHASE_SAT = "axis-satisfied"
PHASE_DIR_FAL = "direction-falsified"
PHASE_DIR_SAT = "direction-satisfied"


@dataclass(frozen=True)
class EngineConfig:
    pp: Fraction = Fraction(1)
    sp: Fraction = Fraction(3, 1000)
    tt: int = 10
    max_time: float | None = 1200.0
    max_iterations: int = 10_000  # per restart
    max_restarts: int | None = None
    seed: int = 0
    n_random_dirs: int = 10
    random_dir_range: int = 1000
    trace: bool = False

    def __post_init__(self):
        if self.pp <= 0:
            raise ValueError("pp must be positive")
        if self.tt < 0:
            raise ValueError("tt must be non-negative")
        if not 0 <= self.sp <= 1:
            raise ValueError("sp must be a probability")


class TabuState:
    """Per-variable forbidden direction with the last iteration it applies to."""

    def __init__(self):
        self._forbidden: dict[int, tuple[int, int]] = {}

    def blocks(self, op: JumpOperation, iteration: int) -> bool:
        for v, step in op.moved:
            entry = self._forbidden.get(v)
            if entry is not None and entry[0] == step and iteration <= entry[1]:
                return True
        return False

    def record(self, op: JumpOperation, iteration: int, tt: int) -> None:
        for v, step in op.moved:
            self._forbidden[v] = (-step, iteration + tt)

    def clear(self) -> None:
        self._forbidden.clear()


@dataclass
class TraceEvent:
    restart: int
    iteration: int
    phase: str
    kind: str
    score: Fraction
    moved: tuple[tuple[int, int], ...]
    atom: Atom
    before: tuple[Fraction, ...]
    target: tuple[Fraction, ...]
    weights: tuple[int, ...]        # at selection time
    prior_weights: tuple[int, ...]  # before this iteration's PAWS update


@dataclass
class SearchStats:
    iterations: int = 0
    restarts: int = 0
    jumps: Counter = field(default_factory=Counter)
    paws_updates: int = 0
    elapsed: float = 0.0
    reason: str = ""


@dataclass
class SearchResult:
    outcome: str
    model: tuple[Fraction, ...] | None
    stats: SearchStats
    trace: list[TraceEvent] = field(default_factory=list)

    @property
    def is_sat(self) -> bool:
        return self.outcome == SAT


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def check_eligible(formula: Formula) -> None:
    for atom in formula.atoms():
        if atom.rel is Relation.EQ and not eq_atom_eligible(atom):
            raise UnsupportedError("unsupported: nonlinear equality")


def generate_directions(atom: Atom, alpha: Sequence[Fraction], cfg: EngineConfig,
                        rng: np.random.Generator) -> list[list[Fraction]]:
    """Gradient at ``alpha``, ``alpha`` itself, then random integer vectors; zero vectors dropped."""
    n = len(alpha)
    dirs = [atom.poly.gradient_at(alpha, n), list(alpha)]
    r = cfg.random_dir_range
    for _ in range(cfg.n_random_dirs):
        dirs.append([Fraction(int(x)) for x in rng.integers(-r, r + 1, size=n)])
    return [d for d in dirs if any(d)]


def select_operation(candidates: Iterable[JumpOperation], score_of: Callable[[JumpOperation], Fraction],
                     tabu: TabuState | None = None, iteration: int = 0):
    """Best non-tabu candidate with positive score, as ``(op, score)``; None if there is none.

    Ties prefer fewer moved variables, then the smaller first moved variable,
    then the earlier candidate.
    """
    best = None
    best_key = None
    for order, op in enumerate(candidates):
        if tabu is not None and tabu.blocks(op, iteration):
            continue
        s = score_of(op)
        if s <= 0:
            continue
        key = (-s, len(op.moved), op.moved[0][0] if op.moved else -1, order)
        if best_key is None or key < best_key:
            best, best_key = (op, s), key
    return best


class _Search:
    """Mutable state of one local search run."""

    def __init__(self, formula: Formula, init: Sequence[Fraction], cfg: EngineConfig,
                 rng: np.random.Generator, deadline: float | None, restart: int,
                 stats: SearchStats, trace: list | None):
        self.f = formula
        self.cfg = cfg
        self.rng = rng
        self.deadline = deadline
        self.restart = restart
        self.stats = stats
        self.trace = trace
        self.alpha = [Fraction(x) for x in init]
        self.weights = [1] * len(formula.clauses)
        self.tabu = TabuState()
        self.iteration = 0
        self.truth: list[list[bool]] = []
        self.dist: list[Fraction] = []
        for i in range(len(formula.clauses)):
            self.truth.append([])
            self.dist.append(Fraction(0))
            self._refresh(i)

    def _clause_state(self, i: int, alpha) -> tuple[list[bool], Fraction]:
        truth = []
        best = None
        pp = self.cfg.pp
        for atom in self.f.clauses[i].atoms:
            value = atom.poly.evaluate(alpha)
            ok = atom.rel.holds(value)
            truth.append(ok)
            d = Fraction(0) if ok else abs(value) + pp
            if best is None or d < best:
                best = d
        return truth, best

    def _refresh(self, i: int) -> None:
        self.truth[i], self.dist[i] = self._clause_state(i, self.alpha)

    def _clause_distance(self, i: int, alpha) -> Fraction:
        best = None
        for atom in self.f.clauses[i].atoms:
            d = atom_distance(atom, atom.poly.evaluate(alpha), self.cfg.pp)
            if not d:
                return d
            if best is None or d < best:
                best = d
        return best

    def _affected(self, op: JumpOperation) -> set[int]:
        out: set[int] = set()
        for v, _ in op.moved:
            out.update(self.f.clauses_of_var(v))
        return out

    def score(self, op: JumpOperation) -> Fraction:
        total = Fraction(0)
        for i in self._affected(op):
            total += (self.dist[i] - self._clause_distance(i, op.target)) * self.weights[i]
        return total

    def _false_atoms(self) -> tuple[list[Atom], list[Atom]]:
        fal: dict[Atom, None] = {}
        sat: dict[Atom, None] = {}
        for i, clause in enumerate(self.f.clauses):
            truth = self.truth[i]
            if any(truth):
                for atom, ok in zip(clause.atoms, truth):
                    if not ok:
                        sat[atom] = None
            else:
                for atom in clause.atoms:
                    fal[atom] = None
        # an atom false in a falsified clause belongs to the first level only
        return list(fal), [a for a in sat if a not in fal]

    def _pick(self, candidates):
        return select_operation(candidates, self.score, self.tabu, self.iteration + 1)

    def _axis_candidates(self, atoms):
        for atom in atoms:
            yield from atom_moves(atom, self.alpha)

    def _direction_candidates(self, atoms):
        for atom in atoms:
            if atom.rel is Relation.EQ:
                continue
            for d in generate_directions(atom, self.alpha, self.cfg, self.rng):
                op = direction_jump(atom, self.alpha, d)
                if op is not None:
                    yield op

    def _apply(self, op: JumpOperation, s: Fraction, phase: str, prior_weights) -> None:
        self.iteration += 1
        self.stats.iterations += 1
        self.stats.jumps[op.kind] += 1
        if self.trace is not None:
            self.trace.append(TraceEvent(self.restart, self.iteration, phase, op.kind, s, op.moved,
                                         op.atom, tuple(self.alpha), op.target, tuple(self.weights),
                                         tuple(prior_weights)))
        affected = self._affected(op)
        self.alpha = list(op.target)
        for i in affected:
            self._refresh(i)
        self.tabu.record(op, self.iteration, self.cfg.tt)

    def run(self) -> str:
        """Returns SAT, or the reason the run stopped."""
        while True:
            falsified = [not any(t) for t in self.truth]
            if not any(falsified):
                return SAT
            if self.deadline is not None and time.monotonic() >= self.deadline:
                return "timeout"
            if self.iteration >= self.cfg.max_iterations:
                return "iterations"
            fal, sat = self._false_atoms()
            assert fal, "unsatisfied formula without falsified clauses"
            weights = tuple(self.weights)
            found = self._pick(self._axis_candidates(fal))
            phase = PHASE_FAL
            if found is None:
                found = self._pick(self._axis_candidates(sat))
                phase = PHASE_SAT
            if found is None:
                self.weights, _ = paws_update(self.f, self.alpha, self.weights, self.cfg.sp,
                                              self.rng, falsified)
                self.stats.paws_updates += 1
                found = self._pick(self._direction_candidates(fal))
                phase = PHASE_DIR_FAL
                if found is None:
                    found = self._pick(self._direction_candidates(sat))
                    phase = PHASE_DIR_SAT
            if found is None:
                return "stuck"
            op, s = found
            log.debug("restart %d iter %d %s %s score=%s moved=%s", self.restart,
                      self.iteration + 1, phase, op.kind, s, op.moved)
            self._apply(op, s, phase, weights)


def local_search(formula: Formula, init: Sequence[Fraction], cfg: EngineConfig = EngineConfig(),
                 rng: np.random.Generator | None = None, deadline: float | None = None
                 ) -> SearchResult:
    """Run one local search from ``init``."""
    check_eligible(formula)
    start = time.monotonic()
    if rng is None:
        rng = make_rng(cfg.seed)
    if deadline is None and cfg.max_time is not None:
        deadline = start + cfg.max_time
    stats = SearchStats()
    trace = [] if cfg.trace else None
    if formula.trivially_unsat:
        stats.reason = "trivially-unsat"
        return SearchResult(UNKNOWN, None, stats, trace or [])
    search = _Search(formula, init, cfg, rng, deadline, 0, stats, trace)
    reason = search.run()
    stats.elapsed = time.monotonic() - start
    return _finish(formula, reason, search.alpha, stats, trace)


def _finish(formula, reason, alpha, stats, trace) -> SearchResult:
    if reason == SAT:
        model = tuple(alpha)
        if check_model(formula, model) is not None:
            raise AssertionError("search produced an assignment that fails verification")
        stats.reason = SAT
        return SearchResult(SAT, model, stats, trace or [])
    stats.reason = reason
    return SearchResult(UNKNOWN, None, stats, trace or [])


def bound_seeds(formula: Formula) -> dict[int, Fraction]:
    """Values from clauses shaped ``x < ub or x = ub`` / ``x > lb or x = lb``."""
    seeds: dict[int, Fraction] = {}
    for clause in formula.clauses:
        if len(clause.atoms) != 2:
            continue
        a, b = clause.atoms
        if a.poly != b.poly or {a.rel, b.rel} not in ({Relation.LT, Relation.EQ},
                                                     {Relation.GT, Relation.EQ}):
            continue
        p = a.poly
        vs = p.variables()
        if len(vs) != 1 or p.total_degree() != 1:
            continue
        (v,) = vs
        if v in seeds:
            continue
        coeff = p.terms[((v, 1),)]
        seeds[v] = -p.constant_value() / coeff
    return seeds


def initial_assignment(formula: Formula, attempt: int, rng: np.random.Generator) -> list[Fraction]:
    """Starting point for the ``attempt``-th run (1-based)."""
    n = formula.num_vars
    if attempt == 1:
        return [Fraction(1)] * n
    if attempt == 2:
        seeds = bound_seeds(formula)
        return [seeds.get(v, Fraction(1)) for v in range(n)]
    if attempt <= 7:
        return [Fraction(int(x)) for x in rng.choice([-1, 1], size=n)]
    r = 50 * (attempt - 6)
    return [Fraction(int(x)) for x in rng.integers(-r, r + 1, size=n)]


def solve_with_restarts(formula: Formula, cfg: EngineConfig = EngineConfig(),
                        rng: np.random.Generator | None = None) -> SearchResult:
    """Restart local search from scheduled initial assignments until sat or out of budget."""
    check_eligible(formula)
    if cfg.max_time is None and cfg.max_restarts is None:
        raise ValueError("solve_with_restarts needs max_time or max_restarts")
    start = time.monotonic()
    deadline = None if cfg.max_time is None else start + cfg.max_time
    if rng is None:
        rng = make_rng(cfg.seed)
    stats = SearchStats()
    trace = [] if cfg.trace else None
    if formula.trivially_unsat:
        stats.reason = "trivially-unsat"
        return SearchResult(UNKNOWN, None, stats, trace or [])
    attempt = 0
    while True:
        attempt += 1
        init = initial_assignment(formula, attempt, rng)
        search = _Search(formula, init, cfg, rng, deadline, attempt - 1, stats, trace)
        reason = search.run()
        stats.restarts = attempt - 1
        stats.elapsed = time.monotonic() - start
        log.info("attempt %d ended: %s after %d iterations", attempt, reason, search.iteration)
        if reason == SAT:
            return _finish(formula, SAT, search.alpha, stats, trace)
        if reason == "timeout":
            return _finish(formula, "timeout", search.alpha, stats, trace)
        if cfg.max_restarts is not None and attempt > cfg.max_restarts:
            return _finish(formula, "restarts", search.alpha, stats, trace)


solve = solve_with_restarts

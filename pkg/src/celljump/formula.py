"""CNF polynomial formulas over atoms ``p < 0``, ``p > 0`` and ``p = 0``."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Polynomial


class UnsupportedError(ValueError):
    """The input lies outside the fragment the solver handles."""


class Relation(enum.Enum):
    LT = "<"
    GT = ">"
    EQ = "="

    def holds(self, value: Fraction) -> bool:
        if self is Relation.LT:
            return value < 0
        if self is Relation.GT:
            return value > 0
        return value == 0


@dataclass(frozen=True)
class Atom:
    poly: Polynomial
    rel: Relation

    def value(self, alpha) -> Fraction:
        return self.poly.evaluate(alpha)

    def holds(self, alpha) -> bool:
        return self.rel.holds(self.poly.evaluate(alpha))

    def is_constant(self) -> bool:
        return self.poly.is_constant()

    def linear_variables(self) -> list[int]:
        return sorted(v for v in self.poly.variables() if self.poly.degree_in(v) == 1)

    def __str__(self) -> str:
        return f"{self.poly.to_string()} {self.rel.value} 0"


@dataclass(frozen=True)
class Clause:
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("empty clause")

    def holds(self, alpha) -> bool:
        return any(a.holds(alpha) for a in self.atoms)

    def variables(self) -> frozenset:
        return frozenset().union(*(a.poly.variables() for a in self.atoms))


@dataclass(frozen=True)
class Formula:
    """Conjunction of clauses over variables ``0..len(var_names)-1``.

    ``trivially_unsat`` marks a formula in which some clause folded to false
    during preprocessing; its clause list is then meaningless.
    """

    clauses: tuple[Clause, ...]
    var_names: tuple[str, ...]
    trivially_unsat: bool = False
    _var_clauses: tuple = field(default=None, compare=False, repr=False)

    @property
    def variables(self) -> range:
        return range(len(self.var_names))

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    def clauses_of_var(self, v: int) -> tuple[int, ...]:
        if self._var_clauses is None:
            index: list[list[int]] = [[] for _ in self.var_names]
            for i, c in enumerate(self.clauses):
                for w in c.variables():
                    index[w].append(i)
            object.__setattr__(self, "_var_clauses", tuple(tuple(x) for x in index))
        return self._var_clauses[v]

    def atoms(self) -> list[Atom]:
        return [a for c in self.clauses for a in c.atoms]


def eq_atom_eligible(atom: Atom) -> bool:
    return any(atom.poly.degree_in(v) == 1 for v in atom.poly.variables())


def build_formula(var_names: Sequence[str], clauses: Iterable[Iterable[Atom]]) -> Formula:
    """Fold constant atoms, drop duplicates and check equality eligibility."""
    out: list[Clause] = []
    for atoms in clauses:
        kept: list[Atom] = []
        satisfied = False
        for atom in atoms:
            if atom.is_constant():
                if atom.rel.holds(atom.poly.constant_value()):
                    satisfied = True
                    break
                continue
            if atom.rel is Relation.EQ and not eq_atom_eligible(atom):
                raise UnsupportedError("unsupported: nonlinear equality")
            if atom not in kept:
                kept.append(atom)
        if satisfied:
            continue
        if not kept:
            return Formula((), tuple(var_names), trivially_unsat=True)
        out.append(Clause(tuple(kept)))
    return Formula(tuple(out), tuple(var_names))


def check_model(formula: Formula, alpha) -> int | None:
    """Index of the first falsified clause, or None when ``alpha`` satisfies ``formula``."""
    if formula.trivially_unsat:
        return 0
    for i, clause in enumerate(formula.clauses):
        if not clause.holds(alpha):
            return i
    return None


def satisfies(formula: Formula, alpha) -> bool:
    return check_model(formula, alpha) is None


def false_atoms(formula: Formula, alpha):
    """``(fal_cl, sat_cl)`` as lists of ``(clause index, atom index)``.

    fal_cl holds every atom of every falsified clause; sat_cl holds the false
    atoms of satisfied clauses.
    """
    fal_cl: list[tuple[int, int]] = []
    sat_cl: list[tuple[int, int]] = []
    for i, clause in enumerate(formula.clauses):
        truth = [a.holds(alpha) for a in clause.atoms]
        if any(truth):
            sat_cl.extend((i, j) for j, t in enumerate(truth) if not t)
        else:
            fal_cl.extend((i, j) for j in range(len(truth)))
    return fal_cl, sat_cl

"""Distance to truth/satisfaction, operation scores and PAWS clause weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .formula import Atom, Clause, Formula
from .jumps import JumpOperation


@dataclass(frozen=True)
class ScoreConfig:
    pp: Fraction = Fraction(1)
    sp: Fraction = Fraction(3, 1000)

    def __post_init__(self):
        if self.pp <= 0:
            raise ValueError("pp must be positive")
        if not 0 <= self.sp <= 1:
            raise ValueError("sp must be a probability")


def atom_distance(atom: Atom, value: Fraction, pp: Fraction) -> Fraction:
    """dtt given the polynomial's value at the assignment."""
    if atom.rel.holds(value):
        return Fraction(0)
    return abs(value) + pp


def dtt(atom: Atom, alpha, pp: Fraction = Fraction(1)) -> Fraction:
    return atom_distance(atom, atom.poly.evaluate(alpha), pp)


def dts(clause: Clause, alpha, pp: Fraction = Fraction(1)) -> Fraction:
    best = None
    for atom in clause.atoms:
        d = dtt(atom, alpha, pp)
        if not d:
            return d
        if best is None or d < best:
            best = d
    return best


def score(op: JumpOperation, formula: Formula, alpha, weights: Sequence[int],
          pp: Fraction = Fraction(1)) -> Fraction:
    """Weighted decrease of clause distances from ``alpha`` to ``op.target``."""
    total = Fraction(0)
    for clause, w in zip(formula.clauses, weights):
        total += (dts(clause, alpha, pp) - dts(clause, op.target, pp)) * w
    return total


class RandomSource(Protocol):
    def random(self) -> float: ...


def paws_update(formula: Formula, alpha, weights: Sequence[int], sp, rng: RandomSource,
                falsified: Sequence[bool] | None = None) -> tuple[list[int], bool]:
    """One PAWS step; returns ``(new_weights, smoothed)``.

    A single draw decides the branch: with probability ``1 - sp`` every
    falsified clause gains one unit of weight, otherwise every satisfied clause
    heavier than 1 loses one.  ``falsified`` may be passed to skip re-evaluation.
    """
    if falsified is None:
        falsified = [not c.holds(alpha) for c in formula.clauses]
    new = list(weights)
    smoothed = rng.random() < sp
    for i, bad in enumerate(falsified):
        if smoothed:
            if not bad and new[i] > 1:
                new[i] -= 1
        elif bad:
            new[i] += 1
    return new, smoothed

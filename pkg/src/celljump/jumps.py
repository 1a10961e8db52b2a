"""Candidate moves: axis cell-jumps, direction cell-jumps and equality assignments.

Every move relocates the current rational assignment into a cell in which
the inducing atom is true.  Axis and direction jumps take the sample point of
the required sign closest to the current position on the line; equality
assignments solve a linear univariate image exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .formula import Atom, Relation
from .roots import closest_sample_point, sample_points

AXIS = "axis"
DIRECTION = "direction"
EQUALITY = "equality"

INCREASE = 1
DECREASE = -1


@dataclass(frozen=True)
class JumpOperation:
    kind: str
    target: tuple[Fraction, ...]
    moved: tuple[tuple[int, int], ...]  # (variable id, INCREASE or DECREASE), sorted by id
    atom: Atom

    @property
    def moved_vars(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.moved)


def _required_sign(atom: Atom) -> int:
    if atom.rel is Relation.LT:
        return -1
    if atom.rel is Relation.GT:
        return 1
    raise ValueError("cell-jumps are defined for strict inequalities only")


def _single_move(kind, alpha, v, value, atom) -> JumpOperation:
    target = list(alpha)
    target[v] = value
    step = INCREASE if value > alpha[v] else DECREASE
    return JumpOperation(kind, tuple(target), ((v, step),), atom)


def axis_jump(atom: Atom, alpha: Sequence[Fraction], v: int) -> JumpOperation | None:
    """Cell-jump of ``v`` along its axis, or None when the line has no solution of ``atom``."""
    sign = _required_sign(atom)
    image = atom.poly.partial_evaluate(alpha, v)
    value = closest_sample_point(sample_points(image), sign, alpha[v])
    if value is None:
        return None
    return _single_move(AXIS, alpha, v, value, atom)


def axis_jumps(atom: Atom, alpha: Sequence[Fraction]) -> list[JumpOperation]:
    """One axis cell-jump per variable of ``atom`` whose axis line meets its solution set."""
    ops = []
    for v in sorted(atom.poly.variables()):
        op = axis_jump(atom, alpha, v)
        if op is not None:
            ops.append(op)
    return ops


def integer_direction(direction: Sequence[Fraction]) -> list[int]:
    """Positive multiple of ``direction`` with coprime integer components."""
    fr = [Fraction(d) for d in direction]
    den = lcm(*(d.denominator for d in fr)) if fr else 1
    ints = [int(d * den) for d in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def direction_jump(atom: Atom, alpha: Sequence[Fraction],
                   direction: Sequence[Fraction]) -> JumpOperation | None:
    """Cell-jump along the line through ``alpha`` with the given direction, or None."""
    sign = _required_sign(atom)
    d = integer_direction(direction)
    if not any(d):
        return None
    line = atom.poly.restrict_to_line(alpha, d)
    t = closest_sample_point(sample_points(line), sign, 0)
    if t is None:
        return None
    target = tuple(a + di * t if di else a for a, di in zip(alpha, d))
    moved = tuple((i, INCREASE if di * t > 0 else DECREASE) for i, di in enumerate(d) if di)
    return JumpOperation(DIRECTION, target, moved, atom)


def equality_jumps(atom: Atom, alpha: Sequence[Fraction]) -> list[JumpOperation]:
    """Assign each variable in which ``atom``'s polynomial is linear to the root of its image."""
    if atom.rel is not Relation.EQ:
        raise ValueError("equality_jumps needs an equality atom")
    ops = []
    for v in sorted(atom.poly.variables()):
        if atom.poly.degree_in(v) != 1:
            continue
        image = atom.poly.partial_evaluate(alpha, v)
        if image.degree != 1:
            continue
        c0, c1 = image.coeffs
        value = -c0 / c1
        if value == alpha[v]:
            continue
        ops.append(_single_move(EQUALITY, alpha, v, value, atom))
    return ops


def atom_moves(atom: Atom, alpha: Sequence[Fraction]) -> list[JumpOperation]:
    """Axis-phase candidates for one false atom."""
    if atom.rel is Relation.EQ:
        return equality_jumps(atom, alpha)
    return axis_jumps(atom, alpha)

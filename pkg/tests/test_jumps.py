from fractions import Fraction as Q

import pytest
from hypothesis import assume, given, settings, strategies as st

from celljump.formula import Atom, Relation
from celljump.jumps import (
    AXIS,
    DECREASE,
    DIRECTION,
    EQUALITY,
    INCREASE,
    atom_moves,
    axis_jump,
    axis_jumps,
    direction_jump,
    equality_jumps,
    integer_direction,
)
from celljump.poly import Polynomial, make_monomial

from oracles import line_sign_samples

X, Y = Polynomial.var(0), Polynomial.var(1)
ONE = (Q(1), Q(1))


def test_axis_no_solution_on_either_axis(p1):
    # p1(x, 1) = 2x^2 + 1 and p1(1, y) = 2y^2 + 1 never go negative
    assert axis_jumps(Atom(p1, Relation.LT), ONE) == []


def test_axis_jumps_p2(p2):
    atom = Atom(p2, Relation.GT)
    ops = axis_jumps(atom, ONE)
    assert [op.moved_vars for op in ops] == [(0,), (1,)]
    for op in ops:
        assert op.kind == AXIS
        assert p2.evaluate(op.target) > 0
    # along x2 the only root is 1, so the target lies beyond it
    assert ops[1].target[0] == 1 and ops[1].target[1] > 1


def test_direction_jump_p1(p1):
    op = direction_jump(Atom(p1, Relation.LT), ONE, [1, 1])
    assert op.kind == DIRECTION
    assert op.target == (Q(1, 4), Q(1, 4))
    t = op.target[0] - 1
    assert 4 * t * t + 8 * t + 3 < 0
    assert p1.evaluate(op.target) < 0
    assert op.moved == ((0, DECREASE), (1, DECREASE))


def test_axis_jump_to_positive_side():
    op = axis_jump(Atom(X, Relation.GT), (Q(-5),), 0)
    assert op.target[0] > 0
    assert op.moved == ((0, INCREASE),)


def test_direction_along_first_axis():
    op = direction_jump(Atom(X + Y, Relation.GT), (Q(-1), Q(-1)), [1, 0])
    assert op.target[1] == -1 and op.target[0] > 1
    assert op.moved == ((0, INCREASE),)


def test_direction_scaled_is_same_line(p1):
    a = direction_jump(Atom(p1, Relation.LT), ONE, [Q(1, 2), Q(1, 2)])
    b = direction_jump(Atom(p1, Relation.LT), ONE, [7, 7])
    assert a.target == b.target


def test_zero_direction_gives_nothing(p1):
    assert direction_jump(Atom(p1, Relation.LT), ONE, [0, 0]) is None


def test_integer_direction():
    assert integer_direction([Q(1, 2), Q(-3, 4)]) == [2, -3]
    assert integer_direction([4, 6]) == [2, 3]
    assert integer_direction([0, 0]) == [0, 0]


def test_equality_jumps_linear_variable():
    atom = Atom(X + Y * Y - 3, Relation.EQ)
    ops = equality_jumps(atom, (Q(0), Q(1)))
    assert len(ops) == 1
    assert ops[0].kind == EQUALITY
    assert ops[0].target == (Q(2), Q(1))
    assert ops[0].moved == ((0, INCREASE),)


def test_equality_skips_vanishing_coefficient():
    atom = Atom(X * Y - 2, Relation.EQ)
    ops = equality_jumps(atom, (Q(1), Q(0)))
    assert [op.target for op in ops] == [(Q(1), Q(2))]


def test_equality_rejects_inequality():
    with pytest.raises(ValueError):
        equality_jumps(Atom(X, Relation.GT), (Q(0),))


def test_atom_moves_dispatch():
    assert atom_moves(Atom(X - 1, Relation.EQ), (Q(0),))[0].kind == EQUALITY
    assert atom_moves(Atom(X - 1, Relation.GT), (Q(0),))[0].kind == AXIS


@st.composite
def bivariate(draw, max_deg=4):
    terms = []
    for _ in range(draw(st.integers(1, 5))):
        i = draw(st.integers(0, max_deg))
        j = draw(st.integers(0, max_deg - i))
        terms.append((draw(st.integers(-6, 6)), i, j))
    return terms


def to_poly(terms):
    return Polynomial([(make_monomial({0: i, 1: j}), c) for c, i, j in terms])


pts = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
dirs = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any)


def false_atom(terms, alpha):
    p = to_poly(terms)
    v = p.evaluate(alpha)
    return p, Atom(p, Relation.LT if v >= 0 else Relation.GT)


@settings(max_examples=150, deadline=None)
@given(bivariate(), pts, dirs)
def test_post_move_truth_and_tags(terms, base, d):
    alpha = tuple(Q(a) for a in base)
    p, atom = false_atom(terms, alpha)
    assume(not p.is_constant())
    ops = axis_jumps(atom, alpha)
    op = direction_jump(atom, alpha, d)
    if op is not None:
        ops.append(op)
    for op in ops:
        assert atom.holds(op.target)
        moved = dict(op.moved)
        for v in range(2):
            if v in moved:
                assert (op.target[v] > alpha[v]) == (moved[v] == INCREASE)
                assert op.target[v] != alpha[v]
            else:
                assert op.target[v] == alpha[v]


@settings(max_examples=150, deadline=None)
@given(bivariate(), pts, st.integers(0, 1))
def test_axis_and_axis_direction_agree(terms, base, v):
    alpha = tuple(Q(a) for a in base)
    p, atom = false_atom(terms, alpha)
    e = [0, 0]
    e[v] = 1
    a = axis_jump(atom, alpha, v) if v in p.variables() else None
    b = direction_jump(atom, alpha, e)
    assert (a is None) == (b is None)


@settings(max_examples=80, deadline=None)
@given(bivariate(), pts, dirs)
def test_missing_jump_means_no_solution_on_line(terms, base, d):
    alpha = tuple(Q(a) for a in base)
    p, atom = false_atom(terms, alpha)
    if direction_jump(atom, alpha, d) is not None:
        return
    want = -1 if atom.rel is Relation.LT else 1
    ks = range(-2000, 2001)
    assert want not in line_sign_samples(terms, base, d, ks, 100)

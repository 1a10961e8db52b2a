from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from celljump.poly import (
    Polynomial,
    UnassignedVariable,
    UnivariatePolynomial,
    grlex_key,
    make_monomial,
    poly_gcd,
    polynomial_to_smtlib,
    rational_to_smtlib,
)

X, Y, Z = Polynomial.var(0), Polynomial.var(1), Polynomial.var(2)


def U(*coeffs):
    return UnivariatePolynomial(coeffs)


def test_evaluate_p1(p1):
    assert p1.evaluate([Q(1), Q(1)]) == 3
    assert p1.evaluate([Q(1, 2), Q(0)]) == Q(-1, 2)


def test_evaluate_p2_at_one(p2):
    assert p2.evaluate([Q(1), Q(1)]) == 0
    assert p2.evaluate([Q(0), Q(2)]) == 2


def test_evaluate_unassigned_raises():
    with pytest.raises(UnassignedVariable, match="unassigned variable"):
        (X + Z).evaluate([Q(1)])


def test_partial_evaluate_p2(p2):
    # p2(x1, 1) = x1^8 - 4x1^6 + 6x1^4 - 4x1^2 + 1
    assert p2.partial_evaluate([Q(1), Q(1)], 0) == U(1, 0, -4, 0, 6, 0, -4, 0, 1)
    # p2(1, x2) = x2^3 + 7x2 - 8
    assert p2.partial_evaluate([Q(1), Q(1)], 1) == U(-8, 7, 0, 1)


def test_restrict_to_line_p1(p1):
    # p1(1+t, 1+t) = 4t^2 + 8t + 3
    assert p1.restrict_to_line([Q(1), Q(1)], [1, 1]) == U(3, 8, 4)


def test_restrict_to_line_product():
    p = X * Y
    assert p.restrict_to_line([Q(2), Q(3)], [1, -1]) == U(6, 1, -1)


def test_gradient_p1(p1):
    assert p1.gradient_at([Q(1), Q(1)]) == [4, 4]
    assert p1.gradient_at([Q(1), Q(1)], 3) == [4, 4, 0]


def test_degrees(p2):
    assert p2.degree_in(0) == 8
    assert p2.degree_in(1) == 3
    assert p2.total_degree() == 11
    assert p2.variables() == {0, 1}


def test_zero_and_constant():
    z = X - X
    assert z.is_zero and z.is_constant
    assert Polynomial.constant(Q(3, 4)).constant_value() == Q(3, 4)
    assert U().degree == -1


def test_univariate_divmod():
    q, r = U(-1, 0, 0, 1).divmod(U(-1, 1))
    assert q == U(1, 1, 1)
    assert r.is_zero


def test_poly_gcd():
    a = U(-1, 0, 1)  # (x-1)(x+1)
    b = U(1, -2, 1)  # (x-1)^2
    assert poly_gcd(a, b) == U(-1, 1)


def test_integer_coefficients():
    assert U(Q(1, 2), Q(-3, 4)).integer_coefficients() == [2, -3]


def test_compose_linear():
    p = U(0, 0, 1)
    # p(1 + 2t) = 1 + 4t + 4t^2
    assert p.compose_linear(1, 2) == U(1, 4, 4)


def test_grlex_order():
    ms = [make_monomial({0: 2}), make_monomial({0: 1, 1: 1}), make_monomial({1: 1}), ()]
    ordered = sorted(ms, key=grlex_key)
    assert ordered == [make_monomial({0: 2}), make_monomial({0: 1, 1: 1}), make_monomial({1: 1}), ()]


def test_rational_to_smtlib():
    assert rational_to_smtlib(Q(3)) == "3"
    assert rational_to_smtlib(Q(-3)) == "(- 3)"
    assert rational_to_smtlib(Q(-3, 4)) == "(- (/ 3 4))"
    assert rational_to_smtlib(Q(3, 4)) == "(/ 3 4)"


def test_polynomial_to_smtlib_names(p1):
    text = polynomial_to_smtlib(p1, ["a", "b"])
    assert "a" in text and "b" in text and "x" not in text


small = st.integers(-5, 5)


@st.composite
def polys(draw, nvars=3):
    terms = []
    for _ in range(draw(st.integers(0, 5))):
        exps = {v: draw(st.integers(0, 3)) for v in range(nvars)}
        terms.append((make_monomial(exps), draw(small)))
    return Polynomial(terms)


points = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=7), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys(), points)
def test_ring_laws(a, b, c, pt):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@settings(max_examples=60, deadline=None)
@given(polys(), points, st.integers(0, 2), st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_axis_restriction_matches_translation(p, pt, v, t):
    # restricting to the v-axis through pt equals partial evaluation at pt + t e_v
    direction = [0, 0, 0]
    direction[v] = 1
    line = p.restrict_to_line(pt, direction)
    moved = list(pt)
    moved[v] = pt[v] + t
    assert line(t) == p.evaluate(moved)
    assert p.partial_evaluate(pt, v)(pt[v] + t) == p.evaluate(moved)


@settings(max_examples=60, deadline=None)
@given(polys(), points, st.lists(small, min_size=3, max_size=3),
       st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_restrict_to_line_evaluates(p, pt, d, t):
    line = p.restrict_to_line(pt, d)
    assert line(t) == p.evaluate([a + di * t for a, di in zip(pt, d)])


@settings(max_examples=40, deadline=None)
@given(polys(), points)
def test_gradient_is_derivative(p, pt):
    grad = p.gradient_at(pt, 3)
    for v in range(3):
        assert grad[v] == p.derivative(v).evaluate(pt)
        e = [0, 0, 0]
        e[v] = 1
        assert p.restrict_to_line(pt, e).derivative()(0) == grad[v]

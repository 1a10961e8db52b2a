import random
from fractions import Fraction as Q

import numpy as np
import pytest

from celljump.formula import Relation, UnsupportedError, check_model
from celljump.generator import SMALL, rf
from celljump.poly import Polynomial
from celljump.smtlib import (
    SmtSyntaxError,
    formula_to_smtlib,
    model_to_smtlib,
    parse_model,
    parse_smtlib,
    read_sexprs,
)

X, Y = Polynomial.var(0), Polynomial.var(1)

HEADER = "(set-logic QF_NRA)\n(declare-fun x () Real)\n(declare-fun y () Real)\n"

ELLIPSES = HEADER + """
(assert (or (> (+ (* 17 x x) (* 2 x y) (* 17 y y) (* 48 x) (* (- 48) y)) 0)
            (> (- (+ (* 17 x x) (* 17 y y)) (* 2 x y) (* 48 x) (* 48 y)) 0)))
(assert (or (< (+ (* 17 x x) (* 2 x y) (* 17 y y) (* 48 x) (* (- 48) y)) 0)
            (< (- (+ (* 17 x x) (* 17 y y)) (* 2 x y) (* 48 x) (* 48 y)) 0)))
(check-sat)
"""


def atoms_of(F):
    return [[(a.poly, a.rel) for a in c.atoms] for c in F.clauses]


def test_read_sexprs_positions():
    (expr,) = read_sexprs("(assert\n  (> x 1))")
    assert expr[1][0] == ">"
    assert (expr[1][0].line, expr[1][0].col) == (2, 4)


def test_syntax_error_position():
    with pytest.raises(SmtSyntaxError) as e:
        parse_smtlib("(assert (> x 1)")
    assert e.value.line == 1 and e.value.col == 1
    with pytest.raises(SmtSyntaxError) as e:
        parse_smtlib("(declare-fun x () Real)\n(assert (> x 1)))")
    assert e.value.line == 2


def test_parse_ellipses(ellipses):
    f1, f2 = ellipses
    F = parse_smtlib(ELLIPSES)
    assert F.var_names == ("x", "y")
    assert len(F.clauses) == 2
    assert all(len(c.atoms) == 2 for c in F.clauses)
    assert atoms_of(F) == [[(f1, Relation.GT), (f2, Relation.GT)], [(f1, Relation.LT), (f2, Relation.LT)]]


def test_nonstrict_expands():
    F = parse_smtlib(HEADER + "(assert (<= x 1))(assert (>= y (/ 1 2)))")
    assert atoms_of(F) == [[(X - 1, Relation.LT), (X - 1, Relation.EQ)],
                           [(Y - Q(1, 2), Relation.GT), (Y - Q(1, 2), Relation.EQ)]]


def test_negation_uses_trichotomy():
    F = parse_smtlib(HEADER + "(assert (not (= x y)))(assert (not (< x 0)))")
    assert atoms_of(F) == [[(X - Y, Relation.LT), (X - Y, Relation.GT)],
                           [(X, Relation.EQ), (X, Relation.GT)]]


def test_let_define_fun_and_decimals():
    F = parse_smtlib(HEADER + "(define-fun c () Real 2.5)(assert (let ((s (+ x y))) (> (* s s) c)))")
    assert atoms_of(F) == [[((X + Y) ** 2 - Q(5, 2), Relation.GT)]]


def test_division_by_constant_only():
    F = parse_smtlib(HEADER + "(assert (> (/ x 4) 1))")
    assert atoms_of(F) == [[(Q(1, 4) * X - 1, Relation.GT)]]
    with pytest.raises(UnsupportedError):
        parse_smtlib(HEADER + "(assert (> (/ 1 x) 1))")


@pytest.mark.parametrize("body, needle", [
    ("(assert (> (sin x) 0))", "sin"),
    ("(assert (exists ((z Real)) (> z x)))", "quantifier"),
    ("(assert (= (+ (* x x) (* y y)) 1))", "nonlinear equality"),
])
def test_unsupported_constructs(body, needle):
    with pytest.raises(UnsupportedError, match=needle):
        parse_smtlib(HEADER + body)


def test_unsupported_sort_and_logic():
    with pytest.raises(UnsupportedError):
        parse_smtlib("(declare-fun n () Int)")
    with pytest.raises(UnsupportedError):
        parse_smtlib("(set-logic QF_BV)")


def test_cnf_budget():
    # (a1 and b1) or ... or (a12 and b12) distributes into 2^12 clauses
    pairs = " ".join(f"(and (> x {i}) (< y {i}))" for i in range(12))
    text = HEADER + f"(assert (or {pairs}))"
    assert len(parse_smtlib(text).clauses) == 2 ** 12
    with pytest.raises(UnsupportedError):
        parse_smtlib(text, max_clauses=1000)


def test_model_round_trip(ellipses):
    F = parse_smtlib(ELLIPSES)
    model = [Q(-3, 7), Q(5)]
    text = model_to_smtlib(F, model)
    assert "(/ 3 7)" in text
    assert parse_model(text, F) == model


@pytest.mark.parametrize("seed", range(10))
def test_generated_round_trip(seed):
    F = rf(SMALL, np.random.default_rng(seed))
    G = parse_smtlib(formula_to_smtlib(F))
    assert G.var_names == F.var_names
    assert G.clauses == F.clauses


# -- preprocessing soundness against a direct evaluator ----------------------

POLYS = {
    "(- x 1)": lambda x, y: x - 1,
    "(- (* x y) 2)": lambda x, y: x * y - 2,
    "(+ (* y y) x (- 3))": lambda x, y: y * y + x - 3,
    "(- (* x x y) y)": lambda x, y: x * x * y - y,
}
RELS = {"<": lambda a, b: a < b, "<=": lambda a, b: a <= b, ">": lambda a, b: a > b,
        ">=": lambda a, b: a >= b, "=": lambda a, b: a == b}


def random_tree(rnd, depth):
    if depth == 0 or rnd.random() < 0.3:
        text = rnd.choice(list(POLYS))
        rel = rnd.choice(list(RELS))
        const = rnd.randint(-2, 2)
        f, r = POLYS[text], RELS[rel]
        lit = str(const) if const >= 0 else f"(- {-const})"
        return f"({rel} {text} {lit})", (lambda x, y, f=f, r=r, c=const: r(f(x, y), c))
    op = rnd.choice(["and", "or", "not", "=>", "xor", "ite", "distinct"])
    if op == "not":
        t, e = random_tree(rnd, depth - 1)
        return f"(not {t})", (lambda x, y: not e(x, y))
    if op == "ite":
        (c, ce), (a, ae), (b, be) = (random_tree(rnd, depth - 1) for _ in range(3))
        return f"(ite {c} {a} {b})", (lambda x, y: ae(x, y) if ce(x, y) else be(x, y))
    (a, ae), (b, be) = random_tree(rnd, depth - 1), random_tree(rnd, depth - 1)
    fn = {"and": lambda p, q: p and q, "or": lambda p, q: p or q, "=>": lambda p, q: (not p) or q,
          "xor": lambda p, q: p != q, "distinct": lambda p, q: p != q}[op]
    return f"({op} {a} {b})", (lambda x, y: fn(ae(x, y), be(x, y)))


@pytest.mark.parametrize("seed", range(40))
def test_preprocessing_preserves_truth(seed):
    rnd = random.Random(seed)
    text, evaluate = random_tree(rnd, 3)
    F = parse_smtlib(HEADER + f"(assert {text})")
    grid = [Q(k, 2) for k in range(-6, 7)]
    for _ in range(60):
        x, y = rnd.choice(grid), rnd.choice(grid)
        assert (check_model(F, [x, y]) is None) == bool(evaluate(x, y)), text

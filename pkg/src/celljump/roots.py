"""Real root isolation and sample points of univariate rational polynomials.

Isolation uses Descartes' rule of signs with bisection (Vincent-Collins-Akritas)
on integer polynomials.  Each search node carries a polynomial whose roots in
``(0, 1)`` correspond to the roots of the input in the node's interval, so all
subdivision work is integer Taylor shifts and scalings.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterator, NamedTuple

from .poly import Number, UnivariatePolynomial

POSITIVE = 1
NEGATIVE = -1


class SamplePoint(NamedTuple):
    value: Fraction
    sign: int  # +1 or -1; sample points are never roots


# -- integer polynomial helpers (coefficient lists, lowest degree first) ------

def _strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _primitive(c: list[int]) -> list[int]:
    """Divide by the content, sign chosen to make the leading coefficient positive."""
    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            break
    if g == 0:
        return c
    if c[-1] < 0:
        g = -g
    return c if g == 1 else [x // g for x in c]


def _content_reduce(c: list[int]) -> list[int]:
    """Divide by the positive content; keeps signs."""
    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            return c
    return [x // g for x in c] if g > 1 else c


def _taylor_shift(c: list[int], a: int) -> list[int]:
    """Coefficients of p(x + a)."""
    c = list(c)
    n = len(c) - 1
    if a == 0:
        return c
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            c[j] += a * c[j + 1]
    return c


def _taylor_shift1(c: list[int]) -> list[int]:
    c = list(c)
    n = len(c) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _variations(c: list[int]) -> int:
    count = 0
    prev = 0
    for x in c:
        if x:
            if prev and (x > 0) != (prev > 0):
                count += 1
            prev = x
    return count


def _sign_at(c: list[int], x: Fraction) -> int:
    """Sign of the integer polynomial ``c`` at ``x`` (homogenised Horner)."""
    n, d = x.numerator, x.denominator
    acc = 0
    dpow = 1
    for coef in reversed(c):
        acc = acc * n + coef * dpow
        dpow *= d
    return (acc > 0) - (acc < 0)


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        la = a[-1]
        a = [x * lb for x in a]
        for j, bc in enumerate(b):
            a[k + j] -= la * bc
        _strip(a)
    return a


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _primitive(list(a)), _primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, (_primitive(r) if r else r)
    return _primitive(a)


def _exact_quotient(a: list[int], b: list[int]) -> list[int]:
    q, r = UnivariatePolynomial(a).divmod(UnivariatePolynomial(b))
    assert r.is_zero()
    return q.integer_coefficients()


def _integer_form(p: UnivariatePolynomial) -> list[int]:
    return p.integer_coefficients()


# -- public operations -------------------------------------------------------

def square_free_part(p: UnivariatePolynomial) -> UnivariatePolynomial:
    """p / gcd(p, p'), returned as a primitive integer-coefficient polynomial."""
    if p.is_zero():
        raise ValueError("zero polynomial has no square-free part")
    return UnivariatePolynomial(_square_free_int(_integer_form(p)))


def _square_free_int(c: list[int]) -> list[int]:
    if len(c) <= 2:
        return _primitive(list(c))
    dc = [i * x for i, x in enumerate(c) if i]
    g = _int_gcd(c, dc)
    if len(g) == 1:
        return _primitive(list(c))
    return _primitive(_exact_quotient(c, g))


def root_bound(c: list[int]) -> int:
    """Integer strictly above the Cauchy bound 1 + max|c_i|/|c_lead|."""
    lead = abs(c[-1])
    top = max((abs(x) for x in c[:-1]), default=0)
    return 2 + top // lead


def _split_points() -> Iterator[tuple[int, int]]:
    yield 1, 2
    k = 3
    while True:
        for j in range(1, k):
            if gcd(j, k) == 1:
                yield j, k
        k += 1


def _isolate_int(f: list[int]) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals of a square-free integer polynomial (possibly touching)."""
    if len(f) <= 1:
        return []
    bound = root_bound(f)
    lo0, hi0 = Fraction(-bound), Fraction(bound)
    # f(-B + 2B x), integer since B is an integer
    start = UnivariatePolynomial(f).compose_linear(lo0, 2 * bound)
    stack = [(_content_reduce(start.integer_coefficients()), lo0, hi0)]
    out: list[tuple[Fraction, Fraction]] = []
    while stack:
        P, lo, hi = stack.pop()
        v = _variations(_taylor_shift1(P[::-1]))
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        n = len(P) - 1
        for u, w in _split_points():
            A = [c * w ** (n - i) for i, c in enumerate(P)]
            right = _taylor_shift(A, u)
            if right[0] != 0:
                break
        left = [c * u ** i for i, c in enumerate(A)]
        right = [c * (w - u) ** i for i, c in enumerate(right)]
        mid = lo + (hi - lo) * Fraction(u, w)
        # right pushed first so the left half is processed first
        stack.append((_content_reduce(right), mid, hi))
        stack.append((_content_reduce(left), lo, mid))
    out.sort()
    return out


def refine_interval(f: list[int], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """One bisection step on an isolating interval with non-root endpoints."""
    mid = (lo + hi) / 2
    s_mid = _sign_at(f, mid)
    if s_mid == 0:
        delta = (hi - lo) / 4
        return mid - delta, mid + delta
    if s_mid == _sign_at(f, hi):
        return lo, mid
    return mid, hi


def isolate_real_roots(p: UnivariatePolynomial, max_width: Number | None = None
                       ) -> list[tuple[Fraction, Fraction]]:
    """Strictly separated open isolating intervals for the distinct real roots of ``p``.

    The polynomial is nonzero at every endpoint and ``hi_i < lo_{i+1}``.  With
    ``max_width`` every interval is bisected until no wider than that.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no isolation")
    f = _square_free_int(_integer_form(p))
    intervals = _isolate_int(f)
    for i in range(len(intervals) - 1):
        while intervals[i][1] >= intervals[i + 1][0]:
            intervals[i] = refine_interval(f, *intervals[i])
            intervals[i + 1] = refine_interval(f, *intervals[i + 1])
    if max_width is not None:
        intervals = [_refine_to(f, lo, hi, Fraction(max_width)) for lo, hi in intervals]
    return intervals


def _refine_to(f, lo, hi, width):
    while hi - lo > width:
        lo, hi = refine_interval(f, lo, hi)
    return lo, hi


def sample_points_from_intervals(p: UnivariatePolynomial,
                                 intervals: list[tuple[Fraction, Fraction]]) -> list[SamplePoint]:
    if not intervals:
        return []
    values = [intervals[0][0]]
    for (_, b), (a, _) in zip(intervals, intervals[1:]):
        values.extend((b, (b + a) / 2, a))
    values.append(intervals[-1][1])
    c = _integer_form(p)
    points = []
    for x in values:
        s = _sign_at(c, x)
        assert s != 0, "sample point hit a root"
        points.append(SamplePoint(x, s))
    return points


def sample_points(p: UnivariatePolynomial) -> list[SamplePoint]:
    """Sample points of ``p`` tagged with the exact sign of ``p`` there, ascending.

    Empty for the zero polynomial and for polynomials without real roots.
    """
    if p.is_zero() or p.is_constant():
        return []
    return sample_points_from_intervals(p, isolate_real_roots(p))


def closest_sample_point(points: list[SamplePoint], sign: int, anchor: Number) -> Fraction | None:
    """Sample value of the requested sign nearest ``anchor``; ties go to the smaller value."""
    best = None
    best_key = None
    for x, s in points:
        if s != sign:
            continue
        key = (abs(x - anchor), x)
        if best_key is None or key < best_key:
            best, best_key = x, key
    return best

"""Exact rational polynomial arithmetic.

Rationals are :class:`fractions.Fraction` throughout.  Multivariate
polynomials are sparse maps from monomials to nonzero coefficients over
integer variable ids; univariate polynomials are dense coefficient tuples,
lowest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]

# A monomial is a tuple of (variable id, exponent) pairs sorted by variable
# id, with no zero exponents.  The empty tuple is the constant monomial.
Monomial = tuple


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def make_monomial(exponents: Mapping[int, int] | Iterable[tuple[int, int]]) -> Monomial:
    items = exponents.items() if isinstance(exponents, Mapping) else exponents
    merged: dict[int, int] = {}
    for v, e in items:
        if e < 0:
            raise ValueError("negative exponent")
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in merged.items() if e))


def grlex_key(m: Monomial):
    """Sort key putting monomials in descending graded-lex order (x0 > x1 > ...)."""
    return (-monomial_degree(m), tuple((v, -e) for v, e in m))


class UnassignedVariable(KeyError):
    pass


def _lookup(alpha, v: int) -> Fraction:
    try:
        value = alpha[v]
    except (KeyError, IndexError):
        raise UnassignedVariable(f"unassigned variable {v}") from None
    if value is None:
        raise UnassignedVariable(f"unassigned variable {v}")
    return value


def _as_fraction(c: Number) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class UnivariatePolynomial:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_ints(cls, coeffs: Iterable[int]) -> "UnivariatePolynomial":
        return cls(coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    evaluate = __call__

    def __eq__(self, other) -> bool:
        if isinstance(other, UnivariatePolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UnivariatePolynomial(0)"
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            parts.append(f"{c}" if i == 0 else f"{c}*t^{i}" if i > 1 else f"{c}*t")
        return "UnivariatePolynomial(" + " + ".join(parts) + ")"

    def __neg__(self) -> "UnivariatePolynomial":
        return UnivariatePolynomial(-c for c in self.coeffs)

    def __add__(self, other) -> "UnivariatePolynomial":
        other = _upoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UnivariatePolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "UnivariatePolynomial":
        return self + (-_upoly(other))

    def __rsub__(self, other) -> "UnivariatePolynomial":
        return _upoly(other) - self

    def __mul__(self, other) -> "UnivariatePolynomial":
        other = _upoly(other)
        if not self.coeffs or not other.coeffs:
            return UnivariatePolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UnivariatePolynomial":
        result = UnivariatePolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, divisor: "UnivariatePolynomial"):
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[k + j] -= q * c
        return UnivariatePolynomial(quot), UnivariatePolynomial(rem[:dd] if dd > 0 else [])

    def __floordiv__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "UnivariatePolynomial") -> "UnivariatePolynomial":
        return self.divmod(other)[1]

    def monic(self) -> "UnivariatePolynomial":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UnivariatePolynomial(c / lead for c in self.coeffs)

    def derivative(self) -> "UnivariatePolynomial":
        return UnivariatePolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def compose_linear(self, a: Number, b: Number) -> "UnivariatePolynomial":
        """Return p(a + b*t)."""
        result = UnivariatePolynomial()
        lin = UnivariatePolynomial([a, b])
        for c in reversed(self.coeffs):
            result = result * lin + c
        return result

    def integer_coefficients(self) -> list[int]:
        """Primitive integer multiple with the same sign pattern (positive scale)."""
        if not self.coeffs:
            return []
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        return [c // g for c in ints]


def _upoly(x) -> UnivariatePolynomial:
    if isinstance(x, UnivariatePolynomial):
        return x
    return UnivariatePolynomial([x])


def poly_gcd(a: UnivariatePolynomial, b: UnivariatePolynomial) -> UnivariatePolynomial:
    """Monic gcd over Q (Euclid)."""
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients.

    Immutable.  ``terms`` maps monomials to nonzero :class:`Fraction`
    coefficients; the zero polynomial has no terms.
    """

    __slots__ = ("terms", "_hash", "_vars")

    def __init__(self, terms: Mapping[Monomial, Number] | Iterable[tuple[Monomial, Number]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for m, c in items:
            if c:
                acc[m] = acc.get(m, Fraction(0)) + _as_fraction(c)
        self.terms: dict[Monomial, Fraction] = {m: c for m, c in acc.items() if c}
        self._hash = None
        self._vars = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        p._vars = None
        return p

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls._raw({(): _as_fraction(c)} if c else {})

    @classmethod
    def var(cls, v: int) -> "Polynomial":
        return cls._raw({((v, 1),): Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> frozenset:
        if self._vars is None:
            self._vars = frozenset(v for m in self.terms for v, _ in m)
        return self._vars

    def degree_in(self, v: int) -> int:
        """Largest exponent of ``v``; 0 if absent (and for the zero polynomial)."""
        best = 0
        for m in self.terms:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    def total_degree(self) -> int:
        return max((monomial_degree(m) for m in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0]))

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                (names[v] if names else f"x{v}") + (f"^{e}" if e > 1 else "") for v, e in m
            )
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        other = _poly(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = _poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return _poly(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _poly(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "Polynomial":
        if not c:
            return Polynomial()
        return Polynomial._raw({m: v * c for m, v in self.terms.items()})

    def derivative(self, v: int) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for i, (w, e) in enumerate(m):
                if w == v:
                    rest = m[:i] + (((w, e - 1),) if e > 1 else ()) + m[i + 1:]
                    out[rest] = out.get(rest, 0) + c * e
                    break
        return Polynomial._raw({m: c for m, c in out.items() if c})

    # -- evaluation --------------------------------------------------------

    def evaluate(self, alpha) -> Fraction:
        """Exact value at ``alpha`` (a mapping or sequence indexed by variable id)."""
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                x = _lookup(alpha, v)
                term = term * (x if e == 1 else x ** e)
            total += term
        return total

    def sign_at(self, alpha) -> int:
        value = self.evaluate(alpha)
        return (value > 0) - (value < 0)

    def partial_evaluate(self, alpha, free: int) -> UnivariatePolynomial:
        """Substitute every variable except ``free`` and return the univariate image."""
        coeffs: dict[int, Fraction] = {}
        for m, c in self.terms.items():
            k = 0
            term = c
            for v, e in m:
                if v == free:
                    k = e
                else:
                    x = _lookup(alpha, v)
                    term = term * (x if e == 1 else x ** e)
            if term:
                coeffs[k] = coeffs.get(k, 0) + term
        n = max(coeffs, default=-1) + 1
        return UnivariatePolynomial(coeffs.get(i, 0) for i in range(n))

    def restrict_to_line(self, base, direction) -> UnivariatePolynomial:
        """Return p(base + t*direction) as a polynomial in t."""
        cache: dict[tuple[int, int], UnivariatePolynomial] = {}

        def power(v: int, e: int) -> UnivariatePolynomial:
            key = (v, e)
            if key not in cache:
                d = _lookup(direction, v)
                lin = UnivariatePolynomial([_lookup(base, v), d])
                cache[key] = lin if e == 1 else lin ** e
            return cache[key]

        result = UnivariatePolynomial()
        for m, c in self.terms.items():
            term = UnivariatePolynomial([c])
            for v, e in m:
                term = term * power(v, e)
            result = result + term
        return result

    def gradient_at(self, alpha, nvars: int | None = None) -> list[Fraction]:
        """Exact partial-derivative values, one per variable id ``0..nvars-1``."""
        if nvars is None:
            nvars = len(alpha)
        return [self.derivative(v).evaluate(alpha) if v in self.variables() else Fraction(0)
                for v in range(nvars)]


def _poly(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    return NotImplemented


def rational_to_smtlib(q: Number) -> str:
    q = _as_fraction(q)
    if q < 0:
        return f"(- {rational_to_smtlib(-q)})"
    if q.denominator == 1:
        return str(q.numerator)
    return f"(/ {q.numerator} {q.denominator})"


def polynomial_to_smtlib(p: Polynomial, names: Sequence[str]) -> str:
    """Render ``p`` as an SMT-LIB term; powers are written as repeated products."""
    if p.is_zero():
        return "0"
    terms = []
    for m, c in p.sorted_terms():
        factors = [names[v] for v, e in m for _ in range(e)]
        if not factors:
            terms.append(rational_to_smtlib(c))
        elif c == 1 and len(factors) == 1:
            terms.append(factors[0])
        elif c == 1:
            terms.append("(* " + " ".join(factors) + ")")
        else:
            terms.append("(* " + " ".join([rational_to_smtlib(c)] + factors) + ")")
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"

"""Random polynomial formulas (rn / rp / rf) and planted-solution variants.

Randomness comes from numpy's PCG64.  A campaign seeds one
:class:`numpy.random.SeedSequence` and spawns a child per instance, so
instance ``k`` is reproducible on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .formula import Atom, Formula, Relation, build_formula, check_model
from .poly import Polynomial, make_monomial
from .smtlib import formula_to_smtlib

COEFF_RANGE = 1000
WITNESS_RANGE = 10


@dataclass(frozen=True)
class RfParams:
    var_range: tuple[int, int]
    polynum_range: tuple[int, int]
    degree_range: tuple[int, int]
    nvars_per_poly_range: tuple[int, int]
    monomials_range: tuple[int, int]
    clausenum_range: tuple[int, int]
    clauselen_range: tuple[int, int]

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            lo, hi = getattr(self, name)
            if lo < 0 or lo > hi:
                raise ValueError(f"bad range for {name}: {(lo, hi)}")
        if self.nvars_per_poly_range[1] > self.var_range[1]:
            raise ValueError("polynomials cannot use more variables than exist")
        if self.var_range[0] < 1 or self.clauselen_range[0] < 1 or self.monomials_range[0] < 1:
            raise ValueError("need at least one variable, one atom per clause and one monomial")


# the random-instance campaign used for headline results
CAMPAIGN = RfParams((30, 40), (60, 80), (20, 30), (10, 20), (20, 30), (40, 60), (3, 5))
# a desk-sized variant with the same shape
SMALL = RfParams((5, 8), (10, 15), (3, 5), (2, 4), (4, 8), (8, 12), (2, 3))


def rn(down: int, up: int, rng: np.random.Generator) -> int:
    """Uniform integer in ``[down, up]``."""
    if down > up:
        raise ValueError(f"empty range [{down}, {up}]")
    return int(rng.integers(down, up + 1))


def random_exponents(k: int, d: int, rng: np.random.Generator) -> list[int]:
    """Uniform weak composition of ``d`` into ``k`` parts (stars and bars)."""
    if k == 0:
        return []
    if k == 1:
        return [d]
    bars = sorted(int(b) for b in rng.choice(d + k - 1, size=k - 1, replace=False))
    parts, prev = [], -1
    for b in bars:
        parts.append(b - prev - 1)
        prev = b
    parts.append(d + k - 2 - prev)
    return parts


def rp(variables: Sequence[int], d: int, m: int, rng: np.random.Generator) -> Polynomial:
    """``c_1 M_1 + ... + c_m M_m + c_0`` with ``deg M_1 = d`` and ``deg M_i <= d``."""
    if d < 0 or m < 1:
        raise ValueError("need d >= 0 and m >= 1")
    k = len(variables)
    terms = []
    for i in range(m):
        c = rn(-COEFF_RANGE, COEFF_RANGE, rng)
        if i == 0:
            exps = random_exponents(k, d, rng)
        else:
            # slack part absorbs the degree deficit
            exps = random_exponents(k + 1, d, rng)[:k]
        terms.append((make_monomial(zip(variables, exps)), c))
    terms.append(((), rn(-COEFF_RANGE, COEFF_RANGE, rng)))
    return Polynomial(terms)


def var_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def _random_polys(params: RfParams, n: int, rng) -> list[Polynomial]:
    polys = []
    for _ in range(rn(*params.polynum_range, rng)):
        ni = min(rn(*params.nvars_per_poly_range, rng), n)
        subset = sorted(int(v) for v in rng.choice(n, size=ni, replace=False))
        d = rn(*params.degree_range, rng)
        m = rn(*params.monomials_range, rng)
        polys.append(rp(subset, d, m, rng))
    return polys


def _random_atom(polys: list[Polynomial], rng) -> Atom:
    pick = rn(0, 3 * len(polys) - 1, rng)
    p = polys[pick // 3]
    rel = (Relation.LT, Relation.GT, Relation.EQ)[pick % 3]
    if rel is Relation.EQ and any(p.degree_in(v) > 1 for v in p.variables()):
        rel = Relation.LT if rn(0, 1, rng) == 0 else Relation.GT
    return Atom(p, rel)


def rf(params: RfParams, rng: np.random.Generator) -> Formula:
    """Random polynomial formula built as in the rf construction."""
    n = rn(*params.var_range, rng)
    polys = _random_polys(params, n, rng)
    clauses = []
    for _ in range(rn(*params.clausenum_range, rng)):
        clauses.append([_random_atom(polys, rng) for _ in range(rn(*params.clauselen_range, rng))])
    return build_formula(var_names(n), clauses)


def planted_sat(params: RfParams, rng: np.random.Generator) -> tuple[Formula, tuple[Fraction, ...]]:
    """Random formula with a known integer witness in ``[-10, 10]^n``.

    One atom per clause is forced true at the witness by choosing its
    relation from the polynomial's sign there (``p + 1 > 0`` when ``p`` vanishes).
    """
    n = rn(*params.var_range, rng)
    witness = tuple(Fraction(rn(-WITNESS_RANGE, WITNESS_RANGE, rng)) for _ in range(n))
    polys = _random_polys(params, n, rng)
    clauses = []
    for _ in range(rn(*params.clausenum_range, rng)):
        atoms = [_random_atom(polys, rng) for _ in range(rn(*params.clauselen_range, rng))]
        j = rn(0, len(atoms) - 1, rng)
        p = polys[rn(0, len(polys) - 1, rng)]
        value = p.evaluate(witness)
        if value > 0:
            atoms[j] = Atom(p, Relation.GT)
        elif value < 0:
            atoms[j] = Atom(p, Relation.LT)
        else:
            atoms[j] = Atom(p + 1, Relation.GT)
        clauses.append(atoms)
    formula = build_formula(var_names(n), clauses)
    assert check_model(formula, witness) is None
    return formula, witness


def campaign_rngs(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(s)) for s in children]


def write_campaign(out_dir: str | Path, params: RfParams, count: int, seed: int,
                   planted: bool = False, prefix: str = "rf") -> list[Path]:
    """Write ``count`` instances as SMT-LIB files; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, rng in enumerate(campaign_rngs(seed, count)):
        if planted:
            formula, witness = planted_sat(params, rng)
            note = "planted witness: " + " ".join(str(w) for w in witness)
        else:
            formula = rf(params, rng)
            note = None
        path = out / f"{prefix}_{seed}_{k:04d}.smt2"
        path.write_text(formula_to_smtlib(formula, comment=note))
        paths.append(path)
    return paths

"""Cell-jump local search for satisfiability of polynomial constraints over the reals."""

from .engine import EngineConfig, SearchResult, local_search, solve_with_restarts
from .formula import Atom, Clause, Formula, Relation, UnsupportedError, check_model, false_atoms
from .poly import Polynomial, UnivariatePolynomial
from .smtlib import SmtSyntaxError, formula_to_smtlib, parse_smtlib

__all__ = [
    "Atom", "Clause", "EngineConfig", "Formula", "Polynomial", "Relation", "SearchResult",
    "SmtSyntaxError", "UnivariatePolynomial", "UnsupportedError", "check_model", "false_atoms",
    "formula_to_smtlib", "local_search", "parse_smtlib", "solve_with_restarts",
]

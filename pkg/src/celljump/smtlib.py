"""SMT-LIB2 reader and writer for the QF_NRA fragment the solver handles.

Assertions are translated into a small Boolean tree, pushed into negation
normal form and distributed into CNF over ``p < 0``, ``p > 0``, ``p = 0``.
No auxiliary Boolean variables are introduced; distribution is capped by a
clause budget.

Boolean tree nodes are tuples::

    ("const", bool)
    ("atom", Atom)
    ("not", node)
    ("and", (node, ...))
    ("or", (node, ...))
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .formula import Atom, Formula, Relation, UnsupportedError, build_formula
from .poly import Polynomial, polynomial_to_smtlib, rational_to_smtlib

DEFAULT_MAX_CNF_CLAUSES = 100_000

TRANSCENDENTAL = {"sin", "cos", "tan", "exp", "log", "arcsin", "arccos", "arctan",
                  "sqrt", "pi", "e", "sec", "csc", "cot"}
IGNORED_COMMANDS = {"set-info", "set-option", "check-sat", "get-model", "get-value",
                    "get-info", "echo"}
SUPPORTED_LOGICS = {"QF_NRA", "QF_LRA", "QF_RDL", "NRA", "ALL"}


class SmtSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


# -- s-expression reader ------------------------------------------------------

class Token(str):
    """A leaf of the s-expression tree remembering where it came from."""

    line: int
    col: int

    def __new__(cls, text: str, line: int, col: int):
        tok = super().__new__(cls, text)
        tok.line = line
        tok.col = col
        return tok


@dataclass
class SList:
    items: list
    line: int
    col: int

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>;[^\n]*)
      | (?P<open>\()
      | (?P<close>\))
      | (?P<quoted>\|[^|]*\|)
      | (?P<string>"(?:[^"]|"")*")
      | (?P<atom>[^\s()|";]+)
    """,
    re.VERBOSE,
)


def read_sexprs(text: str) -> list:
    stack: list[SList] = []
    top: list = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SmtSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        chunk = m.group()
        if kind == "open":
            stack.append(SList([], line, col))
        elif kind == "close":
            if not stack:
                raise SmtSyntaxError("unbalanced ')'", line, col)
            done = stack.pop()
            (stack[-1].items if stack else top).append(done)
        elif kind in ("atom", "quoted", "string"):
            tok = Token(chunk[1:-1] if kind == "quoted" else chunk, line, col)
            (stack[-1].items if stack else top).append(tok)
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    if stack:
        raise SmtSyntaxError("unbalanced '('", stack[-1].line, stack[-1].col)
    return top


def _where(x) -> tuple[int, int]:
    return (x.line, x.col) if hasattr(x, "line") else (0, 0)


def _syntax(msg: str, x) -> SmtSyntaxError:
    return SmtSyntaxError(msg, *_where(x))


# -- term translation --------------------------------------------------------

_NUMERAL = re.compile(r"^[0-9]+$")
_DECIMAL = re.compile(r"^[0-9]+\.[0-9]+$")

TRUE = ("const", True)
FALSE = ("const", False)


def _not(n):
    if n[0] == "const":
        return ("const", not n[1])
    if n[0] == "not":
        return n[1]
    return ("not", n)


def _and(children):
    return ("and", tuple(children))


def _or(children):
    return ("or", tuple(children))


@dataclass
class Script:
    var_names: list[str] = field(default_factory=list)
    assertions: list = field(default_factory=list)
    logic: str | None = None

    def var_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.var_names)}


class _Translator:
    def __init__(self, script: Script):
        self.script = script
        self.vars = script.var_index()
        self.defs: dict[str, object] = {}

    def term(self, x, env: dict):
        """Translate ``x`` to a Polynomial (real sort) or a Boolean tree node."""
        if isinstance(x, Token):
            return self.leaf(x, env)
        if not len(x):
            raise _syntax("empty application", x)
        head = x[0]
        if isinstance(head, SList):
            if len(head) == 3 and head[0] == "_":
                raise UnsupportedError(f"unsupported: indexed identifier {head[1]}")
            raise _syntax("unexpected list in function position", head)
        args = x.items[1:]
        if head == "let":
            return self.let(x, env)
        if head in ("forall", "exists"):
            raise UnsupportedError("unsupported: quantifier")
        if head == "!":
            if not args:
                raise _syntax("empty annotation", x)
            return self.term(args[0], env)
        vals = [self.term(a, env) for a in args]
        return self.apply(head, vals, x)

    def leaf(self, tok: Token, env: dict):
        if tok in env:
            return env[tok]
        if tok in self.defs:
            return self.defs[tok]
        if tok in self.vars:
            return Polynomial.var(self.vars[tok])
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if _NUMERAL.match(tok):
            return Polynomial.constant(int(tok))
        if _DECIMAL.match(tok):
            return Polynomial.constant(Fraction(tok))
        if tok.startswith("#"):
            raise UnsupportedError(f"unsupported: literal {tok}")
        if tok in TRANSCENDENTAL:
            raise UnsupportedError(f"unsupported: {tok}")
        raise _syntax(f"undeclared symbol {tok!r}", tok)

    def let(self, x, env):
        if len(x) != 3 or not isinstance(x[1], SList):
            raise _syntax("malformed let", x)
        inner = dict(env)
        for binding in x[1]:
            if not isinstance(binding, SList) or len(binding) != 2 or not isinstance(binding[0], Token):
                raise _syntax("malformed let binding", binding)
            inner[binding[0]] = self.term(binding[1], env)
        return self.term(x[2], inner)

    def apply(self, head: Token, vals: list, x):
        arith = all(isinstance(v, Polynomial) for v in vals)
        boolean = all(isinstance(v, tuple) for v in vals)
        if head in TRANSCENDENTAL:
            raise UnsupportedError(f"unsupported: {head}")
        if head == "+" and arith and vals:
            out = vals[0]
            for v in vals[1:]:
                out = out + v
            return out
        if head == "-" and arith and vals:
            if len(vals) == 1:
                return -vals[0]
            out = vals[0]
            for v in vals[1:]:
                out = out - v
            return out
        if head == "*" and arith and vals:
            out = vals[0]
            for v in vals[1:]:
                out = out * v
            return out
        if head == "/" and arith and len(vals) >= 2:
            out = vals[0]
            for v in vals[1:]:
                if not v.is_constant():
                    raise UnsupportedError("unsupported: division by non-constant")
                if v.is_zero():
                    raise UnsupportedError("unsupported: division by zero")
                out = out.scale(1 / v.constant_value())
            return out
        if head in ("<", ">", "<=", ">=") and arith and len(vals) >= 2:
            return _and(self.compare(head, a, b) for a, b in zip(vals, vals[1:]))
        if head == "=" and arith and len(vals) >= 2:
            return _and(("atom", Atom(a - b, Relation.EQ)) for a, b in zip(vals, vals[1:]))
        if head == "distinct" and arith and len(vals) >= 2:
            return _and(_not(("atom", Atom(vals[i] - vals[j], Relation.EQ)))
                        for i in range(len(vals)) for j in range(i + 1, len(vals)))
        if boolean:
            if head == "and":
                return _and(vals)
            if head == "or":
                return _or(vals)
            if head == "not" and len(vals) == 1:
                return _not(vals[0])
            if head == "=>" and vals:
                *prem, concl = vals
                return _or([_not(p) for p in prem] + [concl])
            if head == "xor" and len(vals) >= 2:
                out = vals[0]
                for v in vals[1:]:
                    out = _or([_and([out, _not(v)]), _and([_not(out), v])])
                return out
            if head == "=" and len(vals) >= 2:
                return _and(_or([_and([a, b]), _and([_not(a), _not(b)])])
                            for a, b in zip(vals, vals[1:]))
            if head == "distinct" and len(vals) >= 2:
                return _and(_or([_and([vals[i], _not(vals[j])]), _and([_not(vals[i]), vals[j]])])
                            for i in range(len(vals)) for j in range(i + 1, len(vals)))
            if head == "ite" and len(vals) == 3:
                c, a, b = vals
                return _or([_and([c, a]), _and([_not(c), b])])
        if head == "ite":
            raise UnsupportedError("unsupported: non-Boolean ite")
        if head in ("and", "or", "not", "=>", "xor", "<", ">", "<=", ">=", "=", "distinct",
                    "+", "-", "*", "/"):
            raise _syntax(f"ill-sorted or ill-formed application of {head}", x)
        raise UnsupportedError(f"unsupported: function {head}")

    @staticmethod
    def compare(op: str, a: Polynomial, b: Polynomial):
        d = a - b
        if op == "<":
            return ("atom", Atom(d, Relation.LT))
        if op == ">":
            return ("atom", Atom(d, Relation.GT))
        rel = Relation.LT if op == "<=" else Relation.GT
        return _or([("atom", Atom(d, rel)), ("atom", Atom(d, Relation.EQ))])


def parse_script(text: str | bytes) -> Script:
    """Read commands and translate assertions to Boolean trees."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    script = Script()
    tr = _Translator(script)
    for cmd in read_sexprs(text):
        if not isinstance(cmd, SList) or not len(cmd) or not isinstance(cmd[0], Token):
            raise _syntax("expected a command", cmd)
        name = cmd[0]
        if name == "set-logic":
            if len(cmd) != 2:
                raise _syntax("malformed set-logic", cmd)
            script.logic = str(cmd[1])
            if script.logic not in SUPPORTED_LOGICS:
                raise UnsupportedError(f"unsupported: logic {script.logic}")
        elif name in IGNORED_COMMANDS:
            continue
        elif name == "exit":
            break
        elif name in ("declare-fun", "declare-const"):
            _declare(cmd, script, tr)
        elif name == "define-fun":
            if len(cmd) != 5 or not isinstance(cmd[2], SList):
                raise _syntax("malformed define-fun", cmd)
            if len(cmd[2]):
                raise UnsupportedError("unsupported: define-fun with arguments")
            tr.defs[cmd[1]] = tr.term(cmd[4], {})
        elif name == "assert":
            if len(cmd) != 2:
                raise _syntax("malformed assert", cmd)
            node = tr.term(cmd[1], {})
            if not isinstance(node, tuple):
                raise _syntax("assertion is not Boolean", cmd[1])
            script.assertions.append(node)
        else:
            raise UnsupportedError(f"unsupported: command {name}")
    return script


def _declare(cmd, script: Script, tr: _Translator):
    if cmd[0] == "declare-fun":
        if len(cmd) != 4 or not isinstance(cmd[2], SList):
            raise _syntax("malformed declare-fun", cmd)
        if len(cmd[2]):
            raise UnsupportedError("unsupported: uninterpreted function")
        sort = cmd[3]
    else:
        if len(cmd) != 3:
            raise _syntax("malformed declare-const", cmd)
        sort = cmd[2]
    name = cmd[1]
    if not isinstance(name, Token):
        raise _syntax("expected a symbol", name)
    if sort != "Real":
        raise UnsupportedError(f"unsupported: sort {sort}")
    if name in tr.vars:
        raise _syntax(f"duplicate declaration of {name}", name)
    tr.vars[str(name)] = len(script.var_names)
    script.var_names.append(str(name))


# -- CNF ---------------------------------------------------------------------

def negate_atom(atom: Atom) -> list[Atom]:
    """Disjunction of atoms equivalent to the negation of ``atom`` (trichotomy)."""
    p = atom.poly
    others = [r for r in (Relation.LT, Relation.EQ, Relation.GT) if r is not atom.rel]
    return [Atom(p, r) for r in others]


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit

    def check(self, n: int):
        if n > self.limit:
            raise UnsupportedError(f"unsupported: CNF exceeds {self.limit} clauses")


def _cnf(node, positive: bool, budget: _Budget) -> list[list[Atom]]:
    kind = node[0]
    if kind == "const":
        return [] if node[1] == positive else [[]]
    if kind == "atom":
        return [[node[1]]] if positive else [negate_atom(node[1])]
    if kind == "not":
        return _cnf(node[1], not positive, budget)
    conj = (kind == "and") == positive
    parts = [_cnf(c, positive, budget) for c in node[1]]
    if conj:
        out = [cl for part in parts for cl in part]
        budget.check(len(out))
        return out
    acc: list[list[Atom]] = [[]]
    for part in parts:
        budget.check(len(acc) * len(part))
        acc = [a + b for a in acc for b in part]
    return acc


def to_cnf(node, max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> list[list[Atom]]:
    return _cnf(node, True, _Budget(max_clauses))


def script_to_formula(script: Script, max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> Formula:
    clauses: list[list[Atom]] = []
    budget = _Budget(max_clauses)
    for node in script.assertions:
        clauses.extend(_cnf(node, True, budget))
        budget.check(len(clauses))
    return build_formula(script.var_names, clauses)


def parse_smtlib(text: str | bytes, max_clauses: int = DEFAULT_MAX_CNF_CLAUSES) -> Formula:
    """Parse SMT-LIB2 text into a CNF :class:`Formula`."""
    return script_to_formula(parse_script(text), max_clauses)


# -- writer ------------------------------------------------------------------

_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*$")


def symbol(name: str) -> str:
    return name if _SIMPLE_SYMBOL.match(name) else f"|{name}|"


def atom_to_smtlib(atom: Atom, names: Sequence[str]) -> str:
    return f"({atom.rel.value} {polynomial_to_smtlib(atom.poly, names)} 0)"


def formula_to_smtlib(formula: Formula, comment: str | None = None) -> str:
    names = [symbol(n) for n in formula.var_names]
    lines = []
    if comment:
        lines.extend(f"; {c}" for c in comment.splitlines())
    lines.append("(set-logic QF_NRA)")
    lines.extend(f"(declare-fun {n} () Real)" for n in names)
    if formula.trivially_unsat:
        lines.append("(assert false)")
    for clause in formula.clauses:
        parts = [atom_to_smtlib(a, names) for a in clause.atoms]
        body = parts[0] if len(parts) == 1 else "(or " + " ".join(parts) + ")"
        lines.append(f"(assert {body})")
    lines.append("(check-sat)")
    lines.append("(exit)")
    return "\n".join(lines) + "\n"


def model_to_smtlib(formula: Formula, model) -> str:
    defs = [f"  (define-fun {symbol(n)} () Real {rational_to_smtlib(model[i])})"
            for i, n in enumerate(formula.var_names)]
    return "(model\n" + "\n".join(defs) + "\n)" if defs else "(model)"


def parse_model(text: str, formula: Formula) -> list[Fraction]:
    """Read back a model printed by :func:`model_to_smtlib`."""
    index = {n: i for i, n in enumerate(formula.var_names)}
    values: list[Fraction | None] = [None] * formula.num_vars
    tr = _Translator(Script())
    (top,) = read_sexprs(text)
    for d in top.items[1:] if top.items and top[0] == "model" else top.items:
        poly = tr.term(d[4], {})
        values[index[str(d[1])]] = poly.constant_value()
    if any(v is None for v in values):
        raise ValueError("model does not assign every variable")
    return values

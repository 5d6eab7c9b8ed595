"""Quasiequations over the pure lattice signature and their evaluation.

A quasiequation ``s₁ = t₁ & … & sₙ = tₙ ⇒ s = t`` holds in a lattice K
when every valuation satisfying all premises satisfies the conclusion.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import NotSI, ParseError, SizeCapExceeded
from .order_core import FiniteLattice, is_subdirectly_irreducible

DEFAULT_VALUATION_CAP = 10 ** 6


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"(meet {self.left} {self.right})"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"(join {self.left} {self.right})"


Term = Union[Var, Meet, Join]


def term_vars(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    return term_vars(t.left) | term_vars(t.right)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"

    def vars(self) -> set:
        return term_vars(self.lhs) | term_vars(self.rhs)


@dataclass(frozen=True)
class Quasiequation:
    variables: tuple
    premises: tuple
    conclusion: Equation

    def __post_init__(self):
        declared = set(self.variables)
        for eq in self.premises + (self.conclusion,):
            missing = eq.vars() - declared
            if missing:
                raise ParseError(f"undeclared variables {sorted(missing)}")

    def __str__(self):
        return " & ".join(map(str, self.premises)) + " => " + str(self.conclusion)


@dataclass(frozen=True)
class TableQuasiequation:
    """``φ_L``: the operation tables of L as premises, a monolith pair as conclusion.

    Variable ``x_i`` stands for element ``i`` of L.
    """

    lattice: FiniteLattice
    pair: tuple

    @property
    def variables(self) -> tuple:
        return tuple(f"x{i}" for i in range(self.lattice.n))

    def premise_count(self) -> int:
        return 2 * self.lattice.n ** 2

    def to_quasiequation(self) -> Quasiequation:
        L = self.lattice
        x = [Var(v) for v in self.variables]
        prem = []
        for a in range(L.n):
            for b in range(L.n):
                prem.append(Equation(Meet(x[a], x[b]), x[L.meet[a, b]]))
        for a in range(L.n):
            for b in range(L.n):
                prem.append(Equation(Join(x[a], x[b]), x[L.join[a, b]]))
        a, b = self.pair
        return Quasiequation(self.variables, tuple(prem), Equation(x[a], x[b]))


def build_phi(L: FiniteLattice) -> TableQuasiequation:
    rep = is_subdirectly_irreducible(L)
    if not rep.si:
        raise NotSI("φ is only defined for subdirectly irreducible lattices")
    return TableQuasiequation(L, rep.monolith_pair)


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class EvalResult:
    holds: bool
    valuation: dict | None = None     # variable -> element index of K

    def __bool__(self):
        return self.holds


def _term_value(t: Term, K: FiniteLattice, val: dict) -> int:
    if isinstance(t, Var):
        return val[t.name]
    a, b = _term_value(t.left, K, val), _term_value(t.right, K, val)
    return int(K.meet[a, b] if isinstance(t, Meet) else K.join[a, b])


def _term_array(t: Term, K: FiniteLattice, cols: dict) -> np.ndarray:
    if isinstance(t, Var):
        return cols[t.name]
    a, b = _term_array(t.left, K, cols), _term_array(t.right, K, cols)
    return (K.meet if isinstance(t, Meet) else K.join)[a, b]


def eval_naive(K: FiniteLattice, q, cap: int = DEFAULT_VALUATION_CAP) -> EvalResult:
    """Scan all ``|K|^|vars|`` valuations (vectorized, in lexicographic order)."""
    if isinstance(q, TableQuasiequation):
        q = q.to_quasiequation()
    names = list(q.variables)
    total = K.n ** len(names)
    if total > cap:
        raise SizeCapExceeded(f"{total} valuations (cap {cap})")
    grid = np.indices([K.n] * len(names)).reshape(len(names), -1) if names else np.zeros((0, 1), int)
    cols = {v: grid[i] for i, v in enumerate(names)}
    ok = np.ones(grid.shape[1], dtype=bool)
    for eq in q.premises:
        ok &= _term_array(eq.lhs, K, cols) == _term_array(eq.rhs, K, cols)
    bad = ok & (_term_array(q.conclusion.lhs, K, cols) != _term_array(q.conclusion.rhs, K, cols))
    hit = np.flatnonzero(bad)
    if len(hit) == 0:
        return EvalResult(True)
    return EvalResult(False, {v: int(cols[v][hit[0]]) for v in names})


def eval_quasiequation(K: FiniteLattice, q) -> EvalResult:
    """Backtracking search for a valuation satisfying the premises but not the conclusion.

    Conclusion variables are assigned first and kept distinct; a premise
    ``op(x, y) = z`` fixes z as soon as x and y are known, so for a table
    quasiequation only lattice homomorphisms are ever explored.
    """
    if isinstance(q, TableQuasiequation):
        q = q.to_quasiequation()
    concl = q.conclusion
    first = _ordered_vars(concl.lhs) + _ordered_vars(concl.rhs)
    order = list(dict.fromkeys(first + list(q.variables)))
    forcing = {}        # var -> list of (op, x, y) with op(x, y) = var
    checks = []
    for eq in q.premises:
        for lhs, rhs in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
            if isinstance(rhs, Var) and not isinstance(lhs, Var) \
                    and isinstance(lhs.left, Var) and isinstance(lhs.right, Var):
                forcing.setdefault(rhs.name, []).append(
                    (K.meet if isinstance(lhs, Meet) else K.join, lhs.left.name, lhs.right.name))
                break
        checks.append(eq)
    watch = {}
    for eq in checks:
        for v in eq.vars():
            watch.setdefault(v, []).append(eq)
    by_operand = {}
    for z, rules in forcing.items():
        for table, x, y in rules:
            by_operand.setdefault(x, []).append((table, x, y, z))
            by_operand.setdefault(y, []).append((table, x, y, z))

    val: dict = {}

    def consistent(v) -> bool:
        for eq in watch.get(v, ()):
            if eq.vars() <= val.keys() and _term_value(eq.lhs, K, val) != _term_value(eq.rhs, K, val):
                return False
        if concl.vars() <= val.keys() and v in concl.vars():
            if _term_value(concl.lhs, K, val) == _term_value(concl.rhs, K, val):
                return False
        return True

    def assign(v, x, trail) -> bool:
        """Set v = x and propagate forced values; record new keys in trail."""
        stack = [(v, x)]
        while stack:
            u, y = stack.pop()
            if u in val:
                if val[u] != y:
                    return False
                continue
            val[u] = y
            trail.append(u)
            if not consistent(u):
                return False
            for table, a, b, z in by_operand.get(u, ()):
                if a in val and b in val:
                    stack.append((z, int(table[val[a], val[b]])))
        return True

    def search(k) -> bool:
        while k < len(order) and order[k] in val:
            k += 1
        if k == len(order):
            return True
        v = order[k]
        for x in range(K.n):
            trail = []
            if assign(v, x, trail) and search(k + 1):
                return True
            for u in trail:
                del val[u]
        return False

    if search(0):
        return EvalResult(False, {v: val[v] for v in q.variables})
    return EvalResult(True)


def _ordered_vars(t: Term) -> list:
    if isinstance(t, Var):
        return [t.name]
    return _ordered_vars(t.left) + _ordered_vars(t.right)


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\(|\)|[^\s()=]+|=")


def parse_term(text: str, line: int | None = None) -> Term:
    tokens = _TOKEN.findall(text)
    term, rest = _parse(tokens, line)
    if rest:
        raise ParseError(f"trailing tokens {rest!r}", line)
    return term


def _parse(tokens: Sequence[str], line):
    if not tokens:
        raise ParseError("unexpected end of term", line)
    head, rest = tokens[0], list(tokens[1:])
    if head == "(":
        if not rest or rest[0] not in ("meet", "join"):
            raise ParseError("expected 'meet' or 'join' after '('", line)
        op = rest.pop(0)
        left, rest = _parse(rest, line)
        right, rest = _parse(rest, line)
        if not rest or rest[0] != ")":
            raise ParseError("expected ')'", line)
        return (Meet if op == "meet" else Join)(left, right), rest[1:]
    if head in (")", "=", "meet", "join"):
        raise ParseError(f"unexpected token {head!r}", line)
    return Var(head), rest


def parse_equation(text: str, line: int | None = None) -> Equation:
    if text.count("=") != 1:
        raise ParseError("an equation needs exactly one '='", line)
    lhs, rhs = text.split("=")
    return Equation(parse_term(lhs, line), parse_term(rhs, line))

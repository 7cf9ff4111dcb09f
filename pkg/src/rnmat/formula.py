"""Propositional formulas over the signature {~, &, |, ->}.

The hierarchy's derived operators (powers ``a^k``, bounded powers ``a^(k)``,
the consistency circle, and strong negation ``!a``) are expanded into the
base signature at construction time, so every downstream component works
with plain ASTs only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from rnmat.errors import FormulaSyntaxError

__all__ = [
    "Var", "Neg", "And", "Or", "Imp", "Formula",
    "parse", "to_text", "substitute", "subformulas", "variables",
    "power", "bounded_power", "circle", "strong_neg",
    "contradiction_operand", "circle_operand", "tower_split",
    "subformula_closure", "node_count",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


Formula = Union[Var, Neg, And, Or, Imp]

_BINOPS = (And, Or, Imp)


def node_count(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 1
    if isinstance(phi, Neg):
        return 1 + node_count(phi.body)
    return 1 + node_count(phi.left) + node_count(phi.right)


# ---------------------------------------------------------------------------
# Derived operators
# ---------------------------------------------------------------------------

def power(phi: Formula, k: int) -> Formula:
    """k-fold consistency power: a^0 = a, a^(k+1) = ~(a^k & ~(a^k))."""
    if k < 0:
        raise ValueError("power index must be non-negative")
    out = phi
    for _ in range(k):
        out = Neg(And(out, Neg(out)))
    return out


def bounded_power(phi: Formula, k: int) -> Formula:
    """a^(0) = a, a^(1) = a^1, a^(k+1) = a^(k) & a^{k+1}."""
    if k < 0:
        raise ValueError("bounded power index must be non-negative")
    if k == 0:
        return phi
    out = power(phi, 1)
    for j in range(2, k + 1):
        out = And(out, power(phi, j))
    return out


def circle(phi: Formula) -> Formula:
    """The consistency operator: a° is an abbreviation of a^1."""
    return power(phi, 1)


def strong_neg(phi: Formula, n: int) -> Formula:
    """Classical negation definable inside the n-th calculus: ~a & a^(n)."""
    if n < 1:
        raise ValueError("hierarchy index must be >= 1")
    return And(Neg(phi), bounded_power(phi, n))


# ---------------------------------------------------------------------------
# Shape recognizers
# ---------------------------------------------------------------------------

def contradiction_operand(phi: Formula) -> Optional[Formula]:
    """Return d when phi has the literal shape d & ~d, else None."""
    if isinstance(phi, And) and isinstance(phi.right, Neg) and phi.right.body == phi.left:
        return phi.left
    return None


def circle_operand(phi: Formula) -> Optional[Formula]:
    """Return d when phi has the literal shape ~(d & ~d) (that is, d^1)."""
    if isinstance(phi, Neg):
        return contradiction_operand(phi.body)
    return None


def tower_split(phi: Formula) -> tuple[Formula, int]:
    """Peel consistency powers: the unique (base, k) with phi = base^k, k maximal."""
    k = 0
    while True:
        base = circle_operand(phi)
        if base is None:
            return phi, k
        phi = base
        k += 1


# ---------------------------------------------------------------------------
# Traversals
# ---------------------------------------------------------------------------

def subformulas(phi: Formula) -> set[Formula]:
    """All subformulas of phi, including phi itself."""
    seen: set[Formula] = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        if isinstance(f, Neg):
            stack.append(f.body)
        elif isinstance(f, _BINOPS):
            stack.append(f.left)
            stack.append(f.right)
    return seen


def variables(phi: Formula) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Var)}


def substitute(phi: Formula, sigma: Mapping[Var, Formula]) -> Formula:
    """Homomorphic replacement of variables; unmapped variables are fixed."""
    if isinstance(phi, Var):
        return sigma.get(phi, phi)
    if isinstance(phi, Neg):
        return Neg(substitute(phi.body, sigma))
    return type(phi)(substitute(phi.left, sigma), substitute(phi.right, sigma))


def subformula_closure(gamma: Iterable[Formula], n: int) -> list[Formula]:
    """Subformula closure of gamma plus the n-th power of each subformula.

    The result is ordered so that every member appears after all of its
    proper subformulas (smaller node count first, printed form as the
    tie-break), which makes the list directly usable as an assignment
    order for valuation tables.  Since a^n syntactically contains every
    a^j, ~(a^j) and a^j & ~(a^j) with j < n, the restriction clauses of
    the admissible-valuation set always find their referents here.
    """
    if n < 1:
        raise ValueError("hierarchy index must be >= 1")
    base: set[Formula] = set()
    for f in gamma:
        base |= subformulas(f)
    full = set(base)
    for f in base:
        full |= subformulas(power(f, n))
    return sorted(full, key=lambda f: (node_count(f), to_text(f)))


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}


def _print(phi: Formula, parent_prec: int, is_right: bool) -> str:
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Neg):
        return "~" + _print(phi.body, 4, False)
    prec = _PREC[type(phi)]
    if isinstance(phi, Imp):
        text = f"{_print(phi.left, prec, False)} -> {_print(phi.right, prec - 1, True)}"
    else:
        op = "&" if isinstance(phi, And) else "|"
        text = f"{_print(phi.left, prec - 1, False)} {op} {_print(phi.right, prec, True)}"
    # right-associative ->: a parenthesized left child; left-associative & |:
    # a parenthesized right child of the same operator.
    if prec < parent_prec or (prec == parent_prec and is_right == isinstance(phi, Imp)):
        return f"({text})"
    return text


def to_text(phi: Formula) -> str:
    """Render with minimal parentheses; parse(to_text(phi), n) == phi."""
    return _print(phi, 0, False)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)"
    r"|(?P<arrow>->|→)"
    r"|(?P<neg>[~¬])"
    r"|(?P<bang>!)"
    r"|(?P<and>[&∧])"
    r"|(?P<or>[|∨])"
    r"|(?P<caret>\^)"
    r"|(?P<int>\d+)"
    r"|(?P<lpar>\()"
    r"|(?P<rpar>\)))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            offset = len(text) - len(stripped)
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", offset)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n = n

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind):
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        phi = self.imp()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"trailing input {tok[1]!r}", tok[2])
        return phi

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "arrow":
            self.take("arrow")
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[0] == "or":
            self.take("or")
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek()[0] == "and":
            self.take("and")
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        if tok[0] == "neg":
            self.take("neg")
            return Neg(self.unary())
        if tok[0] == "bang":
            self.take("bang")
            return strong_neg(self.unary(), self.n)
        return self.postfix()

    def postfix(self) -> Formula:
        out = self.atom()
        while self.peek()[0] == "caret":
            self.take("caret")
            if self.peek()[0] == "lpar":
                self.take("lpar")
                k = int(self.take("int")[1])
                self.take("rpar")
                out = bounded_power(out, k)
            else:
                tok = self.peek()
                if tok[0] != "int":
                    raise FormulaSyntaxError("power index must be a non-negative integer", tok[2])
                self.take("int")
                out = power(out, int(tok[1]))
        return out

    def atom(self) -> Formula:
        tok = self.peek()
        if tok[0] == "ident":
            self.take("ident")
            return Var(tok[1])
        if tok[0] == "lpar":
            self.take("lpar")
            phi = self.imp()
            self.take("rpar")
            return phi
        raise FormulaSyntaxError(f"expected a formula, found {tok[1]!r}", tok[2])


def parse(text: str, n: int = 1) -> Formula:
    """Parse ASCII or UTF-8 connective syntax into a fully expanded AST.

    ``n`` is the hierarchy index used to expand the strong-negation
    prefix ``!``; formulas without ``!`` parse identically for every n.
    """
    return _Parser(text, n).parse()

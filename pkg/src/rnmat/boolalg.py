"""Finite Boolean algebras as powersets of a named atom set.

Every finite non-trivial Boolean algebra is isomorphic to the powerset of
its atoms, so this normal form is the only representation used anywhere.
Elements are bitmasks over the atom list; homomorphisms are represented
contravariantly by a total map from the atoms of the codomain to the atoms
of the domain, which makes them canonical and exhaustively enumerable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from string import ascii_lowercase
from typing import Iterable, Sequence

from rnmat.errors import AlgebraMismatchError, ElementSyntaxError

__all__ = [
    "MAX_ATOMS", "FiniteBooleanAlgebra", "Element", "BooleanHom", "Subalgebra",
    "meet", "join", "imp", "compl", "order", "apply_hom", "enumerate_homs",
    "parse_algebra", "parse_element",
]

#: Hard cap on the atom count; snapshot spaces grow as (n+2)^m.
MAX_ATOMS = 16


class FiniteBooleanAlgebra:
    """Powerset algebra over m >= 1 named atoms (non-trivial by construction)."""

    __slots__ = ("atom_names", "m", "full", "_atom_index")

    def __init__(self, atoms: Sequence[str] | int):
        if isinstance(atoms, int):
            atoms = _auto_names(atoms)
        names = tuple(atoms)
        if len(names) < 1:
            raise ValueError("a non-trivial Boolean algebra needs at least one atom")
        if len(names) > MAX_ATOMS:
            raise ValueError(f"atom count {len(names)} exceeds the cap of {MAX_ATOMS}")
        if len(set(names)) != len(names):
            raise ValueError("atom names must be distinct")
        self.atom_names = names
        self.m = len(names)
        self.full = (1 << self.m) - 1
        self._atom_index = {a: i for i, a in enumerate(names)}

    def __repr__(self):
        return f"P({','.join(self.atom_names)})"

    def __eq__(self, other):
        return isinstance(other, FiniteBooleanAlgebra) and self.atom_names == other.atom_names

    def __hash__(self):
        return hash(self.atom_names)

    def element(self, atoms: Iterable[str] | int) -> "Element":
        """Element from a bitmask or an iterable of atom names."""
        if isinstance(atoms, int):
            if not 0 <= atoms <= self.full:
                raise ValueError(f"mask {atoms} out of range for {self!r}")
            return Element(self, atoms)
        mask = 0
        for a in atoms:
            try:
                mask |= 1 << self._atom_index[a]
            except KeyError:
                raise ElementSyntaxError(f"unknown atom {a!r} in {self!r}") from None
        return Element(self, mask)

    @property
    def bottom(self) -> "Element":
        return Element(self, 0)

    @property
    def top(self) -> "Element":
        return Element(self, self.full)

    def atom(self, name: str) -> "Element":
        return self.element([name])

    def elements(self) -> list["Element"]:
        """All 2^m elements, in mask order."""
        return [Element(self, mask) for mask in range(self.full + 1)]

    def __len__(self):
        return self.full + 1


def _auto_names(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(ascii_lowercase[:m])
    return tuple(f"a{i}" for i in range(m))


# the canonical two-element algebra 0 < 1
B2 = FiniteBooleanAlgebra(["a"])


@dataclass(frozen=True)
class Element:
    """One subset of the atoms of its algebra, stored as a bitmask."""

    algebra: FiniteBooleanAlgebra
    mask: int

    def _check(self, other: "Element") -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatchError(
                f"elements of {self.algebra!r} and {other.algebra!r} cannot be combined"
            )

    def __and__(self, other):
        self._check(other)
        return Element(self.algebra, self.mask & other.mask)

    def __or__(self, other):
        self._check(other)
        return Element(self.algebra, self.mask | other.mask)

    def __invert__(self):
        return Element(self.algebra, self.algebra.full ^ self.mask)

    def imp(self, other):
        self._check(other)
        return Element(self.algebra, (self.algebra.full ^ self.mask) | other.mask)

    def __le__(self, other):
        self._check(other)
        return self.mask & other.mask == self.mask

    @property
    def atoms(self) -> frozenset[str]:
        return frozenset(
            a for i, a in enumerate(self.algebra.atom_names) if self.mask >> i & 1
        )

    def order(self) -> int:
        """Number of atoms below this element."""
        return bin(self.mask).count("1")

    def __repr__(self):
        if self.mask == 0:
            return "0"
        if self.mask == self.algebra.full:
            return "1"
        names = [a for i, a in enumerate(self.algebra.atom_names) if self.mask >> i & 1]
        return "{" + ",".join(names) + "}"


def meet(x: Element, y: Element) -> Element:
    return x & y


def join(x: Element, y: Element) -> Element:
    return x | y


def imp(x: Element, y: Element) -> Element:
    return x.imp(y)


def compl(x: Element) -> Element:
    return ~x


def order(x: Element) -> int:
    return x.order()


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BooleanHom:
    """Homomorphism source -> target, given by a map atoms(target) -> atoms(source).

    The induced element map sends A to the set of target atoms whose image
    lies in A; for powerset algebras every homomorphism arises this way.
    """

    source: FiniteBooleanAlgebra
    target: FiniteBooleanAlgebra
    atom_map: tuple[str, ...]  # entry i: source atom assigned to target atom i

    def __post_init__(self):
        if len(self.atom_map) != self.target.m:
            raise ValueError("atom_map must cover every atom of the target")
        for a in self.atom_map:
            if a not in self.source._atom_index:
                raise ValueError(f"{a!r} is not an atom of {self.source!r}")

    @classmethod
    def from_dict(cls, source, target, mapping: dict) -> "BooleanHom":
        return cls(source, target, tuple(mapping[a] for a in target.atom_names))

    @classmethod
    def identity(cls, algebra: FiniteBooleanAlgebra) -> "BooleanHom":
        return cls(algebra, algebra, algebra.atom_names)

    def apply_mask(self, mask: int) -> int:
        out = 0
        src_index = self.source._atom_index
        for i, a in enumerate(self.atom_map):
            if mask >> src_index[a] & 1:
                out |= 1 << i
        return out

    def __call__(self, x: Element) -> Element:
        return apply_hom(self, x)

    def compose(self, inner: "BooleanHom") -> "BooleanHom":
        """self o inner (inner applied first)."""
        if inner.target != self.source:
            raise AlgebraMismatchError("homomorphisms do not compose")
        return BooleanHom(
            inner.source,
            self.target,
            tuple(inner.atom_map[inner.target._atom_index[a]] for a in self.atom_map),
        )

    def is_identity(self) -> bool:
        return self.source == self.target and self.atom_map == self.source.atom_names


def apply_hom(f: BooleanHom, x: Element) -> Element:
    if x.algebra != f.source:
        raise AlgebraMismatchError(f"{x!r} is not in the source of {f!r}")
    return Element(f.target, f.apply_mask(x.mask))


def enumerate_homs(source: FiniteBooleanAlgebra, target: FiniteBooleanAlgebra) -> list[BooleanHom]:
    """All m_source^m_target homomorphisms source -> target."""
    return [
        BooleanHom(source, target, combo)
        for combo in product(source.atom_names, repeat=target.m)
    ]


# ---------------------------------------------------------------------------
# Subalgebras
# ---------------------------------------------------------------------------

class Subalgebra:
    """Subalgebra of a powerset algebra, presented as a partition of its atoms.

    The members are exactly the unions of blocks, so the subalgebra is
    itself a powerset algebra with one atom per block.
    """

    def __init__(self, ambient: FiniteBooleanAlgebra, blocks: Sequence[Iterable[str]]):
        blocks = tuple(frozenset(b) for b in blocks)
        covered: set[str] = set()
        for b in blocks:
            if not b:
                raise ValueError("partition blocks must be nonempty")
            if b & covered:
                raise ValueError("partition blocks must be disjoint")
            covered |= b
        if covered != set(ambient.atom_names):
            raise ValueError("partition must cover every atom of the ambient algebra")
        self.ambient = ambient
        self.blocks = blocks
        label = lambda b: "".join(sorted(b))
        self.algebra = FiniteBooleanAlgebra([label(b) for b in blocks])
        self._block_of = {a: label(b) for b in blocks for a in b}

    def inclusion_hom(self) -> BooleanHom:
        """The embedding of the block algebra into the ambient one."""
        return BooleanHom(
            self.algebra,
            self.ambient,
            tuple(self._block_of[a] for a in self.ambient.atom_names),
        )

    def members(self) -> set[Element]:
        """The block-union elements, as elements of the ambient algebra."""
        inc = self.inclusion_hom()
        return {apply_hom(inc, x) for x in self.algebra.elements()}


# ---------------------------------------------------------------------------
# Literals
# ---------------------------------------------------------------------------

_ALG_RE = re.compile(r"^P\((.*)\)$")


def parse_algebra(text: str) -> FiniteBooleanAlgebra:
    """Algebra literal: ``P(3)`` (auto-named atoms) or ``P(a,b,c)``."""
    text = text.strip()
    if text in ("B2", "B_2", "2"):
        return B2
    m = _ALG_RE.match(text)
    if m is None:
        raise ElementSyntaxError(f"bad algebra literal {text!r}")
    body = m.group(1).strip()
    if re.fullmatch(r"\d+", body):
        return FiniteBooleanAlgebra(int(body))
    atoms = [a.strip() for a in body.split(",") if a.strip()]
    if not atoms:
        raise ElementSyntaxError(f"bad algebra literal {text!r}")
    return FiniteBooleanAlgebra(atoms)


def parse_element(algebra: FiniteBooleanAlgebra, text: str) -> Element:
    """Element literal: ``{a,b}``, ``0`` or ``1``."""
    text = text.strip()
    if text == "0":
        return algebra.bottom
    if text == "1":
        return algebra.top
    if text.startswith("{") and text.endswith("}"):
        body = text[1:-1].strip()
        atoms = [a.strip() for a in body.split(",")] if body else []
        return algebra.element(atoms)
    raise ElementSyntaxError(f"bad element literal {text!r}")

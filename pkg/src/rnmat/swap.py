"""Snapshot carriers and the swap multialgebra for the hierarchy.

A snapshot over an algebra is an (n+1)-tuple whose running meets satisfy
the chain condition; the swap structure equips the carrier with the
non-deterministic connectives, the designated set (first coordinate 1)
and the Boolean set (first two coordinates complementary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from rnmat.boolalg import B2, Element, FiniteBooleanAlgebra
from rnmat.errors import AlgebraMismatchError, CarrierCapExceededError

__all__ = [
    "Snapshot", "SwapStructure", "is_snapshot", "enumerate_snapshots",
    "mult_neg", "mult_bin", "census", "verify_census", "CensusRecord",
    "CensusReport", "BINARY_OPS",
]

BINARY_OPS = ("and", "or", "imp")

#: Default cap on materialized carriers; the size is (n+2)^m.
DEFAULT_CARRIER_CAP = 1_000_000


@dataclass(frozen=True)
class Snapshot:
    """An (n+1)-tuple of algebra elements, stored as bitmasks."""

    algebra: FiniteBooleanAlgebra
    masks: tuple[int, ...]

    @property
    def coords(self) -> tuple[Element, ...]:
        return tuple(Element(self.algebra, m) for m in self.masks)

    def first(self) -> Element:
        return Element(self.algebra, self.masks[0])

    def is_designated(self) -> bool:
        return self.masks[0] == self.algebra.full

    def is_boolean(self) -> bool:
        return self.masks[0] & self.masks[1] == 0

    def meet_order(self) -> int:
        out = self.algebra.full
        for m in self.masks:
            out &= m
        return bin(out).count("1")

    def __repr__(self):
        return "(" + ",".join(repr(c) for c in self.coords) + ")"


def _chain_ok(masks: Sequence[int], full: int) -> bool:
    acc = full
    for k in range(len(masks) - 1):
        acc &= masks[k]
        if acc | masks[k + 1] != full:
            return False
    return True


def is_snapshot(algebra: FiniteBooleanAlgebra, n: int, coords: Sequence[Element] | Sequence[int]) -> bool:
    """Whether an (n+1)-tuple satisfies every chain condition of the carrier."""
    if len(coords) != n + 1:
        return False
    masks = [c.mask if isinstance(c, Element) else c for c in coords]
    return _chain_ok(masks, algebra.full)


def enumerate_snapshots(
    algebra: FiniteBooleanAlgebra, n: int, cap: int = DEFAULT_CARRIER_CAP
) -> Iterator[Snapshot]:
    """Yield every snapshot exactly once, in lexicographic coordinate order.

    Tuples are grown coordinate-wise: a legal length-(k+2) prefix is a
    legal length-(k+1) prefix together with a last coordinate that joins
    the running meet to 1.
    """
    if n < 1:
        raise ValueError("hierarchy index must be >= 1")
    total = (n + 2) ** algebra.m
    if total > cap:
        raise CarrierCapExceededError(
            f"carrier has {total} snapshots, exceeding the cap of {cap}"
        )
    full = algebra.full

    def extend(prefix: tuple[int, ...], acc: int, depth: int) -> Iterator[tuple[int, ...]]:
        if depth == n + 1:
            yield prefix
            return
        for mask in range(full + 1):
            if acc | mask == full:
                yield from extend(prefix + (mask,), acc & mask, depth + 1)

    for masks in extend((), full, 0):
        yield Snapshot(algebra, masks)


class SwapStructure:
    """The full swap multialgebra over one algebra at one hierarchy index."""

    def __init__(self, algebra: FiniteBooleanAlgebra, n: int, cap: int = DEFAULT_CARRIER_CAP):
        if n < 1:
            raise ValueError("hierarchy index must be >= 1")
        self.algebra = algebra
        self.n = n
        self.cap = cap
        self._carrier: tuple[Snapshot, ...] | None = None
        self._buckets: dict[int, tuple[Snapshot, ...]] | None = None

    def __repr__(self):
        return f"SwapStructure({self.algebra!r}, n={self.n})"

    # -- constants ---------------------------------------------------------

    @property
    def top(self) -> Snapshot:
        """T_n = (1, 0, 1, ..., 1)."""
        full = self.algebra.full
        return Snapshot(self.algebra, (full, 0) + (full,) * (self.n - 1))

    @property
    def bottom(self) -> Snapshot:
        """F_n = (0, 1, ..., 1)."""
        full = self.algebra.full
        return Snapshot(self.algebra, (0,) + (full,) * self.n)

    def t(self, i: int) -> Snapshot:
        """The inconsistent designated constants; t_i has its 0 at slot i+2."""
        if not 0 <= i <= self.n - 1:
            raise ValueError(f"t index must lie in 0..{self.n - 1}")
        full = self.algebra.full
        masks = [full] * (self.n + 1)
        if i < self.n - 1:
            masks[i + 2] = 0
        return Snapshot(self.algebra, tuple(masks))

    # -- carrier -----------------------------------------------------------

    def carrier(self) -> tuple[Snapshot, ...]:
        if self._carrier is None:
            self._carrier = tuple(enumerate_snapshots(self.algebra, self.n, self.cap))
        return self._carrier

    def buckets(self) -> dict[int, tuple[Snapshot, ...]]:
        """Carrier grouped by first coordinate (the branching unit)."""
        if self._buckets is None:
            groups: dict[int, list[Snapshot]] = {}
            for z in self.carrier():
                groups.setdefault(z.masks[0], []).append(z)
            self._buckets = {k: tuple(v) for k, v in groups.items()}
        return self._buckets

    def contains(self, z: Snapshot) -> bool:
        return (
            z.algebra == self.algebra
            and len(z.masks) == self.n + 1
            and _chain_ok(z.masks, self.algebra.full)
        )

    def designated(self) -> frozenset[Snapshot]:
        return frozenset(z for z in self.carrier() if z.is_designated())

    def booleans(self) -> frozenset[Snapshot]:
        return frozenset(z for z in self.carrier() if z.is_boolean())

    def inconsistents(self) -> frozenset[Snapshot]:
        return frozenset(z for z in self.carrier() if not z.is_boolean())

    def boolean_snapshot(self, mask: int) -> Snapshot:
        """(a, ~a, 1, ..., 1) for the element with the given mask."""
        full = self.algebra.full
        return Snapshot(self.algebra, (mask, full ^ mask) + (full,) * (self.n - 1))

    # -- multioperations ----------------------------------------------------

    def _check_member(self, z: Snapshot) -> None:
        if z.algebra != self.algebra:
            raise AlgebraMismatchError(f"{z!r} lives over {z.algebra!r}, not {self.algebra!r}")
        if not self.contains(z):
            raise ValueError(f"{z!r} is not in the carrier of {self!r}")

    def neg(self, z: Snapshot) -> frozenset[Snapshot]:
        """All w with w1 = z2 and w2 <= z1."""
        self._check_member(z)
        z1, z2 = z.masks[0], z.masks[1]
        return frozenset(
            w for w in self.buckets().get(z2, ()) if w.masks[1] & z1 == w.masks[1]
        )

    def bin(self, op: str, z: Snapshot, w: Snapshot) -> frozenset[Snapshot]:
        """All u with u1 = z1 # w1; restricted to Boolean u when both inputs are Boolean."""
        self._check_member(z)
        self._check_member(w)
        first = apply_op(op, z.masks[0], w.masks[0], self.algebra.full)
        if z.is_boolean() and w.is_boolean():
            return frozenset((self.boolean_snapshot(first),))
        return frozenset(self.buckets().get(first, ()))

    def label(self, z: Snapshot) -> str:
        """Symbolic name over the two-valued algebra; tuple text elsewhere."""
        if self.algebra.m == 1:
            if z == self.top:
                return "T"
            if z == self.bottom:
                return "F"
            for i in range(self.n):
                if z == self.t(i):
                    return f"t{i}"
        return repr(z)


def apply_op(op: str, x: int, y: int, full: int) -> int:
    if op == "and":
        return x & y
    if op == "or":
        return x | y
    if op == "imp":
        return (full ^ x) | y
    raise ValueError(f"unknown connective {op!r}")


def mult_neg(structure: SwapStructure, z: Snapshot) -> frozenset[Snapshot]:
    return structure.neg(z)


def mult_bin(structure: SwapStructure, op: str, z: Snapshot, w: Snapshot) -> frozenset[Snapshot]:
    return structure.bin(op, z, w)


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CensusRecord:
    """Closed-form counts for one carrier."""

    m: int
    n: int
    total: int
    designated: int
    boolean: int
    by_meet_order: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "total": self.total,
            "designated": self.designated,
            "boolean": self.boolean,
            "by_meet_order": list(self.by_meet_order),
        }


@dataclass(frozen=True)
class CensusReport:
    """Closed forms next to exhaustive tallies, with a per-statistic verdict."""

    census: CensusRecord
    enumerated_total: int
    enumerated_designated: int
    enumerated_boolean: int
    enumerated_by_meet_order: tuple[int, ...]

    @property
    def match(self) -> bool:
        c = self.census
        return (
            c.total == self.enumerated_total
            and c.designated == self.enumerated_designated
            and c.boolean == self.enumerated_boolean
            and c.by_meet_order == self.enumerated_by_meet_order
        )

    def comparisons(self) -> list[dict]:
        c = self.census
        rows = [
            {"stat": "total", "closed_form": c.total, "enumerated": self.enumerated_total},
            {"stat": "designated", "closed_form": c.designated, "enumerated": self.enumerated_designated},
            {"stat": "boolean", "closed_form": c.boolean, "enumerated": self.enumerated_boolean},
        ]
        for p, (want, got) in enumerate(zip(c.by_meet_order, self.enumerated_by_meet_order)):
            rows.append({"stat": f"meet_order_{p}", "closed_form": want, "enumerated": got})
        for row in rows:
            row["match"] = row["closed_form"] == row["enumerated"]
        return rows

    def as_dict(self) -> dict:
        out = self.census.as_dict()
        out["enumerated"] = {
            "total": self.enumerated_total,
            "designated": self.enumerated_designated,
            "boolean": self.enumerated_boolean,
            "by_meet_order": list(self.enumerated_by_meet_order),
        }
        out["match"] = self.match
        return out


def census(algebra: FiniteBooleanAlgebra, n: int) -> CensusRecord:
    """Closed-form carrier counts: (n+2)^m total, (n+1)^m designated, 2^m
    Boolean, and C(m,p)(n+1)^(m-p) snapshots whose coordinate meet has
    order p."""
    m = algebra.m
    return CensusRecord(
        m=m,
        n=n,
        total=(n + 2) ** m,
        designated=(n + 1) ** m,
        boolean=2 ** m,
        by_meet_order=tuple(math.comb(m, p) * (n + 1) ** (m - p) for p in range(m + 1)),
    )


def verify_census(
    algebra: FiniteBooleanAlgebra, n: int, cap: int = DEFAULT_CARRIER_CAP
) -> CensusReport:
    """Enumerate the carrier and tally it against the closed forms."""
    rec = census(algebra, n)
    total = designated = boolean = 0
    strata = [0] * (algebra.m + 1)
    for z in enumerate_snapshots(algebra, n, cap):
        total += 1
        if z.is_designated():
            designated += 1
        if z.is_boolean():
            boolean += 1
        strata[z.meet_order()] += 1
    return CensusReport(
        census=rec,
        enumerated_total=total,
        enumerated_designated=designated,
        enumerated_boolean=boolean,
        enumerated_by_meet_order=tuple(strata),
    )


def two_valued_structure(n: int) -> SwapStructure:
    """The swap structure over the two-element algebra."""
    return SwapStructure(B2, n)

"""Algebra-valued valuations and restricted snapshot valuations.

Two finite, closure-relative presentations of the same semantics live
here: element-valued valuations subject to the six value clauses, and
snapshot-valued valuations subject to the homomorphism conditions plus
the three restriction clauses.  The two bridge maps between them, the
derived-coordinate laws, and the nontrivial-valuation generator round
out the module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from rnmat import formula as fm
from rnmat.boolalg import Element, FiniteBooleanAlgebra
from rnmat.errors import ClosureTooSmallError
from rnmat.formula import (
    And, Formula, Imp, Neg, Or, Var,
    circle_operand, contradiction_operand, tower_split,
)
from rnmat.swap import Snapshot, SwapStructure, apply_op

__all__ = [
    "BValuation", "RestrictedValuation", "ClauseViolation", "CoverageGap",
    "CheckReport", "check_bvaluation", "check_restricted",
    "derived_snapshot_laws", "strong_negation_laws",
    "valuation_to_bvaluation", "bvaluation_to_valuation",
    "generate_nontrivial_bvaluation",
    "coord3_mask", "clause2_masks", "consist_first_mask", "lemma_power_masks",
]

_OPS = {And: "and", Or: "or", Imp: "imp"}


# ---------------------------------------------------------------------------
# Derived-coordinate arithmetic on raw mask tuples
# ---------------------------------------------------------------------------

def coord3_mask(masks: tuple[int, ...], full: int) -> int:
    """Value of the first consistency power, read off a snapshot.

    For n >= 2 this is the stored third coordinate; the two-coordinate
    case has no slot for it and the chain collapses it to ~(z1 & z2).
    """
    if len(masks) >= 3:
        return masks[2]
    return full ^ (masks[0] & masks[1])


def clause2_masks(masks: tuple[int, ...], full: int) -> tuple[int, ...]:
    """The snapshot of a^1 forced by the valuation of a (restriction clause)."""
    meet = full
    for m in masks:
        meet &= m
    if len(masks) == 2:
        return (full ^ meet, meet)
    return (masks[2], masks[0] & masks[1]) + masks[3:] + (full ^ meet,)


def consist_first_mask(masks: tuple[int, ...], full: int) -> int:
    """First coordinate of the valuation of a^(n), read off the snapshot of a."""
    acc = full
    for m in masks[2:]:
        acc &= m
    return acc & (full ^ (masks[0] & masks[1]))


def lemma_power_masks(masks: tuple[int, ...], full: int, k: int) -> tuple[int, ...]:
    """Closed form for the snapshot of a^k (1 <= k), independent of iteration."""
    n = len(masks) - 1
    meet = full
    for m in masks:
        meet &= m
    if k == 0:
        return masks
    if k > n:
        return (full, 0) + (full,) * (n - 1)
    if k == n:
        return (full ^ meet, meet) + (full,) * (n - 1)
    head = full
    for m in masks[: k + 1]:
        head &= m
    return (masks[k + 1], head) + masks[k + 2:] + (full ^ meet,) + (full,) * (k - 1)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClauseViolation:
    clause: str
    formula: Formula
    detail: str

    def __repr__(self):
        return f"<{self.clause} at {fm.to_text(self.formula)}: {self.detail}>"


@dataclass(frozen=True)
class CoverageGap:
    clause: str
    formula: Formula
    missing: tuple[Formula, ...]


@dataclass
class CheckReport:
    violations: list[ClauseViolation] = field(default_factory=list)
    gaps: list[CoverageGap] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# Element-valued valuations
# ---------------------------------------------------------------------------

@dataclass
class BValuation:
    """Finite partial valuation into a Boolean algebra, on an explicit closure."""

    algebra: FiniteBooleanAlgebra
    n: int
    assignment: dict[Formula, Element]

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.assignment

    def __getitem__(self, phi: Formula) -> Element:
        return self.assignment[phi]

    def domain(self) -> list[Formula]:
        return sorted(self.assignment, key=lambda f: (fm.node_count(f), fm.to_text(f)))

    def value(self, phi: Formula) -> Optional[Element]:
        return self.assignment.get(phi)


def _bp_value(v: BValuation, phi: Formula) -> tuple[Optional[Element], list[Formula]]:
    """b(phi^(n)) as the meet of the tower values; returns (value, missing)."""
    missing = []
    acc = v.algebra.top
    for j in range(1, v.n + 1):
        ref = fm.power(phi, j)
        got = v.value(ref)
        if got is None:
            missing.append(ref)
        else:
            acc = acc & got
    return (None, missing) if missing else (acc, [])


def check_bvaluation(v: BValuation) -> CheckReport:
    """Check every value-clause instance whose referents the closure contains.

    Missing referents are coverage gaps, not violations.
    """
    report = CheckReport()
    b = v.assignment
    top = v.algebra.top

    def violate(clause, phi, detail):
        report.violations.append(ClauseViolation(clause, phi, detail))

    for phi in v.domain():
        val = b[phi]
        if isinstance(phi, (And, Or, Imp)):
            left, right = b.get(phi.left), b.get(phi.right)
            if left is None or right is None:
                report.gaps.append(CoverageGap("V1", phi, tuple(
                    f for f in (phi.left, phi.right) if f not in b)))
            else:
                want = Element(v.algebra, apply_op(_OPS[type(phi)], left.mask, right.mask, v.algebra.full))
                if val != want:
                    violate("V1", phi, f"got {val!r}, connective gives {want!r}")
            lv, lm = _bp_value(v, phi.left)
            rv, rm = _bp_value(v, phi.right)
            sv, sm = _bp_value(v, phi)
            if lm or rm or sm:
                report.gaps.append(CoverageGap("V6", phi, tuple(lm + rm + sm)))
            elif not (lv & rv) <= sv:
                violate("V6", phi, f"{lv & rv!r} not below {sv!r}")
        elif isinstance(phi, Neg):
            body = b.get(phi.body)
            if body is None:
                report.gaps.append(CoverageGap("V2", phi, (phi.body,)))
            elif (body | val) != top:
                violate("V2", phi, f"{body!r} join {val!r} is not 1")
            if isinstance(phi.body, Neg):
                inner = b.get(phi.body.body)
                if inner is None:
                    report.gaps.append(CoverageGap("V3", phi, (phi.body.body,)))
                elif not val <= inner:
                    violate("V3", phi, f"{val!r} not below {inner!r}")
            delta = circle_operand(phi.body)
            if delta is not None:
                d, nd = b.get(delta), b.get(Neg(delta))
                if d is None or nd is None:
                    report.gaps.append(CoverageGap("V5", phi, tuple(
                        f for f in (delta, Neg(delta)) if f not in b)))
                elif val != d & nd:
                    violate("V5", phi, f"got {val!r}, want {d & nd!r}")
            base, depth = tower_split(phi)
            if depth >= v.n:
                prev = fm.power(base, depth - 1)
                pv, pnv = b.get(prev), b.get(Neg(prev))
                if pv is None or pnv is None:
                    report.gaps.append(CoverageGap("V4", phi, tuple(
                        f for f in (prev, Neg(prev)) if f not in b)))
                elif val != ~(pv & pnv):
                    violate("V4", phi, f"got {val!r}, want {~(pv & pnv)!r}")
    return report


# ---------------------------------------------------------------------------
# Snapshot-valued valuations
# ---------------------------------------------------------------------------

@dataclass
class RestrictedValuation:
    """Finite partial snapshot valuation on an explicit closure."""

    structure: SwapStructure
    assignment: dict[Formula, Snapshot]

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.assignment

    def __getitem__(self, phi: Formula) -> Snapshot:
        return self.assignment[phi]

    def domain(self) -> list[Formula]:
        return sorted(self.assignment, key=lambda f: (fm.node_count(f), fm.to_text(f)))

    def value(self, phi: Formula) -> Optional[Snapshot]:
        return self.assignment.get(phi)

    def designates(self, phi: Formula) -> bool:
        return self.assignment[phi].is_designated()

    def dump(self) -> list[dict]:
        """JSON-ready listing: formula text with element literals."""
        return [
            {"formula": fm.to_text(phi), "snapshot": [repr(c) for c in self[phi].coords]}
            for phi in self.domain()
        ]


def check_restricted(nu: RestrictedValuation) -> CheckReport:
    """Closure-relative check of the homomorphism conditions and the three
    restriction clauses; coordinates of compounds whose referents are
    absent are left unconstrained (reported as gaps)."""
    report = CheckReport()
    s = nu.structure
    full = s.algebra.full
    a = nu.assignment

    def violate(clause, phi, detail):
        report.violations.append(ClauseViolation(clause, phi, detail))

    for phi in nu.domain():
        z = a[phi]
        if not s.contains(z):
            violate("carrier", phi, f"{z!r} fails a chain condition")
            continue
        if isinstance(phi, Neg):
            body = a.get(phi.body)
            if body is None:
                report.gaps.append(CoverageGap("hom", phi, (phi.body,)))
            else:
                if z.masks[0] != body.masks[1] or z.masks[1] & body.masks[0] != z.masks[1]:
                    violate("hom", phi, "negation image leaves the multioperation output")
            delta = circle_operand(phi)
            if delta is not None:
                dz = a.get(delta)
                if dz is None:
                    report.gaps.append(CoverageGap("clause2", phi, (delta,)))
                elif z.masks != clause2_masks(dz.masks, full):
                    violate("clause2", phi, f"got {z!r}, clause forces "
                            f"{Snapshot(s.algebra, clause2_masks(dz.masks, full))!r}")
        elif isinstance(phi, (And, Or, Imp)):
            lz, rz = a.get(phi.left), a.get(phi.right)
            if lz is None or rz is None:
                report.gaps.append(CoverageGap("hom", phi, tuple(
                    f for f in (phi.left, phi.right) if f not in a)))
            else:
                want = apply_op(_OPS[type(phi)], lz.masks[0], rz.masks[0], full)
                if z.masks[0] != want:
                    violate("hom", phi, "first coordinate breaks the connective law")
                if lz.is_boolean() and rz.is_boolean() and not z.is_boolean():
                    violate("hom", phi, "Boolean arguments force a Boolean value")
                ca = consist_first_mask(lz.masks, full)
                cb = consist_first_mask(rz.masks, full)
                cc = consist_first_mask(z.masks, full)
                if ca & cb & (full ^ cc):
                    violate("clause3", phi, "consistency does not propagate")
            delta = contradiction_operand(phi)
            if delta is not None:
                dz = a.get(delta)
                if dz is None:
                    report.gaps.append(CoverageGap("clause1", phi, (delta,)))
                elif z.masks[1] != coord3_mask(dz.masks, full):
                    violate("clause1", phi, "second coordinate must echo the "
                            "operand's consistency value")
    return report


def derived_snapshot_laws(nu: RestrictedValuation, alpha: Formula) -> dict:
    """Recompute the tower snapshots of alpha by the closed form and compare
    them with the stored assignment; also report the bounded-power first
    coordinate."""
    s = nu.structure
    full = s.algebra.full
    z = nu[alpha]
    rows = []
    for k in range(1, s.n + 1):
        ref = fm.power(alpha, k)
        expected = Snapshot(s.algebra, lemma_power_masks(z.masks, full, k))
        stored = nu.value(ref)
        rows.append({
            "k": k,
            "expected": expected,
            "stored": stored,
            "match": stored is None or stored == expected,
        })
    return {
        "alpha": alpha,
        "towers": rows,
        "bounded_power_first": Element(s.algebra, consist_first_mask(z.masks, full)),
        "ok": all(r["match"] for r in rows),
    }


def strong_negation_laws(nu: RestrictedValuation, alpha: Formula) -> dict:
    """Evaluate a & !a and a | !a in the closure and test the two laws:
    the conjunction is the falsum snapshot, the disjunction is designated."""
    s = nu.structure
    sn = fm.strong_neg(alpha, s.n)
    conj, disj = And(alpha, sn), Or(alpha, sn)
    if conj not in nu or disj not in nu:
        raise ClosureTooSmallError(
            f"closure lacks {fm.to_text(conj)} or {fm.to_text(disj)}"
        )
    return {
        "conjunction": nu[conj],
        "disjunction": nu[disj],
        "conjunction_is_falsum": nu[conj] == s.bottom,
        "disjunction_designated": nu[disj].is_designated(),
    }


# ---------------------------------------------------------------------------
# Bridges
# ---------------------------------------------------------------------------

def valuation_to_bvaluation(nu: RestrictedValuation) -> BValuation:
    """First-coordinate projection; designation becomes value 1."""
    return BValuation(
        algebra=nu.structure.algebra,
        n=nu.structure.n,
        assignment={phi: z.first() for phi, z in nu.assignment.items()},
    )


def bvaluation_to_valuation(
    b: BValuation, domain: Optional[Iterable[Formula]] = None
) -> RestrictedValuation:
    """Assemble snapshots (b(a), b(~a), b(a^1), ..., b(a^(n-1))) over every
    formula whose referents the closure supplies, either directly or by
    iterating the forced consistency-power transform.

    An explicitly requested formula that cannot be covered raises
    ``ClosureTooSmallError``; without an explicit domain such formulas
    are silently left out.
    """
    s = SwapStructure(b.algebra, b.n)
    full = b.algebra.full
    explicit = domain is not None
    want = list(domain) if explicit else list(b.assignment)
    want.sort(key=lambda f: (fm.node_count(f), fm.to_text(f)))
    out: dict[Formula, Snapshot] = {}
    for phi in want:
        refs = [phi, Neg(phi)] + [fm.power(phi, j) for j in range(1, b.n)]
        if all(r in b for r in refs):
            out[phi] = Snapshot(b.algebra, tuple(b[r].mask for r in refs))
            continue
        delta = circle_operand(phi)
        if delta is not None and delta in out:
            out[phi] = Snapshot(b.algebra, clause2_masks(out[delta].masks, full))
            continue
        if explicit:
            raise ClosureTooSmallError(
                f"cannot assemble a snapshot for {fm.to_text(phi)}"
            )
    return RestrictedValuation(structure=s, assignment=out)


# ---------------------------------------------------------------------------
# Nontrivial valuations
# ---------------------------------------------------------------------------

def _as_var(key) -> Var:
    return key if isinstance(key, Var) else Var(key)


def generate_nontrivial_bvaluation(
    algebra: FiniteBooleanAlgebra,
    n: int,
    seed_assignment: Mapping,
    seed_neg: Mapping,
    formulas: Iterable[Formula],
) -> BValuation:
    """Extend variable seeds to a full valuation on the closure of ``formulas``.

    Binary values follow the connective clause; every non-variable negation
    takes the complement of its operand, the default witness that makes all
    of the consistency side-conditions hold.  Seeding b(~p) away from the
    complement of b(p) produces genuinely paraconsistent points; the seeds
    only need to join to 1.
    """
    seeds = {_as_var(k): v for k, v in seed_assignment.items()}
    neg_seeds = {_as_var(k): v for k, v in seed_neg.items()}
    top = algebra.top
    for p, nv in neg_seeds.items():
        pv = seeds.get(p, top)
        if (pv | nv) != top:
            raise ValueError(
                f"seed for ~{p.name} must join b({p.name}) to 1; "
                f"got {pv!r} and {nv!r}"
            )
    closure = fm.subformula_closure(formulas, n)
    b: dict[Formula, Element] = {}
    for phi in closure:
        if isinstance(phi, Var):
            b[phi] = seeds.get(phi, top)
        elif isinstance(phi, Neg):
            if isinstance(phi.body, Var):
                b[phi] = neg_seeds.get(phi.body, ~b[phi.body])
            else:
                b[phi] = ~b[phi.body]
        else:
            b[phi] = Element(algebra, apply_op(
                _OPS[type(phi)], b[phi.left].mask, b[phi.right].mask, algebra.full))
    return BValuation(algebra=algebra, n=n, assignment=b)

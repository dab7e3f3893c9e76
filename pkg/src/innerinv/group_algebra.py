"""Exact group algebra for the invariant group of a labeled arc sequence.

The group is determined combinatorially: k counts the arcs where solution
grids accumulate on both sides (each contributes a free shift generator),
and d is the order of the subgroup of cyclic arc rotations that match every
arc label.  Elements are pairs (shift vector in Z^k, rotation residue mod d)
with the rotation permuting shift slots.  All arithmetic here is exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .classify import (
    TYPE_0,
    TYPE_1A,
    TYPE_1B,
    TYPE_2,
    SpectrumReport,
)

DEFAULT_LABEL_TOL = 1e-7


def _angular_distance(a: complex, b: complex) -> float:
    return abs(cmath.phase(a * b.conjugate()))


@dataclass(frozen=True)
class IntervalLabel:
    """Matching key of one arc: its type plus whatever data must agree
    for an invariant map to carry one arc onto another.

    limit: the finite-side endpoint value (types 1a / 1b).
    image_key: (solution count, phase span, endpoint values) for type 0.
    """

    itype: str
    limit: complex | None = None
    image_key: tuple | None = None

    def matches(self, other: "IntervalLabel", tol: float = DEFAULT_LABEL_TOL) -> bool:
        if self.itype != other.itype:
            return False
        if self.itype == TYPE_2:
            return True
        if self.itype in (TYPE_1A, TYPE_1B):
            return _angular_distance(self.limit, other.limit) < tol
        count, span, lo, hi = self.image_key
        count2, span2, lo2, hi2 = other.image_key
        return (
            count == count2
            and abs(span - span2) < tol
            and _angular_distance(lo, lo2) < tol
            and _angular_distance(hi, hi2) < tol
        )


@dataclass(frozen=True)
class IntervalLabelSequence:
    """Cyclic label list; n = 0 encodes the no-singularity case and then
    carries the finite degree instead."""

    n: int
    labels: tuple[IntervalLabel, ...]
    degree: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("n must be nonnegative")
        if self.n == 0:
            if self.labels:
                raise DomainError("n = 0 admits no labels")
            if self.degree is None or self.degree < 1:
                raise DomainError("n = 0 requires a finite degree m >= 1")
        elif len(self.labels) != self.n:
            raise DomainError("label count must equal n")


def labels_from_report(report: SpectrumReport) -> IntervalLabelSequence:
    if report.n == 0:
        deg = report.spec.finite_degree
        return IntervalLabelSequence(0, (), degree=deg)
    labels = []
    for rec in report.intervals:
        if rec.itype == TYPE_2:
            labels.append(IntervalLabel(TYPE_2))
        elif rec.itype == TYPE_1A:
            labels.append(IntervalLabel(TYPE_1A, limit=rec.limit_hi.value))
        elif rec.itype == TYPE_1B:
            labels.append(IntervalLabel(TYPE_1B, limit=rec.limit_lo.value))
        else:
            key = (
                len(rec.type0_image),
                rec.phase_span,
                rec.limit_lo.value,
                rec.limit_hi.value,
            )
            labels.append(IntervalLabel(TYPE_0, image_key=key))
    return IntervalLabelSequence(report.n, tuple(labels))


def valid_rotations(
    seq: IntervalLabelSequence, tol: float = DEFAULT_LABEL_TOL
) -> tuple[int, ...]:
    """Residues r with label(j + r) matching label(j) for every j."""
    if seq.n == 0:
        raise DomainError("rotation search needs at least one singularity")
    n, labels = seq.n, seq.labels
    out = []
    for r in range(n):
        if all(labels[(j + r) % n].matches(labels[j], tol) for j in range(n)):
            out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    shift: tuple[int, ...]
    rot: int


@dataclass(frozen=True)
class GroupDescriptor:
    n: int
    k: int
    d: int
    g: int
    type2_indices: tuple[int, ...]
    rho: tuple[int, ...]
    presentation: str
    iso_label: str
    degree: int | None = None

    # -- element construction ------------------------------------------
    def element(self, shift, rot: int = 0) -> GroupElement:
        shift = tuple(int(s) for s in shift)
        if len(shift) != self.k:
            raise DomainError(f"shift vector must have length {self.k}")
        return GroupElement(shift, int(rot) % self.d)

    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.k, 0)

    def shift_generator(self, slot: int) -> GroupElement:
        if not 0 <= slot < self.k:
            raise DomainError(f"no shift generator with slot {slot}")
        vec = [0] * self.k
        vec[slot] = 1
        return GroupElement(tuple(vec), 0)

    def rotation_generator(self) -> GroupElement:
        if self.d == 1:
            raise DomainError("rotation subgroup is trivial")
        return GroupElement((0,) * self.k, 1)


def _apply_perm(rho: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    w = [0] * len(v)
    for i, x in enumerate(v):
        w[rho[i]] = x
    return tuple(w)


def _invert_perm(rho: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(rho)
    for i, x in enumerate(rho):
        inv[x] = i
    return tuple(inv)


def _perm_power(rho: tuple[int, ...], r: int, v: tuple[int, ...]) -> tuple[int, ...]:
    for _ in range(r):
        v = _apply_perm(rho, v)
    return v


def compose(desc: GroupDescriptor, a: GroupElement, b: GroupElement) -> GroupElement:
    """Product a*b, where b acts first (function composition order)."""
    if len(a.shift) != desc.k or len(b.shift) != desc.k:
        raise DomainError("element shift length does not match the group")
    moved = _perm_power(desc.rho, a.rot % desc.d, b.shift)
    shift = tuple(x + y for x, y in zip(a.shift, moved))
    return GroupElement(shift, (a.rot + b.rot) % desc.d)


def inverse(desc: GroupDescriptor, g: GroupElement) -> GroupElement:
    if len(g.shift) != desc.k:
        raise DomainError("element shift length does not match the group")
    r = g.rot % desc.d
    inv_rho = _invert_perm(desc.rho)
    moved = _perm_power(inv_rho, r, g.shift)
    return GroupElement(tuple(-x for x in moved), (-r) % desc.d)


def rotation_part(g: GroupElement) -> int:
    """The arc-rotation residue; additive under compose."""
    return g.rot


def element_order(desc: GroupDescriptor, g: GroupElement):
    """Least m with g^m = identity, or math.inf.

    g^d always has rotation 0, so g has finite order exactly when the
    shift part of g^d vanishes; the order then divides d.
    """
    ident = desc.identity()
    p = ident
    for m in range(1, desc.d + 1):
        p = compose(desc, p, g)
        if p == ident:
            return m
    return math.inf


def _iso_label(k: int, d: int) -> str:
    if k == 0 and d == 1:
        return "trivial"
    if k == 0:
        return f"Z_{d}"
    if d == 1:
        return "Z" if k == 1 else f"Z^{k}"
    return f"Z^{k} ⋊ Z_{d}"


def _render_presentation(k: int, d: int, rho: tuple[int, ...]) -> str:
    gens = [f"x{i + 1}" for i in range(k)]
    if d > 1:
        gens.append("y")
    rels = []
    if d > 1:
        rels.append(f"y^{d}=e")
    for i in range(k):
        for j in range(i + 1, k):
            rels.append(f"x{i + 1}x{j + 1}=x{j + 1}x{i + 1}")
    if d > 1 and k > 0:
        # every rho-cycle has length exactly d, so dropping the last
        # member of each cycle still presents the full action
        seen = set()
        for start in range(k):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = rho[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = rho[nxt]
            for i in cycle[:-1]:
                rels.append(f"y·x{i + 1}=x{rho[i] + 1}·y")
    return f"⟨{','.join(gens)} | {', '.join(rels)}⟩"


def compute_group(
    seq: IntervalLabelSequence, tol: float = DEFAULT_LABEL_TOL
) -> GroupDescriptor:
    if seq.n == 0:
        m = seq.degree
        return GroupDescriptor(
            n=0,
            k=0,
            d=m,
            g=0,
            type2_indices=(),
            rho=(),
            presentation=_render_presentation(0, m, ()),
            iso_label=_iso_label(0, m),
            degree=m,
        )
    n = seq.n
    rots = valid_rotations(seq, tol)
    d = len(rots)
    if n % d != 0 or set(rots) != {i * (n // d) for i in range(d)}:
        raise DomainError("rotation set is not the cyclic subgroup it must be")
    g = n // d if d > 1 else n
    type2 = tuple(j for j, lab in enumerate(seq.labels) if lab.itype == TYPE_2)
    k = len(type2)
    slot_of = {arc: s for s, arc in enumerate(type2)}
    if d > 1:
        for arc in type2:
            if (arc + g) % n not in slot_of:
                raise DomainError("valid rotation does not preserve the shift arcs")
        rho = tuple(slot_of[(arc + g) % n] for arc in type2)
    else:
        rho = tuple(range(k))
    return GroupDescriptor(
        n=n,
        k=k,
        d=d,
        g=g,
        type2_indices=type2,
        rho=rho,
        presentation=_render_presentation(k, d, rho),
        iso_label=_iso_label(k, d),
    )

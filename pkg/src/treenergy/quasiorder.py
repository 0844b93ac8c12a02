"""Coefficient-wise quasi-order on ``phi_tilde`` and its propagation along
subdivision families."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Sequence, Union

from .charpoly import phi_tilde
from .energy import EnergyValue
from .errors import DegreeMismatch, NegativeCoefficient, NotMonic, OrderMismatch
from .graph import Forest, subdivide
from .poly import ExactPoly


class Relation(str, enum.Enum):
    STRICTLY_LESS = "StrictlyLess"
    EQUAL = "Equal"
    STRICTLY_GREATER = "StrictlyGreater"
    INCOMPARABLE = "Incomparable"

    def flipped(self) -> "Relation":
        if self is Relation.STRICTLY_LESS:
            return Relation.STRICTLY_GREATER
        if self is Relation.STRICTLY_GREATER:
            return Relation.STRICTLY_LESS
        return self

    @property
    def symbol(self) -> str:
        return {"StrictlyLess": "<", "Equal": "~", "StrictlyGreater": ">", "Incomparable": "||"}[self.value]


@dataclass(frozen=True)
class QuasiOrderVerdict:
    """``witness`` holds powers of ``x``: one strict index for a strict relation,
    ``(i, j)`` with ``p_i < q_i`` and ``p_j > q_j`` for Incomparable."""

    relation: Relation
    witness: tuple[int, ...] = ()

    def verify(self, p: ExactPoly, q: ExactPoly) -> bool:
        """Re-check the witness and the relation against a fresh scan."""
        if compare(p, q) != self:
            return False
        r = self.relation
        if r is Relation.EQUAL:
            return p == q and not self.witness
        if r is Relation.STRICTLY_LESS:
            (i,) = self.witness
            return p.coeff(i) < q.coeff(i)
        if r is Relation.STRICTLY_GREATER:
            (i,) = self.witness
            return p.coeff(i) > q.coeff(i)
        i, j = self.witness
        return p.coeff(i) < q.coeff(i) and p.coeff(j) > q.coeff(j)

    @property
    def is_le(self) -> bool:
        return self.relation in (Relation.STRICTLY_LESS, Relation.EQUAL)

    @property
    def is_ge(self) -> bool:
        return self.relation in (Relation.STRICTLY_GREATER, Relation.EQUAL)

    def __str__(self) -> str:
        if not self.witness:
            return self.relation.value
        return f"{self.relation.value} (witness x^{', x^'.join(map(str, self.witness))})"

    def to_record(self) -> dict:
        return {"relation": self.relation.value, "witness": list(self.witness)}


def validate_phi_tilde_pair(p: ExactPoly, q: ExactPoly) -> None:
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} vs {q.degree}")
    for poly in (p, q):
        if not poly.is_monic():
            raise NotMonic(f"{poly} is not monic")
        if any(c < 0 for c in poly.coeffs):
            raise NegativeCoefficient(f"{poly} has a negative coefficient")


def compare(p: ExactPoly, q: ExactPoly) -> QuasiOrderVerdict:
    """Compare two ``phi_tilde`` polynomials coefficient by coefficient."""
    validate_phi_tilde_pair(p, q)
    less = greater = None
    for i in range(p.degree + 1):
        a, b = p.coeff(i), q.coeff(i)
        if a < b and less is None:
            less = i
        elif a > b and greater is None:
            greater = i
        if less is not None and greater is not None:
            return QuasiOrderVerdict(Relation.INCOMPARABLE, (less, greater))
    if less is not None:
        return QuasiOrderVerdict(Relation.STRICTLY_LESS, (less,))
    if greater is not None:
        return QuasiOrderVerdict(Relation.STRICTLY_GREATER, (greater,))
    return QuasiOrderVerdict(Relation.EQUAL)


def compare_forests(g: Forest, h: Forest) -> QuasiOrderVerdict:
    if g.n != h.n:
        raise OrderMismatch(f"orders differ: {g.n} vs {h.n}")
    return compare(phi_tilde(g), phi_tilde(h))


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class BaseComparison:
    label: str  # "0", "1" or "0,0" ... "1,1"
    g_poly: ExactPoly
    h_poly: ExactPoly
    verdict: QuasiOrderVerdict

    def to_record(self) -> dict:
        return {"label": self.label, "g": str(self.g_poly), "h": str(self.h_poly), **self.verdict.to_record()}


def _oriented(bases: Sequence[BaseComparison]) -> Relation | None:
    """StrictlyLess if every base is <= with one strict, Equal if all equal,
    StrictlyGreater for the mirror case, None otherwise."""
    rels = {b.verdict.relation for b in bases}
    if rels == {Relation.EQUAL}:
        return Relation.EQUAL
    if rels <= {Relation.EQUAL, Relation.STRICTLY_LESS}:
        return Relation.STRICTLY_LESS
    if rels <= {Relation.EQUAL, Relation.STRICTLY_GREATER}:
        return Relation.STRICTLY_GREATER
    return None


@dataclass(frozen=True)
class FamilyDominanceCertificate:
    """``G(k) <= H(k)`` for every ``k`` (or ``G(l,k) <= H(l,k)`` for every ``l, k``).

    ``relation`` is StrictlyLess or StrictlyGreater for the non-strict family
    relation in that direction with at least one strict base, Equal when every
    base is identical.  Strictness at a given index comes from ``strict_at``.
    """

    kind: str  # "single" or "double"
    relation: Relation
    bases: tuple[BaseComparison, ...]

    def _nonzero(self) -> dict[str, bool]:
        return {b.label: b.verdict.relation is not Relation.EQUAL for b in self.bases}

    def strict_at(self, *index: int) -> bool:
        """Whether ``G(index)`` and ``H(index)`` differ, hence are strictly ordered.

        Differences propagate by ``v_k = x v_{k-1} + v_{k-2}`` with nonnegative
        terms, so an index below 2 reads its base and an index of 2 or more
        combines both bases along that coordinate.
        """
        nz = self._nonzero()
        if self.kind == "single":
            (k,) = index
            cells = [str(k)] if k < 2 else ["0", "1"]
            return any(nz[c] for c in cells)
        l, k = index
        ls = [l] if l < 2 else [0, 1]
        ks = [k] if k < 2 else [0, 1]
        return any(nz[f"{a},{b}"] for a in ls for b in ks)

    @property
    def strict_for_large_index(self) -> bool:
        """Strict whenever the index (or one of the two indices) is at least 2,
        under the row condition each of ``{(0,0),(0,1)}`` and ``{(1,0),(1,1)}``
        holding a strict base."""
        nz = self._nonzero()
        if self.kind == "single":
            return nz["0"] or nz["1"]
        return (nz["0,0"] or nz["0,1"]) and (nz["1,0"] or nz["1,1"])

    def replay(self) -> bool:
        """Recompute every base verdict from the stored polynomials."""
        for b in self.bases:
            if not b.verdict.verify(b.g_poly, b.h_poly):
                return False
        return _oriented(self.bases) is self.relation

    def spot_check(self, g: Forest, e, h: Forest, e2, indices: Sequence) -> bool:
        """Direct construction at the given indices agrees with the certificate."""
        for idx in indices:
            if self.kind == "single":
                gk = subdivide(g, e, idx)
                hk = subdivide(h, e2, idx)
                strict = self.strict_at(idx)
            else:
                (l, k) = idx
                gk = subdivide_two(g, e[0], e[1], l, k)
                hk = subdivide_two(h, e2[0], e2[1], l, k)
                strict = self.strict_at(l, k)
            v = compare(phi_tilde(gk), phi_tilde(hk)).relation
            expected = self.relation if strict else Relation.EQUAL
            if v is not expected:
                return False
        return True

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "relation": self.relation.value,
            "strict_for_large_index": self.strict_for_large_index,
            "bases": [b.to_record() for b in self.bases],
        }

    def to_text(self) -> str:
        lines = [f"certificate {self.kind}", f"relation {self.relation.value}"]
        for b in self.bases:
            w = " ".join(map(str, b.verdict.witness))
            lines.append(f"base {b.label} | {b.g_poly} | {b.h_poly} | {b.verdict.relation.value} | {w}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2)

    @classmethod
    def from_text(cls, text: str) -> "FamilyDominanceCertificate":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        kind = lines[0].split()[1]
        relation = Relation(lines[1].split()[1])
        bases = []
        for ln in lines[2:]:
            _, rest = ln.split(" ", 1)
            label, gp, hp, rel, wit = [s.strip() for s in rest.split("|")]
            verdict = QuasiOrderVerdict(Relation(rel), tuple(int(t) for t in wit.split()))
            bases.append(BaseComparison(label, ExactPoly.from_text(gp), ExactPoly.from_text(hp), verdict))
        return cls(kind, relation, tuple(bases))


@dataclass(frozen=True)
class Inconclusive:
    """The base hypotheses fail; nothing is claimed about the family."""

    reason: str
    bases: tuple[BaseComparison, ...]

    relation = None

    def to_record(self) -> dict:
        return {"kind": "inconclusive", "reason": self.reason, "bases": [b.to_record() for b in self.bases]}

    def to_text(self) -> str:
        lines = ["inconclusive", f"reason {self.reason}"]
        for b in self.bases:
            lines.append(f"base {b.label} | {b.g_poly} | {b.h_poly} | {b.verdict.relation.value}")
        return "\n".join(lines)


FamilyResult = Union[FamilyDominanceCertificate, Inconclusive]


def subdivide_two(g: Forest, e1, e2, a: int, b: int) -> Forest:
    """Subdivide ``e1`` ``a`` times and ``e2`` ``b`` times (labels of ``e2`` survive
    the first subdivision because new vertices are appended)."""
    g.check_edge(e1)
    g.check_edge(e2)
    if tuple(sorted(e1)) == tuple(sorted(e2)):
        raise ValueError("the two cut edges must differ")
    return subdivide(subdivide(g, e1, a), e2, b)


def _conclude(kind: str, bases: tuple[BaseComparison, ...]) -> FamilyResult:
    rel = _oriented(bases)
    if rel is None:
        bad = ", ".join(f"{b.label}:{b.verdict.relation.value}" for b in bases)
        return Inconclusive(f"base relations not uniformly ordered ({bad})", bases)
    return FamilyDominanceCertificate(kind, rel, bases)


def family_compare_single(g: Forest, e, h: Forest, e2) -> FamilyResult:
    if g.n != h.n:
        raise OrderMismatch(f"orders differ: {g.n} vs {h.n}")
    g.check_edge(e)
    h.check_edge(e2)
    bases = []
    for k in (0, 1):
        gp = phi_tilde(subdivide(g, e, k))
        hp = phi_tilde(subdivide(h, e2, k))
        bases.append(BaseComparison(str(k), gp, hp, compare(gp, hp)))
    return _conclude("single", tuple(bases))


def family_compare_double(g: Forest, e1, e2, h: Forest, f1, f2) -> FamilyResult:
    if g.n != h.n:
        raise OrderMismatch(f"orders differ: {g.n} vs {h.n}")
    bases = []
    for a in (0, 1):
        for b in (0, 1):
            gp = phi_tilde(subdivide_two(g, e1, e2, a, b))
            hp = phi_tilde(subdivide_two(h, f1, f2, a, b))
            bases.append(BaseComparison(f"{a},{b}", gp, hp, compare(gp, hp)))
    return _conclude("double", tuple(bases))


def quasiorder_implies_energy(verdict: QuasiOrderVerdict, eG: EnergyValue, eH: EnergyValue) -> bool:
    """Strict quasi-order must give a radius-separated energy order in the same direction."""
    r = verdict.relation
    if r is Relation.STRICTLY_LESS:
        return eG.hi < eH.lo
    if r is Relation.STRICTLY_GREATER:
        return eH.hi < eG.lo
    if r is Relation.EQUAL:
        return eG.overlaps(eH)
    return True

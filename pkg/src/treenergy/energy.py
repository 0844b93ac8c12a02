"""Certified energies, the log-ratio integral for energy differences, and
energy comparison of subdivision families.

Energies are computed from exactly isolated roots: for a forest the positive
eigenvalues are the square roots of the roots of ``q(y)`` where
``phi(G, x) = x^r q(x^2)``.  Floating-point eigenvalues are only used as
starting guesses; every interval is certified by exact sign evaluation and a
root count, otherwise Sturm isolation takes over.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .charpoly import matching_counts, phi_tilde, phi_tilde_from_counts
from .errors import (
    DegreeMismatch,
    NegativeCoefficient,
    NotMonic,
    OrderMismatch,
    QuadratureFailure,
)
from .graph import Forest, subdivide
from .poly import (
    MIXED,
    NEGATIVE_EVERYWHERE,
    POSITIVE_EVERYWHERE,
    ExactPoly,
    SignPiece,
    SignProfile,
    _sign_homogeneous,
    isolate_positive_roots,
    sign_profile_on_positive_axis,
    square_free_decomposition,
)

TWO_OVER_PI = 2.0 / math.pi


def _round_up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class EnergyValue:
    """The true value lies in ``[midpoint - radius, midpoint + radius]``."""

    midpoint: float
    radius: float = 0.0

    @property
    def lo(self) -> float:
        return self.midpoint - self.radius

    @property
    def hi(self) -> float:
        return self.midpoint + self.radius

    def __sub__(self, other: "EnergyValue") -> "EnergyValue":
        mid = self.midpoint - other.midpoint
        slack = abs(mid) * 2.0**-52
        return EnergyValue(mid, _round_up(self.radius + other.radius + slack))

    def __add__(self, other: "EnergyValue") -> "EnergyValue":
        mid = self.midpoint + other.midpoint
        slack = abs(mid) * 2.0**-52
        return EnergyValue(mid, _round_up(self.radius + other.radius + slack))

    def scaled(self, factor: float) -> "EnergyValue":
        mid = self.midpoint * factor
        return EnergyValue(mid, _round_up(self.radius * abs(factor) + abs(mid) * 2.0**-52))

    def positive(self) -> bool:
        """Certainly greater than zero."""
        return self.lo > 0

    def negative(self) -> bool:
        return self.hi < 0

    def overlaps(self, other: "EnergyValue") -> bool:
        return not (self.lo > other.hi or other.lo > self.hi)

    def __str__(self) -> str:
        return f"{self.midpoint:.12f} ± {self.radius:.1e}"

    def to_record(self) -> dict:
        return {"midpoint": self.midpoint, "radius": self.radius}


# ---------------------------------------------------------------------------
# Root-based energies


def _reduced_square_poly(pt: ExactPoly) -> ExactPoly:
    """``q`` with ``phi = x^r q(x^2)`` and ``q(0) != 0``, from ``phi_tilde``."""
    n = pt.degree
    counts = [pt.coeff(n - 2 * i) for i in range(n // 2 + 1)]
    while counts and counts[-1] == 0:
        counts.pop()
    k = len(counts) - 1
    # q(y) = sum (-1)^i m_i y^(k-i)
    return ExactPoly(((-1) ** i) * counts[i] for i in range(k, -1, -1))


class _DyadicRoot:
    """``x in (lo/2^s, hi/2^s)`` with ``f(x^2)`` changing sign across it."""

    __slots__ = ("lo", "hi", "s", "sign_lo")

    def __init__(self, lo: int, hi: int, s: int, sign_lo: int) -> None:
        self.lo, self.hi, self.s, self.sign_lo = lo, hi, s, sign_lo

    def halfwidth(self) -> Fraction:
        return Fraction(self.hi - self.lo, 2 ** (self.s + 1))

    def midpoint(self) -> Fraction:
        return Fraction(self.lo + self.hi, 2 ** (self.s + 1))


def _sign_sq(coeffs: Sequence[int], a: int, s: int) -> int:
    # sign of f((a / 2^s)^2)
    return _sign_homogeneous(coeffs, a * a, 1 << (2 * s))


def _refine_dyadic(coeffs: Sequence[int], r: _DyadicRoot, target: Fraction) -> _DyadicRoot:
    lo, hi, s, slo = r.lo, r.hi, r.s, r.sign_lo
    while Fraction(hi - lo, 2 ** (s + 1)) > target:
        lo, hi, s = 2 * lo, 2 * hi, s + 1
        mid = (lo + hi) // 2
        sm = _sign_sq(coeffs, mid, s)
        if sm == 0:
            return _DyadicRoot(mid, mid, s, slo)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return _DyadicRoot(lo, hi, s, slo)


_SEED_BITS = 36


def _certify_from_hints(f: ExactPoly, hints: Sequence[float]) -> list[_DyadicRoot] | None:
    """Intervals around ``hints`` that provably hold all ``deg f`` roots of ``f(x^2)``."""
    coeffs = f.coeffs
    s = _SEED_BITS
    scale = 2.0**s
    found: list[_DyadicRoot] = []
    last_hi = 0
    for c in hints:
        a = int(round(c * scale))
        lo, hi = a - 1, a + 1
        if lo <= last_hi:
            continue
        slo = _sign_sq(coeffs, lo, s)
        shi = _sign_sq(coeffs, hi, s)
        if slo == 0 or shi == 0:
            return None
        if slo != shi:
            found.append(_DyadicRoot(lo, hi, s, slo))
            last_hi = hi
    # each interval holds an odd number of roots and there are at most deg f
    if len(found) != f.degree:
        return None
    return found


def _isolate_fallback(f: ExactPoly) -> list[_DyadicRoot]:
    out = []
    for iv in isolate_positive_roots(f.compose_square()):
        # shrink to a dyadic bracket we can refine with integer arithmetic
        c = iv.refine(Fraction(1, 2**40))
        s = 60
        if c.radius == 0:
            a = c.mid * 2**s
            if a.denominator == 1:
                out.append(_DyadicRoot(int(a), int(a), s, 0))
                continue
        lo = math.floor(c.lo * 2**s)
        hi = math.ceil(c.hi * 2**s)
        coeffs = f.coeffs
        slo = _sign_sq(coeffs, lo, s)
        shi = _sign_sq(coeffs, hi, s)
        while slo == 0 or shi == 0 or slo == shi:
            # bracket endpoints collided with the root; widen slightly
            lo -= 1
            hi += 1
            slo = _sign_sq(coeffs, lo, s)
            shi = _sign_sq(coeffs, hi, s)
        out.append(_DyadicRoot(lo, hi, s, slo))
    return out


def _cluster(values: Sequence[float], gap: float = 1e-8) -> list[float]:
    out: list[list[float]] = []
    for v in sorted(values):
        if out and v - out[-1][-1] <= gap:
            out[-1].append(v)
        else:
            out.append([v])
    return [sum(c) / len(c) for c in out]


def energy_from_phi_tilde(
    pt: ExactPoly, tol: float = 1e-10, hints: Sequence[float] | None = None
) -> EnergyValue:
    """Energy of a bipartite graph from its ``phi_tilde``.

    ``hints`` are approximate nonnegative eigenvalues; without them the roots
    of ``q`` are estimated with numpy and certified the same way.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = _reduced_square_poly(pt)
    if q.degree <= 0:
        return EnergyValue(0.0, 0.0)
    factors = square_free_decomposition(q)
    if hints is None:
        ys = np.roots([float(c) for c in reversed(q.coeffs)])
        hints = [math.sqrt(max(y.real, 0.0)) for y in ys]
    candidates = _cluster([h for h in hints if h > 1e-7])
    total = sum(m * f.degree for f, m in factors)
    target = Fraction(tol) / (4 * total)
    exact_sum = Fraction(0)
    radius = Fraction(0)
    for f, m in factors:
        roots = _certify_from_hints(f, candidates)
        if roots is None:
            roots = _isolate_fallback(f)
        for r in roots:
            if r.lo != r.hi:
                r = _refine_dyadic(f.coeffs, r, target)
            exact_sum += m * r.midpoint()
            radius += m * r.halfwidth()
    energy_exact = 2 * exact_sum
    mid = float(energy_exact)
    conv = abs(Fraction(mid) - energy_exact)
    rad = float(2 * radius + conv)
    return EnergyValue(mid, _round_up(_round_up(rad)))


def energy(f: Forest, tol: float = 1e-10) -> EnergyValue:
    """Certified energy of a forest, radius at most ``tol``."""
    if f.n == 1 or not f.edges:
        return EnergyValue(0.0, 0.0)
    a = np.zeros((f.n, f.n))
    for u, v in f.edges:
        a[u, v] = a[v, u] = 1.0
    eig = np.linalg.eigvalsh(a)
    counts = matching_counts(f)
    return energy_from_phi_tilde(phi_tilde_from_counts(f.n, counts), tol, hints=[e for e in eig if e > 0])


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature

_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (+-xgk[1], +-xgk[3], +-xgk[5], 0)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _GW[_i] = _w
    _GW[14 - _i] = _w
_GW[7] = _WG[3]


@dataclass(frozen=True)
class Quadrature:
    rule: str
    abs_tol: float
    panels: int
    error_estimate: float

    def to_record(self) -> dict:
        return {
            "rule": self.rule,
            "abs_tol": self.abs_tol,
            "panels": self.panels,
            "error_estimate": self.error_estimate,
        }


def _gk15(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    vals = f(center + half * _NODES)
    k = half * float(np.dot(_KW, vals))
    g = half * float(np.dot(_GW, vals))
    return k, abs(k - g)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    abs_tol: float = 1e-9,
    max_panels: int = 4000,
) -> tuple[float, Quadrature]:
    """Globally adaptive G7-K15 on a finite interval.

    Panels are split worst-first; the result sums panels in left-to-right order
    so it does not depend on the split history.
    """
    if not b > a:
        return 0.0, Quadrature("G7K15", abs_tol, 0, 0.0)
    k, e = _gk15(f, a, b)
    heap = [(-e, a, b, k)]
    total_err = e
    while total_err > abs_tol:
        if len(heap) >= max_panels:
            raise QuadratureFailure(
                f"error estimate {total_err:.3e} above {abs_tol:.1e} after {len(heap)} panels"
            )
        neg_e, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureFailure("panel width underflow")
        k1, e1 = _gk15(f, lo, mid)
        k2, e2 = _gk15(f, mid, hi)
        total_err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
    panels = sorted(heap, key=lambda t: t[1])
    value = math.fsum(p[3] for p in panels)
    err = math.fsum(-p[0] for p in panels)
    return value, Quadrature("G7K15", abs_tol, len(panels), err)


class LogRatio:
    """Vectorised ``x -> ln(p(x) / q(x))`` for monic ``p, q`` of equal degree
    with nonnegative coefficients."""

    def __init__(self, p: ExactPoly, q: ExactPoly) -> None:
        self.p, self.q = p, q
        d = p.degree
        self.d = d
        r = p - q
        # numpy polyval wants highest degree first
        self.pc = np.array([float(c) for c in reversed(p.coeffs)])
        self.qc = np.array([float(c) for c in reversed(q.coeffs)])
        self.rc = np.array([float(r.coeff(i)) for i in range(d, -1, -1)])
        # reversed polynomials in u = 1/x: hat p(u) = u^d p(1/u)
        self.pr = np.array([float(p.coeff(i)) for i in range(d + 1)])
        self.qr = np.array([float(q.coeff(i)) for i in range(d + 1)])
        self.rr = np.array([float(r.coeff(i)) for i in range(d + 1)])

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        small = x <= 1.0
        if small.any():
            xs = x[small]
            out[small] = self._combine(
                np.polyval(self.pc, xs), np.polyval(self.qc, xs), np.polyval(self.rc, xs)
            )
        big = ~small
        if big.any():
            u = 1.0 / x[big]
            out[big] = self._combine(
                np.polyval(self.pr, u), np.polyval(self.qr, u), np.polyval(self.rr, u)
            )
        return out

    @staticmethod
    def _combine(pv: np.ndarray, qv: np.ndarray, rv: np.ndarray) -> np.ndarray:
        ratio = rv / qv
        near = np.abs(ratio) < 0.5
        out = np.empty_like(ratio)
        out[near] = np.log1p(ratio[near])
        far = ~near
        out[far] = np.log(pv[far]) - np.log(qv[far])
        return out


def _check_coulson_inputs(p: ExactPoly, q: ExactPoly) -> None:
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} vs {q.degree}")
    for poly in (p, q):
        if not poly.is_monic():
            raise NotMonic(f"{poly} is not monic")
        if any(c < 0 for c in poly.coeffs):
            raise NegativeCoefficient(f"{poly} has a negative coefficient")


def log_ratio_integral(
    p: ExactPoly, q: ExactPoly, a: float = 0.0, b: float = math.inf, abs_tol: float = 1e-9
) -> tuple[float, Quadrature]:
    """``int_a^b ln(p/q) dx``; an infinite upper end uses ``x = t/(1-t)``."""
    f = LogRatio(p, q)
    if math.isinf(b):

        def g(t: np.ndarray) -> np.ndarray:
            one_minus = 1.0 - t
            return f(t / one_minus) / (one_minus * one_minus)

        ta = a / (1.0 + a)
        return integrate(g, ta, 1.0, abs_tol)
    return integrate(f, a, b, abs_tol)


def energy_diff_coulson(p: ExactPoly, q: ExactPoly, tol: float = 1e-9) -> EnergyValue:
    """``E(G1) - E(G2)`` from ``phi_tilde`` of two bipartite graphs of equal order."""
    _check_coulson_inputs(p, q)
    if p == q:
        return EnergyValue(0.0, 0.0)
    value, quad = log_ratio_integral(p, q, 0.0, math.inf, tol * math.pi / 2)
    return EnergyValue(value * TWO_OVER_PI, _round_up(quad.error_estimate * TWO_OVER_PI + 1e-15))


def coulson_quadrature(p: ExactPoly, q: ExactPoly, tol: float = 1e-9) -> tuple[EnergyValue, Quadrature]:
    _check_coulson_inputs(p, q)
    value, quad = log_ratio_integral(p, q, 0.0, math.inf, tol * math.pi / 2)
    return EnergyValue(value * TWO_OVER_PI, _round_up(quad.error_estimate * TWO_OVER_PI + 1e-15)), quad


# ---------------------------------------------------------------------------
# The ratio sequence d_k = h_k / g_k at a fixed point


def d_sequence_at(
    g0: ExactPoly,
    g1: ExactPoly,
    h0: ExactPoly,
    h1: ExactPoly,
    k: int,
    x: Fraction | int,
) -> Fraction:
    """``h_k(x) / g_k(x)`` with ``v_k = x v_{k-1} + v_{k-2}``, in exact rationals."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    if k < 0:
        raise ValueError("k must be nonnegative")
    ga, gb = g0(x), g1(x)
    ha, hb = h0(x), h1(x)
    if k == 0:
        return ha / ga
    for _ in range(k - 1):
        ga, gb = gb, x * gb + ga
        ha, hb = hb, x * hb + ha
    return hb / gb


# ---------------------------------------------------------------------------
# Dominance of subdivision families

THM31_CASE1 = "Thm31Case1"
THM31_CASE2 = "Thm31Case2"
THM32_BOUND = "Thm32Bound"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DInterval:
    lo: float
    hi: float
    lo_radius: float
    hi_radius: float

    def to_record(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_radius": self.lo_radius, "hi_radius": self.hi_radius}


@dataclass(frozen=True)
class DominanceResult:
    """Lower bound on ``E(H(k)) - E(G(k))`` valid for every ``k`` in the case's range.

    ``case`` records which comparison applies according to the sign of
    ``w = h1 g0 - h0 g1`` on ``(0, inf)``; ``mode`` equals ``case`` unless the
    bound is not separated from zero, in which case it is ``Inconclusive``.
    """

    mode: str
    case: str
    lower_bound_on_gap: EnergyValue
    w: ExactPoly
    profile: SignProfile | None
    D: tuple[DInterval, ...]
    base_gap: EnergyValue
    alternate_bound: EnergyValue | None
    quadrature: Quadrature | None
    energies: dict[str, EnergyValue] = field(default_factory=dict)
    polys: dict[str, ExactPoly] = field(default_factory=dict)

    @property
    def k_range(self) -> str:
        if self.case == THM31_CASE1:
            return "k>=0 (strict for k>0)"
        if self.case == THM31_CASE2:
            return "k>=0, k!=1 (strict)"
        return "k>=0"

    def holds_for_all_k(self) -> bool:
        return self.mode != INCONCLUSIVE and self.lower_bound_on_gap.positive()

    def to_record(self) -> dict:
        return {
            "mode": self.mode,
            "case": self.case,
            "k_range": self.k_range,
            "w": str(self.w),
            "sign_profile": None if self.profile is None else self.profile.kind,
            "D": [d.to_record() for d in self.D],
            "lower_bound": self.lower_bound_on_gap.to_record(),
            "base_gap": self.base_gap.to_record(),
            "alternate_bound": None if self.alternate_bound is None else self.alternate_bound.to_record(),
            "quadrature": None if self.quadrature is None else self.quadrature.to_record(),
            "energies": {k: v.to_record() for k, v in self.energies.items()},
            "polys": {k: str(v) for k, v in self.polys.items()},
        }


def _piece_integral(
    num: ExactPoly, den: ExactPoly, piece: SignPiece, tol: float
) -> tuple[float, float, Quadrature, DInterval]:
    f = LogRatio(num, den)
    endpoint_tol = Fraction(1, 2**55)
    if piece.left is None:
        a, ra = 0.0, 0.0
    else:
        c = piece.left.refine(endpoint_tol)
        a = float(c.mid)
        ra = float(c.radius) + abs(float(Fraction(a) - c.mid))
    if piece.right is None:
        b, rb = math.inf, 0.0
    else:
        c = piece.right.refine(endpoint_tol)
        b = float(c.mid)
        rb = float(c.radius) + abs(float(Fraction(b) - c.mid))
    value, quad = log_ratio_integral(num, den, a, b, tol)
    # moving an endpoint by r changes the integral by at most r * |integrand| nearby
    slack = 0.0
    for x, r in ((a, ra), (b, rb)):
        if r and math.isfinite(x):
            probe = np.array([x - r, x, x + r])
            slack += 2 * r * float(np.max(np.abs(f(probe[probe > 0]))))
    return value, quad.error_estimate + slack, quad, DInterval(a, b, ra, rb)


def classify_dominance(
    g: Forest,
    e: Sequence[int],
    h: Forest,
    e2: Sequence[int],
    tol: float = 1e-9,
    energy_tol: float = 1e-12,
) -> DominanceResult:
    """Bound ``E(H(k)) - E(G(k))`` below for all ``k`` from the four base graphs."""
    if g.n != h.n:
        raise OrderMismatch(f"orders differ: {g.n} vs {h.n}")
    g.check_edge(e)
    h.check_edge(e2)
    G1, H1 = subdivide(g, e, 1), subdivide(h, e2, 1)
    g0, g1, h0, h1 = phi_tilde(g), phi_tilde(G1), phi_tilde(h), phi_tilde(H1)
    polys = {"g0": g0, "g1": g1, "h0": h0, "h1": h1}
    w = h1 * g0 - h0 * g1
    eg0, eh0 = energy(g, energy_tol), energy(h, energy_tol)
    base_gap = eh0 - eg0
    energies = {"G0": eg0, "H0": eh0}

    if w.is_zero():
        # d_1 = d_0 everywhere, so d_k = d_0 and the gap is constant in k
        case = THM31_CASE1
        bound = base_gap
        return DominanceResult(
            case if bound.positive() else INCONCLUSIVE, case, bound, w, None, (), base_gap,
            None, None, energies, polys,
        )

    profile = sign_profile_on_positive_axis(w)
    kind = profile.kind
    eg1, eh1 = energy(G1, energy_tol), energy(H1, energy_tol)
    energies.update({"G1": eg1, "H1": eh1})
    quad = None
    alt = None
    d_intervals: tuple[DInterval, ...] = ()
    if kind == POSITIVE_EVERYWHERE:
        case = THM31_CASE1
        bound = base_gap
    elif kind == NEGATIVE_EVERYWHERE:
        case = THM31_CASE2
        bound = eh1 - eg1
    else:
        assert kind == MIXED
        case = THM32_BOUND
        num, den = h1 * g0, h0 * g1
        piece_tol = tol * math.pi / 2 / max(1, len(profile.pieces))
        neg_total, neg_err, panels = 0.0, 0.0, 0
        ds = []
        for piece in profile.negative_pieces():
            v, err, q, di = _piece_integral(num, den, piece, piece_tol)
            neg_total += v
            neg_err += err
            panels += q.panels
            ds.append(di)
        d_intervals = tuple(ds)
        integral = EnergyValue(neg_total, _round_up(neg_err)).scaled(TWO_OVER_PI)
        bound = base_gap + integral
        quad = Quadrature("G7K15", tol, panels, integral.radius)
        pos_total, pos_err = 0.0, 0.0
        for piece in profile.positive_pieces():
            v, err, _, _ = _piece_integral(num, den, piece, piece_tol)
            pos_total += v
            pos_err += err
        alt = (eh1 - eg1) - EnergyValue(pos_total, _round_up(pos_err)).scaled(TWO_OVER_PI)
    mode = case if bound.positive() else INCONCLUSIVE
    return DominanceResult(mode, case, bound, w, profile, d_intervals, base_gap, alt, quad, energies, polys)

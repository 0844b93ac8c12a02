"""Exact integer polynomials, Sturm chains and positive-root isolation.

Nothing in this module rounds.  Rational points are ``fractions.Fraction``;
coefficients are Python ints.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import ZeroPolynomial

Rational = Union[int, Fraction]


class ExactPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of ``x**i``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)
        self._hash: int | None = None

    # -- construction -----------------------------------------------------
    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "ExactPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "ExactPoly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: int) -> "ExactPoly":
        return cls([c])

    @classmethod
    def from_text(cls, text: str) -> "ExactPoly":
        return parse_poly(text)

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    @property
    def lowest_degree(self) -> int:
        """Index of the lowest nonzero coefficient (the order of the root at 0)."""
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no lowest term")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "ExactPoly":
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return ExactPoly(c // g for c in self.coeffs)

    def derivative(self) -> "ExactPoly":
        return ExactPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose_square(self) -> "ExactPoly":
        """``p(x**2)``."""
        out = [0] * (2 * len(self.coeffs) - 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[2 * i] = c
        return ExactPoly(out)

    def even_part_in_square(self) -> "ExactPoly":
        """``q`` with ``q(x**2) == p(x)``; ``p`` must be even."""
        if any(c for c in self.coeffs[1::2]):
            raise ValueError("polynomial is not even")
        return ExactPoly(self.coeffs[0::2])

    def shift_down(self, k: int) -> "ExactPoly":
        """Divide by ``x**k``; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"polynomial is not divisible by x^{k}")
        return ExactPoly(self.coeffs[k:])

    # -- ring operations -----------------------------------------------------
    def __add__(self, other: "ExactPoly | int") -> "ExactPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return ExactPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "ExactPoly":
        return ExactPoly(-c for c in self.coeffs)

    def __sub__(self, other: "ExactPoly | int") -> "ExactPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other: "ExactPoly | int") -> "ExactPoly":
        return _coerce(other) - self

    def __mul__(self, other: "ExactPoly | int") -> "ExactPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ExactPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExactPoly":
        if k < 0:
            raise ValueError("negative power")
        result = ExactPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ExactPoly([other])
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"ExactPoly({str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- evaluation ----------------------------------------------------------
    def eval_rational(self, x: Rational) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = eval_rational

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Rational) -> int:
        """Exact sign of ``p(x)`` using integer arithmetic only."""
        x = Fraction(x)
        return _sign_homogeneous(self.coeffs, x.numerator, x.denominator)


def _coerce(p: "ExactPoly | int") -> ExactPoly:
    if isinstance(p, ExactPoly):
        return p
    if isinstance(p, int):
        return ExactPoly([p])
    raise TypeError(f"cannot use {type(p).__name__} as a polynomial")


def _sign_homogeneous(coeffs: Sequence[int], a: int, b: int) -> int:
    # sign of sum c_i a^i b^(d-i), b > 0
    if not coeffs:
        return 0
    acc = coeffs[-1]
    bp = 1
    for c in reversed(coeffs[:-1]):
        bp *= b
        acc = acc * a + c * bp
    return (acc > 0) - (acc < 0)


def _sign_at_infinity(p: ExactPoly, positive: bool) -> int:
    s = 1 if p.leading > 0 else -1
    if not positive and p.degree % 2:
        s = -s
    return s


# ---------------------------------------------------------------------------
# Text form

_TERM_RE = re.compile(r"([+-]?)(\d*)(x(?:\^(\d+))?)?")


def format_poly(p: ExactPoly) -> str:
    """Descending powers, explicit integer coefficients: ``x^4+3x^2+1``."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            var = "x" if i == 1 else f"x^{i}"
            body = var if mag == 1 else f"{mag}{var}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


def parse_poly(text: str) -> ExactPoly:
    s = text.replace(" ", "").replace("**", "^").replace("*", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return ExactPoly()
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            power = int(m.group(4)) if m.group(4) else 1
        else:
            power = 0
        coeffs[power] = coeffs.get(power, 0) + sign * mag
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
    top = max(coeffs)
    return ExactPoly(coeffs.get(i, 0) for i in range(top + 1))


# ---------------------------------------------------------------------------
# Division, gcd, square-free decomposition


def pseudo_remainder_positive(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """A positive integer multiple of ``a mod b``.

    Scaling by ``|lc(b)|`` instead of ``lc(b)`` keeps signs intact, which the
    Sturm construction relies on.
    """
    if b.is_zero():
        raise ZeroPolynomial("division by zero polynomial")
    db = b.degree
    if a.degree < db:
        return a
    alc = abs(b.leading)
    sgn = 1 if b.leading > 0 else -1
    bc = b.coeffs
    r = list(a.coeffs)
    while r and len(r) - 1 >= db:
        f = sgn * r[-1]
        shift = len(r) - 1 - db
        r = [c * alc for c in r]
        for i, c in enumerate(bc):
            r[i + shift] -= f * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return ExactPoly(r)


def poly_gcd(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """Primitive gcd in Z[x] with positive leading coefficient."""
    a, b = a.primitive(), b.primitive()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        a, b = b, pseudo_remainder_positive(a, b).primitive()
    return a


def exact_divide(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """Quotient ``a / b``; raises unless the division is exact over Z."""
    if b.is_zero():
        raise ZeroPolynomial("division by zero polynomial")
    r = list(a.coeffs)
    db = b.degree
    lc = b.leading
    q = [0] * max(len(r) - db, 0)
    for k in range(len(r) - 1 - db, -1, -1):
        top = r[k + db]
        if top % lc:
            raise ValueError("division is not exact over Z")
        f = top // lc
        q[k] = f
        if f:
            for i, c in enumerate(b.coeffs):
                r[k + i] -= f * c
    if any(r):
        raise ValueError("division leaves a remainder")
    return ExactPoly(q)


def square_free_part(p: ExactPoly) -> ExactPoly:
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no square-free part")
    if p.degree <= 0:
        return ExactPoly([1])
    g = poly_gcd(p, p.derivative())
    return exact_divide(p.primitive(), g).primitive()


def square_free_decomposition(p: ExactPoly) -> list[tuple[ExactPoly, int]]:
    """Yun's algorithm: ``p = c * prod f_m**m`` with pairwise coprime square-free ``f_m``.

    Constant factors are omitted; only ``(f_m, m)`` with ``deg f_m >= 1`` are returned.
    """
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    p = p.primitive()
    if p.degree <= 0:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = exact_divide(p, a)
    c = exact_divide(dp, a)
    d = c - b.derivative()
    out = []
    m = 1
    while b.degree > 0:
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f, m))
        b = exact_divide(b, f)
        c = exact_divide(d, f)
        d = c - b.derivative()
        m += 1
    return out


# ---------------------------------------------------------------------------
# Sturm chains

Bound = Union[Rational, float, None]


class SturmChain:
    """Sturm sequence of the square-free part of ``p``."""

    def __init__(self, p: ExactPoly) -> None:
        if p.is_zero():
            raise ZeroPolynomial("Sturm chain of the zero polynomial")
        s = square_free_part(p)
        chain = [s]
        if s.degree >= 1:
            chain.append(s.derivative().primitive())
            while True:
                r = pseudo_remainder_positive(chain[-2], chain[-1])
                if r.is_zero():
                    break
                r = -r
                g = r.content()
                chain.append(ExactPoly(c // g for c in r.coeffs))
        self.poly = s
        self.chain = chain

    def _variations(self, x: Bound, side: int) -> int:
        signs = []
        for q in self.chain:
            if x is None or (isinstance(x, float) and x in (float("inf"), float("-inf"))):
                positive = side > 0 if x is None else x > 0
                s = _sign_at_infinity(q, positive)
            else:
                s = q.sign_at(Fraction(x))
            if s:
                signs.append(s)
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    def count(self, lo: Bound = None, hi: Bound = None) -> int:
        """Distinct real roots in ``(lo, hi]``; ``None`` means -inf / +inf."""
        vlo = self._variations(lo, -1)
        vhi = self._variations(hi, +1)
        return vlo - vhi


def sturm_chain(p: ExactPoly) -> SturmChain:
    return SturmChain(p)


def count_roots(p: ExactPoly, lo: Bound = None, hi: Bound = None) -> int:
    return SturmChain(p).count(lo, hi)


def cauchy_bound(p: ExactPoly) -> Fraction:
    lc = abs(p.leading)
    return 1 + max((Fraction(abs(c), lc) for c in p.coeffs[:-1]), default=Fraction(0))


# ---------------------------------------------------------------------------
# Isolation and refinement


@dataclass(frozen=True)
class CertifiedReal:
    """A real number known to lie in ``[mid - radius, mid + radius]``."""

    mid: Fraction
    radius: Fraction

    @property
    def value(self) -> float:
        return float(self.mid)

    @property
    def lo(self) -> Fraction:
        return self.mid - self.radius

    @property
    def hi(self) -> Fraction:
        return self.mid + self.radius

    def __float__(self) -> float:
        return float(self.mid)


@dataclass(frozen=True)
class IsolatingInterval:
    """Open interval ``(lo, hi)`` holding exactly one root of ``poly`` (square-free).

    ``lo < hi`` unless the root is rational and was hit exactly, in which case
    ``lo == hi`` is the root itself.
    """

    poly: ExactPoly
    lo: Fraction
    hi: Fraction

    @cached_property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def refine(self, tol: Rational | float) -> CertifiedReal:
        tol = Fraction(tol)
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        lo, hi = self.lo, self.hi
        if lo == hi:
            return CertifiedReal(lo, Fraction(0))
        p = self.poly
        slo = p.sign_at(lo)
        if slo == 0:
            raise ValueError("isolating interval endpoint is a root")
        while (hi - lo) / 2 > tol:
            mid = (lo + hi) / 2
            s = p.sign_at(mid)
            if s == 0:
                return CertifiedReal(mid, Fraction(0))
            if s == slo:
                lo = mid
            else:
                hi = mid
        return CertifiedReal((lo + hi) / 2, (hi - lo) / 2)

    def refined(self, tol: Rational | float) -> "IsolatingInterval":
        c = self.refine(tol)
        return IsolatingInterval(self.poly, c.lo, c.hi)

    def contains(self, x: Rational) -> bool:
        return self.lo < x < self.hi or self.lo == x == self.hi


_SPLITS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 7), Fraction(5, 11))


def _split_point(p: ExactPoly, lo: Fraction, hi: Fraction) -> Fraction:
    for t in _SPLITS:
        mid = lo + (hi - lo) * t
        if p.sign_at(mid) != 0:
            return mid
    k = 13
    while True:  # finitely many roots, so this ends
        mid = lo + (hi - lo) * Fraction(k // 2, k)
        if p.sign_at(mid) != 0:
            return mid
        k += 2


def isolate_positive_roots(p: ExactPoly) -> list[IsolatingInterval]:
    """Disjoint isolating intervals for every positive root of ``p``, ascending."""
    if p.is_zero():
        return []
    chain = SturmChain(p)
    s = chain.poly
    if s.degree <= 0:
        return []
    bound = cauchy_bound(s)
    top = Fraction(1)
    while top <= bound:
        top *= 2
    out: list[IsolatingInterval] = []
    stack = [(Fraction(0), top, chain.count(Fraction(0), top))]
    while stack:
        lo, hi, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1 and s.sign_at(lo) != 0:
            out.append(IsolatingInterval(s, lo, hi))
            continue
        mid = _split_point(s, lo, hi)
        left = chain.count(lo, mid)
        stack.append((mid, hi, cnt - left))
        stack.append((lo, mid, left))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine(interval: IsolatingInterval, tol: Rational | float) -> CertifiedReal:
    return interval.refine(tol)


# ---------------------------------------------------------------------------
# Sign profiles on (0, inf)

POSITIVE_EVERYWHERE = "PositiveEverywhere"
NEGATIVE_EVERYWHERE = "NegativeEverywhere"
MIXED = "Mixed"


@dataclass(frozen=True)
class SignPiece:
    """``sign`` of the polynomial on the open interval between two roots.

    ``left is None`` means the piece starts at 0; ``right is None`` means it
    runs to infinity.
    """

    left: IsolatingInterval | None
    right: IsolatingInterval | None
    sign: int

    def bounds(self, tol: float = 1e-15) -> tuple[float, float]:
        a = 0.0 if self.left is None else float(self.left.refine(tol).mid)
        b = float("inf") if self.right is None else float(self.right.refine(tol).mid)
        return a, b


@dataclass(frozen=True)
class SignProfile:
    poly: ExactPoly
    pieces: tuple[SignPiece, ...]

    @property
    def kind(self) -> str:
        signs = {p.sign for p in self.pieces}
        if signs == {1}:
            return POSITIVE_EVERYWHERE
        if signs == {-1}:
            return NEGATIVE_EVERYWHERE
        return MIXED

    @property
    def roots(self) -> list[IsolatingInterval]:
        return [p.right for p in self.pieces if p.right is not None]

    def negative_pieces(self) -> list[SignPiece]:
        return [p for p in self.pieces if p.sign < 0]

    def positive_pieces(self) -> list[SignPiece]:
        return [p for p in self.pieces if p.sign > 0]

    def describe(self, tol: float = 1e-12) -> list[tuple[float, float, int]]:
        return [(*p.bounds(tol), p.sign) for p in self.pieces]


def sign_profile_on_positive_axis(p: ExactPoly) -> SignProfile:
    if p.is_zero():
        raise ZeroPolynomial("sign profile of the zero polynomial")
    roots = isolate_positive_roots(p)
    first_sign = 1 if p.coeffs[p.lowest_degree] > 0 else -1
    pieces = []
    left = None
    for i, iv in enumerate(roots):
        if i == 0:
            sign = first_sign
        else:
            # the previous root's upper end is not a root and lies before this one
            sign = p.sign_at(left.hi if not left.is_exact else (left.hi + iv.lo) / 2)
        pieces.append(SignPiece(left, iv, sign))
        left = iv
    pieces.append(SignPiece(left, None, 1 if p.leading > 0 else -1))
    return SignProfile(p, tuple(pieces))


def poly_product(factors: Iterable[ExactPoly]) -> ExactPoly:
    out = ExactPoly([1])
    for f in factors:
        out = out * f
    return out

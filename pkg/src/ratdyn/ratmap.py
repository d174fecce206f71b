"""Rational maps of the projective line with exact rational coefficients.

A RatMap is a coprime pair of Polys in canonical scaling (monic denominator),
so structural equality and cross-multiplication equality agree.  Points of
the line are PointP1 values: an exact rational, a finite complex double, or
the point at infinity.  The numeric layer works in normalized homogeneous
coordinates [a : b] with the chordal metric, which keeps evaluation near
poles and at infinity well-conditioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .poly import (
    Poly,
    certified_coprime,
    check_complex,
    poly_gcd,
    rat_from_str,
    rat_to_str,
)


# ---------------------------------------------------------------------------
# Points of the projective line
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointP1:
    """A point of P^1: exact Fraction, finite complex, or infinity (None)."""

    value: Union[Fraction, complex, None]

    @staticmethod
    def infinity() -> "PointP1":
        return PointP1(None)

    @staticmethod
    def of(x) -> "PointP1":
        if isinstance(x, PointP1):
            return x
        if x is None:
            return PointP1(None)
        if isinstance(x, (int, Fraction)):
            return PointP1(Fraction(x))
        return PointP1(check_complex(x))

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    @property
    def is_exact(self) -> bool:
        return self.value is None or isinstance(self.value, Fraction)

    def as_complex(self) -> complex:
        if self.value is None:
            raise ValueError("infinity has no complex value")
        return complex(self.value)

    def homogeneous(self) -> tuple:
        """Normalized complex homogeneous pair [a : b] with max(|a|,|b|) = 1."""
        if self.value is None:
            return (1 + 0j, 0j)
        v = self.value
        if isinstance(v, Fraction):
            if abs(v) <= 1:
                return (complex(float(v)), 1 + 0j)
            return (1 + 0j, complex(float(1 / v)))
        if abs(v) <= 1:
            return (complex(v), 1 + 0j)
        return (1 + 0j, 1 / complex(v))

    def homogeneous_exact(self) -> tuple:
        """(Fraction, Fraction) pair; requires an exact point."""
        if self.value is None:
            return (Fraction(1), Fraction(0))
        if not isinstance(self.value, Fraction):
            raise ValueError("inexact point has no exact homogeneous pair")
        return (self.value, Fraction(1))

    def to_json(self):
        if self.value is None:
            return "inf"
        if isinstance(self.value, Fraction):
            return rat_to_str(self.value)
        return [self.value.real, self.value.imag]

    @staticmethod
    def from_json(data) -> "PointP1":
        if data == "inf":
            return PointP1.infinity()
        if isinstance(data, (list, tuple)):
            return PointP1(complex(data[0], data[1]))
        return PointP1(rat_from_str(data))

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        if isinstance(self.value, Fraction):
            return rat_to_str(self.value)
        return repr(self.value)


def chordal_distance(p: PointP1, q: PointP1) -> float:
    """Chordal metric on P^1, computed from homogeneous pairs."""
    a, b = p.homogeneous() if isinstance(p, PointP1) else p
    c, d = q.homogeneous() if isinstance(q, PointP1) else q
    num = abs(a * d - b * c)
    return num / math.sqrt((abs(a) ** 2 + abs(b) ** 2) * (abs(c) ** 2 + abs(d) ** 2))


def cross_ratio(z1: PointP1, z2: PointP1, z3: PointP1, z4: PointP1):
    """Image of z1 under the Moebius map sending (z2, z3, z4) to (0, 1, inf).

    Exact Fraction for four exact points, complex otherwise.  Raises on
    repeated points.
    """
    pts = [PointP1.of(z) for z in (z1, z2, z3, z4)]
    exact = all(p.is_exact for p in pts)
    if exact:
        pairs = [p.homogeneous_exact() for p in pts]
    else:
        pairs = [p.homogeneous() for p in pts]

    def det(i, j):
        (a, b), (c, d) = pairs[i], pairs[j]
        return a * d - b * c

    d12, d34, d14, d32 = det(0, 1), det(2, 3), det(0, 3), det(2, 1)
    if exact:
        if d14 == 0 or d32 == 0 or d12 == 0 or d34 == 0:
            raise ValueError("repeated points in cross-ratio")
        return (d12 * d34) / (d14 * d32)
    if abs(d14 * d32) == 0:
        raise ValueError("repeated points in cross-ratio")
    return (d12 * d34) / (d14 * d32)


# ---------------------------------------------------------------------------
# RatMap
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatMap:
    """Normalized rational map num/den: coprime, den monic (or den = 1)."""

    num: Poly
    den: Poly

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    @property
    def is_constant(self) -> bool:
        return self.degree == 0

    def __call__(self, p):
        return eval_p1(self, p)

    # Pointwise field arithmetic (NOT composition; compose() is separate).

    def __add__(self, other) -> "RatMap":
        other = _coerce_map(other)
        return ratmap_new(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other) -> "RatMap":
        other = _coerce_map(other)
        return ratmap_new(self.num * other.den - other.num * self.den,
                          self.den * other.den)

    def __neg__(self) -> "RatMap":
        return RatMap(-self.num, self.den)

    def __mul__(self, other) -> "RatMap":
        other = _coerce_map(other)
        return ratmap_new(self.num * other.num, self.den * other.den)

    def __truediv__(self, other) -> "RatMap":
        other = _coerce_map(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero map")
        return ratmap_new(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "RatMap":
        if n < 0:
            return reciprocal(self) ** (-n)
        return ratmap_new(self.num ** n, self.den ** n)

    __radd__ = __add__
    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(data: dict) -> "RatMap":
        return ratmap_new(Poly.from_json(data["num"]), Poly.from_json(data["den"]))

    def __str__(self) -> str:
        if self.den.degree == 0 and self.den.coeff(0) == 1:
            return f"({self.num})"
        return f"({self.num})/({self.den})"


def _coerce_map(x) -> RatMap:
    if isinstance(x, RatMap):
        return x
    if isinstance(x, (int, Fraction)):
        return constant_map(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RatMap")


def ratmap_new(num, den) -> RatMap:
    """Build a normalized RatMap: cancel common factors, make den monic."""
    num = num if isinstance(num, Poly) else Poly(num)
    den = den if isinstance(den, Poly) else Poly(den)
    if num.is_zero and den.is_zero:
        raise ValueError("indeterminate map")
    if den.is_zero:
        raise ValueError("denominator is the zero polynomial")
    if not num.is_zero and not certified_coprime(num, den):
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
    lead = den.lead
    if lead != 1:
        num = num.scale(1 / lead)
        den = den.scale(1 / lead)
    return RatMap(num, den)


def ratmap_from_coeffs(num: Sequence, den: Sequence) -> RatMap:
    return ratmap_new(Poly(Fraction(c) for c in num), Poly(Fraction(c) for c in den))


def identity_map() -> RatMap:
    return RatMap(Poly.x(), Poly.one())


def constant_map(c) -> RatMap:
    return RatMap(Poly.constant(c), Poly.one())


def reciprocal(F: RatMap) -> RatMap:
    """The map 1/F (pointwise reciprocal)."""
    if F.num.is_zero:
        raise ZeroDivisionError("reciprocal of the zero map")
    return ratmap_new(F.den, F.num)


def compose(U: RatMap, V: RatMap) -> RatMap:
    """Exact composition U(V(z)); deg result = deg U * deg V for nonconstant maps."""
    d = U.degree
    if d == 0:
        return U
    # Homogeneous substitution: U = P/Q of degree d evaluated at V = R/S gives
    # num = sum p_k R^k S^(d-k), den likewise; the S^d denominators cancel.
    R, S = V.num, V.den
    rpow = [Poly.one()]
    spow = [Poly.one()]
    for _ in range(d):
        rpow.append(rpow[-1] * R)
        spow.append(spow[-1] * S)
    num = Poly.zero()
    den = Poly.zero()
    for k in range(d + 1):
        basis = rpow[k] * spow[d - k]
        pk = U.num.coeff(k)
        qk = U.den.coeff(k)
        if pk != 0:
            num = num + basis.scale(pk)
        if qk != 0:
            den = den + basis.scale(qk)
    return ratmap_new(num, den)


def iterate_map(F: RatMap, s: int) -> RatMap:
    """Exact s-fold composition F o F o ... o F."""
    if s < 1:
        raise ValueError("iteration count must be >= 1")
    result = F
    for _ in range(s - 1):
        result = compose(F, result)
    return result


def derivative(F: RatMap) -> RatMap:
    """Exact quotient-rule derivative, normalized."""
    w = F.num.derivative() * F.den - F.num * F.den.derivative()
    return ratmap_new(w, F.den * F.den)


def wronskian(F: RatMap) -> Poly:
    """num' * den - num * den', the finite critical-point polynomial."""
    return F.num.derivative() * F.den - F.num * F.den.derivative()


def equals_exact(F: RatMap, G: RatMap) -> bool:
    """True iff numF*denG - numG*denF is identically zero."""
    return (F.num * G.den - G.num * F.den).is_zero


def eval_p1(F: RatMap, p) -> PointP1:
    """Evaluate F at a point of P^1; exact input gives exact output."""
    p = PointP1.of(p)
    if p.is_infinity:
        dn, dd = F.num.degree, F.den.degree
        if dn > dd:
            return PointP1.infinity()
        if dn < dd:
            return PointP1(Fraction(0))
        return PointP1(F.num.lead / F.den.lead)
    v = p.value
    nv = F.num.eval(v)
    dv = F.den.eval(v)
    if dv == 0:
        if nv == 0:
            raise ValueError("indeterminate evaluation")
        return PointP1.infinity()
    return PointP1.of(nv / dv)


# ---------------------------------------------------------------------------
# Numeric homogeneous evaluation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _float_homog_coeffs(F: RatMap) -> tuple:
    """Jointly max-scaled float coefficient vectors of (num, den), padded to
    the common homogenization degree."""
    d = F.degree
    scale = max(max((abs(c) for c in F.num.coeffs), default=Fraction(0)),
                max((abs(c) for c in F.den.coeffs), default=Fraction(0)))
    num = [float(F.num.coeff(k) / scale) for k in range(d + 1)]
    den = [float(F.den.coeff(k) / scale) for k in range(d + 1)]
    return tuple(num), tuple(den)


def eval_homog(F: RatMap, a: complex, b: complex) -> tuple:
    """F([a : b]) as a normalized homogeneous pair (no infinities, ever)."""
    num, den = _float_homog_coeffs(F)
    d = len(num) - 1
    # Horner in a/b done homogeneously: sum c_k a^k b^(d-k).
    bp = [1 + 0j]
    for _ in range(d):
        bp.append(bp[-1] * b)
    an = 0j
    ad = 0j
    apow = 1 + 0j
    for k in range(d + 1):
        an += num[k] * apow * bp[d - k]
        ad += den[k] * apow * bp[d - k]
        apow *= a
    m = max(abs(an), abs(ad))
    if m == 0:
        raise ValueError("homogeneous evaluation degenerated")
    return an / m, ad / m


def orbit_homog(F: RatMap, p: PointP1, steps: int) -> list:
    """[p, F(p), ..., F^steps(p)] as normalized homogeneous pairs."""
    pair = p.homogeneous()
    out = [pair]
    for _ in range(steps):
        pair = eval_homog(F, *pair)
        out.append(pair)
    return out


# ---------------------------------------------------------------------------
# Moebius transformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Moebius:
    """z -> (a z + b)/(c z + d) with exact entries, ad - bc != 0, scaled so
    the first nonzero of (a, b, c, d) is 1."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @staticmethod
    def new(a, b, c, d) -> "Moebius":
        a, b, c, d = (Fraction(x) for x in (a, b, c, d))
        if a * d - b * c == 0:
            raise ValueError("degenerate Moebius transformation")
        for pivot in (a, b, c, d):
            if pivot != 0:
                return Moebius(a / pivot, b / pivot, c / pivot, d / pivot)
        raise ValueError("degenerate Moebius transformation")

    @staticmethod
    def identity() -> "Moebius":
        return Moebius(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    def inverse(self) -> "Moebius":
        return Moebius.new(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Moebius") -> "Moebius":
        """self o other (matrix product)."""
        return Moebius.new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, p) -> PointP1:
        p = PointP1.of(p)
        if p.is_infinity:
            if self.c == 0:
                return PointP1.infinity()
            return PointP1(self.a / self.c)
        v = p.value
        if isinstance(v, Fraction):
            dv = self.c * v + self.d
            if dv == 0:
                return PointP1.infinity()
            return PointP1((self.a * v + self.b) / dv)
        dv = complex(float(self.c)) * v + complex(float(self.d))
        if dv == 0:
            return PointP1.infinity()
        return PointP1((complex(float(self.a)) * v + complex(float(self.b))) / dv)

    def to_ratmap(self) -> RatMap:
        return ratmap_new(Poly((self.b, self.a)), Poly((self.d, self.c)))

    def to_json(self) -> dict:
        return {"a": rat_to_str(self.a), "b": rat_to_str(self.b),
                "c": rat_to_str(self.c), "d": rat_to_str(self.d)}

    @staticmethod
    def from_json(data: dict) -> "Moebius":
        return Moebius.new(*(rat_from_str(data[k]) for k in "abcd"))


def _moebius_to_standard(p: PointP1, q: PointP1, r: PointP1) -> Moebius:
    """The Moebius map sending (p, q, r) to (0, 1, inf); exact points only."""
    if p.is_infinity:
        # (q - r)/(z - r)
        qv, rv = q.value, r.value
        return Moebius.new(0, qv - rv, 1, -rv)
    if q.is_infinity:
        # (z - p)/(z - r)
        return Moebius.new(1, -p.value, 1, -r.value)
    if r.is_infinity:
        # (z - p)/(q - p)
        return Moebius.new(1, -p.value, 0, q.value - p.value)
    pv, qv, rv = p.value, q.value, r.value
    return Moebius.new(qv - rv, -pv * (qv - rv), qv - pv, -rv * (qv - pv))


def moebius_through(src, dst) -> Moebius:
    """The unique Moebius map with src[i] -> dst[i] for two exact triples."""
    src = [PointP1.of(p) for p in src]
    dst = [PointP1.of(p) for p in dst]
    for triple in (src, dst):
        if (triple[0] == triple[1] or triple[0] == triple[2]
                or triple[1] == triple[2]):
            raise ValueError("repeated points")
    ms = _moebius_to_standard(*src)
    md = _moebius_to_standard(*dst)
    return md.inverse().compose(ms)


def conjugate(F: RatMap, mu: Moebius) -> RatMap:
    """mu^-1 o F o mu, exact."""
    m = mu.to_ratmap()
    minv = mu.inverse().to_ratmap()
    return compose(minv, compose(F, m))

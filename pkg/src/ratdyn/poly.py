"""Exact univariate polynomial arithmetic over arbitrary-precision rationals.

Coefficients are `fractions.Fraction` stored in ascending degree order with no
trailing zeros; the zero polynomial is the empty tuple.  All ring operations
(add, sub, mul, divmod, gcd, compose, derivative) are exact.  The numeric
layer is confined to root finding: multiplicities are first split off exactly
by square-free decomposition over the rationals, then each square-free factor
goes to a companion-matrix eigenvalue solve with Newton polishing, and every
root is residual-validated before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import gmpy2
import numpy as np

Rat = Fraction
Scalar = Union[int, Fraction]

DEFAULT_ROOT_EPS = 1e-10

# 31-bit primes used by the modular coprimality fast path.
_GCD_PRIMES = (2147483629, 2147483587)


# ---------------------------------------------------------------------------
# Rational scalar helpers (JSON encoding "p/q", or "p" when q = 1)
# ---------------------------------------------------------------------------

def rat_to_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_from_str(s: Union[str, int]) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s).strip())


def check_complex(z: complex) -> complex:
    """Validate a finite complex scalar (the numeric-layer value type)."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("non-finite complex value")
    return z


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over Fraction, ascending coefficients."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def of(*coeffs: Scalar) -> "Poly":
        return Poly(coeffs)

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def constant(c: Scalar) -> "Poly":
        return Poly((c,))

    @staticmethod
    def from_roots(roots: Iterable[Scalar], lead: Scalar = 1) -> "Poly":
        p = Poly.constant(lead)
        for r in roots:
            p = p * Poly((-_as_fraction(r), 1))
        return p

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other) -> "Poly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return Poly.zero()
        # Clear denominators so the convolution runs on plain ints; one
        # Fraction normalization per output coefficient instead of per term.
        da, A = _integerize(self.coeffs)
        db, B = _integerize(other.coeffs)
        C = _int_convolve(A, B)
        d = da * db
        return Poly(Fraction(c, d) for c in C)

    __rmul__ = __mul__
    __radd__ = __add__

    def scale(self, c: Scalar) -> "Poly":
        c = _as_fraction(c)
        if c == 0:
            return Poly.zero()
        return Poly(a * c for a in self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other) -> tuple:
        other = _coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        dd = other.degree
        if self.degree < dd:
            return Poly.zero(), self
        rem = list(self.coeffs)
        dlead = other.lead
        q = [Fraction(0)] * (self.degree - dd + 1)
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + dd]
            if c == 0:
                continue
            f = c / dlead
            q[k] = f
            for i, oc in enumerate(other.coeffs):
                rem[k + i] -= f * oc
        return Poly(q), Poly(rem[:dd])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    # -- calculus / composition --------------------------------------------

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k >= 1)

    def compose(self, inner: "Poly") -> "Poly":
        """Exact composition self(inner(z)), by Horner in the polynomial ring."""
        result = Poly.zero()
        for c in reversed(self.coeffs):
            result = result * inner + Poly.constant(c)
        return result

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("zero polynomial cannot be made monic")
        return self.scale(1 / self.lead)

    def reversal(self, degree: int = None) -> "Poly":
        """Coefficient reversal z^d * p(1/z), padded to the given degree."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        return Poly(self.coeff(k) for k in range(d, -1, -1))

    # -- evaluation ---------------------------------------------------------

    def eval(self, x):
        """Horner evaluation: exact for Fraction/int input, complex otherwise."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
        else:
            acc = 0j
            x = complex(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        return self.eval(x)

    # -- presentation / serialization ---------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c == 0:
                continue
            a = abs(c)
            if k == 0:
                body = rat_to_str(a)
            else:
                var = "z" if k == 1 else f"z^{k}"
                body = var if a == 1 else f"{rat_to_str(a)}*{var}"
            terms.append(("-" if c < 0 else "+", body))
        sign0, body0 = terms[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list:
        return [rat_to_str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data: Sequence) -> "Poly":
        return Poly(rat_from_str(c) for c in data)


def _coerce(p) -> Poly:
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, Fraction)):
        return Poly.constant(p)
    raise TypeError(f"cannot coerce {type(p).__name__} to Poly")


def _integerize(coeffs: tuple) -> tuple:
    """Common denominator L and the integer vector [c*L]."""
    L = 1
    for c in coeffs:
        L = L * c.denominator // math.gcd(L, c.denominator)
    return L, [c.numerator * (L // c.denominator) for c in coeffs]


def _int_convolve(A: list, B: list) -> list:
    out = [0] * (len(A) + len(B) - 1)
    for i, a in enumerate(A):
        if not a:
            continue
        for j, b in enumerate(B):
            out[i + j] += a * b
    return out


# ---------------------------------------------------------------------------
# GCD and square-free structure
# ---------------------------------------------------------------------------

def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor, exact (Euclid over the rationals)."""
    if a.is_zero and b.is_zero:
        raise ValueError("undefined gcd")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_compose(outer: Poly, inner: Poly) -> Poly:
    return outer.compose(inner)


def _mod_strip(v: list) -> list:
    while v and v[-1] == 0:
        v.pop()
    return v


def _mod_rem(a: list, b: list, q: int) -> list:
    inv = pow(b[-1], q - 2, q)
    a = a[:]
    while len(a) >= len(b):
        f = a[-1] * inv % q
        s = len(a) - len(b)
        for i, c in enumerate(b):
            a[s + i] = (a[s + i] - f * c) % q
        _mod_strip(a)
    return a


def _modular_gcd_degree(A: list, B: list, q: int):
    """deg gcd(A, B) mod q, or None when q is unusable for these inputs."""
    if A[-1] % q == 0 or B[-1] % q == 0:
        return None
    a = _mod_strip([c % q for c in A])
    b = _mod_strip([c % q for c in B])
    if not a or not b:
        return None
    while b:
        a, b = b, _mod_rem(a, b, q)
    return len(a) - 1


def certified_coprime(a: Poly, b: Poly) -> bool:
    """True only when gcd(a, b) = 1 is certain (modular-image certificate).

    deg gcd over Q <= deg gcd mod q for any prime q not dividing the leading
    coefficients, so a trivial modular gcd proves coprimality.  False means
    "unknown": callers must fall back to the exact gcd.
    """
    if a.is_zero or b.is_zero:
        return False
    if a.degree == 0 or b.degree == 0:
        return True
    _, A = _integerize(a.coeffs)
    _, B = _integerize(b.coeffs)
    for q in _GCD_PRIMES:
        if _modular_gcd_degree(A, B, q) == 0:
            return True
    return False


def squarefree_decomposition(p: Poly) -> list:
    """Yun decomposition: [(g_i, i)] with p = lead * prod g_i^i, g_i monic,
    square-free, pairwise coprime."""
    if p.degree < 1:
        raise ValueError("square-free decomposition needs degree >= 1")
    p = p.monic()
    dp = p.derivative()
    if certified_coprime(p, dp):
        return [(p, 1)]
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return [(p, 1)]
    out = []
    c = p // g
    d = dp // g - c.derivative()
    i = 1
    while c.degree > 0:
        a = poly_gcd(c, d)
        if a.degree > 0:
            out.append((a, i))
        c = c // a
        d = d // a - c.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# Numeric root kernel (scaled coefficients, Newton polish, residual gate)
# ---------------------------------------------------------------------------

def _horner_c(c: Sequence[complex], x: complex) -> complex:
    acc = 0j
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _horner_pair(c: Sequence[complex], x: complex) -> tuple:
    """(p(x), p'(x)) in one pass."""
    p = 0j
    dp = 0j
    for a in reversed(c):
        dp = dp * x + p
        p = p * x + a
    return p, dp


def _normalized_residual(c: Sequence[complex], r: complex) -> float:
    """|p(r)| / max(1, |r|)^deg for max-scaled coefficients.

    Evaluated through the reversed polynomial at 1/r when |r| > 1, so the
    value is well-conditioned (and finite) for arbitrarily large roots.
    """
    if abs(r) <= 1:
        return abs(_horner_c(c, r))
    return abs(_horner_c(list(reversed(c)), 1 / r))


def _newton_ratios(c: np.ndarray, crev: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z) for every z, evaluated stably on both sides of |z| = 1.

    For |z| > 1 the reversed polynomial q(w) = z^-n p(z) at w = 1/z gives
    p/p' = z q / (n q - w q'), avoiding overflow and the direct-evaluation
    cancellation blowup for remote roots.
    """
    n = len(c) - 1
    ratios = np.empty_like(z)
    small = np.abs(z) <= 1.0
    zs = z[small]
    if zs.size:
        p = np.zeros_like(zs)
        dp = np.zeros_like(zs)
        for a in c[::-1]:
            dp = dp * zs + p
            p = p * zs + a
        safe = dp != 0
        ratios[small] = np.where(safe, p / np.where(safe, dp, 1), 0)
    zl = z[~small]
    if zl.size:
        w = 1 / zl
        q = np.zeros_like(w)
        dq = np.zeros_like(w)
        # Horner for q: highest coefficient of q is crev[n] = c[0].
        for a in crev[::-1]:
            dq = dq * w + q
            q = q * w + a
        denom = n * q - w * dq
        safe = denom != 0
        ratios[~small] = np.where(safe, zl * q / np.where(safe, denom, 1), 0)
    return ratios


def _aberth_double(cs: Sequence[complex], starts: Sequence[complex],
                   max_iter: int = 80, stag_tol: float = 1e-15) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich refinement at double precision."""
    c = np.asarray(cs, dtype=complex)
    crev = c[::-1].copy()
    z = np.array(starts, dtype=complex)
    n = len(z)
    if n == 0:
        return z
    # Coincident starts deadlock the repulsion term; jitter them apart.
    for i in range(n):
        for j in range(i):
            if z[i] == z[j]:
                z[i] += 1e-6 * (1 + abs(z[i])) * complex(1, 1)
    for _ in range(max_iter):
        N = _newton_ratios(c, crev, z)
        if n > 1:
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            S = (1.0 / diff).sum(axis=1)
        else:
            S = np.zeros_like(z)
        corr = N / (1 - N * S)
        corr = np.where(np.isfinite(corr), corr, 0)
        z = z - corr
        if np.max(np.abs(corr) / np.maximum(1.0, np.abs(z))) < stag_tol:
            break
    return z


def roots_complex(coeffs: Sequence[complex], eps: float = DEFAULT_ROOT_EPS) -> list:
    """All roots of a complex-coefficient polynomial (ascending coeffs).

    Companion-matrix eigenvalue starts refined by simultaneous Aberth-Ehrlich
    iteration; every root must pass the normalized residual gate or the whole
    call fails.
    """
    cs = [complex(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) < 2:
        raise ValueError("constant polynomial has no roots")
    m = max(abs(c) for c in cs)
    cs = [c / m for c in cs]
    if len(cs) == 2:
        raw = np.array([-cs[0] / cs[1]])
    else:
        raw = np.roots(cs[::-1])
        raw = _aberth_double(cs, raw)
    out = []
    for r in raw:
        r = complex(r)
        if _normalized_residual(cs, r) > eps:
            raise ValueError("roots not validated")
        out.append(r)
    out.sort(key=lambda z: (z.real, z.imag))
    return out


def _scaled_float_coeffs(p: Poly) -> list:
    m = max(abs(c) for c in p.coeffs)
    return [float(c / m) for c in p.coeffs]


def normalized_residual(p: Poly, z: complex) -> float:
    """|p(z)| / (max|coeff| * max(1, |z|)^deg): the root-validation residual."""
    if p.is_zero:
        return 0.0
    return _normalized_residual(_scaled_float_coeffs(p), complex(z))


# High-degree fixed-point polynomials can make companion roots backward-stable
# yet forward-inaccurate (huge coefficient spread).  Roots whose double-
# precision Newton step exceeds this (relative to the root) are re-refined
# collectively against the exact coefficients at extended precision.
_FORWARD_ERR_TRIGGER = 1e-12
_MP_PRECISION = 120  # bits


def _mp_aberth(factor: Poly, roots: list, bad: list, max_iter: int = 40) -> list:
    """Aberth-Ehrlich at extended precision (gmpy2) for the flagged roots,
    with repulsion against the full root set so flagged roots cannot collapse
    onto their neighbours.  Exact coefficients, so the extended precision
    actually buys forward accuracy."""
    n = factor.degree
    refined = list(roots)
    with gmpy2.local_context(precision=_MP_PRECISION):
        coeffs = [gmpy2.mpc(gmpy2.mpfr(c.numerator) / gmpy2.mpfr(c.denominator))
                  for c in factor.coeffs]
        crev = coeffs[::-1]
        zs = [gmpy2.mpc(r) for r in refined]
        one = gmpy2.mpfr(1)

        def ratio(z):
            if abs(z) <= 1:
                pv = gmpy2.mpc(0)
                dv = gmpy2.mpc(0)
                for a in reversed(coeffs):
                    dv = dv * z + pv
                    pv = pv * z + a
                return pv / dv if dv != 0 else gmpy2.mpc(0)
            w = 1 / z
            qv = gmpy2.mpc(0)
            dq = gmpy2.mpc(0)
            for a in reversed(crev):
                dq = dq * w + qv
                qv = qv * w + a
            denom = n * qv - w * dq
            return z * qv / denom if denom != 0 else gmpy2.mpc(0)

        active = set(bad)
        floor = gmpy2.mpfr(2) ** (-(_MP_PRECISION - 25))
        for _ in range(max_iter):
            if not active:
                break
            settled = []
            for i in sorted(active):
                z = zs[i]
                N = ratio(z)
                S = gmpy2.mpc(0)
                for j, zj in enumerate(zs):
                    if j != i and z != zj:
                        S += 1 / (z - zj)
                corr = N / (1 - N * S)
                zs[i] = z - corr
                if abs(corr) <= floor * max(one, abs(zs[i])):
                    settled.append(i)
            active.difference_update(settled)
        for i in bad:
            refined[i] = complex(zs[i])
    return refined


def poly_roots(p: Poly, eps: float = DEFAULT_ROOT_EPS) -> list:
    """Roots of an exact polynomial as [(complex root, exact multiplicity)].

    Multiplicities come from exact square-free decomposition over Q; numeric
    work only ever sees square-free factors, whose simple roots are refined
    until they are accurate to double precision, not merely backward-stable.
    """
    if p.degree < 1:
        raise ValueError("constant polynomial has no roots")
    out = []
    for factor, mult in squarefree_decomposition(p):
        scaled = _scaled_float_coeffs(factor)
        roots = roots_complex(scaled, eps)
        c = np.asarray(scaled, dtype=complex)
        steps = _newton_ratios(c, c[::-1].copy(), np.asarray(roots, dtype=complex))
        bad = [i for i, (r, st) in enumerate(zip(roots, steps))
               if abs(st) / max(1.0, abs(r)) > _FORWARD_ERR_TRIGGER]
        if bad:
            roots = _mp_aberth(factor, roots, bad)
        for r in roots:
            if _normalized_residual(scaled, r) > eps:
                raise ValueError("roots not validated")
            out.append((r, mult))
    if sum(m for _, m in out) != p.degree:
        raise ValueError("roots not validated")
    out.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return out

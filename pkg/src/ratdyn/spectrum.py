"""Multiplier spectra of periodic points, and the isospectrality test.

For a degree-d map F and period s, the fixed points of the s-fold iterate
form a divisor of degree d^s + 1 on P^1: the roots of
num(F^s)(z) - z*den(F^s)(z) plus the point at infinity with the complementary
multiplicity.  Multiplicities are exact (square-free decomposition over Q);
the multipliers themselves are numeric, computed as the product of
chart-local derivatives of F along the orbit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .poly import DEFAULT_ROOT_EPS, Poly, normalized_residual, poly_roots
from .ratmap import (
    PointP1,
    RatMap,
    compose,
    derivative,
    eval_homog,
    eval_p1,
    iterate_map,
    ratmap_new,
    reciprocal,
)

DEFAULT_SMAX = 3
DEFAULT_MATCH_TOL = 1e-7
DEFAULT_FIX_TOL = 1e-6


@dataclass(frozen=True)
class PeriodicDivisor:
    """Fixed-point divisor of F^s: finite part polynomial + multiplicity at
    infinity, totalling d^s + 1."""

    period: int
    finite_part: Poly
    infinity_multiplicity: int
    map_degree: int

    @property
    def total(self) -> int:
        return self.map_degree ** self.period + 1


@dataclass(frozen=True)
class MultiplierSpectrum:
    """Per-period multiset of (multiplier, multiplicity)."""

    degree: int
    entries: dict

    def total_multiplicity(self, s: int) -> int:
        return sum(m for _, m in self.entries[s])

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "periods": {
                str(s): [{"multiplier": [lam.real, lam.imag], "mult": m}
                         for lam, m in ms]
                for s, ms in sorted(self.entries.items())
            },
        }


@lru_cache(maxsize=128)
def periodic_divisor(F: RatMap, s: int) -> PeriodicDivisor:
    if F.degree < 2:
        raise ValueError("periodic divisor needs degree >= 2")
    if s < 1:
        raise ValueError("period must be >= 1")
    Fs = iterate_map(F, s)
    finite = Fs.num - Poly.x() * Fs.den
    total = F.degree ** s + 1
    inf_mult = total - finite.degree
    assert inf_mult >= 0, "fixed-point divisor exceeded d^s + 1"
    return PeriodicDivisor(s, finite, inf_mult, F.degree)


# ---------------------------------------------------------------------------
# Multipliers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _chart_derivatives(F: RatMap) -> dict:
    """Derivative of F written in all four (source, target) chart pairs,
    where the chart at a point is either z or w = 1/z."""
    inv = ratmap_new(Poly.one(), Poly.x())
    H = compose(F, inv)
    return {
        (False, False): derivative(F),
        (False, True): derivative(reciprocal(F)),
        (True, False): derivative(H),
        (True, True): derivative(reciprocal(H)),
    }


def _eval_complex(F: RatMap, z: complex) -> complex:
    nv = F.num.eval(z)
    dv = F.den.eval(z)
    if dv == 0:
        raise ValueError("multiplier evaluation hit a pole")
    return complex(nv / dv)


def multiplier(F: RatMap, s: int, p, fix_tol: float = DEFAULT_FIX_TOL) -> complex:
    """Multiplier of F^s at a fixed point p of F^s.

    Product of the derivative of F along the orbit of p, each factor taken in
    charts adapted to the orbit point (w = 1/z at and near infinity).  The
    chart factors telescope around the closed cycle, so the product does not
    depend on the chart assignment; the cycle is closed through p itself so
    the assignment is consistent.  Exact points are handled exactly; the
    point at infinity uses exact conjugation by 1/z.

    p must lie in the fixed-point divisor of F^s: exactly for exact points,
    within fix_tol (normalized polynomial residual) for numeric ones.
    """
    p = PointP1.of(p)
    pd = periodic_divisor(F, s)
    charts = _chart_derivatives(F)
    if p.is_exact:
        if p.is_infinity:
            if pd.infinity_multiplicity == 0:
                raise ValueError("not a fixed point of the s-fold iterate")
        elif pd.finite_part.eval(p.value) != 0:
            raise ValueError("not a fixed point of the s-fold iterate")
        orbit = [p]
        for _ in range(s - 1):
            orbit.append(eval_p1(F, orbit[-1]))
        prod = Fraction(1)
        for i in range(s):
            x, y = orbit[i], orbit[(i + 1) % s]
            key = (x.is_infinity, y.is_infinity)
            coord = Fraction(0) if x.is_infinity else x.value
            val = eval_p1(charts[key], coord)
            if val.is_infinity:
                raise ValueError("multiplier evaluation degenerated")
            prod *= val.value
        return complex(prod)

    if normalized_residual(pd.finite_part, p.value) > fix_tol:
        raise ValueError("not a fixed point of the s-fold iterate")
    # Numeric orbit in homogeneous coordinates; chart chosen by magnitude,
    # one classification per orbit point.
    pairs = [p.homogeneous()]
    for _ in range(s - 1):
        pairs.append(eval_homog(F, *pairs[-1]))
    prod = 1 + 0j
    for i in range(s):
        (a1, b1), (a2, b2) = pairs[i], pairs[(i + 1) % s]
        src_inf = abs(a1) > abs(b1)
        dst_inf = abs(a2) > abs(b2)
        coord = b1 / a1 if src_inf else a1 / b1
        prod *= _eval_complex(charts[(src_inf, dst_inf)], coord)
    return prod


def spectrum(F: RatMap, s_max: int = DEFAULT_SMAX,
             eps: float = DEFAULT_ROOT_EPS,
             fix_tol: float = DEFAULT_FIX_TOL) -> MultiplierSpectrum:
    """Multiplier multiset at every period s <= s_max.

    Multiplicity structure is exact; multiplier values are numeric except
    at exact fixed points (rational roots are not special-cased, so finite
    multipliers are double precision).
    """
    if F.degree < 2:
        raise ValueError("spectrum needs degree >= 2")
    entries = {}
    for s in range(1, s_max + 1):
        pd = periodic_divisor(F, s)
        ms = []
        if pd.finite_part.degree >= 1:
            for r, m in poly_roots(pd.finite_part, eps):
                ms.append((multiplier(F, s, PointP1.of(r), fix_tol), m))
        if pd.infinity_multiplicity > 0:
            lam = multiplier(F, s, PointP1.infinity(), fix_tol)
            ms.append((lam, pd.infinity_multiplicity))
        ms.sort(key=lambda t: (t[0].real, t[0].imag))
        entries[s] = tuple(ms)
        assert sum(m for _, m in ms) == pd.total
    return MultiplierSpectrum(F.degree, entries)


def holomorphic_index_sum(spec: MultiplierSpectrum) -> Optional[complex]:
    """sum mult/(1 - lambda) over period-1 multipliers; equals 1 for any
    rational map without a multiplier at 1.  None when a parabolic
    multiplier (within 1e-6 of 1) blocks the formula."""
    total = 0j
    for lam, m in spec.entries[1]:
        if abs(lam - 1) < 1e-6:
            return None
        total += m / (1 - lam)
    return total


# ---------------------------------------------------------------------------
# Multiset matching / isospectrality
# ---------------------------------------------------------------------------

def match_multisets(xs, ys, tol: float):
    """Greedy sorted pairing of two (value, multiplicity) multisets.

    Both sides are expanded and sorted lexicographically by (re, im); each
    element then pairs with the nearest not-yet-used partner, which keeps the
    pairing stable when mathematically tied values (conjugate pairs) are
    reordered by rounding noise.  Residuals are relative,
    |x - y| / max(1, |x|, |y|); if the base tolerance fails, a 10x escalation
    is tried once, matching with a warning.
    """
    ax = sorted([complex(v) for v, m in xs for _ in range(m)],
                key=lambda z: (z.real, z.imag))
    ay = sorted([complex(v) for v, m in ys for _ in range(m)],
                key=lambda z: (z.real, z.imag))
    if len(ax) != len(ay):
        return False, float("inf"), False
    used = [False] * len(ay)
    worst = 0.0
    for x in ax:
        best = None
        best_d = None
        for i, y in enumerate(ay):
            if used[i]:
                continue
            d = abs(x - y)
            if best_d is None or d < best_d:
                best, best_d = i, d
        used[best] = True
        worst = max(worst, best_d / max(1.0, abs(x), abs(ay[best])))
    if worst <= tol:
        return True, worst, False
    if worst <= 10 * tol:
        warnings.warn(
            f"multiset match needed tolerance escalation ({worst:.3e} > {tol:.3e})")
        return True, worst, True
    return False, worst, False


@dataclass(frozen=True)
class PeriodMatch:
    period: int
    matched: bool
    worst_residual: float
    escalated: bool


@dataclass(frozen=True)
class IsospectralReport:
    ok: bool
    periods: tuple
    tol: float

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "isospectral": self.ok,
            "tol": self.tol,
            "periods": [{"period": p.period, "matched": p.matched,
                         "worst_residual": p.worst_residual,
                         "escalated": p.escalated}
                        for p in self.periods],
        }


def isospectral(F: RatMap, G: RatMap, s_max: int = DEFAULT_SMAX,
                tol: float = DEFAULT_MATCH_TOL,
                eps: float = DEFAULT_ROOT_EPS) -> IsospectralReport:
    """Per-period multiset comparison of the multiplier spectra of F and G."""
    if F.degree != G.degree:
        raise ValueError("degree mismatch")
    sf = spectrum(F, s_max, eps)
    sg = spectrum(G, s_max, eps)
    periods = []
    for s in range(1, s_max + 1):
        ok, worst, esc = match_multisets(sf.entries[s], sg.entries[s], tol)
        periods.append(PeriodMatch(s, ok, worst, esc))
    return IsospectralReport(all(p.matched for p in periods), tuple(periods), tol)

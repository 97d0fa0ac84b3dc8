"""Exact arithmetic kernels.

Rational values are fractions.Fraction everywhere.  Sums of roots of unity
are kept symbolically as integer coefficient vectors (CyclotomicSum) so that
vanishing statements can be decided exactly, with no floating point in the
decision path.  High-precision numerics are mpmath mpf/mpc behind small
wrapper types that remember the binary precision they were computed at.

Everything in this module is pure: no function mutates its arguments.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

__all__ = [
    "DEFAULT_ORDER_CAP",
    "default_precision",
    "sawtooth",
    "HPReal",
    "HPComplex",
    "to_mpf",
    "bessel_i1",
    "OrderCapError",
    "CyclotomicSum",
    "cyclo_zero",
    "cyclo_from_phases",
    "cyclo_add_phase",
    "cyclo_add",
    "cyclo_neg",
    "cyclo_is_zero",
    "cyclo_to_complex",
    "cyclotomic_polynomial",
    "reduce_mod_cyclotomic",
]

# Largest root-of-unity order handled symbolically unless a caller raises the
# cap.  2 * lcm(16, 3, 2040) covers the phase denominators that show up in the
# default verification grids.
DEFAULT_ORDER_CAP = 2 * math.lcm(16, 3, 2040)


def default_precision() -> int:
    """Working binary precision; override with the LEGPART_PRECISION env var."""
    raw = os.environ.get("LEGPART_PRECISION", "128")
    try:
        prec = int(raw)
    except ValueError as exc:
        raise ValueError(f"LEGPART_PRECISION must be an integer, got {raw!r}") from exc
    if prec < 8:
        raise ValueError("precision below 8 bits is not supported")
    return prec


def sawtooth(x) -> Fraction:
    """The sawtooth ((x)): x - floor(x) - 1/2 for nonintegral x, 0 at integers.

    Odd and 1-periodic.  Accepts anything Fraction() accepts.
    """
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


# ---------------------------------------------------------------------------
# high-precision wrappers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HPReal:
    """An mpmath real together with the binary precision it was computed at."""

    value: object  # mp.mpf
    prec: int

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class HPComplex:
    """An mpmath complex together with the binary precision it was computed at."""

    value: object  # mp.mpc
    prec: int

    def __complex__(self) -> complex:
        return complex(self.value)


def to_mpf(x):
    """Convert int/float/Fraction/mpf to mpf at the current working precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)


def bessel_i1(x, prec: int | None = None) -> HPReal:
    """Modified Bessel function I_1 by its ascending power series.

    I_1(x) = sum_{m>=0} (x/2)^(2m+1) / (m! (m+1)!).  The loop stops once the
    next term falls below 2^-(prec+8) of the running partial sum, which keeps
    the absolute error below 2^(8-prec) for the argument ranges used here.
    Only the ascending series is used; no asymptotic branch.
    """
    if prec is None:
        prec = default_precision()
    if isinstance(x, Fraction):
        neg = x < 0
    else:
        neg = mp.mpf(x) < 0
    if neg:
        raise ValueError("bessel_i1 expects a nonnegative argument")
    with mp.workprec(prec + 24):
        xx = to_mpf(x)
        if xx == 0:
            out = mp.mpf(0)
        else:
            half = xx / 2
            hsq = half * half
            term = half  # m = 0 term
            total = term
            cutoff = mp.mpf(2) ** (-(prec + 8))
            m = 0
            while True:
                m += 1
                term = term * hsq / (m * (m + 1))
                total += term
                if term < cutoff * total:
                    break
            out = total
    with mp.workprec(prec):
        out = +out
    return HPReal(out, prec)


# ---------------------------------------------------------------------------
# exact sums of roots of unity
# ---------------------------------------------------------------------------

class OrderCapError(ValueError):
    """A requested cyclotomic order exceeded the configured cap."""


@dataclass(frozen=True)
class CyclotomicSum:
    """Integer combination sum_j coeffs[j] * exp(2 pi i j / order).

    coeffs always has length order.  For even order the stored support is
    folded into 0 <= j < order/2 via exp(2 pi i (j + order/2) / order)
    = -exp(2 pi i j / order), so equal sums get equal representations.
    """

    order: int
    coeffs: tuple

    def weight(self) -> int:
        """Sum of absolute coefficient values (trivial bound on the modulus)."""
        return sum(abs(c) for c in self.coeffs)

    def support(self) -> tuple:
        return tuple(j for j, c in enumerate(self.coeffs) if c)


def _canonical(order: int, pairs) -> CyclotomicSum:
    c = [0] * order
    for j, w in pairs:
        c[j % order] += w
    if order % 2 == 0:
        half = order // 2
        for j in range(half, order):
            if c[j]:
                c[j - half] -= c[j]
                c[j] = 0
    return CyclotomicSum(order, tuple(c))


def cyclo_zero(order: int = 2) -> CyclotomicSum:
    if order < 1:
        raise ValueError("order must be positive")
    return CyclotomicSum(order, (0,) * order)


def _phase_to_exponent(phase: Fraction, order: int) -> int:
    # phase is in half turns; exp(i pi a/b) = zeta_(2b)^a.
    ph = Fraction(phase) % 2
    return ph.numerator * (order // (2 * ph.denominator))


def cyclo_from_phases(phases, weights=None, order_cap: int | None = None) -> CyclotomicSum:
    """Exact sum of weights[i] * exp(i pi phases[i]); phases in half turns.

    The order is twice the lcm of the phase denominators (always even).
    Raises OrderCapError if that exceeds the cap (DEFAULT_ORDER_CAP unless
    overridden), so callers can fall back to numeric evaluation.
    """
    phases = [Fraction(ph) % 2 for ph in phases]
    if weights is None:
        weights = [1] * len(phases)
    weights = list(weights)
    if len(weights) != len(phases):
        raise ValueError("phases and weights must have equal length")
    cap = DEFAULT_ORDER_CAP if order_cap is None else order_cap
    den = 1
    for ph in phases:
        den = math.lcm(den, ph.denominator)
    order = 2 * den
    if order > cap:
        raise OrderCapError(f"cyclotomic order {order} exceeds cap {cap}")
    return _canonical(order, ((_phase_to_exponent(ph, order), w)
                              for ph, w in zip(phases, weights)))


def cyclo_add_phase(s: CyclotomicSum, phase, weight: int = 1,
                    order_cap: int | None = None) -> CyclotomicSum:
    """s + weight * exp(i pi phase), rescaling the order to the lcm if needed."""
    ph = Fraction(phase) % 2
    cap = DEFAULT_ORDER_CAP if order_cap is None else order_cap
    order = math.lcm(s.order, 2 * ph.denominator)
    if order > cap:
        raise OrderCapError(f"cyclotomic order {order} exceeds cap {cap}")
    scale = order // s.order
    pairs = [(j * scale, c) for j, c in enumerate(s.coeffs) if c]
    pairs.append((_phase_to_exponent(ph, order), weight))
    return _canonical(order, pairs)


def cyclo_add(a: CyclotomicSum, b: CyclotomicSum,
              order_cap: int | None = None) -> CyclotomicSum:
    cap = DEFAULT_ORDER_CAP if order_cap is None else order_cap
    order = math.lcm(a.order, b.order)
    if order > cap:
        raise OrderCapError(f"cyclotomic order {order} exceeds cap {cap}")
    sa, sb = order // a.order, order // b.order
    pairs = [(j * sa, c) for j, c in enumerate(a.coeffs) if c]
    pairs += [(j * sb, c) for j, c in enumerate(b.coeffs) if c]
    return _canonical(order, pairs)


def cyclo_neg(s: CyclotomicSum) -> CyclotomicSum:
    return CyclotomicSum(s.order, tuple(-c for c in s.coeffs))


@lru_cache(maxsize=None)
def _prime_factors(m: int) -> tuple:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def _mobius(m: int) -> int:
    mu = 1
    for _, e in _prime_factors(m):
        if e > 1:
            return 0
        mu = -mu
    return mu


def cyclo_is_zero(s: CyclotomicSum) -> bool:
    """Exact zero test over the integers.

    Rewrites the sum in a basis of the order-M cyclotomic field: for every
    odd prime power P = p^e dividing M exactly, exponents whose top p-digit
    (j mod P) // (P/p) equals p-1 are eliminated through the relation
    sum_{t=0..p-1} zeta^(j + t M/p) = 0, and finally the even fold
    zeta^(j+M/2) = -zeta^j clears the upper half.  The survivors are phi(M)
    many and linearly independent, so the sum vanishes iff every remaining
    coefficient is zero.  This is the same decision as reducing the
    coefficient polynomial mod the M-th cyclotomic polynomial (see
    reduce_mod_cyclotomic, which the tests cross-check against), just
    without the quadratic-cost long division.
    """
    M = s.order
    c = list(s.coeffs)
    for p, e in _prime_factors(M):
        if p == 2:
            continue
        pe = p ** e
        pe1 = pe // p
        step = M // p
        for j in range(M):
            w = c[j]
            if w and (j % pe) // pe1 == p - 1:
                c[j] = 0
                for t in range(1, p):
                    c[(j + t * step) % M] -= w
    if M % 2 == 0:
        half = M // 2
        for j in range(half, M):
            if c[j]:
                c[j - half] -= c[j]
                c[j] = 0
    return not any(c)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple:
    """Coefficients of Phi_M(x), constant term first.

    Computed by the divisor product Phi_M(x) = prod_{d | M} (x^d - 1)^mu(M/d):
    multiply out the mu = +1 factors, then divide the mu = -1 ones back out
    exactly.
    """
    if M < 1:
        raise ValueError("order must be positive")
    poly = [1]
    negs = []
    for d in range(1, M + 1):
        if M % d:
            continue
        mu = _mobius(M // d)
        if mu == 1:
            poly = _mul_xd_minus_1(poly, d)
        elif mu == -1:
            negs.append(d)
    for d in negs:
        poly = _div_xd_minus_1(poly, d)
    return tuple(poly)


def _mul_xd_minus_1(poly, d):
    out = [0] * (len(poly) + d)
    for i, v in enumerate(poly):
        if v:
            out[i] -= v
            out[i + d] += v
    return out


def _div_xd_minus_1(poly, d):
    # exact division by x^d - 1; the remainder is asserted away
    n = len(poly) - 1
    q = [0] * (n - d + 1)
    for j in range(n, d - 1, -1):
        q[j - d] = poly[j] + (q[j] if j <= n - d else 0)
    for j in range(d):
        want = -(q[j] if j <= n - d else 0)
        if poly[j] != want:
            raise ArithmeticError("division by x^d - 1 left a remainder")
    return q


def reduce_mod_cyclotomic(s: CyclotomicSum) -> tuple:
    """Remainder of the coefficient polynomial mod Phi_order(x) (long division).

    Slow but independent route to the same decision as cyclo_is_zero; kept
    for cross-validation.
    """
    phi = cyclotomic_polynomial(s.order)
    dphi = len(phi) - 1
    r = list(s.coeffs)
    for i in range(len(r) - 1, dphi - 1, -1):
        lead = r[i]
        if lead:
            base = i - dphi
            for t in range(dphi + 1):
                r[base + t] -= lead * phi[t]
    del r[dphi:]
    return tuple(r)


def cyclo_to_complex(s: CyclotomicSum, prec: int | None = None) -> HPComplex:
    """Numeric value of the sum; error at most 2^(4-prec) * weight."""
    if prec is None:
        prec = default_precision()
    guard = 16 + max(1, s.weight()).bit_length()
    M = s.order
    with mp.workprec(prec + guard):
        total = mp.mpc(0)
        for j, cj in enumerate(s.coeffs):
            if cj:
                total += cj * mp.expjpi(mp.mpf(2 * j) / M)
    with mp.workprec(prec):
        out = +total
    return HPComplex(out, prec)

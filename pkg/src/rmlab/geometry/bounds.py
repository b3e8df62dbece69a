"""Lower bound for the number of affine points of an absolutely irreducible variety.

For a variety of dimension ``m`` and degree ``d`` over F_q with ``q > 2(m+1)d^2``
the count is at least

    q^m - (d-1)(d-2) q^(m-1/2) - 5 d^(13/3) q^(m-1).

Both irrational quantities ``sqrt(q)`` and ``d^(13/3)`` are enclosed between
exact rationals built from integer k-th roots, so every sign decision is
certified.  The precision doubles until the enclosure excludes zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..exceptions import InvalidParameter
from ..fields import is_prime, prime_factors


def iroot(x: int, k: int) -> int:
    """Largest integer ``r`` with ``r^k <= x``."""
    if x < 0 or k < 1:
        raise InvalidParameter("iroot needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    r = 1 << -(-x.bit_length() // k)     # an upper bound
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def root_enclosure(x: int, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= x^(1/k) <= hi`` with ``hi - lo <= 2^-bits`` (equal when exact)."""
    scale = 1 << bits
    r = iroot(x * scale ** k, k)
    lo = Fraction(r, scale)
    hi = lo if r ** k == x * scale ** k else Fraction(r + 1, scale)
    return lo, hi


@dataclass(frozen=True)
class CafureMateraBound:
    q: int
    m: int
    d: int
    lower: Fraction          # the bound lies in [lower, upper]
    upper: Fraction
    hypothesis: bool         # q > 2(m+1)d^2
    bits: int

    @property
    def positive(self) -> bool:
        return self.lower > 0

    @property
    def non_positive(self) -> bool:
        return self.upper <= 0

    @property
    def decided(self) -> bool:
        return self.positive or self.non_positive


def cafure_matera(q: int, m: int, d: int, start_bits: int = 64, max_bits: int = 1 << 16) -> CafureMateraBound:
    """Certified enclosure of the bound at ``q``; refines until its sign is decided."""
    if q < 1 or m < 1 or d < 1:
        raise InvalidParameter("need q, m, d >= 1")
    c1 = (d - 1) * (d - 2)
    base = q ** (m - 1)
    bits = start_bits
    while True:
        s_lo, s_hi = root_enclosure(q, 2, bits)
        t_lo, t_hi = root_enclosure(d ** 13, 3, bits)
        lower = base * (q - c1 * s_hi - 5 * t_hi)
        upper = base * (q - c1 * s_lo - 5 * t_lo)
        res = CafureMateraBound(q, m, d, lower, upper, q > 2 * (m + 1) * d * d, bits)
        if res.decided or bits >= max_bits:
            return res
        bits *= 2


def crossover(m: int, d: int) -> float:
    """Real ``q`` where the bound changes sign: ``sqrt(q) = (c + sqrt(c^2 + 20 d^(13/3))) / 2``."""
    c1 = (d - 1) * (d - 2)
    u = (c1 + math.sqrt(c1 * c1 + 20 * d ** (13 / 3))) / 2
    return u * u


def min_q(m: int, d: int) -> int:
    """Least integer ``q > 2(m+1)d^2`` at which the bound is certified positive.

    Above ``(c/2)^2`` the reduced expression ``q - c sqrt(q) - 5 d^(13/3)`` is
    increasing, and below it the expression is negative, so a local search
    around the real crossover finds the least integer.
    """
    floor_hyp = 2 * (m + 1) * d * d + 1
    q = max(floor_hyp, int(crossover(m, d)) - 2)
    while q > floor_hyp and cafure_matera(q - 1, m, d).positive:
        q -= 1
    while not cafure_matera(q, m, d).positive:
        q += 1
    return q


def is_odd_prime_power(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    f = prime_factors(q)
    return len(f) == 1


def smallest_odd_prime_power_above(x: int) -> int:
    """Least odd prime power ``>= x``."""
    q = max(3, int(x))
    while not is_odd_prime_power(q):
        q += 1
    return q


__all__ = ["CafureMateraBound", "cafure_matera", "crossover", "min_q", "iroot", "root_enclosure",
           "is_odd_prime_power", "smallest_odd_prime_power_above", "is_prime"]

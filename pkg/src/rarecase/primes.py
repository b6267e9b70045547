"""Prime enumeration on intervals and prime-gap statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SIEVE_LIMIT = 2**40
_SEGMENT = 1 << 20


class PrimeRangeError(ValueError):
    pass


def _base_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if is_p[q]:
            is_p[q * q::q] = False
    return np.flatnonzero(is_p).astype(np.int64)


def primes_in_interval(lo: int, hi: int) -> list[int]:
    """Primes p with lo < p < hi, by a segmented sieve."""
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi > SIEVE_LIMIT or lo >= hi:
        raise PrimeRangeError(f"need 2 <= lo < hi <= 2^40, got ({lo}, {hi})")
    start, stop = lo + 1, hi  # half-open [start, stop)
    if stop <= start:
        return []
    base = _base_primes(math.isqrt(stop - 1) + 1)
    out: list[int] = []
    for seg_lo in range(start, stop, _SEGMENT):
        seg_hi = min(seg_lo + _SEGMENT, stop)
        mask = np.ones(seg_hi - seg_lo, dtype=bool)
        for q in base.tolist():
            if q * q >= seg_hi:
                break
            first = max(q * q, -(-seg_lo // q) * q)
            mask[first - seg_lo::q] = False
        out.extend((np.flatnonzero(mask) + seg_lo).tolist())
    return out


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_from(min_prime: int, count: int, *, odd_only: bool = True) -> list[int]:
    """The first ``count`` primes >= min_prime (2 skipped when odd_only)."""
    # the sieve interval is open and starts above 2, so 2 is added by hand
    out: list[int] = [2] if min_prime <= 2 and not odd_only and count > 0 else []
    lo = max(2, int(min_prime) - 1)
    width = 256
    while len(out) < count:
        found = primes_in_interval(lo, lo + width + 1)
        out.extend(q for q in found if q >= min_prime and not (odd_only and q == 2))
        lo += width
        width *= 2
    return out[:count]


def beta_for(alpha, c) -> Fraction:
    """3 + 10^6 (alpha + c), exactly."""
    alpha, c = Fraction(alpha), Fraction(c)
    if alpha <= 0 or c <= 0:
        raise ValueError("alpha and c must be positive")
    return 3 + 10**6 * (alpha + c)


def _pow_fraction(n: int, e: Fraction) -> Fraction | float:
    if e.denominator == 1:
        return Fraction(n) ** e.numerator
    return float(n) ** float(e)


def paper_interval(n: int, beta, c_exp) -> tuple[int, Fraction]:
    """Integer lo and exact upper end of (n^beta, n^beta + n^beta/(n + 2 n^c)).

    Primes strictly inside satisfy lo < p < hi.  ``lo`` is rounded down and
    used exclusively; ``hi`` is kept as an exact rational whenever the
    exponents are integral.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    beta, c_exp = Fraction(beta), Fraction(c_exp)
    # log2 bound before building any big number
    if float(beta) * math.log2(n) > math.log2(SIEVE_LIMIT):
        raise PrimeRangeError(f"n^beta = {n}^{beta} exceeds the 2^40 sieve guard")
    base = _pow_fraction(n, beta)
    width_den = n + 2 * _pow_fraction(n, c_exp)
    hi = base + base / width_den
    if isinstance(hi, float):
        hi = Fraction(hi)
    return math.floor(base), Fraction(hi)


def primes_in_paper_interval(n: int, beta, c_exp) -> list[int]:
    lo, hi = paper_interval(n, beta, c_exp)
    return [q for q in primes_in_interval(lo, math.ceil(hi)) if lo < q < hi]


def max_gap(lo: int, hi: int) -> int:
    ps = primes_in_interval(lo, hi)
    if len(ps) < 2:
        raise PrimeRangeError(f"fewer than two primes in ({lo}, {hi})")
    return int(np.max(np.diff(np.array(ps, dtype=np.int64))))


@dataclass
class GapRow:
    m: int
    max_gap: int
    bound: float
    num_primes: int
    within_bound: bool = field(init=False)

    def __post_init__(self):
        self.within_bound = self.max_gap <= self.bound


def gap_report(ms=(10**4, 10**5, 10**6), exponent: float = 0.526) -> list[GapRow]:
    """Largest gap between consecutive primes in (m, 2m) next to m^exponent.

    The comparator is asymptotic; rows are informational only.
    """
    rows = []
    for m in ms:
        ps = primes_in_interval(m, 2 * m)
        gap = int(np.max(np.diff(np.array(ps, dtype=np.int64))))
        rows.append(GapRow(m=m, max_gap=gap, bound=float(m) ** exponent, num_primes=len(ps)))
    return rows

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rarecase.primes import (PrimeRangeError, beta_for, gap_report, is_prime_trial, max_gap, paper_interval,
                             primes_from, primes_in_interval, primes_in_paper_interval)


def test_small_interval():
    assert primes_in_interval(10, 30) == [11, 13, 17, 19, 23, 29]
    assert primes_in_interval(2, 3) == []
    assert primes_in_interval(2, 12) == [3, 5, 7, 11]
    # the interval is open at both ends
    assert primes_in_interval(11, 13) == []


def test_max_gap_100_200():
    # 113 -> 127
    assert max_gap(100, 200) == 14


@pytest.mark.parametrize("lo,hi", [(1, 10), (10, 10), (20, 10), (2, 2**40 + 1)])
def test_bad_ranges(lo, hi):
    with pytest.raises(PrimeRangeError):
        primes_in_interval(lo, hi)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10**6), st.integers(1, 3000))
def test_sieve_matches_trial_division(lo, width):
    hi = lo + width
    assert primes_in_interval(lo, hi) == [n for n in range(lo + 1, hi) if is_prime_trial(n)]


def test_segments_join_cleanly():
    lo = (1 << 20) - 50
    got = primes_in_interval(lo, lo + 100)
    assert got == [n for n in range(lo + 1, lo + 100) if is_prime_trial(n)]


def test_large_interval_near_guard():
    lo = 2**40 - 2000
    got = primes_in_interval(lo, 2**40)
    assert got and all(is_prime_trial(q) for q in got[:3])


def test_primes_from():
    assert primes_from(100, 3) == [101, 103, 107]
    assert primes_from(2, 3) == [3, 5, 7]
    assert primes_from(2, 2, odd_only=False) == [2, 3]


def test_beta_and_paper_interval():
    assert beta_for(1, 1) == 2000003
    assert beta_for(Fraction(1, 2), Fraction(1, 4)) == 750003
    with pytest.raises(ValueError):
        beta_for(0, 1)
    lo, hi = paper_interval(3, 3, 1)
    # 27 + 27 / (3 + 6) = 30
    assert (lo, hi) == (27, Fraction(30))
    assert primes_in_paper_interval(3, 3, 1) == [29]


def test_paper_interval_exact_upper_end():
    lo, hi = paper_interval(5, 2, 1)
    assert (lo, hi) == (25, Fraction(25) + Fraction(25, 15))
    assert primes_in_paper_interval(5, 2, 1) == []


def test_paper_interval_guard():
    with pytest.raises(PrimeRangeError):
        paper_interval(2, 41, 1)
    with pytest.raises(PrimeRangeError):
        paper_interval(10, beta_for(1, 1), 1)


def test_gap_report_rows():
    rows = gap_report(ms=(10**3, 10**4))
    assert [r.m for r in rows] == [1000, 10000]
    for r in rows:
        assert r.max_gap == max_gap(r.m, 2 * r.m)
        assert r.bound == pytest.approx(r.m ** 0.526)
        assert r.num_primes == len(primes_in_interval(r.m, 2 * r.m))

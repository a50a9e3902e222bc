from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padiclf.errors import DomainError, InsufficientPrecision, NotSimpleRoot
from padiclf.padic import (
    INF,
    PadicNumber,
    exp_p,
    hensel_lift,
    legendre,
    log_p,
    r_p_exponent,
    valuation,
    vp,
)

PRIMES = [2, 3, 5, 7, 11]


def log_oracle(x: Fraction, p: int, N: int) -> Fraction:
    """sum_{k<K} (-1)^{k+1} y^k / k with y = x - 1, K large enough that the
    dropped terms are divisible by p^N; residue mod p^N as an integer."""
    y = x - 1
    vy = vp(y, p)
    K = 1
    while K * vy - len(bin(K)) < N + 2:  # generous cutoff
        K += 1
    K += 4 * N
    s = sum(Fraction((-1) ** (k + 1)) * y**k / k for k in range(1, K))
    return s


def residue(x: Fraction, p: int, N: int) -> int:
    m = p**N
    return x.numerator * pow(x.denominator, -1, m) % m


def test_valuations_exact():
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(Fraction(3, 50), 5) == -2
    assert vp(0, 7) is INF
    assert legendre(10, 2) == 8  # 10! = 2^8 * ...
    assert r_p_exponent(2) == 1 and r_p_exponent(5) == Fraction(1, 4)


def test_inexact_zero_valuation_raises():
    with pytest.raises(InsufficientPrecision):
        valuation(PadicNumber.big_oh(5, 3))


@pytest.mark.parametrize("p", PRIMES)
def test_log_matches_direct_series(p):
    N = 12
    for a in range(1, 6):
        x = Fraction(1 + a * p, 1 + p * p)
        got = log_p(x, p, precision=N)
        want = log_oracle(x, p, N)
        # compare modulo p^N (absolute)
        diff = got.to_rational() - want
        assert diff == 0 or vp(diff, p) >= N


def test_log_of_six_at_five():
    # log_5(6) = 5 - 25/2 + 125/3 - ... has valuation 1
    assert log_p(Fraction(6), 5, precision=20).valuation == 1


@pytest.mark.parametrize("p", PRIMES)
def test_exp_log_roundtrip(p):
    for a in range(1, 5):
        z = Fraction(a * p * (2 if p == 2 else 1), 1 + p)
        e = exp_p(z, p, precision=15)
        back = log_p(e, precision=15)
        d = back - PadicNumber.from_rational(z, p, 15)
        assert d.is_exact_zero or d.valuation >= 15 or d.is_inexact_zero


def test_domain_errors():
    with pytest.raises(DomainError):
        log_p(Fraction(2), 5)
    with pytest.raises(DomainError):
        exp_p(Fraction(2), 2)  # v = 1 = 1/(p-1) is on the boundary


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**4), st.sampled_from(PRIMES))
def test_rational_roundtrip(num, den, p):
    x = Fraction(num, den)
    a = PadicNumber.from_rational(x, p, 30)
    assert valuation(a) == vp(x, p)
    assert residue(a.to_rational() - x + 0, p, 1) == 0 or vp(a.to_rational() - x, p) >= a.abs_precision


@given(st.integers(-500, 500).filter(bool), st.integers(-500, 500).filter(bool), st.sampled_from(PRIMES))
def test_field_operations(a, b, p):
    x = PadicNumber.from_rational(Fraction(a, 7 if p != 7 else 11), p, 25)
    y = PadicNumber.from_rational(Fraction(b), p, 25)
    prod = x * y
    assert prod.valuation == x.valuation + y.valuation
    q = prod / y
    d = q - x
    assert d.is_exact_zero or d.is_inexact_zero or d.valuation >= x.abs_precision - 1


def test_serialization_roundtrip():
    x = PadicNumber.from_rational(Fraction(-17, 9), 3, 12)
    assert PadicNumber.from_dict(x.to_dict()) == x


@pytest.mark.parametrize("p,f", [(7, [1, 0, -2]), (5, [1, 0, 1]), (7, [1, 1, 1]), (11, [1, -1, -1])])
def test_hensel_against_brute_force(p, f):
    N = 4
    m = p**N
    roots_modp = [r for r in range(p) if sum(c * r ** (len(f) - 1 - i) for i, c in enumerate(f)) % p == 0]
    assert roots_modp
    brute = {r for r in range(m) if sum(c * r ** (len(f) - 1 - i) for i, c in enumerate(f)) % m == 0}
    for r0 in roots_modp:
        x = hensel_lift(f, r0, p, N)
        val = int(x.to_rational()) % m
        assert val in brute and val % p == r0


def test_hensel_double_root():
    with pytest.raises(NotSimpleRoot):
        hensel_lift([1, -2, 1], 1, 5)

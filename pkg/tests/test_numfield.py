from fractions import Fraction
from math import gcd, log

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from padiclf.errors import NoSolutionFound, NonMonogenic, ZeroElement
from padiclf.numfield import (
    QQ_FIELD,
    HeightValue,
    agrees,
    NumberField,
    cyclotomic_field,
    decide_ge,
    denominator_check,
    height,
    heights_vector,
    liouville_check,
    normalized_abs,
    padic_valuation,
    product_formula_check,
    quadratic_field,
    siegel_bound,
    siegel_solve,
)

K2 = quadratic_field(2)


def mahler_height(x) -> float:
    """h(x) = log M(minpoly)/deg, from sympy's minimal polynomial."""
    t = sympy.Symbol("t")
    gen = sympy.sqrt(2) if x.field == K2 else sympy.Symbol("g")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * gen**i for i, c in enumerate(x.coords))
    mp_ = sympy.Poly(sympy.minimal_polynomial(expr, t), t)
    coeffs = [int(c) for c in mp_.all_coeffs()]
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    coeffs = [c // g for c in coeffs]
    with mpmath.workdps(50):
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
        M = abs(coeffs[0]) * mpmath.fprod(max(1, abs(r)) for r in roots)
        return float(mpmath.log(M)) / (len(coeffs) - 1)


def rand_q(rng):
    return Fraction(rng.randint(-10**6, 10**6) or 1, rng.randint(1, 10**6))


def rand_k2(rng):
    while True:
        a, b = rand_q(rng) * rng.choice([0, 1]), rand_q(rng)
        x = K2.element([a, b])
        if not x.is_exact_zero:
            return x


def test_field_invariants():
    assert K2.d == 2 and K2.discriminant == 8 and (K2.r1, K2.r2) == (2, 0)
    K5 = cyclotomic_field(5)
    assert K5.d == 4 and (K5.r1, K5.r2) == (0, 2)


def test_non_monogenic_rejected():
    with pytest.raises(NonMonogenic):
        NumberField([1, 0, -5])


def test_rational_heights_exact(rng):
    for _ in range(50):
        q = rand_q(rng)
        want = log(max(abs(q.numerator), q.denominator))
        assert abs(float(height(q).lower) - want) < 1e-9
        assert height(q).is_exact  # a log of a rational, no interval involved


def test_quadratic_heights_vs_mahler(rng):
    for _ in range(30):
        x = rand_k2(rng)
        h = height(x)
        assert abs(float(h.lower) - mahler_height(x)) < 1e-8


def test_power_heights_linear(rng):
    for _ in range(20):
        x = rand_k2(rng)
        for k in (2, 3):
            assert agrees(height(x**k), height(x).scale(k))


@pytest.mark.parametrize("K", [QQ_FIELD, K2, cyclotomic_field(5), NumberField([1, 0, 0, -2])])
def test_product_formula(K, rng):
    for _ in range(25):
        coords = [Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(K.d)]
        if not any(coords):
            continue
        v = product_formula_check(K.element(coords))
        assert v.holds


def test_valuation_above_two():
    # sqrt(2) has valuation 1/2 at the ramified place above 2
    (P,) = K2.places_above(2)
    assert P.e == 2
    assert padic_valuation(K2.gen, P) == Fraction(1, 2)


def test_height_chain(rng):
    for _ in range(30):
        n = rng.randint(1, 6)
        xs = [rand_k2(rng) for _ in range(n)]
        hv = heights_vector(xs, K2)
        slack = HeightValue.log_of(n + 1, Fraction(K2.d, 2))
        assert decide_ge(hv["h_L2"], hv["h_max"])
        assert decide_ge(hv["h_max"] + slack, hv["h_L2"])


@given(st.fractions(max_denominator=10**4).filter(bool), st.fractions(max_denominator=10**4).filter(bool))
def test_height_laws_rational(a, b):
    assert decide_ge(height(a) + height(b), height(a * b))
    assert decide_ge(HeightValue.log_of(2) + height(a) + height(b), height(a + b))


def test_liouville_standard_form(rng):
    for _ in range(60):
        x = rand_k2(rng)
        for v in K2.archimedean_places() + K2.places_above(2) + K2.places_above(7):
            assert liouville_check(x, v, "standard").holds
        assert denominator_check(x, "standard").holds


def test_liouville_stated_form_counterexamples():
    # log|sqrt2 - 1| at the real place where it is 0.414.. is below -h/d
    x = K2.element([-1, 1])
    fails = [v for v in K2.archimedean_places() if not liouville_check(x, v, "stated").holds]
    assert fails
    assert not denominator_check(K2.element([Fraction(1, 3), Fraction(1, 3)]), "stated").holds


def test_liouville_over_q_both_forms(rng):
    for _ in range(50):
        q = rand_q(rng)
        for p in (2, 3, 5):
            assert liouville_check(q, QQ_FIELD.places_above(p)[0], "stated").holds


def test_liouville_zero():
    with pytest.raises(ZeroElement):
        liouville_check(Fraction(0), QQ_FIELD.places_above(3)[0])


def test_siegel_small_system(rng):
    for _ in range(20):
        N = rng.randint(2, 8)
        M = rng.randint(1, N - 1)
        forms = [[rng.randint(-9, 9) for _ in range(N)] for _ in range(M)]
        res = siegel_solve(forms)
        assert any(not x.is_exact_zero for x in res.x)
        for f in forms:
            assert sum(a * x.coords[0] for a, x in zip(f, res.x)) == 0
        assert decide_ge(siegel_bound(forms, QQ_FIELD), res.h_plus)


def test_siegel_over_quadratic_field():
    forms = [[K2.element([1, 1]), K2.element([2, 0]), K2.element([0, 3])]]
    res = siegel_solve(forms, K2)
    s = K2.zero()
    for a, x in zip(forms[0], res.x):
        s = s + a * x
    assert s.is_exact_zero and res.verdict.holds


def test_siegel_requires_more_unknowns():
    with pytest.raises(ValueError):
        siegel_solve([[1, 2], [3, 4]])


def test_embeddings_against_polyroots():
    K = NumberField([1, 0, 0, -2])
    x = K.element([1, 1, 0])
    with mpmath.workdps(40):
        rts = mpmath.polyroots([1, 0, 0, -2], extraprec=100)
        want = sorted(abs(1 + r) for r in rts)
    got = sorted(float(mpmath.mpf(mpmath.mpf(normalized_abs(x, v).lower))) for v in K.archimedean_places())
    # normalized_abs is log|.|^{d_v}; compare the real place only
    real = [v for v in K.archimedean_places() if v.local_degree == 1][0]
    assert abs(float(normalized_abs(x, real).lower) - log(float(1 + mpmath.cbrt(2)))) < 1e-12

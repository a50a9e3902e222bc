import itertools
from fractions import Fraction
from math import factorial

import pytest

from padiclf.errors import AdditionFormulaUndefined, BadParameters, DomainError
from padiclf.groups import (
    AtLeast,
    apply_derivation,
    denominator_power_check,
    derivative_polynomial,
    exp_series,
    is_semistable_gm,
    make_gm_power,
    make_scaled_gm,
    model_from_preset,
    ord_along,
    segre_subsets,
    series_derivative_of,
    sup_norm_check,
)
from padiclf.numfield import HeightValue, quadratic_field
from padiclf.polys import Poly

from oracles import multinomial_taylor


def closed_form_coeff(S, alpha):
    """[z^alpha] prod_{i in S} (e^{z_i} - 1)."""
    c = Fraction(1)
    for i, a in enumerate(alpha):
        if i in S:
            if a == 0:
                return Fraction(0)
            c /= factorial(a)
        elif a:
            return Fraction(0)
    return c


def test_segre_order():
    assert segre_subsets(2) == [(), (0,), (1,), (0, 1)]
    assert make_gm_power(3).N == 7


def test_gm_coefficients_are_inverse_factorials():
    es = exp_series(model_from_preset("gm"), 20)
    for k in range(1, 21):
        assert es.coefficient(1, (k,)) == Fraction(1, factorial(k))


@pytest.mark.parametrize("n,M", [(2, 8), (3, 5)])
def test_gm_power_against_closed_form(n, M):
    model = make_gm_power(n)
    es = exp_series(model, M)
    for i, S in enumerate(model.subsets[1:], start=1):
        for k in range(1, M + 1):
            for alpha in itertools.product(range(k + 1), repeat=n):
                if sum(alpha) == k:
                    assert es.coefficient(i, alpha) == closed_form_coeff(S, alpha)


@pytest.mark.parametrize("name", ["gm", "gm^2"])
def test_series_audits(name):
    es = exp_series(model_from_preset(name), 12)
    assert es.check_pde() and es.check_integrability() and es.check_addition() and es.check_integrality()


def test_scaled_model_integrality():
    m = make_scaled_gm(1, 2)
    assert m.delta_L == 2
    es = exp_series(m, 8)
    assert es.check_integrality()
    # f' = (1 + f)/2 gives f = e^{z/2} - 1
    for k in range(1, 9):
        assert es.coefficient(1, (k,)) == Fraction(1, 2**k * factorial(k))
    assert m.e_L(2) == 1 and m.e_L(3) == 0


def test_omega_constants():
    assert m_omega("gm", 5) == 1  # clamped: raw value is 0
    raw = make_scaled_gm(1, 2).omega_raw(2)
    assert (raw - HeightValue.log_of(2, 2)).certified_sign() == 0


def m_omega(name, p):
    w = model_from_preset(name).omega_L(p)
    return w.const if w.is_rational else None


def test_group_law():
    m = make_gm_power(2)
    X = m.embed([2, 3])
    assert m.multiple(X, 3) == m.embed([8, 27])
    with pytest.raises(AdditionFormulaUndefined):
        m.add([0, 1, 0, 0], [0, 1, 0, 0])


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_sup_norm_matches_closed_form(p, rng):
    model = make_gm_power(2)
    es = exp_series(model, 14)
    lo = 2 if p == 2 else 1
    pts = [[p ** rng.randint(lo, lo + 2) * rng.choice([1, 2, -1, 4]) for _ in range(2)] for _ in range(25)]
    pts = [[x if x % p ** (lo + 3) else x + p**lo for x in pt] for pt in pts]
    v = sup_norm_check(model, es, pts, p)
    assert v.holds
    # v(e^x - 1) = v(x) on this disc, so f_S has valuation sum_{k in S} v(x_k)
    from padiclf.padic import vp

    for pt, res in zip(pts, v.details["results"]):
        want = [sum(vp(Fraction(pt[k]), p) for k in S) for S in model.subsets[1:]]
        assert res["valuations"] == want


def test_sup_norm_domain():
    model = model_from_preset("gm")
    with pytest.raises(DomainError):
        sup_norm_check(model, exp_series(model, 6), [[3]], 5)  # v = 0


def test_lemma_ww_example():
    m = model_from_preset("gm")
    P = Poly(1, {(2,): Fraction(1)})
    Pt, _ = derivative_polynomial(m, P, (1,))
    assert Pt == Poly(1, {(2,): Fraction(2), (1,): Fraction(2)})


def random_poly(rng, nvars, D):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        m = [0] * nvars
        for _ in range(rng.randint(0, D)):
            m[rng.randrange(nvars)] += 1
        terms[tuple(m)] = Fraction(rng.randint(-5, 5) or 1)
    return Poly(nvars, terms)


@pytest.mark.parametrize("name", ["gm", "gm^2"])
def test_lemma_ww_dual_route(name, rng):
    model = model_from_preset(name)
    es = exp_series(model, 12)
    for _ in range(12):
        P = random_poly(rng, model.N, 4)
        t = tuple(rng.randint(0, 3) for _ in range(model.n))
        Pt, bound = derivative_polynomial(model, P, t)
        direct = series_derivative_of(model, es, P, t).truncate(12 - sum(t))
        via = Pt.compose(list(es.f), 12 - sum(t), Fraction(1))
        assert via == direct
        assert Pt.degree() <= max(P.degree(), 0) + sum(t) * (model.c_deg - 1)


def test_denominator_power_scaled():
    m = make_scaled_gm(1, 2)
    P = Poly(1, {(3,): Fraction(1), (1,): Fraction(2)})
    assert denominator_power_check(m, P, (3,)).holds


def test_ord_along_direct():
    z1 = Poly(2, {(2, 0): Fraction(1)})
    basis = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    assert ord_along(z1, [Fraction(0), Fraction(0)], basis, 5) == 2
    # x0^D never vanishes
    assert ord_along(Poly(2, {(0, 0): Fraction(1)}), [Fraction(0)] * 2, basis, 5) == 0
    assert ord_along(Poly(2, {(4, 0): Fraction(1)}), [Fraction(0)] * 2, basis, 3) == AtLeast(3)


def test_ord_along_shifted_point():
    # F = (x - 1)^2 (y + 2)^3 has order 5 at (1, -2) along the axes
    F = Poly(2, {(2, 0): 1, (1, 0): -2, (0, 0): 1})
    G = Poly(2, {(0, 3): 1, (0, 2): 6, (0, 1): 12, (0, 0): 8})
    H = F.mul(G).map_coeffs(Fraction)
    basis = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    assert ord_along(H, [Fraction(1), Fraction(-2)], basis, 8) == 5
    # cross-check with the Taylor oracle
    tay = multinomial_taylor(H, [1, -2])
    assert min(sum(m) for m in tay) == 5


def test_semistability():
    v = is_semistable_gm([Fraction(1), Fraction(2)])
    assert not v.holds and v.details["witness"] in ([2, -1], [-2, 1])
    K = quadratic_field(2)
    assert is_semistable_gm([K.one(), K.gen], K).holds
    with pytest.raises(BadParameters):
        is_semistable_gm([0, 0])

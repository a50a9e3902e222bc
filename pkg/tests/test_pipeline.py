import itertools
from fractions import Fraction
from math import floor

import mpmath
import pytest
import sympy

from padiclf.errors import DomainError, InfeasibleParameters, LinearFormZero, ZeroValue
from padiclf.groups import model_from_preset
from padiclf.numfield import agrees, decide_ge
from padiclf.padic import INF, PadicNumber, r_p_exponent, vp
from padiclf.pipeline import (
    Parameters,
    ProofInstance,
    audit_vanishing,
    build_extended,
    choose_parameters,
    construct_auxiliary,
    extrapolate,
    lemma_e_check,
    lemma_value_check,
    liouville_lower,
    nu_reduction,
    parse_real,
    theorem_bound,
    translation_polynomials,
    vanishing_order_audit,
    verify_gm,
)
from padiclf.polys import Poly, monomials_of_degree

# ---------------------------------------------------------------- oracles

from oracles import psi_derivative


def params_oracle(c, w, n, logb, logh, b, h):
    """The parameter formulas with 60-digit floats."""
    with mpmath.workdps(60):
        S0 = int(mpmath.floor(c * w * (logb + logh)))
        D0 = int(mpmath.floor(c ** (5 * n + 1) * S0 ** (n + 1) * h**n))
        S = int(mpmath.floor(c * c * S0))
        D = int(mpmath.floor(c ** (5 * n + 1) * S0**n * b * h ** (n - 1)))
        T = int(mpmath.floor(c ** (5 * n + 6) * S0 ** (n + 1) * b * h**n))
    return S0, D0, S, D, T


# ---------------------------------------------------------------- fixtures


GM = model_from_preset("gm")
GM2 = model_from_preset("gm^2")


@pytest.fixture(scope="module")
def toy1():
    inst = ProofInstance(GM, [1], [6], 5)
    params = Parameters.toy(S0=2, D0=2, D=3, T=2)
    return inst, params, construct_auxiliary(inst, params)


@pytest.fixture(scope="module")
def toy2():
    inst = ProofInstance(GM2, [1, -1], [6, 11], 5)
    params = Parameters.toy(S0=2, D0=4, D=3, T=2)
    return inst, params, construct_auxiliary(inst, params)


# ---------------------------------------------------------------- parameters

FIXED = [
    (3, "1", 1, "e", "e"),
    (3, "1", 1, "exp(2)", "e"),
    (3, "1", 2, "e", "e"),
    (2, "1", 1, "exp(3/2)", "exp(5/2)"),
    (3, "2", 1, "3", "3"),
    (4, "1", 1, "5/2", "7/2"),
    (3, "3/2", 2, "exp(2)", "exp(3)"),
    (5, "1", 1, "10", "4"),
    (2, "1", 3, "e", "exp(2)"),
    (3, "1", 2, "7", "11/2"),
]


@pytest.mark.parametrize("c,w,n,b,h", FIXED)
def test_choose_parameters_fixed(c, w, n, b, h):
    got = choose_parameters(c, w, n, b, h)

    def val(s):
        if s == "e":
            return mpmath.e, mpmath.mpf(1)
        if s.startswith("exp("):
            q = Fraction(s[4:-1])
            return mpmath.exp(mpmath.mpf(q.numerator) / q.denominator), mpmath.mpf(q.numerator) / q.denominator
        q = Fraction(s)
        x = mpmath.mpf(q.numerator) / q.denominator
        return x, mpmath.log(x)

    with mpmath.workdps(60):
        bv, lb = val(b)
        hv, lh = val(h)
        wv = mpmath.mpf(Fraction(w).numerator) / Fraction(w).denominator
        want = params_oracle(c, wv, n, lb, lh, bv, hv)
    assert (got.S0, got.D0, got.S, got.D, got.T) == want


def test_spec_parameter_example():
    P = choose_parameters(3, 1, 1, "e", "e")
    assert (P.S0, P.S) == (6, 54)
    assert P.D0 * P.D >= P.S0 * P.T


def test_infeasible_parameters():
    with pytest.raises(InfeasibleParameters):
        choose_parameters(Fraction(1, 10), 1, 1, "e", "e")


def test_nu_reduction_grid():
    for p in (2, 3, 5, 7, 11):
        for v in range(-3, 6):
            out = nu_reduction(v, p)
            assert out["v_u_prime"] > r_p_exponent(p)
            assert out["nu"] == max(0, floor(Fraction(1, p - 1) - v) + 1)
    assert nu_reduction(0, 2)["nu"] == 2


def test_lemma_value_grid():
    for d in range(1, 5):
        for e in range(1, d + 1):
            for p in (2, 3, 5, 7, 11, 13, 47):
                for a in range(1, 4 * e + 1):
                    v = Fraction(a, e)
                    if v > r_p_exponent(p):
                        assert lemma_value_check(v, p, d).holds


def test_lemma_e(rng):
    for p in (2, 3, 5):
        for _ in range(30):
            terms = {}
            for _ in range(rng.randint(1, 5)):
                m = (rng.randint(0, 3), rng.randint(0, 2), rng.randint(0, 2))
                terms[m] = Fraction(rng.randint(-9, 9) or 1)
            if not any(m[0] for m in terms):
                terms[(1, 0, 0)] = Fraction(1)
            Q = Poly(3, terms)
            x0 = PadicNumber.from_rational(p ** rng.randint(0, 3) * rng.randint(1, 4), p, 60)
            xs = [Fraction(rng.randint(-20, 20)) for _ in range(2)]
            assert lemma_e_check(Q, x0, xs).holds


# ---------------------------------------------------------------- instances


def test_build_extended():
    inst = ProofInstance(GM2, [1, -1], [6, 11], 5)
    ext = build_extended(inst)
    assert all(ext["checks"])
    assert ext["Delta"][0] == [Fraction(1), Fraction(1), Fraction(0)]


def test_translation_polynomials_closed_form():
    inst = ProofInstance(GM, [1], [6], 5)
    tp = translation_polynomials(inst, 2, 2)
    T = sympy.Symbol("T")
    F1 = 36 * (1 + T) - 1
    for m, Q in zip(tp["monomials"], tp["Q"]):
        want = sympy.Poly(sympy.expand(F1 ** m[1]), T)
        got = {k[0]: v for k, v in Q.items()}
        assert got == {k[0]: Fraction(int(v)) for k, v in want.terms()}
    assert tp["den"] == 1


# ---------------------------------------------------------------- auxiliary polynomial


@pytest.mark.parametrize("which", ["toy1", "toy2"])
def test_auxiliary_conditions_independent(which, request):
    inst, params, aux = request.getfixturevalue(which)
    assert all(aux.audits), [a.name for a in aux.audits if not a]
    assert aux.conditions == params.S0 * (2 * params.T) ** inst.n <= 64
    for s in range(params.S0):
        for t in itertools.product(range(2 * params.T), repeat=inst.n):
            assert psi_derivative(inst, aux.P, s, t) == 0
    assert not aux.P.is_zero()


def test_corruption_is_localized(toy1):
    inst, params, aux = toy1
    for mono in [(0, 2, 1), (1, 0, 3), (2, 3, 0)]:
        bad = Poly(3, {mono: Fraction(1)})
        P2 = aux.P + bad
        flagged = set(audit_vanishing(inst, P2, params.S0, 2 * params.T))
        want = {(s, t) for s in range(params.S0) for t in itertools.product(range(2 * params.T), repeat=1)
                if psi_derivative(inst, bad, s, t) != 0}
        assert flagged == want and flagged


def test_extrapolation_audits(toy1, toy2):
    for inst, params, aux in (toy1, toy2):
        ext = extrapolate(inst, params, aux.P, series_order=12)
        names = {v.name for v in ext["verdicts"]}
        assert {"lemma_dis", "schwarz", "prop_sch", "mu_bound", "norm_on_R"} <= names
        assert all(ext["verdicts"]), [v.to_dict() for v in ext["verdicts"] if not v]


def test_prop_sch_exponent_by_hand(toy2):
    inst, params, aux = toy2
    ext = extrapolate(inst, params, aux.P, series_order=12)
    # v(l(u)) = v(log 6 - log 11) = 1 at p = 5; e_L = 0, d = 1
    S0, T, n, p = params.S0, params.T, inst.n, 5
    eps = 1 / 3
    vlu = 1
    inner = vlu * mpmath.log(p) - ((2 * n - 1) * 0 + eps * S0 + 1 / (p - 1)) * T * mpmath.log(p) - S0 * T * mpmath.log(S0)
    want = (eps * S0 - 0) * T * mpmath.log(p) + min(0, inner)
    got = ext["prop_sch_exponent"]
    assert abs(float(got.lower) - float(want)) < 1e-9


def test_extrapolate_needs_small_u():
    inst = ProofInstance(GM, [1], [2], 3)  # v(log 2) at 3 ... 2 is not 1 mod 3
    with pytest.raises(DomainError):
        extrapolate(inst, Parameters.toy(2, 2, 3, 2), Poly(3, {(0, 1, 0): Fraction(1)}))


# ---------------------------------------------------------------- Liouville and orders


def test_liouville_dual_route(toy1):
    inst, params, aux = toy1
    hits = 0
    for s in range(params.S0 + 1):
        for t in range(2 * params.T + 2):
            if psi_derivative(inst, aux.P, s, (t,)) == 0:
                with pytest.raises(ZeroValue):
                    liouville_lower(inst, params, aux.P, s, (t,))
                continue
            out = liouville_lower(inst, params, aux.P, s, (t,))
            assert out["routes_agree"].holds and out["liouville"].holds
            assert Fraction(out["value"]) == psi_derivative(inst, aux.P, s, (t,))
            hits += 1
    assert hits


def test_rational_liouville_example():
    from padiclf.numfield import QQ_FIELD, liouville_check

    # v_3(3/2) = 1 and h(3/2) = log 3: equality case, decided exactly
    v = liouville_check(Fraction(3, 2), QQ_FIELD.places_above(3)[0])
    assert v.holds and (v.lhs - v.rhs).certified_sign() == 0


def test_vanishing_orders(toy1):
    inst, params, aux = toy1
    out = vanishing_order_audit(inst, params, aux.P)
    assert out["order_at_least_T"]
    const = Poly(3, {(0, params.D, 0): Fraction(1)})  # X_0^D
    out = vanishing_order_audit(inst, params, const)
    assert out["orders"] == [0] * params.S


# ---------------------------------------------------------------- the bound


def test_theorem_bound_values():
    v = theorem_bound(1, 1, "e", "e", 2, 1)
    want = -mpmath.e**2 * 16 * mpmath.log(2)
    assert abs(float(v.lower) - float(want)) < 1e-12
    assert agrees(theorem_bound(1, 1, "e", "e", 2, 1, nu=0), v)
    assert agrees(theorem_bound(1, 1, "e", "e", 2, 2), v.scale(2))


def test_theorem_bound_monotone():
    base = dict(omega_L="1", n=2, b="3/2", h="2", p=3)
    grids = {"b": ["3/2", "2", "3", "10"], "h": ["3/2", "2", "5", "9"], "p": [2, 3, 5, 7], "omega_L": ["1", "3/2", "2"]}
    for key, vals in grids.items():
        prev = None
        for x in vals:
            kw = dict(base)
            kw[key] = x
            v = theorem_bound(kw["omega_L"], kw["n"], kw["b"], kw["h"], kw["p"], 1)
            if prev is not None:
                assert decide_ge(prev, v)  # |bound| nondecreasing
            prev = v


def test_parse_real():
    assert parse_real("e").log.const == 1
    with pytest.raises(ValueError):
        parse_real("abc")


# ---------------------------------------------------------------- verify_gm


def log5_valuation_oracle(a, b):
    """v_5(log a - log b) from the series of log(a/b) in exact rationals."""
    x = Fraction(a, b) - 1
    s = sum(Fraction((-1) ** (k + 1)) * x**k / k for k in range(1, 40))
    return vp(s, 5)


def test_verify_gm_example():
    inst = ProofInstance(GM2, [1, -1], [6, 11], 5)
    rep = verify_gm(inst)
    assert rep.passed
    assert rep.values["v_l_u"] == log5_valuation_oracle(6, 11)


def test_verify_gm_zero():
    with pytest.raises(LinearFormZero):
        verify_gm(ProofInstance(GM2, [1, -1], [6, 6], 5))


def test_verify_gm_cleared_denominators():
    a = verify_gm(ProofInstance(GM2, [1, -1], [6, 11], 5))
    b = verify_gm(ProofInstance(GM2, [7, -7], [6, 11], 5))
    c = verify_gm(ProofInstance(GM2, [Fraction(1, 7), Fraction(-1, 7)], [6, 11], 5))
    assert a.passed == b.passed == c.passed
    assert c.values["cleared"]["delta"] == 7 and c.values["cleared"]["holds"]
    assert c.values["v_l_u"] <= c.values["cleared"]["v_l_prime"]


def test_rational_logs_always_in_small_disc():
    # over Q, v(log_p g) >= 1 > 1/(p-1) for odd p and >= 2 at p = 2
    # (g = +-(1 + 4k)), so only the first statement is reachable
    for p, gs in ((2, [3, 5, 7, 9]), (3, [4, 7, 10]), (5, [6, 11, 16])):
        for g1, g2 in itertools.combinations(gs, 2):
            r = verify_gm(ProofInstance(GM2, [1, 2], [g1, g2], p))
            assert r.values["statement"] == 1


def test_statement_two_bound_shape():
    a = theorem_bound(1, 2, "2", "3", 3, 1, nu=1)
    b = theorem_bound(1, 2, "2", "3", 3, 1)
    assert decide_ge(b, a)  # the nu term only enlarges |bound|

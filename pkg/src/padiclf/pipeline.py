"""The lower-bound machinery at desk scale.

Instances are powers of G_m over a number field K (usually Q) with a
linear form l = sum beta_i z_i and a point gamma = Exp(u). The same code runs
the auxiliary-polynomial construction, the extrapolation audits, the
Liouville comparison and the final bound with toy parameters; the symbolic
parameter formulas are evaluated separately by :func:`choose_parameters`.

Exponents are valuations (exact rationals); real quantities in natural-log
units are :class:`HeightValue` objects.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Optional, Sequence

from mpmath import iv

from .errors import (
    BadParameters,
    DomainError,
    InfeasibleParameters,
    InsufficientPrecision,
    LinearFormZero,
    UnsupportedPlace,
    UncertifiedTail,
    ZeroValue,
)
from .groups import AtLeast, GroupModel, apply_derivation, model_from_preset, ord_along
from .numfield import (
    QQ_FIELD,
    AlgebraicNumber,
    HeightValue,
    NumberField,
    agrees,
    decide_ge,
    height,
    heights_vector,
    ivprec,
    liouville_check,
    parse_element,
    projective_height,
    siegel_solve,
)
from .padic import INF, PadicNumber, exponent_str, log_p, r_p_exponent, vp_int
from .polys import Poly, is_zero, monomials_of_degree, multi_binomial, multi_factorial
from .series import PadicSeries, gauss_norm, schwarz_bound
from .verdict import Verdict

__all__ = [
    "AuxiliaryPolynomial",
    "Constants",
    "Parameters",
    "ProofInstance",
    "Real",
    "Report",
    "build_extended",
    "choose_parameters",
    "construct_auxiliary",
    "extrapolate",
    "lemma_e_check",
    "lemma_value_check",
    "liouville_lower",
    "nu_reduction",
    "parse_real",
    "run_pipeline",
    "theorem_bound",
    "translation_polynomials",
    "vanishing_order_audit",
    "verify_gm",
]


# -------------------------------------------------------------------------
# certified reals given with their logarithms


@dataclass(frozen=True)
class Real:
    """A positive real ``value`` together with ``log`` = log(value)."""

    value: HeightValue
    log: HeightValue

    @classmethod
    def of(cls, v: HeightValue) -> "Real":
        return cls(v, v.log())

    def to_dict(self):
        return self.value.to_dict()


_EXP_RE = re.compile(r"^exp\((.+)\)$")
_LOG_RE = re.compile(r"^log\((.+)\)$")


def parse_real(x) -> Real:
    """Read a positive real: a number, "num/den", a decimal string (taken as
    that exact decimal), "e", "exp(q)" or "log(q)" with q rational."""
    if isinstance(x, Real):
        return x
    if isinstance(x, HeightValue):
        return Real.of(x)
    if isinstance(x, (int, Fraction)):
        return Real.of(HeightValue.rational(x))
    if isinstance(x, float):
        return Real.of(HeightValue.rational(Fraction(repr(x))))
    s = str(x).strip().replace(" ", "")
    if s == "e":
        s = "exp(1)"
    m = _EXP_RE.match(s)
    if m:
        q = Fraction(m.group(1))

        def ex(bits, q=q):
            with ivprec(bits):
                return iv.exp(iv.mpf(q.numerator) / q.denominator)

        return Real(HeightValue.from_function(ex, ("exp", q)), HeightValue.rational(q))
    m = _LOG_RE.match(s)
    if m:
        return Real.of(HeightValue.log_of(Fraction(m.group(1))))
    return Real.of(HeightValue.rational(Fraction(s)))


def _real_pow(r: HeightValue, k: int) -> HeightValue:
    out = HeightValue.rational(1)
    for _ in range(k):
        out = out * r
    return out


# -------------------------------------------------------------------------
# constants and parameters


@dataclass(frozen=True)
class Constants:
    """The effective constants, all configurable."""

    c: Fraction = Fraction(3)
    c0: Fraction = Fraction(1)
    c1: Optional[Fraction] = None
    c2: Fraction = Fraction(1)
    c3: Fraction = Fraction(1)
    c4: Fraction = Fraction(1)
    c5: Fraction = Fraction(1)
    c9: Fraction = Fraction(1)
    c_translate: Fraction = Fraction(3)

    @property
    def c1_value(self) -> Fraction:
        return self.c0 if self.c1 is None else self.c1

    def to_dict(self):
        return {k: exponent_str(Fraction(v)) if v is not None else None for k, v in self.__dict__.items()}


@dataclass(frozen=True)
class Parameters:
    c: Fraction
    S0: int
    D0: int
    S: int
    D: int
    T: int

    @classmethod
    def toy(cls, S0: int, D0: int, D: int, T: int, S: Optional[int] = None) -> "Parameters":
        if min(S0, D0, D, T) < 1:
            raise BadParameters("toy parameters must be positive")
        return cls(Fraction(0), S0, D0, S if S is not None else S0, D, T)

    def to_dict(self):
        return {"c": exponent_str(self.c), "S0": self.S0, "D0": self.D0, "S": self.S, "D": self.D, "T": self.T}


def choose_parameters(c, omega_L, n: int, b, h, c2=1) -> Parameters:
    """S0 = [c w (log b + log h)], D0 = [c^{5n+1} S0^{n+1} h^n], S = [c^2 S0],
    D = [c^{5n+1} S0^n b h^{n-1}], T = [c^{5n+6} S0^{n+1} b h^n]."""
    c = Fraction(c)
    if c <= 0 or n < 1:
        raise BadParameters("need c > 0 and n >= 1")
    w = parse_real(omega_L).value
    b, h = parse_real(b), parse_real(h)
    S0 = (w * (b.log + h.log)).scale(c).floor()
    if S0 < 2:
        raise InfeasibleParameters(f"S0 = {S0} < 2; increase c")
    hv, bv = h.value, b.value
    D0 = (_real_pow(hv, n)).scale(c ** (5 * n + 1) * S0 ** (n + 1)).floor()
    S = int((c * c * S0).numerator // (c * c * S0).denominator)
    D = (bv * _real_pow(hv, n - 1)).scale(c ** (5 * n + 1) * S0**n).floor()
    T = (bv * _real_pow(hv, n)).scale(c ** (5 * n + 6) * S0 ** (n + 1)).floor()
    if not D0 * D**n >= Fraction(c2) * S0 * T**n:
        raise InfeasibleParameters(f"D0 D^n = {D0 * D ** n} < c2 S0 T^n = {Fraction(c2) * S0 * T ** n}")
    return Parameters(c, S0, D0, S, D, T)


def nu_reduction(u, p: int) -> dict:
    """nu = max{0, [1/(p-1) - v(u)] + 1}; u' = p^nu u lies in v > 1/(p-1)."""
    if isinstance(u, (list, tuple)):
        vals = []
        for x in u:
            x = x if isinstance(x, PadicNumber) else PadicNumber.from_rational(Fraction(x), p)
            if not x.is_exact_zero:
                if x.is_inexact_zero:
                    raise InsufficientPrecision("coordinate known only as O(p^k)")
                vals.append(Fraction(x.valuation))
        v = min(vals) if vals else INF
        coords = u
    else:
        v = u if u is INF else Fraction(u)
        coords = None
    rp = r_p_exponent(p)
    if v is INF:
        nu = 0
    else:
        x = rp - v
        nu = max(0, x.numerator // x.denominator + 1)
    out = {"nu": nu, "v_u": v, "h_bound_factor": p ** (2 * nu)}
    if coords is not None:
        pn = p**nu
        out["u_prime"] = [c * pn for c in coords]
    out["v_u_prime"] = INF if v is INF else v + nu
    if not (out["v_u_prime"] is INF or out["v_u_prime"] > rp):
        raise AssertionError("reduction did not land inside the disc")
    return out


def lemma_value_check(v_alpha, p: int, d: int) -> Verdict:
    """v(a) - 1/(p-1) >= 1/(2d^2) for v(a) > 1/(p-1) in the value group."""
    v = Fraction(v_alpha)
    rp = r_p_exponent(p)
    if not v > rp:
        raise BadParameters("needs v(alpha) > 1/(p-1)")
    lhs = v - rp
    rhs = Fraction(1, 2 * d * d)
    return Verdict("lemma_value", lhs >= rhs, lhs, rhs, ">=", {"p": p, "d": d})


def lemma_e_check(Q: Poly, x0: PadicNumber, x: Sequence[PadicNumber]) -> Verdict:
    """v(Q(x0, x) - Q(0, x)) >= min_{1<=i<=l} i v(x0) for Q over Z_p, x integral."""
    p = x0.p
    l = Q.degree_in(0)
    if l < 1:
        raise BadParameters("Q must involve X_0")
    for c in Q.coefficients():
        if Fraction(c).denominator % p == 0:
            raise BadParameters("Q must have p-integral coefficients")
    pts = [PadicNumber.from_rational(Fraction(c), p, 200) if not isinstance(c, PadicNumber) else c for c in x]
    for c in pts:
        if not c.is_exact_zero and c.valuation < 0:
            raise BadParameters("x must be integral")
    Qp = Q.map_coeffs(lambda c: PadicNumber.from_rational(Fraction(c), p, 200))
    one = PadicNumber.from_rational(1, p, 200)
    diff = Qp.evaluate([x0] + pts, one) - Qp.evaluate([PadicNumber.zero(p)] + pts, one)
    v0 = x0.valuation if not x0.is_exact_zero else INF
    rhs = INF if v0 is INF else min(i * Fraction(v0) for i in range(1, l + 1))
    if diff.is_exact_zero:
        lhs = INF
    elif diff.is_inexact_zero:
        lhs = diff.valuation  # lower bound only
    else:
        lhs = Fraction(diff.valuation)
    ok = lhs is INF or (rhs is not INF and lhs >= rhs) or (diff.is_inexact_zero and rhs is not INF and lhs >= rhs)
    return Verdict("lemma_e", bool(ok), lhs, rhs, ">=", {"deg_X0": l})


# -------------------------------------------------------------------------
# instances


@dataclass(eq=False)
class ProofInstance:
    model: GroupModel
    beta: list
    gamma: list
    p: int
    precision: int = 40
    place_index: Optional[int] = None
    constants: Constants = field(default_factory=Constants)

    def __post_init__(self):
        F = self.field
        self.beta = [parse_element(F, b) for b in self.beta]
        self.gamma = [parse_element(F, g) for g in self.gamma]
        if len(self.beta) != self.model.n or len(self.gamma) != self.model.n:
            raise BadParameters("beta and gamma need n entries")
        if all(b.is_exact_zero for b in self.beta):
            raise BadParameters("beta must not vanish")
        if any(g.is_exact_zero for g in self.gamma):
            raise BadParameters("gamma must lie in G_m^n")
        if F.d > 1:
            split = F.split_places(self.p)
            if not split:
                raise UnsupportedPlace(f"no degree-one place above {self.p}")
            idx = self.place_index or 0
            self.place = split[idx]
        else:
            self.place = F.places_above(self.p)[0]

    @property
    def field(self) -> NumberField:
        return self.model.field

    @property
    def n(self) -> int:
        return self.model.n

    def k(self, x):
        """Coefficient-ring representative: Fraction over Q, else AlgebraicNumber."""
        x = parse_element(self.field, x)
        return x.coords[0] if self.field.d == 1 else x

    def padic(self, x, precision: Optional[int] = None) -> PadicNumber:
        prec = precision or self.precision
        if isinstance(x, PadicNumber):
            return x
        x = parse_element(self.field, x)
        if self.field.d == 1:
            return PadicNumber.from_rational(x.coords[0], self.p, prec)
        return x.to_padic(self.place, prec)

    def u(self, precision: Optional[int] = None) -> list:
        out = []
        for g in self.gamma:
            gp = self.padic(g, precision)
            if (gp - 1).is_exact_zero:
                out.append(PadicNumber.zero(self.p))
                continue
            v = (gp - 1).valuation
            if gp.valuation != 0 or not v > 0:
                raise DomainError("gamma_i must be a principal unit at p")
            out.append(log_p(gp, precision=precision or self.precision))
        return out

    def l_of(self, vec) -> PadicNumber:
        acc = PadicNumber.zero(self.p)
        for b, x in zip(self.beta, vec):
            acc = acc + self.padic(b) * x
        return acc

    def b_value(self) -> HeightValue:
        """b = log B with B = max(3, H(beta_i))."""
        best = HeightValue.log_of(3)
        for bt in self.beta:
            hb = height(bt)
            if not decide_ge(best, hb):
                best = hb
        return best

    def h_value(self, gamma=None) -> HeightValue:
        """h = log H with H = max(3, H(gamma)) for the embedded point."""
        g = gamma if gamma is not None else self.gamma
        coords = [parse_element(self.field, c) for c in self.model.embed(g)[1:]]
        hg = projective_height(coords)
        l3 = HeightValue.log_of(3)
        return l3 if decide_ge(l3, hg) else hg

    def reduced(self, nu: int) -> "ProofInstance":
        """The instance for u' = p^nu u, i.e. gamma' = gamma^(p^nu)."""
        e = self.p**nu
        return ProofInstance(self.model, list(self.beta), [g**e for g in self.gamma], self.p, self.precision,
                             self.place_index, self.constants)

    def to_dict(self) -> dict:
        return {
            "model": self.model.name,
            "field": self.field.to_dict(),
            "beta": [b.to_dict() for b in self.beta],
            "gamma": [g.to_dict() for g in self.gamma],
            "p": self.p,
            "precision": self.precision,
        }

    @classmethod
    def from_dict(cls, d: dict, constants: Constants | None = None) -> "ProofInstance":
        try:
            name = d["model"]
            F = NumberField(d["field"]["min_poly"]) if "field" in d else QQ_FIELD
            model = model_from_preset(name)
            if F != QQ_FIELD:
                from .groups import make_gm_power

                model = make_gm_power(model.n, F, model.scales)
            beta = [parse_element(F, b) for b in d["beta"]]
            gamma = [parse_element(F, g) for g in d["gamma"]]
            return cls(model, beta, gamma, int(d["p"]), int(d.get("precision", 40)), d.get("place"),
                       constants or Constants())
        except KeyError as exc:
            raise BadParameters(f"instance lacks field {exc}") from None


def build_extended(instance: ProofInstance, precision: Optional[int] = None) -> dict:
    """Delta_i = beta_i d_0 + d_i, u_bar = (0, u), w = (l(u), u)."""
    u = instance.u(precision)
    n = instance.n
    lu = instance.l_of(u)
    ops = []
    for i, b in enumerate(instance.beta):
        e = [instance.k(b)] + [Fraction(int(k == i)) for k in range(n)]
        ops.append(e)
    u_bar = [PadicNumber.zero(instance.p)] + list(u)
    w = [lu] + list(u)
    # w = sum u_i e_i
    comb_ = [PadicNumber.zero(instance.p)] * (n + 1)
    for ui, e in zip(u, ops):
        comb_ = [a + ui * instance.padic(c) if not isinstance(c, Fraction) else a + ui * c for a, c in zip(comb_, e)]
    in_W = all((a - b).is_inexact_zero or (a - b).is_exact_zero for a, b in zip(comb_, w))
    diff = [a - b for a, b in zip(w, u_bar)]
    # zero to working precision: O(p^k) remainders are allowed
    ident = all(x.is_exact_zero or x.is_inexact_zero for x in [diff[0] - lu] + diff[1:])
    return {
        "Delta": ops,
        "u_bar": u_bar,
        "w": w,
        "l_u": lu,
        "checks": [Verdict("w_in_W", in_W, None, None, "=="), Verdict("w_minus_ubar", ident, None, None, "==")],
    }


# -------------------------------------------------------------------------
# translation polynomials


def translation_polynomials(instance: ProofInstance, s: int, D: int) -> dict:
    """Q_{j,s}(T) = M_j(E_0(gamma^s, (1,T)), ..., E_n(gamma^s, (1,T))) for the
    monomials M_j of degree D in n+1 variables; with den_s, the least common
    denominator of all their coefficients."""
    model = instance.model
    n, N = model.n, model.N
    k = instance.k
    X = [k(c) for c in model.multiple(model.embed(instance.gamma), s)]
    one = k(1)
    Tvars = [Poly.const(N, one)] + [Poly.var(N, i, one) for i in range(N)]
    Xconst = [Poly.const(N, c) for c in X]
    F = [E.compose(Xconst + Tvars, None, one) for E in model.addition[: n + 1]]
    if F[0].is_zero():
        from .errors import AdditionFormulaUndefined

        raise AdditionFormulaUndefined("E_0(gamma^s, .) vanishes identically")
    monos = monomials_of_degree(n + 1, D)
    Qs = []
    powers = [dict() for _ in range(n + 1)]
    for m in monos:
        Q = Poly.const(N, one)
        for idx, e in enumerate(m):
            if e:
                if e not in powers[idx]:
                    powers[idx][e] = F[idx].pow(e, None, one)
                Q = Q.mul(powers[idx][e])
        Qs.append(Q)
    den = 1
    for Q in Qs:
        for c in Q.coefficients():
            den = lcm(den, parse_element(instance.field, c).denominator())
    # height bookkeeping: h+(Q) <= D h+(F) + d (D-1) log(max #terms of F)
    Fco = [parse_element(instance.field, c) for Fi in F for c in Fi.coefficients()]
    hF = heights_vector(Fco, instance.field)["h_plus"]
    mterms = max(len(Fi.terms) for Fi in F)
    tracked = hF.scale(D) + HeightValue.log_of(mterms, instance.field.d * max(D - 1, 0))
    return {"s": s, "monomials": monos, "Q": Qs, "den": den, "F": F, "gamma_s": X, "h_plus_bound": tracked}


def translate_height_audit(instance: ProofInstance, s: int) -> Verdict:
    """h(gamma^s) <= c_tr max(1,s)^2 h, with the sharper s-linear data."""
    model = instance.model
    X = model.multiple(model.embed(instance.gamma), s)
    hs = projective_height([parse_element(instance.field, c) for c in X[1:]])
    h = instance.h_value()
    rhs = h.scale(instance.constants.c_translate * max(1, s) ** 2)
    # coordinatewise h(g^s) = s h(g) holds exactly
    linear = all(agrees(height(g**s), height(g).scale(s)) for g in instance.gamma)
    ok = decide_ge(rhs, hs) and linear
    return Verdict("translate_height", ok, hs, rhs, "<=", {"s": s, "coordinate_heights_linear": linear})


# -------------------------------------------------------------------------
# the auxiliary polynomial


@dataclass(eq=False)
class AuxiliaryPolynomial:
    P: Poly  # variables Y, X_0, ..., X_n
    params: Parameters
    unknowns: int
    conditions: int
    siegel: object
    audits: list

    def to_dict(self):
        return {
            "P": self.P.to_dict(_kstr),
            "params": self.params.to_dict(),
            "unknowns": self.unknowns,
            "conditions": self.conditions,
            "siegel": self.siegel.to_dict() if self.siegel is not None else None,
            "audits": [a.to_dict() for a in self.audits],
        }


def _kstr(c):
    if isinstance(c, AlgebraicNumber):
        return c.to_dict()
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _multi_range(bounds):
    return itertools.product(*[range(b) for b in bounds])


def _affine_poly(model: GroupModel, R: Poly, one) -> Poly:
    """R(X_0..X_n) -> R(1, T_1, ..., T_n) as a polynomial in T_1..T_N."""
    N, n = model.N, model.n
    subs = [Poly.const(N, one)] + [Poly.var(N, i, one) for i in range(n)]
    return R.compose(subs, None, one)


def _derivatives_at_zero(model: GroupModel, Q: Poly, tmax: Sequence[int]) -> dict:
    """(d^m Q(f))(0) for all m < tmax componentwise, through the derivation
    recursion (Q_{m+e_k} = D_k Q_m) and f(0) = 0."""
    out = {}
    polys = {}
    for m in _multi_range(tmax):
        if sum(m) == 0:
            Pm = Q
        else:
            k = max(i for i, e in enumerate(m) if e)
            prev = list(m)
            prev[k] -= 1
            Pm = apply_derivation(model, polys[tuple(prev)], k)
        polys[m] = Pm
        out[m] = Pm.constant_term(0)
    return out


def _system_rows(instance: ProofInstance, params: Parameters, D0: int, D: int, S0: int, T2: int):
    """Rows b^{st}_{ij} of the vanishing conditions plus integrality data."""
    model, n = instance.model, instance.n
    k = instance.k
    beta = [k(b) for b in instance.beta]
    deltaT = model.delta_L ** (2 * n * T2 // 2) if False else model.delta_L ** (2 * n * params.T)
    rows, keys, integral = [], [], True
    monos = None
    for s in range(S0):
        tp = translation_polynomials(instance, s, D)
        monos = tp["monomials"]
        derivs = [_derivatives_at_zero(model, Q, [T2] * n) for Q in tp["Q"]]
        scale = tp["den"] * deltaT
        for t in _multi_range([T2] * n):
            row = []
            for i in range(D0 + 1):
                for j in range(len(monos)):
                    a = 0
                    for iv_ in _multi_range([tk + 1 for tk in t]):
                        if sum(t) - sum(iv_) != i:
                            continue
                        coef = multi_binomial(t, iv_) * factorial(i)
                        term = derivs[j][tuple(iv_)]
                        if is_zero(term):
                            continue
                        bp = 1
                        for bk, tk, ik in zip(beta, t, iv_):
                            if tk - ik:
                                bp = bp * bk ** (tk - ik)
                        a = a + term * bp * coef
                    bval = a * scale if not isinstance(a, int) else Fraction(a * scale)
                    if not parse_element(instance.field, bval).is_integral():
                        integral = False
                    row.append(bval)
            rows.append(row)
            keys.append((s, t))
    return rows, keys, monos, integral


def closed_form_values(instance: ProofInstance, P: Poly, s: int, trunc: int) -> Poly:
    """G(sigma) = P(sum beta_k sigma_k, 1, gamma^s e^sigma - 1) through degree
    ``trunc``; (Delta^t Psi)(s u_bar) = t! [sigma^t] G. Uses only the closed
    form of the exponential, independently of the derivation recursion."""
    n = instance.n
    k = instance.k
    one = k(1)
    sig = [Poly.var(n, i, one) for i in range(n)]
    Y = Poly.zero(n)
    for b, v in zip(instance.beta, sig):
        Y = Y + v.scale(k(b))
    subs = [Y, Poly.const(n, one)]
    for i in range(n):
        gs = k(instance.gamma[i]) ** s
        terms = {(0,) * n: gs - one}
        for d in range(1, trunc + 1):
            m = [0] * n
            m[i] = d
            terms[tuple(m)] = gs * Fraction(1, factorial(d))
        subs.append(Poly(n, terms))
    return P.compose(subs, trunc, one)


def audit_vanishing(instance: ProofInstance, P: Poly, S0: int, T2: int) -> list:
    """(s, t) with (Delta^t Psi)(s u_bar) != 0, 0 <= s < S0, t_k < T2."""
    n = instance.n
    bad = []
    for s in range(S0):
        G = closed_form_values(instance, P, s, n * (T2 - 1))
        for t in _multi_range([T2] * n):
            if not is_zero(G.coeff(tuple(t), 0)):
                bad.append((s, tuple(t)))
    return bad


def aux_height_rhs(instance: ProofInstance, params: Parameters) -> HeightValue:
    """T(c_height + log delta_L + log(D + T log c_deg)) + D0 b + D S0^2 h."""
    model = instance.model
    T, D, D0, S0 = params.T, params.D, params.D0, params.S0
    b, h = instance.b_value(), instance.h_value()
    inner = Real.of(HeightValue.rational(D) + HeightValue.log_of(model.c_deg).scale(T)).log
    main = (model.c_height + HeightValue.log_of(model.delta_L) + inner).scale(T)
    return main + b.scale(D0) + h.scale(D * S0 * S0)


def construct_auxiliary(instance: ProofInstance, params: Parameters, **siegel_kw) -> AuxiliaryPolynomial:
    """P = sum p_ij Y^i M_j(X_0..X_n) with (Delta^t Psi_P)(s u_bar) = 0 for
    s < S0, t_k < 2T, from a Siegel solution of the cleared system."""
    n = instance.n
    D0, D, S0, T = params.D0, params.D, params.S0, params.T
    rows, keys, monos, integral = _system_rows(instance, params, D0, D, S0, 2 * T)
    nunk = len(rows[0])
    if nunk <= len(rows):
        raise InfeasibleParameters(f"{nunk} unknowns for {len(rows)} conditions")
    sol = siegel_solve(rows, instance.field, **siegel_kw)
    k = instance.k
    terms = {}
    idx = 0
    for i in range(D0 + 1):
        for m in monos:
            c = k(sol.x[idx])
            idx += 1
            if not is_zero(c):
                terms[(i,) + tuple(m)] = c
    P = Poly(n + 2, terms)
    audits = [Verdict("system_integral", integral, None, None, "in O_K", {"scale": "den_s * delta_L^(2nT)"})]
    bad = audit_vanishing(instance, P, S0, 2 * T)
    audits.append(Verdict("vanishing_conditions", not bad, len(bad), 0, "==", {"checked": len(keys), "failures": bad[:10]}))
    audits.append(Verdict("nonzero", not P.is_zero(), None, None, "!="))
    hP = heights_vector([parse_element(instance.field, c) for c in P.coefficients()], instance.field)["h_plus"]
    rhs = aux_height_rhs(instance, params).scale(instance.constants.c3)
    audits.append(Verdict("aux_height", decide_ge(rhs, hP), hP, rhs, "<=", {"c3": instance.constants.c3}))
    audits.append(sol.verdict)
    return AuxiliaryPolynomial(P, params, nunk, len(rows), sol, audits)


# -------------------------------------------------------------------------
# extrapolation


def _y_expansion(instance: ProofInstance, P: Poly, s: int, t: Sequence[int]) -> list:
    """g_c with (Delta^t Psi)(y0, s u) = sum_c g_c y0^c (exact, in K)."""
    n = instance.n
    k = instance.k
    one = k(1)
    T = sum(t)
    D0 = P.degree_in(0)
    out = []
    tf = multi_factorial(t)
    for c in range(D0 + 1):
        # coefficient of y0^c: shift Y -> Y + y0 and take binom(i, c) Y^{i-c}
        Pc = {}
        for m, a in P.items():
            i = m[0]
            if i >= c:
                Pc[(i - c,) + m[1:]] = a * comb(i, c) + Pc.get((i - c,) + m[1:], 0)
        G = closed_form_values(instance, Poly(n + 2, Pc), s, T)
        out.append(G.coeff(tuple(t), 0) * tf)
    return out


def restricted_series(instance: ProofInstance, P: Poly, t: Sequence[int], order: int,
                      precision: Optional[int] = None) -> PadicSeries:
    """f(z) = (Delta^t Psi)(z w) as a p-adic series with tail certificate
    v(a_k) >= k (v(u) - e_L - 1/(p-1)) - |t| e_L."""
    p = instance.p
    prec = precision or instance.precision
    n = instance.n
    u = instance.u(prec)
    lu = instance.l_of(u)
    one = PadicNumber.from_rational(1, p, prec)
    T = sum(t)
    nv = n + 1  # z, sigma_1..sigma_n
    z = Poly.var(nv, 0, one)
    sig = [Poly.var(nv, i + 1, one) for i in range(n)]
    Y = z.scale(lu)
    for b, v in zip(instance.beta, sig):
        Y = Y + v.scale(instance.padic(b, prec))
    trunc = order + T
    subs = [Y, Poly.const(nv, one)]
    for i in range(n):
        # exp(z u_i + sigma_i) - 1
        arg = z.scale(u[i]) + sig[i]
        e = Poly.zero(nv)
        term = Poly.const(nv, one)
        for d in range(1, trunc + 1):
            term = term.mul(arg, trunc).scale(PadicNumber.from_rational(Fraction(1, d), p, prec))
            e = e + term
        subs.append(e)
    Pp = P.map_coeffs(lambda c: instance.padic(c, prec))
    G = Pp.compose(subs, trunc, one)
    tf = multi_factorial(t)
    coeffs = []
    for kz in range(order + 1):
        c = G.coeff((kz,) + tuple(t), None)
        coeffs.append(PadicNumber.zero(p) if c is None else c * tf)
    vu = min(Fraction(x.valuation) for x in u if not x.is_exact_zero)
    eL = instance.model.e_L(p)
    alpha = vu - eL - r_p_exponent(p)
    return PadicSeries(p, tuple(coeffs), (alpha, -T * eL))


def extrapolate(instance: ProofInstance, params: Parameters, P: Poly, series_order: int = 24,
                t_list: Optional[list] = None) -> dict:
    """Valuation bounds of the extrapolation step, each audited."""
    p, n = instance.p, instance.n
    model = instance.model
    eL = model.e_L(p)
    rp = r_p_exponent(p)
    S0, T = params.S0, params.T
    u = instance.u()
    nz = [Fraction(x.valuation) for x in u if not x.is_exact_zero]
    if not nz or not min(nz) > eL + rp:
        raise DomainError("u must satisfy v(u) > e_L + 1/(p-1); apply the nu-reduction first")
    lu = instance.l_of(u)
    if lu.is_exact_zero or lu.is_inexact_zero:
        raise LinearFormZero("l(u) vanishes to working precision")
    vlu = Fraction(lu.valuation)
    d = instance.field.d
    eps = Fraction(1, 3 * d * d)
    verdicts = []
    dis_exp = vlu - 2 * n * T * eL
    # Lemma-dis audit on all s < S0, t_k < 2T
    worst = None
    for s in range(S0):
        y0 = lu * s
        for t in _multi_range([2 * T] * n):
            g = _y_expansion(instance, P, s, t)
            diff = PadicNumber.zero(p)
            for c, gc in enumerate(g[1:], start=1):
                if not is_zero(gc):
                    diff = diff + instance.padic(gc) * y0**c
            v = INF if diff.is_exact_zero else diff.valuation
            if worst is None or (v is not INF and (worst is INF or v < worst)):
                worst = v
            if not (v is INF or (diff.is_inexact_zero and v >= dis_exp) or v >= dis_exp):
                verdicts.append(Verdict("lemma_dis", False, v, dis_exp, ">=", {"s": s, "t": list(t)}))
    if not any(v.name == "lemma_dis" for v in verdicts):
        verdicts.append(Verdict("lemma_dis", True, worst, dis_exp, ">=", {"pairs": S0 * (2 * T) ** n}))
    # restricted functions and the Schwarz step
    ts = t_list if t_list is not None else [t for t in _multi_range([T] * n) if sum(t) < T]
    schwarz = []
    mu_bound = vlu - 2 * n * T * eL
    delta_exp = max((vp_int(m, p) if m % p == 0 else 0) for m in range(1, S0)) if S0 > 1 else 0
    for t in ts:
        order = series_order
        while True:
            f = restricted_series(instance, P, t, order)
            try:
                norm_R = gauss_norm(f, -eps)
                norm_1 = gauss_norm(f, 0)
                break
            except UncertifiedTail:
                if order >= 4 * series_order:
                    raise
                order *= 2
        verdicts.append(Verdict("norm_on_R", norm_R >= -sum(t) * eL, norm_R, -T * eL, ">=", {"t": list(t)}))
        mu = INF
        for tau in range(T):
            ftau = f.derivative(tau) if tau else f
            for s in range(S0):
                val = ftau.evaluate(PadicNumber.from_rational(s, p, instance.precision))
                vv = INF if val.is_exact_zero else val.valuation
                if val.is_inexact_zero:
                    vv = val.valuation
                mu = vv if (mu is INF or (vv is not INF and vv < mu)) else mu
        verdicts.append(Verdict("mu_bound", mu is INF or mu >= mu_bound, mu, mu_bound, ">=", {"t": list(t)}))
        if S0 >= 2:
            bound = schwarz_bound(0, -eps, T, S0, delta_exp, mu_bound, -T * eL, p)
            verdicts.append(Verdict("schwarz", norm_1 >= bound, norm_1, bound, ">=", {"t": list(t)}))
            schwarz.append({"t": list(t), "norm_1": norm_1, "bound": bound})
    # the closing proposition, in natural-log units (-log|.|_p)
    logp = HeightValue.log_of(p)
    sch_exp = logp.scale((eps * S0 - eL) * T)
    inner = logp.scale(vlu - ((2 * n - 1) * eL + eps * S0 + rp) * T) - HeightValue.log_of(S0, S0 * T)
    if inner.certified_sign() < 0:
        sch_exp = sch_exp + inner
    # the bound covers every s in Z_p; the points past S0 are the informative ones
    for s in range(max(params.S, S0 + 3)):
        for t in ts:
            f_s = _y_expansion(instance, P, s, t)
            val = PadicNumber.zero(p)
            for c, gc in enumerate(f_s):
                if not is_zero(gc):
                    val = val + instance.padic(gc) * (lu * s) ** c
            if val.is_exact_zero:
                continue
            lhs = logp.scale(Fraction(val.valuation))
            verdicts.append(Verdict("prop_sch", decide_ge(lhs, sch_exp), lhs, sch_exp, ">=", {"s": s, "t": list(t)}))
    thr = (logp.scale((S0 + rp + eL) * T) + HeightValue.log_of(S0, S0 * T)).scale(instance.constants.c4)
    hyp = decide_ge(logp.scale(vlu), thr)
    return {
        "v_l_u": vlu,
        "epsilon": eps,
        "e_L": eL,
        "lemma_dis_exponent": dis_exp,
        "schwarz": schwarz,
        "prop_sch_exponent": sch_exp,
        "threshold": thr,
        "threshold_met": hyp,
        "verdicts": verdicts,
    }


# -------------------------------------------------------------------------
# Liouville lower bound and vanishing orders


def value_closed_form(instance: ProofInstance, P: Poly, s: int, t: Sequence[int]):
    G = closed_form_values(instance, P, s, sum(t))
    return G.coeff(tuple(t), 0) * multi_factorial(t)


def value_recursion(instance: ProofInstance, P: Poly, s: int, t: Sequence[int]):
    """Same value through the derivation recursion at the exact point gamma^s:
    Delta^t = sum_i prod binom(t_k,i_k) beta_k^(t_k-i_k) d_y^(|t|-|i|) d^i."""
    model = instance.model
    k = instance.k
    one = k(1)
    X = [k(c) for c in model.multiple(model.embed(instance.gamma), s)]
    pt = [c / X[0] for c in X[1:]]
    beta = [k(b) for b in instance.beta]
    total = 0
    for iv_ in _multi_range([tk + 1 for tk in t]):
        c = sum(t) - sum(iv_)
        # R_c(X) = c! [Y^c] P
        Rc = {m[1:]: a for m, a in P.items() if m[0] == c}
        if not Rc:
            continue
        R = _affine_poly(model, Poly(model.n + 1, Rc), one).scale(factorial(c))
        Q = R
        for kk, e in enumerate(iv_):
            for _ in range(e):
                Q = apply_derivation(model, Q, kk)
        val = Q.evaluate(pt, one)
        coef = multi_binomial(t, iv_)
        for bk, tk, ik in zip(beta, t, iv_):
            if tk - ik:
                coef = coef * bk ** (tk - ik)
        total = total + val * coef
    return total


def liouville_lower(instance: ProofInstance, params: Parameters, P: Poly, s: int, t: Sequence[int]) -> dict:
    """Value of (Delta^t Psi)(s u_bar) in K, its height and Liouville's bound."""
    a = value_closed_form(instance, P, s, t)
    b = value_recursion(instance, P, s, t)
    same = (a - b) == 0 if not isinstance(a, AlgebraicNumber) else (a - b).is_exact_zero
    if is_zero(a) and is_zero(b):
        raise ZeroValue(f"(Delta^t Psi)(s u_bar) = 0 at s={s}, t={tuple(t)}")
    x = parse_element(instance.field, a)
    v_exact = Fraction(x.field is QQ_FIELD and 0 or 0)
    from .numfield import padic_valuation

    v_exact = padic_valuation(x, instance.place)
    liou = liouville_check(x, instance.place, "stated")
    hx = height(x)
    model = instance.model
    Tp = sum(t)
    b_, h_ = instance.b_value(), instance.h_value()
    inner = Real.of(HeightValue.rational(params.D + Tp * model.c_deg)).log
    c5_rhs = ((model.c_height + HeightValue.log_of(model.delta_L) + inner).scale(Tp) + b_.scale(params.D0)
              + h_.scale(params.D * params.S * params.S)).scale(-instance.constants.c5)
    lhs = HeightValue.log_of(instance.p, -v_exact)
    return {
        "s": s,
        "t": list(t),
        "value": _kstr(a),
        "routes_agree": Verdict("dual_route", same, None, None, "=="),
        "v": v_exact,
        "height": hx,
        "liouville": liou,
        "c5_bound": Verdict("liouville_c5", decide_ge(lhs, c5_rhs), lhs, c5_rhs, ">", {"c5": instance.constants.c5}),
    }


def vanishing_order_audit(instance: ProofInstance, params: Parameters, P: Poly) -> dict:
    """Order of Psi along W at s u_bar for s < S (cap T), and the count check
    binom(T+n, n) S <= c9 D0 D^n."""
    n, T = instance.n, params.T
    k = instance.k
    basis = []
    for i, b in enumerate(instance.beta):
        basis.append([k(b)] + [k(int(j == i)) for j in range(n)])
    orders = []
    for s in range(params.S):
        G = closed_form_psi(instance, P, s, T)
        orders.append(ord_along(G, [k(0)] * (n + 1), basis, T, valid_degree=T))
    all_high = all(isinstance(o, AtLeast) or o >= T for o in orders)
    lhs = comb(T + n, n) * params.S
    rhs = instance.constants.c9 * params.D0 * params.D**n
    return {
        "orders": orders,
        "order_at_least_T": all_high,
        "count_check": Verdict("count", lhs <= rhs, lhs, rhs, "<=", {"c9": instance.constants.c9}),
    }


def closed_form_psi(instance: ProofInstance, P: Poly, s: int, trunc: int) -> Poly:
    """Taylor expansion of Psi(y, s u + x) = P(y, 1, gamma^s e^x - 1) at 0 in
    the variables (y, x_1..x_n) through degree ``trunc``."""
    n = instance.n
    k = instance.k
    one = k(1)
    nv = n + 1
    subs = [Poly.var(nv, 0, one), Poly.const(nv, one)]
    for i in range(n):
        gs = k(instance.gamma[i]) ** s
        terms = {(0,) * nv: gs - one}
        for d in range(1, trunc + 1):
            m = [0] * nv
            m[i + 1] = d
            terms[tuple(m)] = gs * Fraction(1, factorial(d))
        subs.append(Poly(nv, terms))
    return P.compose(subs, trunc, one)


# -------------------------------------------------------------------------
# the final bound


def theorem_bound(omega_L, n: int, b, h, p: int, c0=1, nu: Optional[int] = None) -> HeightValue:
    """-c0 w^{n+3} b h^n (log b + log h [+ 2 nu log p])^{n+3} log p."""
    w = parse_real(omega_L).value
    b, h = parse_real(b), parse_real(h)
    inner = b.log + h.log
    if nu is not None:
        inner = inner + HeightValue.log_of(p, 2 * nu)
    val = _real_pow(w, n + 3) * b.value * _real_pow(h.value, n) * _real_pow(inner, n + 3) * HeightValue.log_of(p)
    return val.scale(-Fraction(c0))


@dataclass
class Report:
    name: str
    values: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    outcome: str = "pass"

    @property
    def passed(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def to_dict(self) -> dict:
        from .verdict import _fmt

        return {
            "name": self.name,
            "outcome": self.outcome,
            "passed": self.passed,
            "values": _fmt(self.values),
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def _certified_zero(instance: ProofInstance, beta) -> bool:
    """l(u) = 0 iff prod gamma_i^(delta beta_i) is a root of unity in 1 + pZ_p
    (1, or +-1 when p = 2); decidable when beta is rational."""
    if not all(b.is_rational for b in beta):
        return False
    qs = [b.as_rational() for b in beta]
    den = lcm(*[q.denominator for q in qs])
    prod = instance.field.one()
    for g, q in zip(instance.gamma, qs):
        prod = prod * g ** int(q * den)
    if prod == 1:
        return True
    return instance.p == 2 and prod == -1


def _lform_valuation(instance: ProofInstance, beta, max_precision: int = 640):
    prec = instance.precision
    while True:
        u = instance.u(prec)
        acc = PadicNumber.zero(instance.p)
        for b, x in zip(beta, u):
            acc = acc + instance.padic(b, prec) * x
        if not acc.is_inexact_zero and not acc.is_exact_zero:
            return Fraction(acc.valuation), u, prec
        prec *= 2
        if prec > max_precision:
            raise InsufficientPrecision("l(u) indistinguishable from 0 at maximal precision")


def verify_gm(instance: ProofInstance, c0=None, c1=None, max_precision: int = 640) -> Report:
    """log|l(u)|_p against the theorem's bound, plus the denominator-clearing path."""
    consts = instance.constants
    c0 = Fraction(c0) if c0 is not None else consts.c0
    c1 = Fraction(c1) if c1 is not None else (consts.c1 if consts.c1 is not None else c0)
    p, n = instance.p, instance.n
    model = instance.model
    rep = Report("verify_gm")
    if _certified_zero(instance, instance.beta):
        rep.outcome = "linear_form_zero"
        rep.values["certified_zero"] = True
        raise_zero = LinearFormZero("prod gamma_i^(beta_i) is a root of unity: l(u) = 0")
        raise_zero.report = rep
        raise raise_zero
    vl, u, prec = _lform_valuation(instance, instance.beta, max_precision)
    vu = min(Fraction(x.valuation) for x in u if not x.is_exact_zero)
    eL = model.e_L(p)
    rp = r_p_exponent(p)
    w = model.omega_L(p)
    b, h = instance.b_value(), instance.h_value()
    if vu > rp + eL:
        statement, nu = 1, None
        bound = theorem_bound(w, n, b, h, p, c0)
    else:
        statement = 2
        nu = nu_reduction(vu, p)["nu"]
        bound = theorem_bound(w, n, b, h, p, c1, nu)
    lhs = HeightValue.log_of(p, -vl)
    ok = decide_ge(lhs, bound) and (lhs - bound).certified_sign() > 0
    rep.verdicts.append(Verdict("theorem_bound", ok, lhs, bound, ">", {"statement": statement, "nu": nu}))
    # denominator clearing: l' = delta l with beta' in O_K
    delta = lcm(*[bt.denominator() for bt in instance.beta])
    beta2 = [bt * delta for bt in instance.beta]
    vl2 = vl + (vp_int(delta, p) if delta % p == 0 else 0)
    inst2 = ProofInstance(model, beta2, list(instance.gamma), p, prec, instance.place_index, consts)
    b2 = inst2.b_value()
    bound2 = theorem_bound(w, n, b2, h, p, c0 if statement == 1 else c1, nu)
    lhs2 = HeightValue.log_of(p, -vl2)
    ok2 = (lhs2 - bound2).certified_sign() > 0
    rep.verdicts.append(Verdict("abs_l_ge_abs_l_prime", vl <= vl2, vl, vl2, "<=", {"delta": delta}))
    rep.values.update({
        "p": p,
        "v_u": vu,
        "v_l_u": vl,
        "log_abs_l_u": lhs,
        "b": b,
        "h": h,
        "omega_L": w,
        "statement": statement,
        "nu": nu,
        "bound": bound,
        "cleared": {"delta": delta, "v_l_prime": vl2, "bound": bound2, "holds": ok2},
        "precision": prec,
    })
    rep.outcome = "pass" if rep.passed else "fail"
    return rep


def _first_nonzero(instance: ProofInstance, params: Parameters, P: Poly):
    """First (s, t), s < max(S, S0 + 1) and |t| <= 2T, with a non-zero value."""
    n, T = instance.n, params.T
    ts = sorted(_multi_range([2 * T + 1] * n), key=lambda t: (sum(t), t))
    for s in range(max(params.S, params.S0 + 1)):
        G = closed_form_values(instance, P, s, 2 * T)
        for t in ts:
            if sum(t) <= 2 * T and not is_zero(G.coeff(tuple(t), 0)):
                return s, t
    return None


def run_pipeline(instance: ProofInstance, params: Parameters, series_order: int = 16) -> Report:
    """nu-reduction, auxiliary polynomial, extrapolation, Liouville comparison,
    vanishing orders and the final verdict, all at the given (toy) parameters."""
    rep = Report("pipeline")
    u = instance.u()
    red = nu_reduction(u, instance.p)
    inst = instance.reduced(red["nu"]) if red["nu"] else instance
    rep.values["nu"] = red["nu"]
    rep.values["params"] = params.to_dict()
    aux = construct_auxiliary(inst, params)
    rep.verdicts.extend(aux.audits)
    rep.values["P"] = aux.P.to_dict(_kstr)
    try:
        ext = extrapolate(inst, params, aux.P, series_order)
        rep.verdicts.extend(ext["verdicts"])
        rep.values["extrapolation"] = {k: v for k, v in ext.items() if k != "verdicts"}
    except LinearFormZero:
        rep.values["extrapolation"] = "l(u) = 0"
    van = vanishing_order_audit(inst, params, aux.P)
    rep.values["orders"] = [str(o) for o in van["orders"]]
    rep.verdicts.append(van["count_check"])
    rep.verdicts.extend(translate_height_audit(inst, s) for s in range(params.S0))
    hit = _first_nonzero(inst, params, aux.P)
    if hit is not None:
        ll = liouville_lower(inst, params, aux.P, *hit)
        rep.verdicts.append(ll["routes_agree"])
        rep.values["liouville"] = {k: v for k, v in ll.items() if k != "routes_agree"}
    try:
        vg = verify_gm(instance)
        rep.verdicts.extend(vg.verdicts)
        rep.values["verify_gm"] = vg.values
    except LinearFormZero:
        rep.values["verify_gm"] = "l(u) = 0"
    rep.outcome = "pass" if rep.passed else "fail"
    return rep

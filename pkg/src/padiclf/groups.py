"""Group models: projective embedding data, exponential series, derivative
recursion and vanishing orders.

The shipped models are powers of the multiplicative group. A point
g = (g_1, ..., g_n) is sent to the coordinates X_S = prod_{i in S} (g_i - 1)
indexed by the subsets S of {1..n} (X_{} = 1), i.e. the Segre product of the
charts g -> (1 : g - 1). Subsets are ordered by size, then lexicographically,
so X_0 is the empty subset and X_1..X_n are the singletons.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

from .errors import (
    AdditionFormulaUndefined,
    BadParameters,
    DomainError,
    InconsistentSystem,
    PrecisionInsufficient,
    UncertifiedTail,
)
from .linalg import primitive, rational_nullspace
from .numfield import QQ_FIELD, AlgebraicNumber, HeightValue, NumberField, heights_vector, parse_element
from .padic import INF, PadicNumber, r_p_exponent, vp, vp_int
from .polys import Poly, is_zero, monomials_of_degree, multi_factorial
from .verdict import Verdict

__all__ = [
    "AtLeast",
    "ExpSeries",
    "GroupModel",
    "denominator_power_check",
    "derivative_polynomial",
    "exp_series",
    "is_semistable_gm",
    "make_gm_power",
    "make_scaled_gm",
    "model_from_preset",
    "ord_along",
    "sup_norm_check",
    "tau_index",
]


def segre_subsets(n: int) -> list:
    out = []
    for k in range(n + 1):
        out.extend(itertools.combinations(range(n), k))
    return out


@dataclass(frozen=True, eq=False)
class GroupModel:
    """Embedding data of an n-dimensional group in P^N.

    ``deriv_polys[i][j]`` is P_{i+1,L(j+1)} in the affine variables T_1..T_N
    (X_0 = 1); ``addition[k]`` is E_k in X_0..X_N, Y_0..Y_N.
    """

    name: str
    n: int
    N: int
    deriv_polys: tuple
    addition: tuple
    delta_L: int = 1
    field: NumberField = QQ_FIELD
    subsets: tuple = ()
    scales: tuple = ()

    @property
    def c_deg(self) -> int:
        return max(P.degree() for row in self.deriv_polys for P in row)

    @property
    def c_height(self) -> HeightValue:
        """h+ of all coefficients of the P_{i,L(j)} together (relative)."""
        coeffs = [c for row in self.deriv_polys for P in row for c in P.coefficients()]
        return heights_vector([parse_element(self.field, c) for c in coeffs], self.field)["h_plus"]

    def e_L(self, p: int) -> Fraction:
        return Fraction(vp_int(self.delta_L, p)) if self.delta_L % p == 0 else Fraction(0)

    def omega_raw(self, p: int) -> HeightValue:
        """max{1, e_L}(c_height + log delta_L + log c_deg), log 0 read as 0."""
        inner = self.c_height + HeightValue.log_of(self.delta_L) + (HeightValue.log_of(self.c_deg) if self.c_deg else 0)
        return inner.scale(max(Fraction(1), self.e_L(p)))

    def omega_L(self, p: int) -> HeightValue:
        """The raw constant clamped below by 1."""
        raw = self.omega_raw(p)
        return raw if (raw - 1).certified_sign() >= 0 else HeightValue.rational(1)

    # points ----------------------------------------------------------------
    def embed(self, g: Sequence) -> list:
        """Projective coordinates (X_0 = 1) of the group point g."""
        if len(g) != self.n:
            raise ValueError("point has wrong dimension")
        out = []
        for S in self.subsets:
            v = 1
            for i in S:
                v = v * (g[i] - 1)
            out.append(v)
        return out

    def group_point(self, X: Sequence) -> list:
        """Inverse of :meth:`embed` on the affine chart."""
        x0 = X[0]
        if is_zero(x0):
            raise AdditionFormulaUndefined("X_0 = 0: point outside the affine chart")
        return [X[1 + i] / x0 + 1 for i in range(self.n)]

    def add(self, X: Sequence, Y: Sequence) -> list:
        pt = list(X) + list(Y)
        out = [E.evaluate(pt) for E in self.addition]
        if is_zero(out[0]):
            raise AdditionFormulaUndefined("E_0 vanishes at this pair")
        return [c / out[0] for c in out]

    def multiple(self, X: Sequence, s: int) -> list:
        """[s]X by repeated use of the addition formula (s >= 0)."""
        if s < 0:
            raise ValueError("s must be non-negative")
        R = [1] + [0] * self.N
        for _ in range(s):
            R = self.add(R, X)
        return R

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "N": self.N,
            "delta_L": self.delta_L,
            "field": self.field.to_dict(),
            "deriv_polys": [[P.to_dict(_qstr) for P in row] for row in self.deriv_polys],
            "addition": [E.to_dict(_qstr) for E in self.addition],
        }


def _qstr(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def make_gm_power(n: int, field: NumberField = QQ_FIELD, scales: Sequence[int] | None = None) -> GroupModel:
    """G_m^n in the Segre embedding. ``scales[j]`` divides the derivation
    L(j) = x_j d/dx_j (default 1); the denominator delta_L is their lcm."""
    if n < 1:
        raise BadParameters("n must be >= 1")
    scales = tuple(int(s) for s in (scales or [1] * n))
    if len(scales) != n or any(s < 1 for s in scales):
        raise BadParameters("scales must be n positive integers")
    subsets = segre_subsets(n)
    index = {S: k for k, S in enumerate(subsets)}
    N = len(subsets) - 1
    deriv = []
    for S in subsets[1:]:
        row = []
        for j in range(n):
            terms = {}
            if j in S:
                mono = [0] * N
                mono[index[S] - 1] = 1
                terms[tuple(mono)] = Fraction(1, scales[j])
                rest = tuple(i for i in S if i != j)
                mono = [0] * N
                if rest:
                    mono[index[rest] - 1] = 1
                terms[tuple(mono)] = Fraction(1, scales[j])
            row.append(Poly(N, terms))
        deriv.append(tuple(row))
    nv = 2 * (N + 1)
    addition = []
    for S in subsets:
        terms = {}
        Sset = set(S)
        for S1 in subsets:
            if not set(S1) <= Sset:
                continue
            for S2 in subsets:
                if set(S1) | set(S2) == Sset:
                    mono = [0] * nv
                    mono[index[S1]] += 1
                    mono[N + 1 + index[S2]] += 1
                    terms[tuple(mono)] = terms.get(tuple(mono), 0) + Fraction(1)
        addition.append(Poly(nv, terms))
    delta = lcm(*scales)
    name = "gm" if n == 1 else f"gm^{n}"
    if any(s != 1 for s in scales):
        name += "/" + ",".join(map(str, scales))
    return GroupModel(name, n, N, tuple(deriv), tuple(addition), delta, field, tuple(subsets), scales)


def make_scaled_gm(n: int = 1, scale: int = 2) -> GroupModel:
    """G_m^n with L(1) divided by ``scale`` (so delta_L = scale)."""
    return make_gm_power(n, scales=[scale] + [1] * (n - 1))


def model_from_preset(name: str) -> GroupModel:
    """Presets: "gm", "gm^2", "gm^n:k" (k-th power) and "gm-scaled:k"."""
    name = name.strip()
    if name == "gm":
        return make_gm_power(1)
    if name.startswith("gm^n:"):
        return make_gm_power(int(name.split(":", 1)[1]))
    if name.startswith("gm^"):
        return make_gm_power(int(name[3:]))
    if name.startswith("gm-scaled:"):
        return make_scaled_gm(1, int(name.split(":", 1)[1]))
    raise ValueError(f"unknown model preset {name!r}")


# -------------------------------------------------------------------------
# exponential series


@dataclass(frozen=True, eq=False)
class ExpSeries:
    """f_1..f_N through total degree M, exact rational coefficients."""

    model: GroupModel
    M: int
    f: tuple

    def coefficient(self, i: int, alpha: Sequence[int]) -> Fraction:
        """Coefficient of z^alpha in f_i (1-based i)."""
        return self.f[i - 1].coeff(tuple(alpha), Fraction(0))

    def rhs(self, i: int, j: int) -> Poly:
        """P_{i,L(j)}(f_1, ..., f_N) truncated at degree M - 1 (1-based)."""
        return self.model.deriv_polys[i - 1][j - 1].compose(list(self.f), self.M - 1, Fraction(1))

    def check_pde(self) -> Verdict:
        bad = []
        for i in range(1, self.model.N + 1):
            for j in range(1, self.model.n + 1):
                lhs = self.f[i - 1].diff(j - 1).truncate(self.M - 1)
                if lhs != self.rhs(i, j):
                    bad.append((i, j))
        return Verdict("exp_pde", not bad, len(bad), 0, "==", {"order": self.M, "failures": bad})

    def check_integrability(self) -> Verdict:
        """d_k(P_{i,L(j)}(f)) = d_j(P_{i,L(k)}(f)) as truncated series."""
        bad = []
        n = self.model.n
        for i in range(1, self.model.N + 1):
            rhs = [self.rhs(i, j) for j in range(1, n + 1)]
            for j, k in itertools.combinations(range(n), 2):
                a = rhs[j].diff(k).truncate(self.M - 2)
                b = rhs[k].diff(j).truncate(self.M - 2)
                if a != b:
                    bad.append((i, j + 1, k + 1))
        return Verdict("exp_integrability", not bad, len(bad), 0, "==", {"order": self.M, "failures": bad})

    def check_integrality(self) -> Verdict:
        """delta_L^|a| * a! * c_a is an integer for every coefficient."""
        delta = self.model.delta_L
        bad = []
        for i, fi in enumerate(self.f, start=1):
            for a, c in fi.items():
                v = Fraction(c) * delta ** sum(a) * multi_factorial(a)
                if v.denominator != 1:
                    bad.append((i, a))
        return Verdict("exp_integrality", not bad, len(bad), 0, "==", {"delta_L": delta, "failures": bad[:10]})

    def check_addition(self) -> Verdict:
        """f_i(z + w) E_0(f(z), f(w)) = E_i(f(z), f(w)) through degree M."""
        model, M, n = self.model, self.M, self.model.n
        nv = 2 * n
        shift_z = [Poly.var(nv, k, Fraction(1)) + Poly.var(nv, n + k, Fraction(1)) for k in range(n)]
        only_z = [Poly.var(nv, k, Fraction(1)) for k in range(n)]
        only_w = [Poly.var(nv, n + k, Fraction(1)) for k in range(n)]
        one = Poly.const(nv, Fraction(1))
        fz = [one] + [fi.compose(only_z, M, Fraction(1)) for fi in self.f]
        fw = [one] + [fi.compose(only_w, M, Fraction(1)) for fi in self.f]
        E = [Ek.compose(fz + fw, M, Fraction(1)) for Ek in model.addition]
        bad = []
        for i in range(1, model.N + 1):
            lhs = self.f[i - 1].compose(shift_z, M, Fraction(1)).mul(E[0], M)
            if lhs != E[i]:
                bad.append(i)
        return Verdict("exp_addition", not bad, len(bad), 0, "==", {"order": M, "failures": bad})

    def evaluate(self, i: int, x: Sequence, p: int, precision: int = 40):
        """Partial sum of f_i at a p-adic point."""
        pt = [xi if isinstance(xi, PadicNumber) else PadicNumber.from_rational(Fraction(xi), p, precision) for xi in x]
        fi = self.f[i - 1].map_coeffs(lambda c: PadicNumber.from_rational(c, p, precision))
        return fi.evaluate(pt, PadicNumber.from_rational(1, p, precision))

    def to_dict(self) -> dict:
        return {"model": self.model.name, "M": self.M, "f": [fi.to_dict(_qstr) for fi in self.f]}


def exp_series(model: GroupModel, M: int) -> ExpSeries:
    """Solve d_j f_i = P_{i,L(j)}(f) with f(0) = 0 degree by degree.

    The degree-k part of f_i is read off from the degree-(k-1) part of the
    right-hand sides, which only involves f through degree k-1. Every
    direction j with alpha_j > 0 yields a value for c_alpha; they must agree.
    """
    if M < 1:
        raise BadParameters("M must be >= 1")
    n, N = model.n, model.N
    f = [Poly.zero(n) for _ in range(N)]
    for k in range(1, M + 1):
        rhs = [[model.deriv_polys[i][j].compose(f, k - 1, Fraction(1)).homogeneous_part(k - 1) for j in range(n)] for i in range(N)]
        for i in range(N):
            new = {}
            for alpha in monomials_of_degree(n, k):
                val = None
                for j in range(n):
                    if alpha[j] == 0:
                        continue
                    beta = list(alpha)
                    beta[j] -= 1
                    c = Fraction(rhs[i][j].coeff(tuple(beta), Fraction(0))) / alpha[j]
                    if val is None:
                        val = c
                    elif c != val:
                        raise InconsistentSystem(f"f_{i + 1}: directions disagree at z^{alpha}")
                if val:
                    new[alpha] = val
            f[i] = f[i] + Poly(n, new)
    return ExpSeries(model, M, tuple(f))


def sup_norm_check(model: GroupModel, series: ExpSeries, points: Sequence, p: int, precision: int = 60) -> Verdict:
    """|f_i(x)|_p < 1 on the polydisc v(x_k) > e_L + 1/(p-1).

    The degree-T coefficients satisfy v >= -T e_L - (T-1)/(p-1), so with
    a = min_k v(x_k) - e_L - 1/(p-1) > 0 every term of degree T has valuation
    >= T a + 1/(p-1) and the tail past the truncation is >= (M+1)a + 1/(p-1).
    The valuation of f_i(x) is certified when the partial sum lies strictly
    below the tail bound.
    """
    eL = model.e_L(p)
    rp = r_p_exponent(p)
    results = []
    for x in points:
        px = [xi if isinstance(xi, PadicNumber) else PadicNumber.from_rational(Fraction(xi), p, precision) for xi in x]
        vals = [xi.valuation if not xi.is_exact_zero else INF for xi in px]
        vmin = min(vals, key=lambda v: (v is INF, v if v is not INF else 0))
        if vmin is INF:
            results.append({"point": [str(xi) for xi in x], "valuations": ["inf"] * model.N, "certified": True})
            continue
        vmin = Fraction(vmin)
        if not vmin > eL + rp:
            raise DomainError(f"point with v = {vmin} outside the disc v > {eL + rp}")
        a = vmin - eL - rp
        tail = (series.M + 1) * a + rp
        vs = []
        for i in range(1, model.N + 1):
            val = series.evaluate(i, px, p, precision)
            if val.is_exact_zero:
                # every coordinate zero except those killing all terms: bound by the tail
                vs.append(tail)
                continue
            if val.is_inexact_zero or not Fraction(val.valuation) < tail:
                raise UncertifiedTail(f"f_{i}: partial sum does not separate from the tail bound {tail}")
            vs.append(Fraction(val.valuation))
        results.append({"point": [str(xi) for xi in x], "valuations": vs, "tail_bound": tail})
    ok = all(v > 0 for r in results for v in r["valuations"] if v != "inf")
    return Verdict("sup_norm", ok, None, None, "<", {"p": p, "points": len(points), "results": results[:5]})


# -------------------------------------------------------------------------
# derivative polynomials (chain rule on the invariant derivations)


def apply_derivation(model: GroupModel, Q: Poly, j: int) -> Poly:
    """D_j Q = sum_m dQ/dT_m * P_{m,L(j)} (0-based j)."""
    out = Poly.zero(model.N)
    for m in range(model.N):
        dQ = Q.diff(m)
        if dQ.is_zero():
            continue
        out = out + dQ.mul(model.deriv_polys[m][j])
    return out


def derivative_polynomial(model: GroupModel, P: Poly, t: Sequence[int]) -> tuple:
    """(P_t, tracked bound on h+(P_t)).

    d^t P(f) = P_t(f). The bound adds, per derivation applied to a
    polynomial of degree D_k = D + k(c_deg - 1), the term
    c_height + d log(N (c_deg+1)^N max(D_k, 1)).
    """
    t = tuple(int(x) for x in t)
    if len(t) != model.n or any(x < 0 for x in t):
        raise BadParameters("t must be n non-negative integers")
    D = P.degree() if not P.is_zero() else 0
    cdeg, N, d = model.c_deg, model.N, model.field.d
    Q = P
    bound = heights_vector([parse_element(model.field, c) for c in P.coefficients()] or [0], model.field)["h_plus"]
    ch = model.c_height
    k = 0
    for j, tj in enumerate(t):
        for _ in range(tj):
            Dk = D + k * (cdeg - 1)
            bound = bound + ch + HeightValue.log_of(N * (cdeg + 1) ** N * max(Dk, 1), d)
            Q = apply_derivation(model, Q, j)
            k += 1
    return Q, bound


def series_derivative_of(model: GroupModel, series: ExpSeries, P: Poly, t: Sequence[int]) -> Poly:
    """d^t (P(f_1..f_N)) computed directly on truncated series."""
    G = P.compose(list(series.f), series.M, Fraction(1))
    return G.diff_multi(t)


def denominator_power_check(model: GroupModel, P: Poly, t: Sequence[int]) -> Verdict:
    """delta_L^|t| P_t has integral coefficients when P does."""
    if any(Fraction(c).denominator != 1 for c in P.coefficients()):
        raise BadParameters("P must have integral coefficients")
    Pt, _ = derivative_polynomial(model, P, t)
    T = sum(t)
    scaled = Pt.scale(Fraction(model.delta_L) ** T)
    den = 1
    for c in scaled.coefficients():
        den = max(den, Fraction(c).denominator)
    # smallest power of delta_L that works, for the report
    needed = 0
    while any((Fraction(c) * model.delta_L**needed).denominator != 1 for c in Pt.coefficients()):
        needed += 1
    return Verdict("denominator_power", den == 1, needed, T, "<=", {"delta_L": model.delta_L, "T": T})


# -------------------------------------------------------------------------
# order of vanishing


@dataclass(frozen=True)
class AtLeast:
    """Order not determined below ``bound``: the true order is >= bound."""

    bound: int

    def __repr__(self):
        return f">={self.bound}"

    def to_dict(self):
        return {"at_least": self.bound}


def ord_along(F: Poly, z: Sequence, basis: Sequence[Sequence], cap: int, valid_degree: Optional[int] = None):
    """Least |t| with (Delta^t F)(z) != 0, Delta_k the derivative along basis[k].

    (Delta^t F)(z) = t! [s^t] F(z + sum s_k basis_k), so the order is the
    lowest total degree occurring in that composition. ``F`` is a polynomial,
    or a series known through ``valid_degree`` (then z must be 0).
    """
    n = F.nvars
    d = len(basis)
    if any(len(b) != n for b in basis):
        raise BadParameters("basis vectors must have F's arity")
    nonzero_z = any(not is_zero(c) for c in z)
    if valid_degree is not None and nonzero_z:
        raise BadParameters("a truncated series can only be expanded at 0")
    limit = cap if valid_degree is None else min(cap, valid_degree + 1)
    one = next((c for c in F.coefficients()), 1)
    one = one / one if not is_zero(one) else 1
    subs = []
    for i in range(n):
        lin = {(0,) * d: z[i]} if not is_zero(z[i]) else {}
        for k, b in enumerate(basis):
            if not is_zero(b[i]):
                m = [0] * d
                m[k] = 1
                lin[tuple(m)] = b[i]
        subs.append(Poly(d, lin))
    G = F.compose(subs, limit - 1 if limit > 0 else 0, one)
    for deg in range(0, limit):
        part = G.homogeneous_part(deg)
        for _, c in part.items():
            if getattr(c, "is_inexact_zero", False):
                raise PrecisionInsufficient(f"coefficient in degree {deg} is O(p^k)")
        if not part.is_zero():
            return deg
    return AtLeast(limit)


# -------------------------------------------------------------------------
# semistability for tori


def tau_index(dim_V: int, dim_G: int) -> Fraction:
    if dim_V < 0 or dim_G < 0:
        raise BadParameters("dimensions must be non-negative")
    return Fraction(1) if dim_G == 0 else Fraction(dim_V, dim_G)


def is_semistable_gm(beta: Sequence, field: NumberField | None = None) -> Verdict:
    """(G_m^n, ker l) with l = sum beta_i z_i is semistable iff the beta_i
    satisfy no nontrivial Q-linear relation; the relation is the witness."""
    beta = list(beta)
    if field is None:
        field = next((b.field for b in beta if isinstance(b, AlgebraicNumber)), QQ_FIELD)
    beta = [parse_element(field, b) for b in beta]
    if all(b.is_exact_zero for b in beta):
        raise BadParameters("beta must not vanish")
    n = len(beta)
    A = [[b.coords[r] for b in beta] for r in range(field.d)]
    null = rational_nullspace(A, n)
    if not null:
        return Verdict("semistable", True, tau_index(n - 1, n), None, "", {"n": n, "witness": None})
    w = primitive(null[0])
    return Verdict("semistable", False, tau_index(n - 1, n), None, "", {"n": n, "witness": w})

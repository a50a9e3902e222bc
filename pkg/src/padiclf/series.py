"""One-variable p-adic power series: Gauss norms, Newton polygons, zero counts.

Radii are always of the form ``p^(-q)`` with q rational, and every norm is
returned as the exponent ``w`` with ``|f|_r = p^(-w)``. A series may carry a
tail certificate ``v(a_n) >= alpha*n + beta`` for every index past the
stored coefficients; queries the certificate cannot settle raise
:class:`UncertifiedTail` rather than guessing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import BadParameters, InsufficientPrecision, UncertifiedTail, ZeroSeries
from .padic import INF, PadicNumber, as_exponent, exponent_str, r_p_exponent, vp
from .verdict import Verdict

__all__ = [
    "NewtonPolygon",
    "PadicSeries",
    "check_growth_lemma",
    "check_reverse_lemma",
    "count_zeros",
    "gauss_norm",
    "newton_polygon",
    "poly_from_roots",
    "schwarz_bound",
]


@dataclass(frozen=True)
class PadicSeries:
    prime: int
    coeffs: tuple
    tail: Optional[tuple] = None  # (alpha, beta) or None for a polynomial

    def __post_init__(self):
        for c in self.coeffs:
            if not isinstance(c, PadicNumber) or c.prime != self.prime:
                raise TypeError("coefficients must be PadicNumbers over the series prime")
        if self.tail is not None:
            a, b = self.tail
            object.__setattr__(self, "tail", (as_exponent(a), as_exponent(b)))

    @classmethod
    def from_rationals(cls, coeffs: Sequence, p: int, precision: int = 30, tail=None) -> "PadicSeries":
        return cls(p, tuple(PadicNumber.from_rational(Fraction(c), p, precision) for c in coeffs), tail)

    @property
    def p(self):
        return self.prime

    @property
    def is_polynomial(self) -> bool:
        return self.tail is None

    def __len__(self):
        return len(self.coeffs)

    def valuations(self) -> list:
        """Per-index (value, exact) pairs; inexact zeros give a lower bound."""
        out = []
        for c in self.coeffs:
            if c.is_exact_zero:
                out.append((INF, True))
            elif c.precision == 0:
                out.append((Fraction(c.valuation), False))
            else:
                out.append((Fraction(c.valuation), True))
        return out

    def derivative(self, k: int = 1) -> "PadicSeries":
        """k-th derivative, coefficient-wise with exact falling factorials."""
        if k < 0:
            raise ValueError("k must be >= 0")
        new = []
        for n in range(k, len(self.coeffs)):
            ff = 1
            for j in range(k):
                ff *= n - j
            new.append(self.coeffs[n] * ff)
        tail = None
        if self.tail is not None:
            # v(n(n-1)...(n-k+1) a_n) >= v(a_n); reindexed by n -> n - k
            a, b = self.tail
            tail = (a, b + a * k)
        return PadicSeries(self.prime, tuple(new), tail)

    def evaluate(self, x) -> PadicNumber:
        """Value at ``x`` for a polynomial; for a series only with |x| small enough
        that the certified tail is negligible (precision is cut accordingly)."""
        p = self.prime
        if not isinstance(x, PadicNumber):
            x = PadicNumber.from_rational(Fraction(x), p, max(_min_prec(self), 1) + 4)
        acc = PadicNumber.zero(p)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if self.tail is None:
            return acc
        a, b = self.tail
        vx = INF if x.is_exact_zero else Fraction(x.valuation)
        if vx is INF:
            return acc
        if a + vx <= 0:
            raise UncertifiedTail("tail does not converge at this point")
        n = len(self.coeffs)
        bound = (a + vx) * n + b
        return acc.with_abs_precision(_ceil(bound))

    def to_dict(self) -> dict:
        out = {"p": self.prime, "coeffs": [c.to_dict() for c in self.coeffs]}
        if self.tail is not None:
            out["tail"] = {"alpha": exponent_str(self.tail[0]), "beta": exponent_str(self.tail[1])}
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "PadicSeries":
        tail = None
        if d.get("tail"):
            tail = (as_exponent(d["tail"]["alpha"]), as_exponent(d["tail"]["beta"]))
        return cls(int(d["p"]), tuple(PadicNumber.from_dict(c) for c in d["coeffs"]), tail)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _min_prec(f: PadicSeries) -> int:
    precs = [c.precision for c in f.coeffs if not c.is_exact_zero and c.precision]
    return min(precs, default=30)


def _argmin_profile(f: PadicSeries, q: Fraction):
    """Minimum of v(a_n) + n*q over stored coefficients, with its argmin range.

    Returns (w, first, last, vals) where vals are the per-index lower bounds.
    Raises InsufficientPrecision when an inexact zero could reach the minimum.
    """
    vals = f.valuations()
    exact = [(n, v + n * q) for n, (v, ex) in enumerate(vals) if ex and v is not INF]
    if not exact:
        return INF, None, None, vals
    w = min(x for _, x in exact)
    idx = [n for n, x in exact if x == w]
    for n, (v, ex) in enumerate(vals):
        if not ex and v + n * q <= w:
            raise InsufficientPrecision(f"coefficient {n} is O(p^{v}) and may attain the norm")
    return w, idx[0], idx[-1], vals


def _tail_inf(f: PadicSeries, q: Fraction):
    """Lower bound for v(a_n) + n*q over the uncertified tail."""
    if f.tail is None:
        return INF
    a, b = f.tail
    slope = a + q
    if slope < 0:
        raise UncertifiedTail(f"tail certificate slope {a} does not cover radius exponent {q}")
    return slope * len(f.coeffs) + b


def gauss_norm(f: PadicSeries, q) -> Fraction:
    """Exponent w with |f|_{p^{-q}} = p^{-w}, i.e. min_n v(a_n) + n*q."""
    q = as_exponent(q)
    w, _, _, _ = _argmin_profile(f, q)
    t = _tail_inf(f, q)
    if f.tail is not None:
        if w is INF or t < w:
            raise UncertifiedTail("the tail may attain the Gauss norm")
    return w


def count_zeros(f: PadicSeries, q, closed: bool = True) -> int:
    """Zeros in C_p (with multiplicity) of valuation >= q (closed) or > q (open)."""
    q = as_exponent(q)
    w, first, last, vals = _argmin_profile(f, q)
    if w is INF:
        if f.tail is None:
            raise ZeroSeries("the zero series has no finite zero count")
        raise UncertifiedTail("no nonzero stored coefficient")
    t = _tail_inf(f, q)
    if closed:
        # the largest argmin must lie inside the stored part, strictly
        if f.tail is not None and not t > w:
            raise UncertifiedTail("the tail may share the minimum at radius exponent q")
        for n in range(last + 1, len(vals)):
            v, ex = vals[n]
            if not ex and not v + n * q > w:
                raise InsufficientPrecision(f"coefficient {n} undetermined at the boundary")
        return last
    if f.tail is not None and t < w:
        raise UncertifiedTail("the tail may attain the Gauss norm")
    return first


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple  # ((n, v(a_n)), ...)
    slopes: tuple  # ((slope, multiplicity), ...) weakly increasing
    zeros_at_origin: int = 0
    certified_through: Optional[int] = None  # last certified index for series

    def zero_valuations(self) -> list:
        """(valuation, multiplicity) pairs; zeros at 0 carry INF."""
        out = [(-s, m) for s, m in self.slopes]
        if self.zeros_at_origin:
            out.append((INF, self.zeros_at_origin))
        return sorted(out, key=lambda t: (t[0] is INF, t[0] if t[0] is not INF else 0))

    def to_dict(self) -> dict:
        return {
            "vertices": [[n, exponent_str(v)] for n, v in self.vertices],
            "slopes": [[exponent_str(s), m] for s, m in self.slopes],
            "zeros_at_origin": self.zeros_at_origin,
        }


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(f: PadicSeries) -> NewtonPolygon:
    """Lower convex hull of {(n, v(a_n))} over the certified range."""
    vals = f.valuations()
    pts = []
    for n, (v, ex) in enumerate(vals):
        if v is INF:
            continue
        if not ex:
            raise InsufficientPrecision(f"coefficient {n} is an inexact zero")
        pts.append((n, v))
    if not pts:
        raise ZeroSeries("no nonzero coefficient")
    hull: list = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    slopes = []
    for (n0, v0), (n1, v1) in zip(hull, hull[1:]):
        slopes.append((Fraction(v1 - v0, n1 - n0), n1 - n0))
    certified = hull[-1][0]
    if f.tail is not None:
        a, b = f.tail
        L = len(f.coeffs)
        keep = []
        for (s, m), (n0, v0) in zip(slopes, hull):
            # the edge survives when every tail point lies strictly above its line
            if a > s and a * L + b > v0 + s * (L - n0):
                keep.append((s, m))
            elif a == s and b > v0 - s * n0:
                keep.append((s, m))
            else:
                break
        slopes = keep
        hull = hull[: len(keep) + 1]
        certified = hull[-1][0]
    return NewtonPolygon(tuple(hull), tuple(slopes), zeros_at_origin=pts[0][0], certified_through=certified)


def check_growth_lemma(f: PadicSeries, s_exp, t_exp) -> Verdict:
    """|f|_s <= (s/t)^k |f|_t with k the closed-disk zero count at s."""
    s_exp, t_exp = as_exponent(s_exp), as_exponent(t_exp)
    if s_exp < t_exp:
        raise BadParameters("need s <= t, i.e. s_exp >= t_exp")
    k = count_zeros(f, s_exp, closed=True)
    ws, wt = gauss_norm(f, s_exp), gauss_norm(f, t_exp)
    rhs = k * (s_exp - t_exp) + wt if wt is not INF else INF
    return Verdict("growth_lemma", ws >= rhs, ws, rhs, ">=", {"k": k})


def check_reverse_lemma(f: PadicSeries, s_exp, t_exp) -> Verdict:
    """|f|_t <= (t/s)^m |f|_s with m the open-disk zero count at t."""
    s_exp, t_exp = as_exponent(s_exp), as_exponent(t_exp)
    if s_exp < t_exp:
        raise BadParameters("need s <= t, i.e. s_exp >= t_exp")
    m = count_zeros(f, t_exp, closed=False)
    ws, wt = gauss_norm(f, s_exp), gauss_norm(f, t_exp)
    rhs = ws - m * (s_exp - t_exp) if ws is not INF else INF
    return Verdict("reverse_lemma", wt >= rhs, wt, rhs, ">=", {"m": m})


def schwarz_bound(s_exp, t_exp, k: int, l: int, delta_exp, mu_exp, norm_t_exp, p: int):
    """Valuation exponent of the Schwarz-lemma majorant for |f|_s.

    min{ kl(s-t) + w_t,  mu + (kl-1)(s-delta) - (k-1)/(p-1) } in exponent form.
    """
    s_exp, t_exp = as_exponent(s_exp), as_exponent(t_exp)
    delta_exp, mu_exp, norm_t_exp = as_exponent(delta_exp), as_exponent(mu_exp), as_exponent(norm_t_exp)
    if k < 1 or l < 2:
        raise BadParameters("need k >= 1 and l >= 2")
    if delta_exp is INF or delta_exp < 0:
        raise BadParameters("need 0 < |delta|_p <= 1")
    if s_exp < t_exp:
        raise BadParameters("need t >= s")
    kl = k * l
    first = norm_t_exp + kl * (s_exp - t_exp) if norm_t_exp is not INF else INF
    second = mu_exp + ((kl - 1) * (s_exp - delta_exp) - (k - 1) * r_p_exponent(p)) if mu_exp is not INF else INF
    return min(first, second)


def poly_from_roots(roots: Sequence, p: int, scale=1, precision: int = 40) -> PadicSeries:
    """Series of scale * prod (z - r) for rational roots r."""
    coeffs = [Fraction(scale)]
    for r in roots:
        r = Fraction(r)
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] -= c * r
        coeffs = new
    return PadicSeries.from_rationals(coeffs, p, precision)


def binomial_shift(coeffs: Sequence, a) -> list:
    """Coefficients of f(z + a) from those of f (exact, any ring)."""
    n = len(coeffs)
    out = []
    for k in range(n):
        acc = 0
        for m in range(k, n):
            acc = acc + coeffs[m] * comb(m, k) * (a ** (m - k))
        out.append(acc)
    return out


def rational_valuation(x, p: int):
    return vp(x, p)

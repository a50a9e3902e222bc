"""Sparse multivariate polynomials over an arbitrary coefficient ring.

Coefficients only need ``+``, ``-``, ``*`` and a zero test, so the same class
carries Fractions, number-field elements and p-adic numbers. Truncated power
series are polynomials plus a degree cut passed to the operations that need
it (``mul(..., trunc=M)`` keeps total degree <= M).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Iterable, Mapping, Tuple

Monomial = Tuple[int, ...]


def is_zero(c) -> bool:
    flag = getattr(c, "is_exact_zero", None)
    if flag is not None:
        return flag
    return c == 0


class Poly:
    """Polynomial in ``nvars`` variables stored as ``{exponent tuple: coeff}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean: Dict[Monomial, object] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} has wrong arity for {nvars} variables")
                if not is_zero(c):
                    clean[tuple(m)] = c
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "Poly":
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): coeff})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1) -> "Poly":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def min_degree(self) -> int | None:
        return min((sum(m) for m in self.terms), default=None)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def coeff(self, m: Monomial, default=0):
        return self.terms.get(tuple(m), default)

    def constant_term(self, default=0):
        return self.terms.get((0,) * self.nvars, default)

    def coefficients(self) -> list:
        return [self.terms[m] for m in sorted(self.terms)]

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars or set(self.terms) != set(other.terms):
                return False
            return all(is_zero(self.terms[m] - other.terms[m]) for m in self.terms)
        if is_zero(other):
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms)))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for m, c in self.items():
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # arithmetic
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("arity mismatch")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        return Poly(self.nvars, {m: a * c for m, a in self.terms.items()})

    def mul(self, other, trunc: int | None = None) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if other.nvars != self.nvars:
            raise ValueError("arity mismatch")
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            if trunc is not None and d1 > trunc:
                continue
            for m2, c2 in other.terms.items():
                if trunc is not None and d1 + sum(m2) > trunc:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return Poly(self.nvars, out)

    def __mul__(self, other):
        return self.mul(other)

    def __rmul__(self, other):
        return self.scale(other)

    def pow(self, k: int, trunc: int | None = None, one=1) -> "Poly":
        result = Poly.const(self.nvars, one)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, trunc)
            k >>= 1
            if k:
                base = base.mul(base, trunc)
        return result

    def __pow__(self, k: int):
        return self.pow(k)

    def truncate(self, M: int) -> "Poly":
        return Poly(self.nvars, {m: c for m, c in self.terms.items() if sum(m) <= M})

    def homogeneous_part(self, k: int) -> "Poly":
        return Poly(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == k})

    def map_coeffs(self, fn: Callable) -> "Poly":
        return Poly(self.nvars, {m: fn(c) for m, c in self.terms.items()})

    def diff(self, i: int) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Poly(self.nvars, out)

    def diff_multi(self, t: Iterable[int]) -> "Poly":
        out = self
        for i, k in enumerate(t):
            for _ in range(k):
                out = out.diff(i)
        return out

    def taylor_coeff_to_derivative(self, m: Monomial):
        """(d^m self)(0) = m! * [x^m] self."""
        f = 1
        for e in m:
            f *= factorial(e)
        return self.coeff(m) * f

    def evaluate(self, point, one=1):
        """Evaluate at ``point`` (any ring supporting + and *)."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong arity")
        powers: list[dict] = [dict() for _ in range(self.nvars)]
        total = None
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = _power(point[i], e)
                    term = term * cache[e]
            total = term if total is None else total + term
        if total is None:
            return 0 * one
        return total

    def compose(self, subs: list["Poly"], trunc: int | None = None, one=1) -> "Poly":
        """Substitute polynomials ``subs[i]`` for variable i."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        nv = subs[0].nvars if subs else 0
        powers: list[dict] = [dict() for _ in range(self.nvars)]
        out = Poly.zero(nv)
        for m, c in self.terms.items():
            term = Poly.const(nv, c)
            for i, e in enumerate(m):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = subs[i].pow(e, trunc, one)
                    term = term.mul(cache[e], trunc)
            out = out + term
        return out

    def to_dict(self, coeff_fn=str) -> dict:
        return {"nvars": self.nvars, "terms": [[list(m), coeff_fn(c)] for m, c in self.items()]}

    @classmethod
    def from_dict(cls, d: dict, coeff_fn=Fraction) -> "Poly":
        nv = int(d["nvars"])
        return cls(nv, {tuple(int(e) for e in m): coeff_fn(c) for m, c in d["terms"]})


def _power(x, e: int):
    r = x
    for _ in range(e - 1):
        r = r * x
    return r


def monomials_of_degree(nvars: int, D: int) -> list[Monomial]:
    """All exponent tuples of total degree exactly D, in lexicographic order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), D):
        m = [0] * nvars
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    return sorted(set(out), reverse=True)


def monomials_up_to(nvars: int, D: int) -> list[Monomial]:
    out = []
    for k in range(D + 1):
        out.extend(monomials_of_degree(nvars, k))
    return out


def multi_binomial(t: Monomial, i: Monomial) -> int:
    r = 1
    for a, b in zip(t, i):
        r *= comb(a, b)
    return r


def multi_factorial(t: Monomial) -> int:
    r = 1
    for a in t:
        r *= factorial(a)
    return r


def exp_minus_one(nvars: int, i: int, M: int) -> Poly:
    """Truncation of e^{x_i} - 1 through degree M, exact rational coefficients."""
    terms = {}
    for k in range(1, M + 1):
        m = [0] * nvars
        m[i] = k
        terms[tuple(m)] = Fraction(1, factorial(k))
    return Poly(nvars, terms)

"""Monogenic number fields: exact elements, places, heights, Siegel solutions.

Elements are rational coordinate vectors on the power basis 1, t, ..., t^(d-1)
of a root t of a monic irreducible integer polynomial. Rings of integers are
assumed to be Z[t]; the constructor rejects a field where Dedekind's criterion
shows otherwise.

Heights are :class:`HeightValue` objects. They keep the part that is a
rational combination of logarithms of rationals exactly and the rest as an
mpmath interval, so every inequality is either decided soundly or reported as
undecided (and then retried at higher precision).
"""
from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Optional, Sequence

import sympy
from mpmath import iv, mp, polyroots
from sympy.polys.domains import QQ, ZZ
from sympy.polys.euclidtools import dup_invert, dup_resultant
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.densearith import dup_mul, dup_pow, dup_sub
from sympy.polys.galoistools import gf_factor, gf_from_int_poly, gf_gcd, gf_pow

from ._accel import box_search
from .errors import InsufficientPrecision, NonMonogenic, NoSolutionFound, UnsupportedPlace, ZeroElement
from .linalg import integer_kernel, lll_reduce
from .padic import PadicNumber, vp_int
from .verdict import Verdict

DEFAULT_BITS = 256
ESCALATION = (256, 512, 1024, 2048)

__all__ = [
    "AlgebraicNumber",
    "HeightValue",
    "NumberField",
    "Place",
    "QQ_FIELD",
    "agrees",
    "cyclotomic_field",
    "decide_ge",
    "denominator",
    "denominator_check",
    "height",
    "heights_vector",
    "liouville_check",
    "normalized_abs",
    "padic_valuation",
    "parse_element",
    "poly_height",
    "product_formula_check",
    "projective_height",
    "quadratic_field",
    "rational_field",
    "siegel_solve",
]


@contextmanager
def ivprec(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _exact_mpf(raw):
    with mp.workprec(max(raw[3], 1) + 8):
        return mp.mpf(raw)


def lo(I):
    """Lower endpoint of an interval as an mpf, without rounding."""
    return _exact_mpf(I._mpi_[0]) if hasattr(I, "_mpi_") else mp.mpf(I)


def hi(I):
    return _exact_mpf(I._mpi_[1]) if hasattr(I, "_mpi_") else mp.mpf(I)


def _iv(x) -> "iv.mpf":
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / x.denominator
    return iv.mpf(x)


def _iv_log_pos(I):
    if lo(I) <= 0:
        raise ZeroElement("logarithm of an interval that reaches 0")
    return iv.log(I)


def _iv_max(a, b):
    return iv.mpf([max(lo(a), lo(b)), max(hi(a), hi(b))])


# -------------------------------------------------------------------------
# certified real numbers built from logarithms


class HeightValue:
    """A certified real ``r + sum c_k log q_k + sum e_j f_j``.

    ``r``, ``c_k``, ``q_k > 0`` and ``e_j`` are exact rationals; each ``f_j``
    is a lazily evaluated interval source ``f_j(bits)``. Sources are
    recomputed at whatever precision a comparison asks for, so escalation
    refines the enclosure. ``lower``/``upper`` are certified bounds at the
    default precision."""

    __slots__ = ("const", "terms", "sources")

    def __init__(self, terms: Iterable = (), sources: Iterable = (), const=0):
        self.const = Fraction(const)
        merged: dict = {}
        for c, q in terms:
            c, q = Fraction(c), Fraction(q)
            if q <= 0:
                raise ValueError("log argument must be positive")
            if c == 0 or q == 1:
                continue
            merged[q] = merged.get(q, Fraction(0)) + c
        self.terms = tuple(sorted((c, q) for q, c in merged.items() if c != 0))
        atoms: dict = {}
        for c, key, f in sources:
            if key is None:
                key = ("anon", id(f))
            c0, _ = atoms.get(key, (Fraction(0), f))
            atoms[key] = (c0 + Fraction(c), f)
        self.sources = tuple((c, k, f) for k, (c, f) in atoms.items() if c != 0)

    @classmethod
    def zero(cls) -> "HeightValue":
        return cls()

    @classmethod
    def rational(cls, r) -> "HeightValue":
        return cls(const=r)

    @classmethod
    def log_of(cls, q, coeff=1) -> "HeightValue":
        q = Fraction(q)
        if q <= 0:
            raise ZeroElement("log of a non-positive number")
        return cls([(coeff, q)])

    @classmethod
    def from_function(cls, f, key=None) -> "HeightValue":
        """``f(bits)`` must return an interval valid at that precision. Equal
        keys denote the same real number and are merged."""
        return cls((), [(1, key, f)])

    @classmethod
    def from_interval(cls, I) -> "HeightValue":
        return cls.from_function(lambda bits: I)

    @property
    def is_exact(self) -> bool:
        return not self.sources

    @property
    def is_rational(self) -> bool:
        return not self.sources and not self.terms

    def interval(self, bits: int = DEFAULT_BITS):
        with ivprec(bits):
            acc = _iv(self.const)
            for c, q in self.terms:
                acc += _iv(c) * (iv.log(iv.mpf(q.numerator)) - iv.log(iv.mpf(q.denominator)))
            for c, _, f in self.sources:
                acc += _iv(c) * f(bits)
            return acc

    @property
    def lower(self):
        return lo(self.interval())

    @property
    def upper(self):
        return hi(self.interval())

    def _lift(self, other):
        if isinstance(other, HeightValue):
            return other
        if isinstance(other, (int, Fraction)):
            return HeightValue.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return HeightValue(self.terms + other.terms, self.sources + other.sources, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "HeightValue":
        c = Fraction(c)
        return HeightValue([(c * a, q) for a, q in self.terms], [(c * e, k, f) for e, k, f in self.sources], c * self.const)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_rational:
            return self.scale(other.const)
        if self.is_rational:
            return other.scale(self.const)
        a, b = self, other
        return HeightValue.from_function(lambda bits: a.interval(bits) * b.interval(bits))

    __rmul__ = __mul__

    def log(self) -> "HeightValue":
        """Natural log of a positive value (exact when the value is rational)."""
        if self.is_rational:
            return HeightValue.log_of(self.const)
        src = self

        def f(bits):
            return _iv_log_pos(src.interval(bits))

        return HeightValue.from_function(f)

    def reduced(self) -> "HeightValue":
        """Rewrite archimedean logs with the relation
        sum_w log|tau_w x|^{d_w} = log|N(x)|, eliminating the last place."""
        terms = list(self.terms)
        extra = []
        keep = []
        for c, key, f in self.sources:
            if key[0] == "abs":
                _, field, coords, idx = key
                arch = field.archimedean_places()
                if idx == len(arch) - 1 and len(arch) > 1:
                    x = AlgebraicNumber(field, coords)
                    terms.append((c, abs(x.norm())))
                    for pl in arch[:-1]:
                        for c2, k2, f2 in normalized_abs(x, pl).sources:
                            extra.append((-c * c2, k2, f2))
                    continue
            keep.append((c, key, f))
        return HeightValue(terms, keep + extra, self.const)

    def _log_part_sign(self) -> int:
        """Sign of sum c_k log q_k, decided by comparing integer powers."""
        if not self.terms:
            return 0
        L = reduce(lcm, (c.denominator for c, _ in self.terms), 1)
        num, den = 1, 1
        for c, q in self.terms:
            e = int(c * L)
            if e > 0:
                num *= q.numerator**e
                den *= q.denominator**e
            else:
                num *= q.denominator ** (-e)
                den *= q.numerator ** (-e)
        return (num > den) - (num < den)

    def sign(self, bits: int = DEFAULT_BITS) -> Optional[int]:
        """-1, 0, 1, or None when the enclosure straddles 0 at ``bits``.

        Values without interval sources are decided exactly: a nonzero
        rational never equals a combination of logs of rationals, since the
        latter is the log of a rational number and hence 0 or transcendental.
        """
        red = self.reduced() if self.sources else self
        if not red.sources:
            ls = red._log_part_sign()
            if red.const == 0:
                return ls
            if ls == 0 or ls == (red.const > 0) - (red.const < 0):
                return (red.const > 0) - (red.const < 0)
        I = red.interval(bits)
        if lo(I) > 0:
            return 1
        if hi(I) < 0:
            return -1
        return None

    def certified_sign(self, bits_seq=ESCALATION) -> int:
        for bits in bits_seq:
            s = self.sign(bits)
            if s is not None:
                return s
        raise InsufficientPrecision("sign undecided at maximal precision")

    def floor(self, bits_seq=ESCALATION) -> int:
        """Certified integer part."""
        if self.is_rational:
            return self.const.numerator // self.const.denominator
        for bits in bits_seq:
            I = self.interval(bits)
            a, b = mp.floor(lo(I)), mp.floor(hi(I))
            if a == b:
                k = int(a)
                # an integer endpoint could be hit exactly; confirm exactly if possible
                if (self - k).certified_sign() >= 0 and (self - (k + 1)).certified_sign() < 0:
                    return k
        raise InsufficientPrecision("floor undecided at maximal precision")

    def to_dict(self, digits: int = 30) -> dict:
        I = self.interval()
        return {"lower": mp.nstr(mp.mpf(lo(I)), digits), "upper": mp.nstr(mp.mpf(hi(I)), digits)}

    def __repr__(self):
        d = self.to_dict(12)
        return f"HeightValue[{d['lower']}, {d['upper']}]"


def agrees(a, b, tol=mp.mpf("1e-60")) -> bool:
    """a == b: exactly when the difference is decidable, else to within tol."""
    diff = a - b
    s = diff.sign(DEFAULT_BITS)
    if s is not None:
        return s == 0
    I = diff.interval(max(ESCALATION))
    return max(abs(mp.mpf(lo(I))), abs(mp.mpf(hi(I)))) < tol


def decide_ge(a, b, bits_seq=ESCALATION) -> bool:
    """Certified a >= b, escalating interval precision while undecided."""
    diff = HeightValue.rational(0) + a - b
    return diff.certified_sign(bits_seq) >= 0


def _logplus(h: HeightValue, bits=DEFAULT_BITS) -> HeightValue:
    for b in ESCALATION:
        s = h.sign(b)
        if s is not None:
            return h if s > 0 else HeightValue.zero()

    def clipped(b):
        I = h.interval(b)
        return iv.mpf([max(lo(I), 0), max(hi(I), 0)])

    return HeightValue.from_function(clipped)


# -------------------------------------------------------------------------
# fields and elements


@dataclass(frozen=True)
class Place:
    kind: str  # "real", "complex" or "finite"
    index: int
    p: Optional[int] = None
    residue_factor: tuple = ()
    e: int = 1
    f: int = 1

    @property
    def local_degree(self) -> int:
        if self.kind == "real":
            return 1
        if self.kind == "complex":
            return 2
        return self.e * self.f

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "index": self.index, "local_degree": self.local_degree}
        if self.is_finite:
            out.update(p=self.p, e=self.e, f=self.f, residue_factor=list(self.residue_factor))
        return out

    def __repr__(self):
        if self.is_finite:
            return f"Place(p={self.p}, #{self.index}, e={self.e}, f={self.f})"
        return f"Place({self.kind} #{self.index})"


def _trim(c):
    c = list(c)
    while len(c) > 1 and c[0] == 0:
        c.pop(0)
    return c


class NumberField:
    """K = Q(t) with t a root of the monic irreducible ``min_poly``
    (integer coefficients, highest degree first)."""

    def __init__(self, min_poly: Sequence[int], check_monogenic: bool = True):
        coeffs = [int(c) for c in min_poly]
        coeffs = _trim(coeffs)
        if len(coeffs) < 2 or coeffs[0] != 1:
            raise ValueError("min_poly must be monic of degree >= 1")
        x = sympy.Symbol("x")
        P = sympy.Poly(coeffs, x, domain="ZZ")
        if not P.is_irreducible:
            raise ValueError("min_poly must be irreducible over Q")
        self.min_poly = tuple(coeffs)
        self.d = len(coeffs) - 1
        self.discriminant = int(sympy.discriminant(P)) if self.d > 1 else 1
        self._red = self._reduction_table()
        self._roots_cache: dict = {}
        self._places_cache: dict = {}
        self._factor_cache: dict = {}
        if check_monogenic:
            for p, e in sympy.factorint(abs(self.discriminant)).items():
                if e >= 2 and not self._dedekind_ok(int(p)):
                    raise NonMonogenic(f"Z[t] is not maximal at {p}")
        self.r1, self.r2 = self._signature()

    # identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, NumberField) and other.min_poly == self.min_poly

    def __hash__(self):
        return hash(("NumberField", self.min_poly))

    def __repr__(self):
        return f"NumberField({list(self.min_poly)})"

    def to_dict(self) -> dict:
        return {"min_poly": list(self.min_poly)}

    @classmethod
    def from_dict(cls, d: dict) -> "NumberField":
        return cls(d["min_poly"])

    @property
    def field_discriminant(self) -> int:
        return self.discriminant

    # internals ----------------------------------------------------------
    def _reduction_table(self):
        """t^k for k < 2d-1 as coordinate vectors (ascending)."""
        d = self.d
        low = [-Fraction(c) for c in reversed(self.min_poly[1:])]  # t^d = sum low[i] t^i
        table = []
        for k in range(2 * d - 1):
            if k < d:
                v = [Fraction(0)] * d
                v[k] = Fraction(1)
            else:
                prev = table[-1]
                v = [Fraction(0)] + prev[:-1]
                top = prev[-1]
                v = [a + top * b for a, b in zip(v, low)]
            table.append(v)
        return table

    def _dedekind_ok(self, p: int) -> bool:
        """Dedekind's criterion: Z[t] is maximal at p iff gcd(F, g, h) = 1 mod p."""
        _, facs = gf_factor(gf_from_int_poly(list(self.min_poly), p), p, ZZ)
        g, h = [ZZ(1)], [ZZ(1)]
        for fac, e in facs:
            g = dup_mul(g, fac, ZZ)
            if e > 1:
                h = dup_mul(h, dup_pow(fac, e - 1, ZZ), ZZ)
        diff = dup_sub(dup_mul(g, h, ZZ), [ZZ(c) for c in self.min_poly], ZZ)
        if any(int(c) % p for c in diff):
            raise AssertionError("lifted factorization is not congruent to min_poly")
        Fbar = gf_from_int_poly([int(c) // p for c in diff], p)
        common = gf_gcd(gf_gcd(Fbar, gf_from_int_poly(g, p), p, ZZ), gf_from_int_poly(h, p), p, ZZ)
        return len(common) <= 1

    def _signature(self):
        roots = self.roots()
        r1 = sum(1 for r in roots if r[2])
        r2 = len(roots) - r1
        if r1 + 2 * r2 != self.d:
            raise AssertionError("root isolation is inconsistent")
        return r1, r2

    def roots(self, bits: int = DEFAULT_BITS):
        """Certified root enclosures: list of (box: iv.mpc, radius, is_real) with
        one entry per real root and one per conjugate pair (imag > 0)."""
        if bits in self._roots_cache:
            return self._roots_cache[bits]
        d = self.d
        if d == 1:
            a = -Fraction(self.min_poly[1])
            with ivprec(bits):
                out = [(iv.mpc(_iv(a), 0), mp.mpf(0), True)]
            self._roots_cache[bits] = out
            return out
        coeffs = list(self.min_poly)
        dcoeffs = [c * (d - i) for i, c in enumerate(coeffs[:-1])]
        with mp.workprec(bits + 40):
            approx = polyroots(coeffs, maxsteps=400, extraprec=2 * bits)
            disks = []
            with ivprec(bits + 40):
                for z in approx:
                    zc = iv.mpc(iv.mpf(z.real), iv.mpf(z.imag))
                    mz = reduce(lambda acc, c: acc * zc + c, coeffs, iv.mpc(0))
                    mdz = reduce(lambda acc, c: acc * zc + c, dcoeffs, iv.mpc(0))
                    den = lo(abs(mdz))
                    if den <= 0:
                        raise InsufficientPrecision("derivative vanishes near a root")
                    # a root lies within d |m(z)/m'(z)| of z
                    r = hi(iv.mpf(d) * hi(abs(mz)) / den)
                    im = mp.mpf(z.imag)
                    if abs(im) <= r:
                        disks.append((mp.mpf(z.real), mp.mpf(0), hi(iv.mpf(r) + abs(im)), True))
                    else:
                        disks.append((mp.mpf(z.real), im, r, False))
                for (a1, b1, r1, _), (a2, b2, r2, _) in itertools.combinations(disks, 2):
                    dist = lo(abs(iv.mpc(iv.mpf(a1) - a2, iv.mpf(b1) - b2)))
                    if not dist > hi(iv.mpf(r1) + r2):
                        raise InsufficientPrecision("root disks overlap; increase precision")
                out = []
                for a, b, r, real in sorted(disks, key=lambda t: (not t[3], t[0], t[1])):
                    re_box = iv.mpf(a) + iv.mpf([-r, r])
                    if real:
                        out.append((iv.mpc(re_box, 0), r, True))
                    elif b > 0:
                        out.append((iv.mpc(re_box, iv.mpf(b) + iv.mpf([-r, r])), r, False))
        self._roots_cache[bits] = out
        return out

    # places -------------------------------------------------------------
    def archimedean_places(self) -> list:
        out = []
        for i, (_, _, real) in enumerate(self.roots()):
            out.append(Place("real" if real else "complex", i))
        return out

    def places_above(self, p: int) -> list:
        p = int(p)
        if p in self._places_cache:
            return self._places_cache[p]
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        _, facs = gf_factor(gf_from_int_poly(list(self.min_poly), p), p, ZZ)
        out = []
        for i, (fac, e) in enumerate(sorted(facs, key=lambda t: (len(t[0]), [int(c) for c in t[0]]))):
            out.append(Place("finite", i, p, tuple(int(c) for c in fac), e, len(fac) - 1))
        if sum(pl.local_degree for pl in out) != self.d:
            raise AssertionError("local degrees do not add up")
        self._places_cache[p] = out
        return out

    def split_places(self, p: int) -> list:
        return [pl for pl in self.places_above(p) if pl.local_degree == 1]

    def local_factor(self, place: Place, l: int):
        """Integer monic polynomial congruent mod p^l to the Q_p-irreducible
        factor of min_poly belonging to ``place``; second value tells whether
        it is exact."""
        places = self.places_above(place.p)
        if len(places) == 1:
            return list(self.min_poly), True
        key = (place.p, l)
        if key not in self._factor_cache:
            p = place.p
            parts = [gf_pow(list(pl.residue_factor), pl.e, p, ZZ) for pl in places]
            lifted = dup_zz_hensel_lift(p, [ZZ(c) for c in self.min_poly], [[ZZ(c) for c in q] for q in parts], l, ZZ)
            self._factor_cache[key] = [[int(c) for c in q] for q in lifted]
        return self._factor_cache[key][place.index], False

    # elements -----------------------------------------------------------
    def __call__(self, x) -> "AlgebraicNumber":
        return self.element(x)

    def element(self, x) -> "AlgebraicNumber":
        if isinstance(x, AlgebraicNumber):
            if x.field != self:
                raise ValueError("element of another field")
            return x
        if isinstance(x, (list, tuple)):
            coords = [Fraction(c) for c in x]
            if len(coords) > self.d:
                raise ValueError("too many coordinates")
            coords += [Fraction(0)] * (self.d - len(coords))
            return AlgebraicNumber(self, tuple(coords))
        return AlgebraicNumber(self, (Fraction(x),) + (Fraction(0),) * (self.d - 1))

    @property
    def gen(self) -> "AlgebraicNumber":
        if self.d == 1:
            return self.element(-Fraction(self.min_poly[1]))
        return self.element([0, 1])

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)


def rational_field() -> NumberField:
    return NumberField([1, 0])


QQ_FIELD = rational_field()


def quadratic_field(D: int) -> NumberField:
    """Q(sqrt(D)) with its maximal order, D squarefree."""
    if D in (0, 1) or not sympy.ntheory.factor_.core(abs(D)) == abs(D):
        raise ValueError("D must be squarefree and not 0 or 1")
    if D % 4 == 1:
        return NumberField([1, -1, -(D - 1) // 4])
    return NumberField([1, 0, -D])


def cyclotomic_field(n: int) -> NumberField:
    x = sympy.Symbol("x")
    return NumberField([int(c) for c in sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()])


class AlgebraicNumber:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)
        if len(self.coords) != field.d:
            raise ValueError("wrong number of coordinates")

    # predicates
    @property
    def is_exact_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_zero(self) -> bool:
        return self.is_exact_zero

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        return self.coords[0]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def integral_parts(self):
        """(integer coords, den) with self = sum coords t^i / den."""
        den = reduce(lcm, (c.denominator for c in self.coords), 1)
        return [int(c * den) for c in self.coords], den

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.field.d
        if d == 1:
            return AlgebraicNumber(self.field, (self.coords[0] * other.coords[0],))
        raw = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        raw[i + j] += a * b
        out = [Fraction(0)] * d
        for k, c in enumerate(raw):
            if c:
                vec = self.field._red[k]
                for i in range(d):
                    if vec[i]:
                        out[i] += c * vec[i]
        return AlgebraicNumber(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_exact_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.field.d == 1:
            return AlgebraicNumber(self.field, (1 / self.coords[0],))
        f = [QQ(c.numerator, c.denominator) for c in reversed(self.coords)]
        while f and f[0] == 0:
            f.pop(0)
        g = [QQ(c) for c in self.field.min_poly]
        inv = dup_invert(f, g, QQ)
        coords = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(inv)]
        coords += [Fraction(0)] * (self.field.d - len(coords))
        return AlgebraicNumber(self.field, tuple(coords))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coords[0] == other
        if isinstance(other, AlgebraicNumber):
            return other.field == self.field and other.coords == self.coords
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def __repr__(self):
        if self.field.d == 1:
            return str(self.coords[0])
        parts = []
        for i, c in enumerate(self.coords):
            if c:
                parts.append(f"{c}" if i == 0 else f"({c})*t^{i}" if i > 1 else f"({c})*t")
        return " + ".join(parts) if parts else "0"

    # invariants
    def norm(self) -> Fraction:
        A, den = self.integral_parts()
        if self.field.d == 1:
            return self.coords[0]
        R = dup_resultant([ZZ(c) for c in self.field.min_poly], [ZZ(c) for c in _trim(list(reversed(A)))], ZZ)
        return Fraction(int(R), den**self.field.d)

    def denominator(self) -> int:
        """Least positive integer multiplying this element into Z[t] = O_K."""
        return reduce(lcm, (c.denominator for c in self.coords), 1)

    def embed(self, index: int, bits: int = DEFAULT_BITS):
        """Interval enclosure of tau_index(self) in C."""
        box = self.field.roots(bits)[index][0]
        with ivprec(bits):
            acc = iv.mpc(0)
            for c in reversed(self.coords):
                acc = acc * box + _iv(c)
            return acc

    def to_padic(self, place: Place, precision: int = 40) -> PadicNumber:
        """Image in Q_p under the embedding attached to a degree-one place."""
        if not place.is_finite or place.local_degree != 1:
            raise UnsupportedPlace("only split places (local degree 1) embed into Q_p")
        p = place.p
        if self.field.d == 1:
            return PadicNumber.from_rational(self.coords[0], p, precision)
        extra = 0
        for c in self.coords:
            if c:
                extra = max(extra, vp_int(c.denominator, p) if c.denominator % p == 0 else 0)
        l = precision + extra + 2
        M, _ = self.field.local_factor(place, l)
        if len(M) != 2:
            raise AssertionError("split place must have a linear local factor")
        root = PadicNumber.from_int_mod(-M[1], p, l)
        acc = PadicNumber.zero(p)
        for c in reversed(self.coords):
            acc = acc * root + c
        return acc

    def to_dict(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]


def parse_element(field: NumberField, x) -> AlgebraicNumber:
    """Accept ints, "num/den" strings or coordinate arrays."""
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a field element")
    if isinstance(x, (int, Fraction)):
        return field.element(x)
    if isinstance(x, str):
        if "." in x:
            raise ValueError(f"decimal input {x!r} is not exact")
        return field.element(Fraction(x))
    if isinstance(x, (list, tuple)):
        return field.element([parse_element(QQ_FIELD, c).coords[0] if isinstance(c, str) else Fraction(c) for c in x])
    raise TypeError(f"cannot read {x!r} as a field element")


# -------------------------------------------------------------------------
# absolute values


def local_norm_order(x: AlgebraicNumber, place: Place) -> int:
    """k with |x|_v = p^(-k), i.e. v_p of the local norm N_{K_v/Q_p}(x)."""
    if x.is_exact_zero:
        raise ZeroElement("the zero element has no finite absolute value")
    field, p = x.field, place.p
    A, den = x.integral_parts()
    k_den = (vp_int(den, p) if den % p == 0 else 0) * place.local_degree
    if field.d == 1:
        return vp_int(A[0], p) - k_den
    Adesc = _trim(list(reversed(A)))
    l = 16
    while True:
        M, exact = field.local_factor(place, l)
        R = int(dup_resultant([ZZ(c) for c in M], [ZZ(c) for c in Adesc], ZZ))
        if exact:
            if R == 0:
                raise AssertionError("nonzero element with vanishing norm")
            return vp_int(R, p) - k_den
        if R % p**l:
            return vp_int(R, p) - k_den
        l *= 2
        if l > 4096:
            raise InsufficientPrecision("local valuation not certified")


def padic_valuation(x: AlgebraicNumber, place: Place) -> Fraction:
    """v(x) = -log|x|_p / log p for the absolute value extending |.|_p."""
    return Fraction(local_norm_order(x, place), place.local_degree)


def _arch_abs_power(x: AlgebraicNumber, place: Place, bits: int):
    """|tau_v(x)|^{[K_v:R]} as an interval."""
    z = x.embed(place.index, bits)
    with ivprec(bits):
        a = abs(z)
        return a if place.kind == "real" else a * a


def normalized_abs(x: AlgebraicNumber, place: Place, bits: int = DEFAULT_BITS) -> HeightValue:
    """log|x|_v for the normalized absolute value at ``place``."""
    if x.is_exact_zero:
        raise ZeroElement("log|0|_v is -infinity")
    if place.is_finite:
        return HeightValue.log_of(place.p, -local_norm_order(x, place))
    if x.is_rational:
        return HeightValue.log_of(abs(x.coords[0]), place.local_degree)

    def source(b):
        with ivprec(b):
            return _iv_log_pos(_arch_abs_power(x, place, b))

    return HeightValue.from_function(source, ("abs", x.field, x.coords, place.index))


def relevant_primes(xs: Iterable[AlgebraicNumber]) -> list:
    """Primes at which some nonzero element of ``xs`` may have |x|_v != 1."""
    ps = set()
    for x in xs:
        if x.is_exact_zero:
            continue
        A, den = x.integral_parts()
        ps.update(sympy.factorint(den).keys())
        N = abs(x.norm() * Fraction(den) ** x.field.d)
        ps.update(sympy.factorint(int(N)).keys())
    return sorted(int(p) for p in ps)


def all_places(field: NumberField, xs: Iterable[AlgebraicNumber]) -> list:
    xs = list(xs)
    out = list(field.archimedean_places())
    for p in relevant_primes(xs):
        out.extend(field.places_above(p))
    return out


def product_formula_check(x: AlgebraicNumber, bits: int = DEFAULT_BITS, tol=mp.mpf("1e-30")) -> Verdict:
    """Sum of log|x|_v over all places is 0 (exactly over Q)."""
    if x.is_exact_zero:
        raise ZeroElement("product formula needs x != 0")
    total = HeightValue.zero()
    places = all_places(x.field, [x])
    for v in places:
        total = total + normalized_abs(x, v, bits)
    if total.is_exact:
        ok = total.sign() == 0
        return Verdict("product_formula", ok, total, 0, "==", {"exact": True, "places": len(places)})
    I = total.interval(bits)
    width = hi(I) - lo(I)
    ok = lo(I) <= 0 <= hi(I) and width < tol
    return Verdict("product_formula", bool(ok), total, 0, "==", {"exact": False, "width": mp.nstr(mp.mpf(width), 5), "places": len(places)})


# -------------------------------------------------------------------------
# heights


def _vector_place_values(xs: Sequence[AlgebraicNumber], v: Place, bits: int):
    """(log max|x_i|_v, log |x|_{L2,v}) as HeightValues, or None if x = 0."""
    nz = [x for x in xs if not x.is_exact_zero]
    if not nz:
        return None
    if v.is_finite:
        k = min(local_norm_order(x, v) for x in nz)
        h = HeightValue.log_of(v.p, -k)
        return h, h
    if all(x.is_rational for x in xs):
        vals = [abs(x.coords[0]) for x in xs]
        mx = max(vals)
        if v.kind == "real":
            hmax = HeightValue.log_of(mx)
            hl2 = HeightValue.log_of(sum(a * a for a in vals), Fraction(1, 2))
        else:
            hmax = HeightValue.log_of(mx, 2)
            hl2 = HeightValue.log_of(sum(a * a for a in vals))
        return hmax, hl2
    if len(nz) == 1:
        # a single nonzero entry: both norms are |x|_v
        h = normalized_abs(nz[0], v, bits)
        return h, h

    def enclose(b):
        with ivprec(b):
            absv = [abs(x.embed(v.index, b)) for x in xs]
            mx = absv[0]
            for a in absv[1:]:
                mx = _iv_max(mx, a)
            sq = iv.mpf(0)
            for a in absv:
                sq += a * a
            return mx, sq

    def hmax(b):
        with ivprec(b):
            lm = _iv_log_pos(enclose(b)[0])
            return lm if v.kind == "real" else 2 * lm

    def hl2(b):
        with ivprec(b):
            ls = _iv_log_pos(enclose(b)[1])
            return ls / 2 if v.kind == "real" else ls

    key = tuple(x.coords for x in xs)
    return (HeightValue.from_function(hmax, ("max", xs[0].field, v.index, key)),
            HeightValue.from_function(hl2, ("l2", xs[0].field, v.index, key)))


def heights_vector(xs: Sequence, field: NumberField | None = None, bits: int = DEFAULT_BITS) -> dict:
    """h_max, h_L2, h_plus and h_L2_plus of an affine point (relative heights,
    i.e. summed over the places of K without dividing by [K:Q])."""
    xs = list(xs)
    if field is None:
        field = next((x.field for x in xs if isinstance(x, AlgebraicNumber)), QQ_FIELD)
    xs = [parse_element(field, x) for x in xs]
    zero = HeightValue.zero()
    out = {"h_max": zero, "h_L2": zero, "h_plus": zero, "h_L2_plus": zero}
    if all(x.is_exact_zero for x in xs):
        return out
    for v in all_places(field, xs):
        vals = _vector_place_values(xs, v, bits)
        if vals is None:
            continue
        hmax, hl2 = vals
        out["h_max"] = out["h_max"] + hmax
        out["h_L2"] = out["h_L2"] + hl2
        out["h_plus"] = out["h_plus"] + _logplus(hmax, bits)
        out["h_L2_plus"] = out["h_L2_plus"] + _logplus(hl2, bits)
    return out


def height(x, field: NumberField | None = None, bits: int = DEFAULT_BITS) -> HeightValue:
    """Absolute logarithmic Weil height of (1 : x)."""
    if not isinstance(x, AlgebraicNumber):
        x = parse_element(field or QQ_FIELD, x)
    if x.is_exact_zero:
        return HeightValue.zero()
    d = x.field.d
    total = HeightValue.zero()
    arch = x.field.archimedean_places()
    if x.is_rational or d == 1:
        parts = [_logplus(normalized_abs(x, v, bits), bits) for v in arch]
        total = sum(parts, HeightValue.zero())
    else:
        logs = [normalized_abs(x, v, bits) for v in arch]
        signs = []
        for h in logs:
            s = None
            for b in ESCALATION:
                s = h.sign(b)
                if s is not None:
                    break
            signs.append(s)
        if all(s is not None and s > 0 for s in signs):
            total = HeightValue.log_of(abs(x.norm()) * Fraction(1) * _finite_norm_correction(x))
        elif all(s is not None and s <= 0 for s in signs):
            total = HeightValue.zero()
        else:
            total = sum((_logplus(h, bits) for h in logs), HeightValue.zero())
    for p in relevant_primes([x]):
        for v in x.field.places_above(p):
            total = total + _logplus(normalized_abs(x, v, bits), bits)
    return total.scale(Fraction(1, d))


def _finite_norm_correction(x: AlgebraicNumber) -> Fraction:
    # the archimedean product of |tau(x)| is |N(x)|; nothing to correct
    return Fraction(1)


def projective_height(xs: Sequence[AlgebraicNumber], bits: int = DEFAULT_BITS) -> HeightValue:
    """Absolute height of the projective point (1 : x_1 : ... : x_n)."""
    xs = list(xs)
    field = xs[0].field if xs else QQ_FIELD
    return heights_vector([field.one()] + xs, field, bits)["h_max"].scale(Fraction(1, field.d))


def poly_height(P, field: NumberField | None = None, bits: int = DEFAULT_BITS) -> dict:
    """The four heights of the coefficient vector of a polynomial."""
    coeffs = P.coefficients() if hasattr(P, "coefficients") else list(P)
    if not coeffs:
        z = HeightValue.zero()
        return {"h_max": z, "h_L2": z, "h_plus": z, "h_L2_plus": z}
    return heights_vector(coeffs, field, bits)


def denominator(x: AlgebraicNumber) -> int:
    return x.denominator()


def _norm_factor(normalization: str, d: int) -> Fraction:
    if normalization == "stated":
        return Fraction(1, d)
    if normalization == "standard":
        return Fraction(d)
    raise ValueError("normalization must be 'stated' or 'standard'")


def liouville_check(x: AlgebraicNumber, place: Place, normalization: str = "stated") -> Verdict:
    """log|x|_v >= -h(x)/[K:Q] ("stated") or >= -[K:Q] h(x) ("standard")."""
    if not isinstance(x, AlgebraicNumber):
        x = parse_element(QQ_FIELD, x)
    if x.is_exact_zero:
        raise ZeroElement("Liouville's inequality needs x != 0")
    d = x.field.d
    lhs = normalized_abs(x, place)
    rhs = -height(x).scale(_norm_factor(normalization, d))
    ok = decide_ge(lhs, rhs)
    return Verdict("liouville", ok, lhs, rhs, ">=", {"normalization": normalization, "place": repr(place)})


def denominator_check(x: AlgebraicNumber, normalization: str = "stated") -> Verdict:
    """log(denominator) <= h(x)/[K:Q] ("stated") or <= [K:Q] h(x) ("standard")."""
    if not isinstance(x, AlgebraicNumber):
        x = parse_element(QQ_FIELD, x)
    d = x.field.d
    den = x.denominator()
    lhs = HeightValue.log_of(den)
    rhs = height(x).scale(_norm_factor(normalization, d))
    ok = True if den == 1 else decide_ge(rhs, lhs)
    return Verdict("denominator", ok, lhs, rhs, "<=", {"delta": den, "normalization": normalization})


# -------------------------------------------------------------------------
# Siegel's lemma


@dataclass
class SiegelResult:
    x: list
    h_plus: HeightValue
    bound: HeightValue
    method: str
    verdict: Verdict

    def to_dict(self):
        return {
            "x": [xi.to_dict() for xi in self.x],
            "h_plus": self.h_plus.to_dict(),
            "bound": self.bound.to_dict(),
            "method": self.method,
            "verdict": self.verdict.to_dict(),
        }


def _restrict_scalars(forms, field: NumberField):
    """Integer matrix of the Z-linear map Z^{dN} -> Z^{dM} given by the forms."""
    d = field.d
    M, N = len(forms), len(forms[0])
    basis = [field.element([1 if k == i else 0 for k in range(d)]) for i in range(d)]
    rows = [[0] * (d * N) for _ in range(d * M)]
    for i, form in enumerate(forms):
        for j, a in enumerate(form):
            for k in range(d):
                prod = a * basis[k]
                for r in range(d):
                    c = prod.coords[r]
                    if c.denominator != 1:
                        raise ValueError("forms must have coefficients in O_K")
                    rows[i * d + r][j * d + k] = int(c)
    return rows


def _vec_to_elements(y, field: NumberField, N: int):
    d = field.d
    return [field.element(list(y[j * d:(j + 1) * d])) for j in range(N)]


def siegel_bound(forms, field: NumberField, bits: int = DEFAULT_BITS) -> HeightValue:
    """(1/2) log|disc K| + M/(N-M) max_i h_L2(l_i), as a certified value."""
    M, N = len(forms), len(forms[0])
    hs = [heights_vector(f, field, bits)["h_L2"] for f in forms]
    best = hs[0]
    for h in hs[1:]:
        if not decide_ge(best, h):
            best = h
    return HeightValue.log_of(abs(field.discriminant), Fraction(1, 2)) + best.scale(Fraction(M, N - M))


def siegel_solve(forms, field: NumberField | None = None, bits: int = DEFAULT_BITS,
                 combo_radius: int = 1, box_bound: int = 6) -> SiegelResult:
    """A nonzero x in O_K^N with every form vanishing and h+(x) within the
    Bombieri-Vaaler bound.

    Kernel lattice by Hermite reduction, then LLL, then small combinations of
    the reduced basis; for dN <= 8 an exhaustive box search backs this up.
    """
    forms = [list(f) for f in forms]
    if not forms:
        raise ValueError("need at least one form")
    if field is None:
        field = next((c.field for f in forms for c in f if isinstance(c, AlgebraicNumber)), QQ_FIELD)
    forms = [[parse_element(field, c) for c in f] for f in forms]
    M, N = len(forms), len(forms[0])
    if any(len(f) != N for f in forms):
        raise ValueError("forms must have equal length")
    if not N > M:
        raise ValueError("Siegel's lemma needs N > M")
    bound = siegel_bound(forms, field, bits)
    A = _restrict_scalars(forms, field)
    d = field.d
    kernel = integer_kernel(A, d * N)
    if not kernel:
        raise NoSolutionFound("trivial kernel")
    red = lll_reduce(kernel)
    cands = [tuple(v) for v in red]
    r = len(red)
    if r <= 8:
        rng = range(-combo_radius, combo_radius + 1)
        for coeffs in itertools.product(rng, repeat=r):
            if any(coeffs) and sum(1 for c in coeffs if c) >= 2:
                v = [sum(c * b[k] for c, b in zip(coeffs, red)) for k in range(d * N)]
                cands.append(tuple(v))

    def hplus(y):
        return heights_vector(_vec_to_elements(y, field, N), field, bits)["h_plus"]

    def key(y):
        return max(abs(c) for c in y), sum(c * c for c in y), y

    seen = set()
    best = None
    for y in sorted(set(cands), key=key):
        if not any(y) or y in seen:
            continue
        seen.add(y)
        h = hplus(y)
        if best is None or h.upper < best[1].upper:
            best = (y, h)
        if field.d == 1:
            break  # the smallest sup-norm vector minimises h+ over Q
    method = "lll"
    if best is not None and decide_ge(bound, best[1]):
        y, h = best
    else:
        y = None
        if d * N <= 8:
            found = box_search(A, box_bound)
            if found is not None:
                h = hplus(found)
                if decide_ge(bound, h):
                    y, method = tuple(found), "box"
        if y is None:
            raise NoSolutionFound("no kernel vector met the height bound")
    x = _vec_to_elements(y, field, N)
    for f in forms:
        s = field.zero()
        for a, xi in zip(f, x):
            s = s + a * xi
        if not s.is_exact_zero:
            raise AssertionError("kernel vector does not solve the system")
    verdict = Verdict("siegel_bound", True, h, bound, "<=", {"M": M, "N": N, "method": method})
    return SiegelResult(x, h, bound, method, verdict)

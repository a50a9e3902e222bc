"""Finite-precision arithmetic in Q_p.

Every magnitude is handled as an exponent of p: ``|x|_p = p^(-v(x))``. A
:class:`PadicNumber` stores ``unit * p^valuation`` where ``unit`` is known
modulo ``p^precision``. Precision is tracked pessimistically, so a result
whose significant digits cancel completely becomes an *inexact zero*
``O(p^k)`` (``precision == 0``) instead of a silent wrong value.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DomainError, InsufficientPrecision, NotSimpleRoot

__all__ = [
    "INF",
    "PadicNumber",
    "as_exponent",
    "exponent_str",
    "exp_p",
    "hensel_lift",
    "legendre",
    "log_p",
    "r_p_exponent",
    "valuation",
    "vp",
    "vp_int",
]


@functools.total_ordering
class _Infinity:
    """The +infinity valuation sentinel. Maximal, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("padiclf.INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ValueError("INF - INF is undefined")
        return self

    def __neg__(self):
        raise ValueError("-INF is not a valuation")

    def __mul__(self, other):
        if other == 0:
            raise ValueError("0 * INF is undefined")
        if other < 0:
            raise ValueError("negative multiple of INF")
        return self

    __rmul__ = __mul__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Exponent = Union[Fraction, _Infinity]
Rational = Union[int, Fraction]


def as_exponent(x) -> Exponent:
    """Coerce ``x`` to an exact valuation exponent.

    Accepts ints, Fractions, ``INF`` and strings ``"num/den"``, ``"n"`` or
    ``"inf"``. Floats and decimal strings are rejected: exponents must be
    exact.
    """
    if x is INF:
        return INF
    if isinstance(x, bool):
        raise TypeError("bool is not an exponent")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "+inf", "infinity"):
            return INF
        if "." in s or "e" in s.lower():
            raise ValueError(f"exponent must be an exact rational, got {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot use {type(x).__name__} as an exponent")


def exponent_str(x: Exponent) -> str:
    if x is INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: Rational, p: int) -> Exponent:
    """Exact p-adic valuation of a rational number."""
    x = Fraction(x)
    if x == 0:
        return INF
    return Fraction(vp_int(x.numerator, p) - vp_int(x.denominator, p))


def legendre(n: int, p: int) -> int:
    """v_p(n!) by Legendre's formula."""
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


def r_p_exponent(p: int) -> Fraction:
    """Return 1/(p-1), so that r_p = p^(-1/(p-1))."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    return Fraction(1, p - 1)


@dataclass(frozen=True)
class PadicNumber:
    """An element of Q_p known to finite precision.

    ``unit`` is the unit part reduced mod ``p**precision``; its base-p digits
    are exposed as :attr:`digits`. The exact zero has ``valuation = INF``.
    ``precision == 0`` marks an inexact zero ``O(p^valuation)``.
    """

    prime: int
    valuation: Union[int, _Infinity]
    unit: int
    precision: Union[int, _Infinity]

    def __post_init__(self):
        p = self.prime
        if self.valuation is INF:
            if self.unit != 0:
                raise ValueError("exact zero must have unit 0")
            return
        if self.precision is INF or self.precision < 0:
            raise ValueError("nonzero p-adic numbers carry finite precision")
        if self.precision == 0:
            if self.unit != 0:
                raise ValueError("inexact zero must have unit 0")
            return
        if not 0 < self.unit < p ** self.precision or self.unit % p == 0:
            raise ValueError("unit part must be a p-adic unit reduced mod p^precision")

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> "PadicNumber":
        return cls(p, INF, 0, INF)

    @classmethod
    def big_oh(cls, p: int, absprec: int) -> "PadicNumber":
        """The inexact zero O(p^absprec)."""
        return cls(p, int(absprec), 0, 0)

    @classmethod
    def from_rational(cls, x: Rational, p: int, precision: int = 20) -> "PadicNumber":
        """Exact rational to ``precision`` significant digits."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        v = vp_int(x.numerator, p) - vp_int(x.denominator, p)
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        mod = p ** precision
        return cls(p, v, num * pow(den, -1, mod) % mod, precision)

    @classmethod
    def from_int_mod(cls, a: int, p: int, absprec: int) -> "PadicNumber":
        """The class of the integer ``a`` modulo ``p^absprec``."""
        a %= p ** absprec
        if a == 0:
            return cls.big_oh(p, absprec)
        v = vp_int(a, p)
        return cls(p, v, a // p ** v, absprec - v)

    # accessors ---------------------------------------------------------
    @property
    def p(self) -> int:
        return self.prime

    @property
    def is_exact_zero(self) -> bool:
        return self.valuation is INF

    @property
    def is_inexact_zero(self) -> bool:
        return self.valuation is not INF and self.precision == 0

    @property
    def abs_precision(self):
        if self.valuation is INF:
            return INF
        return self.valuation + self.precision

    @property
    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        out, u = [], self.unit
        if self.valuation is INF:
            return out
        for _ in range(self.precision):
            u, r = divmod(u, self.prime)
            out.append(r)
        return out

    def valuation_lower_bound(self):
        return self.valuation

    def to_rational(self) -> Fraction:
        """A rational representative (exact for the stored digits)."""
        if self.valuation is INF or self.precision == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def with_abs_precision(self, absprec) -> "PadicNumber":
        """Reduce to absolute precision ``absprec`` (never increases it)."""
        if absprec is INF:
            return self
        absprec = int(absprec)
        if self.valuation is INF:
            return self
        if absprec >= self.abs_precision:
            return self
        if absprec <= self.valuation:
            return PadicNumber.big_oh(self.prime, absprec)
        prec = absprec - self.valuation
        return PadicNumber(self.prime, self.valuation, self.unit % self.prime ** prec, prec)

    # arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return PadicNumber.zero(self.prime)
            v = vp(q, self.prime)
            want = 1
            if self.valuation is not INF:
                want = max(want, int(self.abs_precision - v), self.precision)
            else:
                want = 64
            return PadicNumber.from_rational(q, self.prime, want)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.valuation is INF:
            return other
        if other.valuation is INF:
            return self
        p = self.prime
        e = min(self.valuation, other.valuation)
        absprec = min(self.abs_precision, other.abs_precision)
        a = self.unit * p ** (self.valuation - e) + other.unit * p ** (other.valuation - e)
        return PadicNumber.from_int_mod(a, p, absprec - e)._shift(e)

    __radd__ = __add__

    def _shift(self, k: int) -> "PadicNumber":
        """Multiply by p^k exactly."""
        if self.valuation is INF:
            return self
        return PadicNumber(self.prime, self.valuation + k, self.unit, self.precision)

    def __neg__(self):
        if self.valuation is INF or self.precision == 0:
            return self
        mod = self.prime ** self.precision
        return PadicNumber(self.prime, self.valuation, (-self.unit) % mod, self.precision)

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
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.prime
        if self.valuation is INF or other.valuation is INF:
            return PadicNumber.zero(p)
        prec = min(self.precision, other.precision)
        v = self.valuation + other.valuation
        if prec == 0:
            return PadicNumber.big_oh(p, v)
        return PadicNumber(p, v, self.unit * other.unit % p ** prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.valuation is INF:
            raise ZeroDivisionError("p-adic division by exact zero")
        if self.precision == 0:
            raise InsufficientPrecision("cannot invert an inexact zero")
        mod = self.prime ** self.precision
        return PadicNumber(self.prime, -self.valuation, pow(self.unit, -1, mod), self.precision)

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
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicNumber.from_rational(1, self.prime, self.precision if self.precision is not INF else 64)
        base = self
        first = True
        while k:
            if k & 1:
                result = base if first else result * base
                first = False
            k >>= 1
            if k:
                base = base * base
        if first:
            return PadicNumber.from_rational(1, self.prime, 64 if self.precision is INF else max(self.precision, 1))
        return result

    def is_equal_mod(self, other, absprec: int) -> bool:
        d = self - self._coerce(other)
        return d.valuation is INF or d.valuation >= absprec

    # serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "p": self.prime,
            "valuation": exponent_str(self.valuation if self.valuation is INF else Fraction(self.valuation)),
            "digits": self.digits,
            "precision": None if self.precision is INF else self.precision,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PadicNumber":
        p = int(d["p"])
        v = as_exponent(d["valuation"])
        if v is INF:
            return cls.zero(p)
        if v.denominator != 1:
            raise ValueError("elements of Q_p have integer valuation")
        digits = list(d.get("digits", []))
        prec = int(d["precision"])
        if len(digits) != prec:
            raise ValueError("digit count must equal precision")
        if any(not 0 <= x < p for x in digits):
            raise ValueError("digits must lie in [0, p)")
        unit = sum(dig * p ** i for i, dig in enumerate(digits))
        return cls(p, int(v), unit, prec)

    def __repr__(self):
        if self.valuation is INF:
            return f"PadicNumber(0, p={self.prime})"
        if self.precision == 0:
            return f"O({self.prime}^{self.valuation})"
        return f"PadicNumber({self.unit}*{self.prime}^{self.valuation} + O({self.prime}^{self.abs_precision}))"


def _as_padic(x, p: int | None, precision: int) -> PadicNumber:
    if isinstance(x, PadicNumber):
        return x
    if p is None:
        raise TypeError("a prime is required for rational input")
    return PadicNumber.from_rational(x, p, precision)


def valuation(x, p: int | None = None) -> Exponent:
    """Exact valuation of ``x`` (``INF`` for zero).

    Raises :class:`InsufficientPrecision` on an inexact zero, whose valuation
    is only bounded below.
    """
    if isinstance(x, PadicNumber):
        if x.valuation is INF:
            return INF
        if x.precision == 0:
            raise InsufficientPrecision(f"value is O({x.prime}^{x.valuation})")
        return Fraction(x.valuation)
    if p is None:
        raise TypeError("a prime is required for rational input")
    return vp(x, p)


def _log_terms_needed(a: int, p: int, target: int) -> int:
    # k*a - floor(log_p k) is nondecreasing for a >= 1
    k = 1
    while True:
        fl = 0
        q = p
        while q <= k:
            q *= p
            fl += 1
        if k * a - fl >= target:
            return k
        k += 1


def log_p(x, p: int | None = None, precision: int | None = None) -> PadicNumber:
    """The p-adic logarithm on the disc v(x - 1) > 0.

    The truncation is certified: every omitted term (x-1)^k/k has valuation
    at least k*v(x-1) - floor(log_p k) >= ``precision`` (absolute).
    """
    if isinstance(x, PadicNumber):
        p = x.prime
        if precision is None:
            precision = x.abs_precision if x.abs_precision is not INF else 40
        slack = precision.bit_length() + 4
    else:
        if precision is None:
            precision = 40
        slack = precision.bit_length() + 4
    xp = _as_padic(x, p, precision + slack)
    y = xp - 1
    if y.valuation is INF:
        return PadicNumber.zero(p)
    a = y.valuation
    if a <= 0:
        raise DomainError(f"log_p needs v(x-1) > 0, got {a}")
    K = _log_terms_needed(a, p, precision)
    total = PadicNumber.zero(p)
    power = y
    for k in range(1, K):
        term = power / k
        total = total + term if k % 2 else total - term
        power = power * y
    return total.with_abs_precision(precision)


def exp_p(z, p: int | None = None, precision: int | None = None) -> PadicNumber:
    """The p-adic exponential on the disc v(z) > 1/(p-1).

    Terms z^k/k! have valuation >= k*v(z) - (k-1)/(p-1), which is strictly
    increasing; the sum stops once the next bound clears ``precision``.
    """
    if isinstance(z, PadicNumber):
        p = z.prime
        if precision is None:
            precision = z.abs_precision if z.abs_precision is not INF else 40
    elif precision is None:
        precision = 40
    zp = _as_padic(z, p, precision + 2)
    one = PadicNumber.from_rational(1, p, precision)
    if zp.valuation is INF:
        return one
    a = Fraction(zp.valuation)
    if a <= r_p_exponent(p):
        raise DomainError(f"exp_p needs v(z) > 1/(p-1), got {a}")
    rp = r_p_exponent(p)
    total = one
    term = one
    k = 1
    while k * a - (k - 1) * rp < precision:
        term = term * zp / k
        total = total + term
        k += 1
    return total.with_abs_precision(precision)


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs: Sequence[int]) -> list[int]:
    d = len(coeffs) - 1
    return [(d - i) * c for i, c in enumerate(coeffs[:-1])]


def hensel_lift(f: Sequence[int], root_mod_p: int, p: int, precision: int = 20) -> PadicNumber:
    """Lift a simple root of ``f`` mod p to a root mod ``p^precision``.

    ``f`` is given by integer coefficients, highest degree first.
    """
    f = [int(c) for c in f]
    df = _poly_deriv(f)
    a = root_mod_p % p
    if _poly_eval(f, a) % p:
        raise ValueError(f"{a} is not a root of f mod {p}")
    if _poly_eval(df, a) % p == 0:
        raise NotSimpleRoot(f"f'({a}) = 0 mod {p}")
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        mod = p ** k
        a = (a - _poly_eval(f, a) * pow(_poly_eval(df, a), -1, mod)) % mod
    return PadicNumber.from_int_mod(a, p, precision)

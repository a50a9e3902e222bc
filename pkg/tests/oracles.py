"""Independent oracles and instance generators shared by the test modules."""
from fractions import Fraction
from math import comb, factorial

import sympy

from padiclf.padic import INF, vp
from padiclf.series import PadicSeries


def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def from_roots(roots, scale=1):
    c = [Fraction(scale)]
    for r in roots:
        c = poly_mul(c, [-Fraction(r), Fraction(1)])  # ascending powers
    return c




def count_by_valuation(roots, p, q, closed=True):
    k = 0
    for r in roots:
        v = vp(Fraction(r), p)
        if v is INF or (v >= q if closed else v > q):
            k += 1
    return k


def gauss_exponent(coeffs, p, q):
    """min v(a_n) + n q over an exact rational coefficient list."""
    vals = [vp(c, p) + n * q for n, c in enumerate(coeffs) if c != 0]
    return min(vals) if vals else INF


def taylor_at(coeffs, a, tau):
    """f^(tau)(a) for ascending exact coefficients."""
    s = Fraction(0)
    for n in range(tau, len(coeffs)):
        s += coeffs[n] * Fraction(factorial(n), factorial(n - tau)) * Fraction(a) ** (n - tau)
    return s


def planted_schwarz(rng, p, k=None, l=None):
    """f = g * prod_{gamma}(z - gamma)^k + p^m h with Gamma in Z_p; returns
    (coeffs, Gamma, k)."""
    k = k or rng.randint(1, 3)
    l = l or rng.randint(2, 4)
    Gamma = rng.sample(range(-20, 21), l)
    base = [Fraction(1)]
    for g in Gamma:
        for _ in range(k):
            base = poly_mul(base, [Fraction(-g), Fraction(1)])
    g = [Fraction(rng.randint(-9, 9) * p ** rng.randint(0, 2)) for _ in range(rng.randint(1, 3))]
    if not any(g):
        g[0] = Fraction(1)
    f = poly_mul(base, g)
    m = rng.randint(0, 6)
    h = [Fraction(rng.randint(-9, 9) * p**m, rng.choice([1, 1, 2, 3]) if p not in (2, 3) else 1) for _ in range(rng.randint(1, 4))]
    f += [Fraction(0)] * max(0, len(h) - len(f))
    for i, c in enumerate(h):
        f[i] += c
    return f, Gamma, k


def series(coeffs, p, precision=60):
    return PadicSeries.from_rationals(coeffs, p, precision)


def multinomial_taylor(P, point):
    """Exact Taylor coefficients of a polynomial around a point (dict form)."""
    out = {}
    for m, c in P.items():
        # expand prod (x_i + a_i)^{m_i}
        terms = {(): c}
        for e, a in zip(m, point):
            new = {}
            for mono, cc in terms.items():
                for j in range(e + 1):
                    key = mono + (j,)
                    new[key] = new.get(key, 0) + cc * comb(e, j) * Fraction(a) ** (e - j)
            terms = new
        for mono, cc in terms.items():
            out[mono] = out.get(mono, 0) + cc
    return {k: v for k, v in out.items() if v != 0}


def psi_derivative(inst, P, s, t):
    """(Delta^t Psi)(s u_bar) by symbolic differentiation of
    Psi(y, x) = P(y, 1, g^s e^x - 1)."""
    n = inst.n
    y = sympy.Symbol("y")
    xs = sympy.symbols(f"x0:{n}")
    gs = [sympy.Rational(int(g.coords[0].numerator), int(g.coords[0].denominator)) ** s for g in inst.gamma]
    subs = [y, sympy.Integer(1)] + [gs[i] * sympy.exp(xs[i]) - 1 for i in range(n)]
    expr = 0
    for m, c in P.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in zip(subs, m):
            term *= v**e
        expr += term
    beta = [sympy.Rational(b.coords[0].numerator, b.coords[0].denominator) for b in inst.beta]
    for k, tk in enumerate(t):
        for _ in range(tk):
            expr = beta[k] * sympy.diff(expr, y) + sympy.diff(expr, xs[k])
    val = expr.subs({y: 0, **{x: 0 for x in xs}})
    return Fraction(str(sympy.nsimplify(val)))

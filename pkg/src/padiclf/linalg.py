"""Exact integer/rational linear algebra used by the Siegel solver and audits."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from sympy import Matrix, Rational
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> List[List[int]]:
    """A Z-basis of {x in Z^n : A x = 0}.

    Row-reduces [A^T | I] with unimodular integer row operations (a Hermite
    normal form computation); rows whose A^T part vanishes carry the kernel.
    """
    A = [[int(a) for a in row] for row in A]
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    m = len(A)
    rows = []
    for j in range(n):
        left = [A[i][j] for i in range(m)]
        right = [1 if k == j else 0 for k in range(n)]
        rows.append(left + right)
    r = 0
    for c in range(m):
        # gcd-eliminate column c among rows r..n-1
        while True:
            nz = [i for i in range(r, n) if rows[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[piv] = rows[piv], rows[r]
            done = True
            for i in range(r + 1, n):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                r += 1
                break
        if r == n:
            break
    kernel = [row[m:] for row in rows[r:] if all(v == 0 for v in row[:m])]
    return kernel


def lll_reduce(basis: Sequence[Sequence[int]], delta=Fraction(3, 4)) -> List[List[int]]:
    """LLL-reduced basis (rows) of the lattice spanned by ``basis``."""
    if not basis:
        return []
    rows = [[ZZ(int(v)) for v in row] for row in basis]
    M = DomainMatrix(rows, (len(rows), len(rows[0])), ZZ)
    red = M.lll(delta=QQ(delta.numerator, delta.denominator))
    return [[int(v) for v in row] for row in red.to_Matrix().tolist()]


def rational_nullspace(A: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    if not A:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M = Matrix([[Rational(a.numerator, a.denominator) if isinstance(a, Fraction) else Rational(a) for a in row] for row in A])
    out = []
    for v in M.nullspace():
        out.append([Fraction(int(x.p), int(x.q)) for x in v])
    return out


def primitive(v: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to a primitive integer vector, first nonzero entry positive."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def mat_vec(A: Sequence[Sequence], x: Sequence):
    return [sum((a * b for a, b in zip(row, x)), 0) for row in A]


def solve_rational(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve a square nonsingular system exactly by Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]

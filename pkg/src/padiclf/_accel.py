"""Box search for small integer kernel vectors.

The numba kernel is used when numba imports and ``PADICLF_NUMBA`` is not
``0``; otherwise a chunked numpy version runs. Both enumerate the shells
||y||_inf = 1, 2, ..., bound in the same order and return the first hit, so
their answers are identical.
"""
from __future__ import annotations

import itertools
import os

import numpy as np

_INT64_SAFE = 2**62

try:  # pragma: no cover - exercised through both backends in tests
    if os.environ.get("PADICLF_NUMBA", "1") == "0":
        raise ImportError("numba disabled by PADICLF_NUMBA=0")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    njit = None
    HAVE_NUMBA = False


def _shell_numpy(A: np.ndarray, radius: int):
    n = A.shape[1]
    vals = np.arange(-radius, radius + 1, dtype=np.int64)
    # fix the first coordinate to keep chunks small
    for first in vals:
        rest = np.array(list(itertools.product(vals, repeat=n - 1)), dtype=np.int64).reshape(-1, n - 1)
        Y = np.concatenate([np.full((rest.shape[0], 1), first, dtype=np.int64), rest], axis=1)
        on_shell = np.abs(Y).max(axis=1) == radius
        Y = Y[on_shell]
        if Y.size == 0:
            continue
        hits = np.flatnonzero(~(A @ Y.T).any(axis=0))
        if hits.size:
            return Y[hits[0]]
    return None


if HAVE_NUMBA:

    @njit(cache=True)
    def _shell_numba(A, radius):  # pragma: no cover - compiled
        m, n = A.shape
        y = np.full(n, -radius, dtype=np.int64)
        while True:
            mx = 0
            for k in range(n):
                a = abs(y[k])
                if a > mx:
                    mx = a
            if mx == radius:
                ok = True
                for i in range(m):
                    s = 0
                    for k in range(n):
                        s += A[i, k] * y[k]
                    if s != 0:
                        ok = False
                        break
                if ok:
                    return y.copy()
            k = n - 1
            while k >= 0 and y[k] == radius:
                y[k] = -radius
                k -= 1
            if k < 0:
                return np.zeros(0, dtype=np.int64)
            y[k] += 1


def box_search(A, bound: int, use_numba: bool | None = None):
    """First nonzero integer y with A y = 0 and ||y||_inf <= bound, or None."""
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    m, n = A.shape
    amax = int(max((abs(int(a)) for a in A.flat), default=0))
    if amax * bound * n >= _INT64_SAFE:
        raise OverflowError("entries too large for the int64 box kernel")
    A64 = A.astype(np.int64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable")
    for radius in range(1, bound + 1):
        if use_numba:
            y = _shell_numba(A64, radius)
            if y.size:
                return [int(v) for v in y]
        else:
            y = _shell_numpy(A64, radius)
            if y is not None:
                return [int(v) for v in y]
    return None

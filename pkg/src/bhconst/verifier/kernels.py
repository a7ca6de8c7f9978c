"""Float64 inner loops for the sup-norm search, in numba and in plain numpy.

The backend is picked once at import from ``BHCONST_BACKEND`` (``numba`` or
``numpy``; default ``numba`` when it imports) and can be switched with
:func:`set_backend`.  Both backends return identical arrays up to floating
point summation order; callers re-evaluate the winners in high precision.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_BACKEND = os.environ.get("BHCONST_BACKEND", "numba" if HAVE_NUMBA else "numpy").lower()
if _BACKEND not in ("numba", "numpy"):
    raise ValueError(f"BHCONST_BACKEND must be 'numba' or 'numpy', got {_BACKEND!r}")
if _BACKEND == "numba" and not HAVE_NUMBA:
    _BACKEND = "numpy"


def backend() -> str:
    return _BACKEND


def set_backend(name: str) -> None:
    global _BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _BACKEND = name


def index_digits(n_slots: int, N: int) -> np.ndarray:
    """Row-major digits of every multi-index (i_1, ..., i_{n_slots}), first index slowest."""
    M = N**n_slots
    out = np.empty((M, max(n_slots, 1)), dtype=np.int64)
    for s in range(n_slots):
        out[:, s] = (np.arange(M) // N ** (n_slots - 1 - s)) % N
    return out


# ---------------------------------------------------------------------------
# vertex enumeration (real forms)
#
# Code bit s*N + i set means coordinate i of slot s is -1.  The last slot is
# eliminated analytically: max over signs of |sum v_i z_i| is sum |v_i|.

def _vertex_values_py(c2d, digits, n_slots, N):
    ncodes = 1 << (n_slots * N)
    M = c2d.shape[0]
    out = np.empty(ncodes)
    bits = np.arange(n_slots * N)
    block = 4096
    for start in range(0, ncodes, block):
        codes = np.arange(start, min(start + block, ncodes))
        S = 1.0 - 2.0 * ((codes[:, None] >> bits) & 1)
        W = np.ones((codes.size, M))
        for s in range(n_slots):
            W *= S[:, s * N + digits[:, s]]
        out[start:start + codes.size] = np.abs(W @ c2d).sum(axis=1)
    return out


def _vertex_values_impl(c2d, digits, n_slots, N):
    ncodes = 1 << (n_slots * N)
    M = c2d.shape[0]
    out = np.empty(ncodes)
    v = np.empty(N)
    for code in range(ncodes):
        for i in range(N):
            v[i] = 0.0
        for idx in range(M):
            w = 1.0
            for s in range(n_slots):
                if (code >> (s * N + digits[idx, s])) & 1:
                    w = -w
            for i in range(N):
                v[i] += w * c2d[idx, i]
        tot = 0.0
        for i in range(N):
            tot += abs(v[i])
        out[code] = tot
    return out


# ---------------------------------------------------------------------------
# coordinate-wise alignment ascent (complex phases or real signs)

def _ascend_impl(cflat, n, N, z, real_mode, max_sweeps, tol):
    total = cflat.shape[0]
    w = np.zeros(N, dtype=np.complex128)
    value = 0.0
    for _ in range(max_sweeps):
        old = value
        for s in range(n):
            for i in range(N):
                w[i] = 0.0
            for flat in range(total):
                prod = cflat[flat]
                rem = flat
                hit = 0
                for t in range(n - 1, -1, -1):
                    i = rem % N
                    rem //= N
                    if t == s:
                        hit = i
                    else:
                        prod *= z[t, i]
                w[hit] += prod
            value = 0.0
            for i in range(N):
                if real_mode:
                    a = abs(w[i].real)
                    if a > 0.0:
                        z[s, i] = 1.0 if w[i].real > 0.0 else -1.0
                else:
                    a = abs(w[i])
                    if a > 0.0:
                        z[s, i] = w[i].conjugate() / a
                value += a
        if value - old <= tol * max(1.0, value):
            break
    return value


def _ascend_many_impl(cflat, n, N, starts, real_mode, max_sweeps, tol):
    out = np.empty(starts.shape[0])
    for j in range(starts.shape[0]):
        out[j] = _ascend_impl(cflat, n, N, starts[j], real_mode, max_sweeps, tol)
    return out


def _ascend_many_py(cflat, n, N, starts, real_mode, max_sweeps, tol):
    shape = (N,) * n
    c = cflat.reshape(shape)
    out = np.empty(starts.shape[0])
    for j in range(starts.shape[0]):
        z = starts[j]
        value = 0.0
        for _ in range(max_sweeps):
            old = value
            for s in range(n):
                t = c
                # contract every slot except s, last axis first
                for u in range(n - 1, -1, -1):
                    if u != s:
                        t = np.tensordot(t, z[u], axes=([u], [0]))
                w = t
                if real_mode:
                    a = np.abs(w.real)
                    z[s] = np.where(a > 0, np.sign(w.real), z[s])
                else:
                    a = np.abs(w)
                    z[s] = np.where(a > 0, np.conj(w) / np.where(a > 0, a, 1.0), z[s])
                value = float(a.sum())
            if value - old <= tol * max(1.0, value):
                break
        out[j] = value
    return out


if HAVE_NUMBA:
    _vertex_values_nb = numba.njit(cache=False)(_vertex_values_impl)
    _ascend_impl_nb = numba.njit(cache=False)(_ascend_impl)

    @numba.njit(cache=False)
    def _ascend_many_nb(cflat, n, N, starts, real_mode, max_sweeps, tol):
        out = np.empty(starts.shape[0])
        for j in range(starts.shape[0]):
            out[j] = _ascend_impl_nb(cflat, n, N, starts[j], real_mode, max_sweeps, tol)
        return out


def vertex_values(c2d: np.ndarray, n_slots: int, N: int) -> np.ndarray:
    """sum_i |v_i(code)| for every sign assignment of the first ``n_slots`` slots."""
    c2d = np.ascontiguousarray(c2d, dtype=np.float64)
    digits = index_digits(n_slots, N)
    if _BACKEND == "numba":
        return _vertex_values_nb(c2d, digits, n_slots, N)
    return _vertex_values_py(c2d, digits, n_slots, N)


def ascend_many(cflat: np.ndarray, n: int, N: int, starts: np.ndarray, real_mode: bool,
                max_sweeps: int = 200, tol: float = 1e-14) -> np.ndarray:
    """Run alignment ascent from every start in place; returns the final float values."""
    cflat = np.ascontiguousarray(cflat, dtype=np.complex128)
    if _BACKEND == "numba":
        return _ascend_many_nb(cflat, n, N, starts, real_mode, max_sweeps, tol)
    return _ascend_many_py(cflat, n, N, starts, real_mode, max_sweeps, tol)

"""Both sides of the Bohnenblust-Hille inequality for an explicit form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import mpmath
import numpy as np
from mpmath import mp

from ..errors import DomainError
from ..numerics import DEFAULT_DIGITS, Field, HighPrecReal, working_dps
from . import kernels
from .forms import MultilinearForm

RNG_NAME = "numpy.random.PCG64"
DEFAULT_BUDGET = 16  # max n*N for exact vertex enumeration
DEFAULT_SAMPLES = 64


@dataclass(frozen=True)
class SupNorm:
    value: HighPrecReal
    exact: bool
    method: str
    seed: int | None = None
    samples: int | None = None
    rng: str | None = None


@dataclass(frozen=True)
class BHRatio:
    value: HighPrecReal
    exact: bool  # False: sup is a lower estimate, so the ratio is an upper estimate
    lhs: HighPrecReal
    sup: SupNorm


def lhs_norm(form: MultilinearForm, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """(sum |c|^(2n/(n+1)))^((n+1)/(2n)) over all coefficients."""
    n = form.n
    with mp.workdps(working_dps(digits)):
        q = mpmath.mpf(2 * n) / (n + 1)
        s = mpmath.fsum(abs(c) ** q for c in form.coefficients.flat if c != 0)
        return HighPrecReal(s ** (1 / q) if s else mpmath.mpf(0), digits)


def _last_slot_value(form: MultilinearForm, fixed: list) -> mpmath.mpf:
    """sum_i |w_i| where w_i = U(fixed_1, ..., fixed_{n-1}, e_i); attained by aligning slot n."""
    N, n = form.N, form.n
    w = [mpmath.mpf(0)] * N
    c = form.coefficients
    for idx in itertools.product(range(N), repeat=n - 1):
        prod = mpmath.mpf(1)
        for s, i in enumerate(idx):
            prod *= fixed[s][i]
        if prod == 0:
            continue
        row = c[idx]
        for i in range(N):
            w[i] += prod * row[i]
    return mpmath.fsum(abs(x) for x in w)


def _exact_real_sup(form: MultilinearForm) -> mpmath.mpf:
    n, N = form.n, form.N
    n_slots = n - 1
    c2d_obj = form.coefficients.reshape(N**n_slots, N)
    c2d = form.as_float().reshape(N**n_slots, N)
    vals = kernels.vertex_values(c2d, n_slots, N)
    fmax = float(vals.max())
    # float error of any vertex value is below this; keep every vertex that could be the max
    slack = 4.0 * (c2d.shape[0] + N + 2) * np.finfo(float).eps * float(np.abs(c2d).sum()) + 1e-300
    cand = np.nonzero(vals >= fmax - 2 * slack)[0]
    digits = kernels.index_digits(n_slots, N)
    best = mpmath.mpf(0)
    bits = np.arange(n_slots * N)
    for start in range(0, cand.size, 1024):
        codes = cand[start:start + 1024]
        S = 1 - 2 * ((codes[:, None] >> bits) & 1)
        W = np.ones((codes.size, c2d.shape[0]), dtype=np.int64)
        for s in range(n_slots):
            W *= S[:, s * N + digits[:, s]]
        V = np.dot(W.astype(object), c2d_obj)
        for row in V:
            v = mpmath.fsum(abs(x) for x in row)
            if v > best:
                best = v
    return best


def _sampled_sup(form: MultilinearForm, samples: int, seed: int) -> mpmath.mpf:
    n, N = form.n, form.N
    real = form.field is Field.REAL
    rng = np.random.Generator(np.random.PCG64(seed))
    if real:
        starts = (1.0 - 2.0 * rng.integers(0, 2, size=(samples, n, N))).astype(np.complex128)
    else:
        theta = rng.uniform(0.0, 2 * np.pi, size=(samples, n, N))
        starts = np.exp(1j * theta)
    cflat = form.as_float().astype(np.complex128).ravel()
    kernels.ascend_many(cflat, n, N, starts, real)
    best = mpmath.mpf(0)
    for z in starts:
        fixed = []
        for s in range(n - 1):
            if real:
                fixed.append([mpmath.mpf(1) if x.real >= 0 else mpmath.mpf(-1) for x in z[s]])
            else:
                fixed.append([mpmath.expj(mpmath.mpf(float(np.angle(x)))) for x in z[s]])
        v = _last_slot_value(form, fixed)
        if v > best:
            best = v
    return best


def sup_norm(form: MultilinearForm, digits: int = DEFAULT_DIGITS, samples: int = DEFAULT_SAMPLES,
             seed: int = 0, budget: int = DEFAULT_BUDGET) -> SupNorm:
    """sup of |U| over the unit polydisc.

    Real forms with n*N <= budget: exact, by enumerating sign vertices.
    Otherwise a lower estimate from ``samples`` seeded starts followed by
    coordinate-wise alignment ascent.
    """
    with mp.workdps(working_dps(digits)):
        if form.n == 1:
            v = mpmath.fsum(abs(c) for c in form.coefficients.flat)
            return SupNorm(HighPrecReal(v, digits), True, "closed-form")
        if form.field is Field.REAL and form.n * form.N <= budget:
            return SupNorm(HighPrecReal(_exact_real_sup(form), digits), True, "vertex-enumeration")
        if samples < 1:
            raise DomainError("samples must be positive")
        v = _sampled_sup(form, samples, seed)
        return SupNorm(HighPrecReal(v, digits), False, "alignment-ascent", seed, samples, RNG_NAME)


def bh_ratio(form: MultilinearForm, digits: int = DEFAULT_DIGITS, samples: int = DEFAULT_SAMPLES,
             seed: int = 0, budget: int = DEFAULT_BUDGET) -> BHRatio:
    """lhs_norm / sup_norm."""
    sup = sup_norm(form, digits, samples, seed, budget)
    if sup.value.value == 0:
        raise DomainError("the zero form has no Bohnenblust-Hille ratio")
    lhs = lhs_norm(form, digits)
    with mp.workdps(working_dps(digits)):
        return BHRatio(HighPrecReal(lhs.value / sup.value.value, digits), sup.exact, lhs, sup)

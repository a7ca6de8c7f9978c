"""Dense multilinear forms and their text format.

Text format: a header line ``n N field`` followed by N**n scalars in row-major
order (first index slowest), whitespace separated.  Complex entries are two
consecutive numbers, real part then imaginary part.  Scalars are decimal
strings so no precision is lost on input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import mpmath
import numpy as np
from mpmath import mp

from ..errors import DomainError
from ..numerics import DEFAULT_DIGITS, Field, working_dps


@dataclass(frozen=True, eq=False)
class MultilinearForm:
    """U(z_1, ..., z_n) = sum c[i_1, ..., i_n] z_1[i_1] ... z_n[i_n] on K^N x ... x K^N."""

    n: int
    N: int
    field: Field
    coefficients: np.ndarray  # object array of mpf / mpc, shape (N,) * n

    def __post_init__(self) -> None:
        if self.n < 1 or self.N < 1:
            raise DomainError("arity and dimension must be positive")
        c = self.coefficients
        if c.shape != (self.N,) * self.n:
            raise DomainError(f"expected shape {(self.N,) * self.n}, got {c.shape}")
        for v in c.flat:
            if not mpmath.isfinite(v):
                raise DomainError("coefficients must be finite")

    @classmethod
    def from_values(cls, values, field: Field | str = Field.REAL) -> "MultilinearForm":
        """Build from a nested sequence / ndarray; entries converted through ``mpmath``."""
        field = Field.parse(field)
        arr = np.asarray(values, dtype=object)
        if arr.ndim == 0 or len(set(arr.shape)) != 1:
            raise DomainError("coefficient tensor must be cubical")
        conv = mpmath.mpc if field is Field.COMPLEX else mpmath.mpf
        out = np.empty(arr.shape, dtype=object)
        longest = max((len(v) for v in arr.flat if isinstance(v, str)), default=0)
        with mp.workdps(max(working_dps(DEFAULT_DIGITS), longest + 5)):
            for idx in np.ndindex(arr.shape):
                v = arr[idx]
                if field is Field.COMPLEX and isinstance(v, (tuple, list)):
                    out[idx] = mpmath.mpc(mpmath.mpf(v[0]), mpmath.mpf(v[1]))
                else:
                    out[idx] = conv(v)
        return cls(arr.ndim, arr.shape[0], field, out)

    @classmethod
    def random(cls, n: int, N: int, rng: np.random.Generator,
               field: Field | str = Field.REAL) -> "MultilinearForm":
        """Standard normal coefficients (rounded to 17 significant digits)."""
        field = Field.parse(field)
        if field is Field.REAL:
            vals = rng.standard_normal((N,) * n)
            arr = np.vectorize(lambda x: mpmath.mpf(repr(float(x))), otypes=[object])(vals)
        else:
            re = rng.standard_normal((N,) * n)
            im = rng.standard_normal((N,) * n)
            arr = np.empty((N,) * n, dtype=object)
            for idx in np.ndindex(arr.shape):
                arr[idx] = mpmath.mpc(repr(float(re[idx])), repr(float(im[idx])))
        return cls(n, N, field, arr)

    def scaled(self, lam, digits: int = DEFAULT_DIGITS) -> "MultilinearForm":
        out = np.empty(self.coefficients.shape, dtype=object)
        with mp.workdps(working_dps(digits)):
            lam = mpmath.mpc(lam) if self.field is Field.COMPLEX else mpmath.mpf(lam)
            for idx in np.ndindex(out.shape):
                out[idx] = lam * self.coefficients[idx]
        return MultilinearForm(self.n, self.N, self.field, out)

    def as_float(self) -> np.ndarray:
        dtype = np.complex128 if self.field is Field.COMPLEX else np.float64
        conv = complex if self.field is Field.COMPLEX else float
        return np.array([conv(v) for v in self.coefficients.flat], dtype=dtype).reshape(
            self.coefficients.shape)

    def __call__(self, *vectors) -> mpmath.mpf:
        """Evaluate U at n vectors (ambient mpmath precision)."""
        if len(vectors) != self.n:
            raise DomainError(f"expected {self.n} vectors")
        total = mpmath.mpf(0)
        for idx in itertools.product(range(self.N), repeat=self.n):
            term = self.coefficients[idx]
            for s, i in enumerate(idx):
                term = term * vectors[s][i]
            total += term
        return total

    def to_text(self, digits: int = 30) -> str:
        lines = [f"{self.n} {self.N} {self.field.value}"]
        for v in self.coefficients.flat:
            if self.field is Field.COMPLEX:
                v = mpmath.mpc(v)
                lines.append(f"{mpmath.nstr(v.real, digits)} {mpmath.nstr(v.imag, digits)}")
            else:
                lines.append(mpmath.nstr(v, digits))
        return "\n".join(lines) + "\n"


def parse_form(text: str) -> MultilinearForm:
    """Parse the ``n N field`` + scalars format (see module docstring)."""
    tokens = text.split()
    if len(tokens) < 3:
        raise DomainError("form file needs a header 'n N field'")
    try:
        n, N = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise DomainError("header must start with two integers n and N") from None
    field = Field.parse(tokens[2])
    count = N**n * (2 if field is Field.COMPLEX else 1)
    body = tokens[3:]
    if len(body) != count:
        raise DomainError(f"expected {count} scalars, found {len(body)}")
    arr = np.empty(N**n, dtype=object)
    with mp.workdps(max(mp.dps, max(len(t) for t in body) + 5)):
        try:
            if field is Field.COMPLEX:
                for i in range(N**n):
                    arr[i] = mpmath.mpc(mpmath.mpf(body[2 * i]), mpmath.mpf(body[2 * i + 1]))
            else:
                for i, t in enumerate(body):
                    arr[i] = mpmath.mpf(t)
        except ValueError as exc:
            raise DomainError(f"bad scalar in form file: {exc}") from None
    return MultilinearForm(n, N, field, arr.reshape((N,) * n))


def read_form(path) -> MultilinearForm:
    with open(path, encoding="utf-8") as fh:
        return parse_form(fh.read())


def kahane_form() -> MultilinearForm:
    """The 2x2 bilinear form x1 y1 + x1 y2 + x2 y1 - x2 y2."""
    return MultilinearForm.from_values([[1, 1], [1, -1]], Field.REAL)

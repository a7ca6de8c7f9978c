"""Arbitrary-precision reals, the gamma function and bisection.

Everything runs on top of :mod:`mpmath` floating point; the algorithms for
log-gamma, the Euler-Mascheroni constant and root bracketing are implemented
here so that digit counts are under our control.  All public entry points take
``digits`` (significant decimal digits) and compute internally with
``GUARD_DIGITS`` extra digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Callable, Union

import mpmath
from mpmath import mp

from .errors import BracketError, ConvergenceError, DomainError, PrecisionConfigError

MIN_DIGITS = 20
DEFAULT_DIGITS = 100
GUARD_DIGITS = 10


class Field(enum.Enum):
    """Scalar field of the multilinear forms."""

    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def parse(cls, value: "str | Field") -> "Field":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown field {value!r}; expected 'real' or 'complex'") from None

    def __str__(self) -> str:
        return self.value


def check_digits(digits: int) -> int:
    if not isinstance(digits, int) or digits < MIN_DIGITS:
        raise PrecisionConfigError(f"digits must be an integer >= {MIN_DIGITS}, got {digits!r}")
    return digits


def working_dps(digits: int) -> int:
    return check_digits(digits) + GUARD_DIGITS


Number = Union[int, str, Fraction, "mpmath.mpf", "HighPrecReal"]


def to_mpf(x: Number) -> mpmath.mpf:
    """Convert to an mpf at the current working precision (Fractions exactly rounded once)."""
    if isinstance(x, HighPrecReal):
        return +x.value
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, float):
        # floats are exact binary values; accept them but callers should prefer strings
        return mpmath.mpf(x)
    return mpmath.mpf(x)


@total_ordering
@dataclass(frozen=True)
class HighPrecReal:
    """A real number together with the decimal precision it was computed for.

    ``value`` carries the guard digits as well; ``str()`` and the rounding
    helpers present it at ``digits`` significant digits.
    """

    value: mpmath.mpf
    digits: int

    def __post_init__(self) -> None:
        check_digits(self.digits)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return mpmath.nstr(self.value, self.digits, strip_zeros=False)

    def __repr__(self) -> str:
        return f"HighPrecReal({mpmath.nstr(self.value, 20)}..., digits={self.digits})"

    def _other(self, other: object) -> mpmath.mpf:
        if isinstance(other, (HighPrecReal, int, str, Fraction, float, mpmath.mpf)):
            with mp.workdps(max(mp.dps, self.digits + 2 * GUARD_DIGITS)):
                return to_mpf(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o

    def __lt__(self, other: object) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value < o

    def __hash__(self) -> int:
        return hash((self.value, self.digits))

    def decimal(self) -> Decimal:
        """Nearest decimal with all carried digits."""
        s = mpmath.nstr(self.value, self.digits + GUARD_DIGITS, strip_zeros=False,
                        min_fixed=-math.inf, max_fixed=math.inf)
        return Decimal(s)

    def upper(self, places: int) -> str:
        """Round toward +inf at ``places`` decimals (valid display of an upper bound)."""
        return _quantize(self.decimal(), places, ROUND_CEILING, self.digits)

    def lower(self, places: int) -> str:
        """Round toward -inf at ``places`` decimals (valid display of a lower bound)."""
        return _quantize(self.decimal(), places, ROUND_FLOOR, self.digits)

    def upper_sig(self, sig: int) -> str:
        return _quantize_sig(self.decimal(), sig, ROUND_CEILING)

    def lower_sig(self, sig: int) -> str:
        return _quantize_sig(self.decimal(), sig, ROUND_FLOOR)


def _quantize(d: Decimal, places: int, rounding: str, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits + 2 * GUARD_DIGITS + max(0, d.adjusted())
        return str(d.quantize(Decimal(1).scaleb(-places), rounding=rounding))


def _quantize_sig(d: Decimal, sig: int, rounding: str) -> str:
    if d == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = sig
        ctx.rounding = rounding
        return format(+d, "g") if abs(d.adjusted()) < 6 else format(+d, "e")


def hp(x: Number, digits: int) -> HighPrecReal:
    """Wrap a value (converted at ``digits`` + guard precision)."""
    with mp.workdps(working_dps(digits)):
        return HighPrecReal(to_mpf(x), digits)


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact) via tangent numbers

_TANGENT: list[int] = [0, 1]


def _tangent_numbers(n: int) -> list[int]:
    """Tangent numbers T_1..T_n (index 0 unused), integer arithmetic only."""
    if len(_TANGENT) > n:
        return _TANGENT
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    _TANGENT[:] = t
    return _TANGENT


def bernoulli_even(k: int) -> Fraction:
    """Exact B_{2k} for k >= 1."""
    if k < 1:
        raise DomainError("bernoulli_even needs k >= 1")
    t = _tangent_numbers(k)[k]
    four_k = 4**k
    sign = 1 if k % 2 == 1 else -1
    return Fraction(sign * 2 * k * t, four_k * (four_k - 1))


@lru_cache(maxsize=None)
def _stirling_coefficient(k: int) -> Fraction:
    return bernoulli_even(k) / (2 * k * (2 * k - 1))


# ---------------------------------------------------------------------------
# log-gamma / gamma

def _loggamma(x: mpmath.mpf) -> mpmath.mpf:
    """log Gamma(x) for real x > 0 at the ambient precision.

    Shifts the argument above ``mp.dps`` with the recurrence, then sums the
    Stirling series until the next term (which bounds the remainder for real
    positive arguments) drops below the working epsilon.
    """
    if not x > 0:
        raise DomainError(f"gamma needs a positive argument, got {mpmath.nstr(x, 10)}")
    target = mp.dps
    threshold = target + 10
    # headroom for cancellation among terms of size ~ z log z
    big = max(float(threshold), float(x))
    with mp.workdps(target + 10 + int(math.log10(big * math.log(big)))):
        z = +x
        shift_log = mpmath.mpf(0)
        if z < threshold:
            s = int(mpmath.ceil(threshold - z))
            prod = mpmath.mpf(1)
            for i in range(s):
                prod *= z + i
            shift_log = mpmath.log(prod)
            z = z + s
        eps = mpmath.mpf(10) ** (-(mp.dps + 2))
        total = (z - mpmath.mpf(1) / 2) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2
        inv = 1 / z
        inv_z2 = inv * inv
        power = inv
        prev = None
        k = 1
        while True:
            c = _stirling_coefficient(k)
            term = (mpmath.mpf(c.numerator) / c.denominator) * power
            a = abs(term)
            if a < eps * max(1, abs(total)):
                break
            if prev is not None and a > prev:
                raise ConvergenceError("Stirling series diverged before reaching precision")
            total += term
            prev = a
            power *= inv_z2
            k += 1
        result = total - shift_log
    return +result


def gamma(x: Number, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Gamma(x) for real x > 0, accurate to ``digits`` significant digits."""
    with mp.workdps(working_dps(digits)):
        z = to_mpf(x)
        with mp.workdps(mp.dps + _exp_headroom(z)):
            g = mpmath.exp(_loggamma(z))
        return HighPrecReal(+g, digits)


def _exp_headroom(z: mpmath.mpf) -> int:
    """Extra digits so that exp(loggamma(z)) keeps full relative precision."""
    if z <= 10:
        return 2
    zf = float(z)
    return 2 + int(math.log10(zf * math.log(zf)))


def loggamma(x: Number, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    with mp.workdps(working_dps(digits)):
        return HighPrecReal(_loggamma(to_mpf(x)), digits)


# ---------------------------------------------------------------------------
# Euler-Mascheroni constant (Brent-McMillan)

def _euler_gamma_mpf(dps: int) -> mpmath.mpf:
    n = int(math.ceil(dps * math.log(10) / 4)) + 2
    with mp.workdps(dps + dps // 2 + 15):
        eps = mpmath.mpf(10) ** (-(dps + 5))
        n2 = mpmath.mpf(n) ** 2
        a = -mpmath.log(n)
        b = mpmath.mpf(1)
        u, v = a, b
        k = 1
        while True:
            b = b * n2 / (k * k)
            a = (a * n2 / k + b) / k
            u += a
            v += b
            if k > n and abs(a) < eps * v and b < eps * v:
                break
            k += 1
        g = u / v
    with mp.workdps(dps):
        return +g


@lru_cache(maxsize=32)
def _euler_gamma_cached(dps: int) -> mpmath.mpf:
    return _euler_gamma_mpf(dps)


def euler_gamma(digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Euler-Mascheroni constant to ``digits`` digits."""
    dps = working_dps(digits)
    return HighPrecReal(_euler_gamma_cached(dps), digits)


# ---------------------------------------------------------------------------
# Root finding

def bisect_bracket(f: Callable[[mpmath.mpf], mpmath.mpf], lo: mpmath.mpf, hi: mpmath.mpf,
                   tol: mpmath.mpf, max_iter: int | None = None) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Shrink a sign-change bracket of a monotone ``f`` until it is narrower than ``tol``.

    Returns the final ``(lo, hi)``; ``f`` changes sign (or vanishes) on it.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise BracketError("f(lo) and f(hi) have the same sign")
    increasing = fhi > 0
    if max_iter is None:
        max_iter = int(mpmath.ceil(mpmath.log((hi - lo) / tol, 2))) + 8
    for _ in range(max_iter):
        if hi - lo <= tol:
            return lo, hi
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == increasing:
            hi = mid
        else:
            lo = mid
    if hi - lo <= tol:
        return lo, hi
    raise ConvergenceError(f"bisection did not converge within {max_iter} iterations")


def find_root_increasing(f: Callable[[mpmath.mpf], mpmath.mpf], lo: Number, hi: Number,
                         digits: int = DEFAULT_DIGITS, max_iter: int | None = None) -> HighPrecReal:
    """Root of a strictly monotone ``f`` on ``[lo, hi]`` by bisection.

    ``f`` receives and returns mpf values at the working precision.  The
    bracket is shrunk below ``10**-(digits + guard) * max(1, |x|)``.
    """
    with mp.workdps(working_dps(digits)):
        a, b = to_mpf(lo), to_mpf(hi)
        if a > b:
            a, b = b, a
        scale = max(mpmath.mpf(1), abs(a), abs(b))
        tol = mpmath.mpf(10) ** (-mp.dps) * scale
        a, b = bisect_bracket(f, a, b, tol, max_iter)
        return HighPrecReal((a + b) / 2, digits)


def sqrt_pi() -> mpmath.mpf:
    return mpmath.sqrt(mpmath.pi)

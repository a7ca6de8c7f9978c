"""Optimal Khinchine constants for Rademacher (real) and Steinhaus (complex) sums.

``A_p`` is the real constant (two branches meeting at ``p0``); ``Ã_p`` the
complex one.  Both are only needed on ``[1, 2]``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import mpmath
from mpmath import mp

from .errors import DomainError
from .numerics import (
    DEFAULT_DIGITS,
    Field,
    HighPrecReal,
    Number,
    _loggamma,
    find_root_increasing,
    to_mpf,
    working_dps,
)

P0Mode = Literal["exact", "paper"]

#: threshold hard-coded by the original reference computation in place of p0
P0_FIXED = Fraction(1846999, 1000000)

# p0 is the first root of Gamma((p+1)/2) = sqrt(pi)/2; p = 2 is the second one,
# so the bracket stops before the minimum of Gamma at (p+1)/2 = 1.4616...
_P0_BRACKET = (Fraction(1), Fraction(19, 10))


@dataclass(frozen=True)
class KhinchineConstant:
    p: HighPrecReal
    field: Field
    value: HighPrecReal


@lru_cache(maxsize=16)
def _p_zero(digits: int) -> HighPrecReal:
    half_sqrt_pi = None

    def g(p: mpmath.mpf) -> mpmath.mpf:
        return half_sqrt_pi - mpmath.exp(_loggamma((p + 1) / 2))

    with mp.workdps(working_dps(digits)):
        half_sqrt_pi = mpmath.sqrt(mpmath.pi) / 2
        return find_root_increasing(g, *_P0_BRACKET, digits=digits)


def p_zero(digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """The breakpoint p0 in (1, 2) with Gamma((p0+1)/2) = sqrt(pi)/2."""
    working_dps(digits)
    return _p_zero(digits)


def _threshold(digits: int, p0_mode: P0Mode) -> mpmath.mpf:
    if p0_mode == "exact":
        return p_zero(digits).value
    if p0_mode == "paper":
        return to_mpf(P0_FIXED)
    raise ValueError(f"unknown p0 mode {p0_mode!r}")


def _as_p(p: Number) -> mpmath.mpf:
    x = to_mpf(p)
    if not 1 <= x <= 2:
        raise DomainError(f"Khinchine exponent must lie in [1, 2], got {mpmath.nstr(x, 12)}")
    return x


def _log_a_real(p: mpmath.mpf, threshold: mpmath.mpf) -> mpmath.mpf:
    if p <= threshold:
        return (mpmath.mpf(1) / 2 - 1 / p) * mpmath.ln2
    return mpmath.ln2 / 2 + (_loggamma((p + 1) / 2) - mpmath.log(mpmath.pi) / 2) / p


def _log_a_complex(p: mpmath.mpf) -> mpmath.mpf:
    return _loggamma((p + 2) / 2) / p


def a_real(p: Number, digits: int = DEFAULT_DIGITS, p0_mode: P0Mode = "exact") -> HighPrecReal:
    """Real Khinchine constant A_p, p in [1, 2]."""
    with mp.workdps(working_dps(digits)):
        x = _as_p(p)
        return HighPrecReal(mpmath.exp(_log_a_real(x, _threshold(digits, p0_mode))), digits)


def a_complex(p: Number, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Complex (Steinhaus) Khinchine constant Gamma((p+2)/2)**(1/p), p in [1, 2]."""
    with mp.workdps(working_dps(digits)):
        x = _as_p(p)
        return HighPrecReal(mpmath.exp(_log_a_complex(x)), digits)


def khinchine_constant(p: Number, field: Field | str, digits: int = DEFAULT_DIGITS,
                       p0_mode: P0Mode = "exact") -> KhinchineConstant:
    field = Field.parse(field)
    value = a_real(p, digits, p0_mode) if field is Field.REAL else a_complex(p, digits)
    with mp.workdps(working_dps(digits)):
        return KhinchineConstant(HighPrecReal(to_mpf(p), digits), field, value)


# keyed by exact rational p; concurrent writers may duplicate work but always
# store the same value
_LOG_A_CACHE: dict[tuple[Fraction, Field, int, str], mpmath.mpf] = {}
_LOG_A_LOCK = threading.Lock()


def log_a(p: Fraction, field: Field, digits: int, p0_mode: P0Mode = "exact") -> mpmath.mpf:
    """log of the field's Khinchine constant at a rational p, cached, at working precision."""
    if field is Field.COMPLEX:
        p0_mode = "exact"  # irrelevant for the complex constant
    key = (Fraction(p), field, digits, p0_mode)
    hit = _LOG_A_CACHE.get(key)
    if hit is not None:
        return hit
    with mp.workdps(working_dps(digits)):
        x = _as_p(key[0])
        if field is Field.REAL:
            v = _log_a_real(x, _threshold(digits, p0_mode))
        else:
            v = _log_a_complex(x)
    with _LOG_A_LOCK:
        return _LOG_A_CACHE.setdefault(key, v)


def real_branch_is_power(p: Fraction, digits: int = DEFAULT_DIGITS, p0_mode: P0Mode = "exact") -> bool:
    """True when A_p uses the closed form 2**(1/2 - 1/p)."""
    with mp.workdps(working_dps(digits)):
        return to_mpf(Fraction(p)) <= _threshold(digits, p0_mode)


def clear_cache() -> None:
    with _LOG_A_LOCK:
        _LOG_A_CACHE.clear()

"""Recursive constant sequences for the multilinear Bohnenblust-Hille inequality.

* ``c_recursive`` -- the best known constants obtained with the balanced split
  (k = m/2 or (m-1)/2), real and complex;
* ``m_sequence`` -- the pure doubling sequence driven by the constant D;
* ``j_sequence`` -- C up to 2**k0, then D-doubling with a weighted odd step.

Every sequence is evaluated in the log domain at working precision and
memoized per ``(field, digits, p0_mode)``.
"""

from __future__ import annotations

import datetime as _dt
import enum
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from . import __version__
from .errors import DependencyError, DomainError
from .khinchine import P0Mode, log_a
from .numerics import DEFAULT_DIGITS, Field, HighPrecReal, euler_gamma, working_dps


class Strategy(enum.Enum):
    RECURSIVE = "recursive"
    EXHAUSTIVE = "exhaustive"
    MSEQ = "mseq"
    JSEQ = "jseq"

    def __str__(self) -> str:
        return self.value


def _utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


@dataclass
class ConstantTable:
    """Map m -> constant for one (field, strategy, digits) with provenance."""

    field: Field
    strategy: Strategy
    digits: int
    entries: dict[int, HighPrecReal] = dc_field(default_factory=dict)
    argmin: dict[int, int] = dc_field(default_factory=dict)
    k0: int | None = None
    p0_mode: str = "exact"
    created: str = dc_field(default_factory=_utc_now)
    engine_version: str = __version__

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, m: int) -> HighPrecReal:
        try:
            return self.entries[m]
        except KeyError:
            raise DependencyError(f"{self.strategy} table has no entry for m={m}") from None

    def __contains__(self, m: int) -> bool:
        return m in self.entries

    @property
    def max_m(self) -> int:
        return max(self.entries, default=0)


def d_constant(field: Field | str, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Doubling factor D: e^(1-gamma/2)/sqrt(2) (real), e^((1-gamma)/2) (complex)."""
    field = Field.parse(field)
    return HighPrecReal(mpmath.exp(_log_d(field, digits)), digits)


@lru_cache(maxsize=32)
def _log_d(field: Field, digits: int) -> mpmath.mpf:
    with mp.workdps(working_dps(digits)):
        g = euler_gamma(digits).value
        if field is Field.REAL:
            return 1 - g / 2 - mpmath.ln2 / 2
        return (1 - g) / 2


def _log_c2(field: Field, digits: int) -> mpmath.mpf:
    """log of the second constant: sqrt(2) (real), 2/sqrt(pi) (complex)."""
    with mp.workdps(working_dps(digits)):
        if field is Field.REAL:
            return mpmath.ln2 / 2
        return mpmath.ln2 - mpmath.log(mpmath.pi) / 2


def _check_index(m: int, name: str = "m") -> None:
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"{name} must be a positive integer, got {m!r}")


# ---------------------------------------------------------------------------
# C_m: balanced-split recursion

class RecursiveSequence:
    """Log-domain memo of C_m for one field/precision/threshold mode."""

    def __init__(self, field: Field, digits: int, p0_mode: P0Mode = "exact"):
        self.field = field
        self.digits = digits
        self.p0_mode = p0_mode
        self.logs: dict[int, mpmath.mpf] = {1: mpmath.mpf(0)}

    def _la(self, p: Fraction) -> mpmath.mpf:
        return log_a(p, self.field, self.digits, self.p0_mode)

    def log_value(self, m: int) -> mpmath.mpf:
        _check_index(m)
        # iterative: collect missing indices top-down, fill bottom-up
        todo, stack = [], [m]
        while stack:
            j = stack.pop()
            if j in self.logs or j in todo:
                continue
            todo.append(j)
            stack.extend((j // 2,) if j % 2 == 0 else ((j - 1) // 2, (j + 1) // 2))
        with mp.workdps(working_dps(self.digits)):
            for j in sorted(todo):
                self.logs[j] = self._step(j)
        return self.logs[m]

    def _step(self, m: int) -> mpmath.mpf:
        if m % 2 == 0:
            h = m // 2
            return self.logs[h] - h * self._la(Fraction(2 * m, m + 2))
        lo, hi = (m - 1) // 2, (m + 1) // 2
        first = _q(Fraction(-1 - m, 2)) * self._la(Fraction(2 * m - 2, m + 1)) + self.logs[lo]
        second = _q(Fraction(1 - m, 2)) * self._la(Fraction(2 * m + 2, m + 3)) + self.logs[hi]
        return _q(Fraction(m - 1, 2 * m)) * first + _q(Fraction(m + 1, 2 * m)) * second

    def value(self, m: int) -> HighPrecReal:
        lv = self.log_value(m)
        with mp.workdps(working_dps(self.digits)):
            return HighPrecReal(mpmath.exp(lv), self.digits)


def _q(r: Fraction) -> mpmath.mpf:
    return mpmath.mpf(r.numerator) / r.denominator


_ENGINES: dict[tuple, object] = {}
_ENGINES_LOCK = threading.Lock()


def _engine(key: tuple, factory):
    eng = _ENGINES.get(key)
    if eng is None:
        with _ENGINES_LOCK:
            eng = _ENGINES.setdefault(key, factory())
    return eng


def recursive_engine(field: Field, digits: int, p0_mode: P0Mode = "exact") -> RecursiveSequence:
    working_dps(digits)
    return _engine(("C", field, digits, p0_mode), lambda: RecursiveSequence(field, digits, p0_mode))


def c_recursive(m: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                p0_mode: P0Mode = "exact") -> HighPrecReal:
    """Best known constant from the balanced recursion; C_1 = 1 in both fields."""
    field = Field.parse(field)
    return recursive_engine(field, digits, p0_mode).value(m)


# ---------------------------------------------------------------------------
# M_n

def m_sequence(n: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """M_1 = 1, M_2 = C_2, M_n = D * M_ceil(n/2) for n >= 3."""
    field = Field.parse(field)
    _check_index(n, "n")
    with mp.workdps(working_dps(digits)):
        if n == 1:
            return HighPrecReal(mpmath.mpf(1), digits)
        steps = 0
        while n > 2:
            n = (n + 1) // 2
            steps += 1
        lv = _log_c2(field, digits) + steps * _log_d(field, digits)
        return HighPrecReal(mpmath.exp(lv), digits)


# ---------------------------------------------------------------------------
# J_n

class JSequence:
    def __init__(self, k0: int, field: Field, digits: int, seed_logs):
        self.k0 = k0
        self.cut = 2**k0
        self.field = field
        self.digits = digits
        self.seed_logs = seed_logs
        self.logs: dict[int, mpmath.mpf] = {}

    def log_value(self, n: int) -> mpmath.mpf:
        _check_index(n, "n")
        todo, stack = [], [n]
        while stack:
            j = stack.pop()
            if j in self.logs or j in todo:
                continue
            todo.append(j)
            if j > self.cut:
                stack.extend((j // 2,) if j % 2 == 0 else ((j - 1) // 2, (j + 1) // 2))
        ld = _log_d(self.field, self.digits)
        with mp.workdps(working_dps(self.digits)):
            for j in sorted(todo):
                if j <= self.cut:
                    self.logs[j] = self.seed_logs(j)
                elif j % 2 == 0:
                    self.logs[j] = ld + self.logs[j // 2]
                else:
                    lo, hi = (j - 1) // 2, (j + 1) // 2
                    self.logs[j] = (ld + _q(Fraction(j - 1, 2 * j)) * self.logs[lo]
                                    + _q(Fraction(j + 1, 2 * j)) * self.logs[hi])
        return self.logs[n]


def j_sequence(n: int, k0: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
               seed: str = "recursive", p0_mode: P0Mode = "exact") -> HighPrecReal:
    """J_n with cutoff 2**k0, seeded by the recursive (default) or exhaustive table."""
    field = Field.parse(field)
    _check_index(k0, "k0")
    working_dps(digits)
    if seed == "recursive":
        seed_logs = recursive_engine(field, digits, p0_mode).log_value
    elif seed == "exhaustive":
        from .search import exhaustive_engine

        seed_logs = exhaustive_engine(field, digits, p0_mode).log_value
    else:
        raise ValueError(f"unknown seed table {seed!r}")
    eng = _engine(("J", k0, field, digits, seed, p0_mode),
                  lambda: JSequence(k0, field, digits, seed_logs))
    lv = eng.log_value(n)
    with mp.workdps(working_dps(digits)):
        return HighPrecReal(mpmath.exp(lv), digits)


# ---------------------------------------------------------------------------
# tables

def build_table(strategy: Strategy | str, field: Field | str, max_m: int,
                digits: int = DEFAULT_DIGITS, k0: int | None = None,
                p0_mode: P0Mode = "exact") -> ConstantTable:
    """Materialize entries 1..max_m for any strategy."""
    strategy = Strategy(str(strategy))
    field = Field.parse(field)
    _check_index(max_m, "max_m")
    if strategy is Strategy.EXHAUSTIVE:
        from .search import exhaustive_table

        return exhaustive_table(max_m, field, digits, p0_mode)
    table = ConstantTable(field, strategy, digits, k0=k0, p0_mode=p0_mode)
    for m in range(1, max_m + 1):
        if strategy is Strategy.RECURSIVE:
            table.entries[m] = c_recursive(m, field, digits, p0_mode)
        elif strategy is Strategy.MSEQ:
            table.entries[m] = m_sequence(m, field, digits)
        else:
            if k0 is None:
                raise ValueError("the jseq strategy needs k0")
            table.entries[m] = j_sequence(m, k0, field, digits, p0_mode=p0_mode)
    return table


def clear_caches() -> None:
    with _ENGINES_LOCK:
        _ENGINES.clear()
    _log_d.cache_clear()

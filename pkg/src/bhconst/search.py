"""Exhaustive search over the split index k.

For each m the constant is the minimum over k of the interpolated candidate

    J(k, m) = (T_k A(r(k))^(k-m))^f(r(k), r(m-k)) * (T_{m-k} A(r(m-k))^(-k))^f(r(m-k), r(k))

where T is the table being built (it consumes its own earlier entries), r(k) =
2k/(1+k) and A is the real or complex Khinchine constant.  Since
f(r(k), r(m-k)) = k/m exactly, the engine works with log J as a rational
combination of cached logs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import DependencyError, DomainError
from .khinchine import P0Mode, _log_a_complex, _log_a_real, _threshold, log_a
from .numerics import DEFAULT_DIGITS, Field, HighPrecReal, to_mpf, working_dps
from .recursive import (
    ConstantTable,
    Strategy,
    _check_index,
    _engine,
    _log_c2,
    recursive_engine,
)


def comparison_tolerance(digits: int) -> mpmath.mpf:
    """Differences at or below this are treated as ties."""
    return mpmath.mpf(10) ** (-(digits - 10))


def r_exponent(k: int) -> Fraction:
    """r(k) = 2k / (1 + k), exact."""
    _check_index(k, "k")
    return Fraction(2 * k, 1 + k)


def f_interp(x, y):
    """(4x - 2xy) / (4x + 4y - 4xy) on [1, 2) x [1, 2).

    Exact for Fraction arguments; otherwise evaluated at the ambient mpmath precision.
    """
    if not (isinstance(x, Fraction) and isinstance(y, Fraction)):
        x, y = to_mpf(x), to_mpf(y)
    if not (1 <= x < 2 and 1 <= y < 2):
        raise DomainError("f_interp is defined on [1, 2) x [1, 2)")
    den = 4 * x + 4 * y - 4 * x * y
    if den == 0:
        raise DomainError("f_interp denominator vanishes")
    return (4 * x - 2 * x * y) / den


def standard_k(m: int) -> int:
    """Balanced split: m/2 (even) or (m-1)/2 (odd)."""
    return m // 2


def _q(r: Fraction) -> mpmath.mpf:
    return mpmath.mpf(r.numerator) / r.denominator


@dataclass(frozen=True)
class SearchResult:
    m: int
    field: Field
    p_value: HighPrecReal
    argmin_k: int | None
    standard_k: int | None
    c_value: HighPrecReal
    improved: bool
    difference: HighPrecReal  # C_m - P_m, signed


class ExhaustiveSearch:
    """Builds P_1, P_2, ... in order; each entry is committed once, after its minimum."""

    def __init__(self, field: Field, digits: int, p0_mode: P0Mode = "exact"):
        self.field = field
        self.digits = digits
        self.p0_mode = p0_mode
        self.tol = comparison_tolerance(digits)
        with mp.workdps(working_dps(digits)):
            self.logs: list[mpmath.mpf] = [mpmath.mpf(0), mpmath.mpf(0), _log_c2(field, digits)]
        self.argmin: list[int | None] = [None, None, 1]
        self._la: list[mpmath.mpf] = [mpmath.mpf(0)]

    @property
    def max_m(self) -> int:
        return len(self.logs) - 1

    def la(self, k: int) -> mpmath.mpf:
        while len(self._la) <= k:
            j = len(self._la)
            self._la.append(log_a(r_exponent(j), self.field, self.digits, self.p0_mode))
        return self._la[k]

    def log_candidate(self, k: int, m: int) -> mpmath.mpf:
        """log J(k, m) from the committed entries k and m - k."""
        L = self.logs
        return (k * (L[k] + (k - m) * self.la(k)) + (m - k) * (L[m - k] - k * self.la(m - k))) / m

    def log_candidates(self, m: int, full_range: bool = False) -> list[mpmath.mpf]:
        top = m - 1 if full_range else m // 2
        with mp.workdps(working_dps(self.digits)):
            self.la(m)
            return [self.log_candidate(k, m) for k in range(1, top + 1)]

    def _pick(self, m: int, cands: list[mpmath.mpf]) -> tuple[mpmath.mpf, int]:
        best = min(cands)
        std = standard_k(m)
        if cands[std - 1] - best <= self.tol:
            return best, std
        for k, v in enumerate(cands, start=1):
            if v - best <= self.tol:
                return best, k
        raise AssertionError("unreachable")

    def extend(self, max_m: int) -> None:
        while self.max_m < max_m:
            m = self.max_m + 1
            value, k = self._pick(m, self.log_candidates(m))
            self.logs.append(value)
            self.argmin.append(k)

    def log_value(self, m: int) -> mpmath.mpf:
        _check_index(m)
        self.extend(m)
        return self.logs[m]

    def value(self, m: int) -> HighPrecReal:
        lv = self.log_value(m)
        with mp.workdps(working_dps(self.digits)):
            return HighPrecReal(mpmath.exp(lv), self.digits)

    def seed_from(self, table: ConstantTable) -> int:
        """Adopt a prefix 1..n of a stored exhaustive table; returns n."""
        if table.field is not self.field or table.strategy is not Strategy.EXHAUSTIVE:
            raise DependencyError("seed table must be an exhaustive table of the same field")
        with mp.workdps(working_dps(self.digits)):
            m = self.max_m + 1
            while m in table.entries:
                self.logs.append(mpmath.log(table.entries[m].value))
                self.argmin.append(table.argmin.get(m))
                m += 1
        return self.max_m


def exhaustive_engine(field: Field, digits: int, p0_mode: P0Mode = "exact") -> ExhaustiveSearch:
    working_dps(digits)
    return _engine(("P", field, digits, p0_mode), lambda: ExhaustiveSearch(field, digits, p0_mode))


def j_candidate(k: int, m: int, field: Field | str = Field.REAL, table: ConstantTable | None = None,
                digits: int = DEFAULT_DIGITS, p0_mode: P0Mode = "exact",
                allow_upper_half: bool = False) -> HighPrecReal:
    """Candidate bound J(k, m), evaluated as the displayed product of powers.

    ``table`` supplies T_k and T_{m-k}; by default the exhaustive table itself.
    """
    field = Field.parse(field)
    _check_index(k, "k")
    _check_index(m)
    top = m - 1 if allow_upper_half else m // 2
    if not 1 <= k <= top:
        raise DomainError(f"k={k} outside 1..{top} for m={m}")
    if table is None:
        eng = exhaustive_engine(field, digits, p0_mode)
        eng.extend(m - 1)
        tk, tmk = eng.value(k).value, eng.value(m - k).value
    else:
        if k not in table or (m - k) not in table:
            raise DependencyError(f"table lacks entries {k} and/or {m - k}")
        tk, tmk = table[k].value, table[m - k].value
    with mp.workdps(working_dps(digits)):
        rk, rmk = r_exponent(k), r_exponent(m - k)
        ak = mpmath.exp(log_a(rk, field, digits, p0_mode))
        amk = mpmath.exp(log_a(rmk, field, digits, p0_mode))
        first = (tk * ak ** (k - m)) ** _q(f_interp(rk, rmk))
        second = (tmk * amk ** (-k)) ** _q(f_interp(rmk, rk))
        return HighPrecReal(first * second, digits)


def _result(eng: ExhaustiveSearch, m: int) -> SearchResult:
    c_log = recursive_engine(eng.field, eng.digits, eng.p0_mode).log_value(m)
    p_log = eng.log_value(m)
    with mp.workdps(working_dps(eng.digits)):
        p, c = mpmath.exp(p_log), mpmath.exp(c_log)
        diff = c - p
        return SearchResult(
            m=m,
            field=eng.field,
            p_value=HighPrecReal(p, eng.digits),
            argmin_k=eng.argmin[m],
            standard_k=standard_k(m) if m >= 2 else None,
            c_value=HighPrecReal(c, eng.digits),
            improved=bool(diff > eng.tol),
            difference=HighPrecReal(diff, eng.digits),
        )


def p_exhaustive(m: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                 p0_mode: P0Mode = "exact") -> SearchResult:
    """P_m with its argmin and the comparison against the balanced recursion."""
    field = Field.parse(field)
    _check_index(m)
    eng = exhaustive_engine(field, digits, p0_mode)
    eng.extend(m)
    return _result(eng, m)


def improvement_report(max_m: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                       p0_mode: P0Mode = "exact") -> list[SearchResult]:
    """SearchResult for m = 2..max_m."""
    field = Field.parse(field)
    if max_m < 2:
        raise DomainError("max_m must be at least 2")
    eng = exhaustive_engine(field, digits, p0_mode)
    eng.extend(max_m)
    return [_result(eng, m) for m in range(2, max_m + 1)]


def not_improved(results: list[SearchResult], lo: int = 2) -> list[int]:
    return [r.m for r in results if r.m >= lo and not r.improved]


def exhaustive_table(max_m: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                     p0_mode: P0Mode = "exact") -> ConstantTable:
    field = Field.parse(field)
    eng = exhaustive_engine(field, digits, p0_mode)
    eng.extend(max_m)
    table = ConstantTable(field, Strategy.EXHAUSTIVE, digits, p0_mode=p0_mode)
    for m in range(1, max_m + 1):
        table.entries[m] = eng.value(m)
        if eng.argmin[m] is not None:
            table.argmin[m] = eng.argmin[m]
    return table


@dataclass(frozen=True)
class HalfRangeLoss:
    m: int
    k: int
    margin: HighPrecReal  # P_m - J(k, m) > 0


def half_range_losses(max_m: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                      p0_mode: P0Mode = "exact") -> list[HalfRangeLoss]:
    """Where a split k > m/2 beats the half-range minimum (diagnostic only)."""
    field = Field.parse(field)
    eng = exhaustive_engine(field, digits, p0_mode)
    eng.extend(max_m)
    out = []
    for m in range(3, max_m + 1):
        cands = eng.log_candidates(m, full_range=True)
        with mp.workdps(working_dps(digits)):
            upper = cands[m // 2:]
            best = min(upper)
            k = m // 2 + 1 + upper.index(best)
            margin = mpmath.exp(eng.logs[m]) - mpmath.exp(best)
            if margin > eng.tol:
                out.append(HalfRangeLoss(m, k, HighPrecReal(margin, digits)))
    return out


def doubling_gap(base_m: int, doublings: int, digits: int = DEFAULT_DIGITS,
                 p0_mode: P0Mode = "exact", field: Field | str = Field.REAL) -> HighPrecReal:
    """Lower bound on C_M - P_M for M = base_m * 2**doublings.

    Uses C_{2s} = A(r(s))^(-s) C_s and P_{2s} <= A(r(s))^(-s) P_s, so each
    doubling multiplies the gap by at least A(r(s))^(-s).
    """
    field = Field.parse(field)
    _check_index(base_m, "base_m")
    if not isinstance(doublings, int) or doublings < 0:
        raise DomainError("doublings must be a non-negative integer")
    res = p_exhaustive(base_m, field, digits, p0_mode)
    if not res.difference.value > comparison_tolerance(digits):
        raise DomainError(f"no gap at m={base_m}: C_m - P_m is not positive")
    s_max = base_m * 2 ** max(doublings - 1, 0)
    # r(s) sits within 2/s of 2; carry enough extra digits to resolve A(r(s)) - 1
    extra = len(str(s_max))
    with mp.workdps(working_dps(digits) + extra):
        thr = _threshold(digits, p0_mode)
        log_gap = mpmath.log(res.difference.value)
        s = base_m
        for _ in range(doublings):
            p = _q(r_exponent(s))
            la = _log_a_real(p, thr) if field is Field.REAL else _log_a_complex(p)
            log_gap -= s * la
            s *= 2
        gap = mpmath.exp(log_gap)
    with mp.workdps(working_dps(digits)):
        return HighPrecReal(+gap, digits)


def amplification_factor(s: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                         p0_mode: P0Mode = "exact") -> HighPrecReal:
    """A(r(s))^(-s), the per-doubling growth of the gap."""
    field = Field.parse(field)
    _check_index(s, "s")
    with mp.workdps(working_dps(digits) + len(str(s))):
        p = _q(r_exponent(s))
        la = _log_a_real(p, _threshold(digits, p0_mode)) if field is Field.REAL else _log_a_complex(p)
        v = mpmath.exp(-s * la)
    with mp.workdps(working_dps(digits)):
        return HighPrecReal(+v, digits)


def first_improvement(results: list[SearchResult]) -> int | None:
    return next((r.m for r in results if r.improved), None)


__all__ = [
    "ExhaustiveSearch",
    "HalfRangeLoss",
    "SearchResult",
    "amplification_factor",
    "comparison_tolerance",
    "doubling_gap",
    "exhaustive_engine",
    "exhaustive_table",
    "f_interp",
    "first_improvement",
    "half_range_losses",
    "improvement_report",
    "j_candidate",
    "not_improved",
    "p_exhaustive",
    "r_exponent",
    "standard_k",
]

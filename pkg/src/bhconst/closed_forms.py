"""Non-recursive bound families and the trivial lower bounds.

All exponents are evaluated exactly (log2 D from the Euler-Mascheroni
constant); the published decimal exponents are kept only as ceilings to check
against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mp

from .errors import DomainError
from .khinchine import P0Mode
from .numerics import DEFAULT_DIGITS, Field, HighPrecReal, _loggamma, euler_gamma, working_dps
from .recursive import _log_c2, _log_d, c_recursive

#: published decimal ceilings of log2(D)
PUBLISHED_EXPONENT = {Field.REAL: "0.526322", Field.COMPLEX: "0.304975"}

#: 2 ** (this - m/2) leads the real product bound for m >= 14
REAL_PRODUCT_OFFSET = Fraction(446381, 55440)
REAL_PRODUCT_SWITCH = 14


class FamilyName(enum.Enum):
    RECURSIVE = "recursive"
    EXHAUSTIVE = "exhaustive"
    POWER_S4 = "power"
    LARGE_N_S5 = "large_n"
    PRODUCT_REMARK = "product"
    LOWER = "lower"


@dataclass(frozen=True)
class BoundFamily:
    """A named bound n -> value with its domain of validity."""

    name: FamilyName
    field: Field
    evaluate: Callable[[int], HighPrecReal]
    min_n: int = 2
    k0: int | None = None
    upper: bool = True

    @property
    def label(self) -> str:
        if self.name is FamilyName.LARGE_N_S5:
            return f"large_n(k0={self.k0})"
        return self.name.value

    def applies(self, n: int) -> bool:
        return n >= self.min_n


def _hp(x: mpmath.mpf, digits: int) -> HighPrecReal:
    return HighPrecReal(+x, digits)


def log2_d(field: Field | str, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Growth exponent log2(D) of the power-law bounds."""
    field = Field.parse(field)
    with mp.workdps(working_dps(digits)):
        return _hp(_log_d(field, digits) / mpmath.ln2, digits)


def power_bound(n: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """C_2 * (n-1)**log2(D): sqrt(2)(n-1)^... (real), (2/sqrt(pi))(n-1)^... (complex)."""
    field = Field.parse(field)
    if not isinstance(n, int) or n < 2:
        raise DomainError("power_bound needs n >= 2")
    with mp.workdps(working_dps(digits)):
        e = _log_d(field, digits) / mpmath.ln2
        return _hp(mpmath.exp(_log_c2(field, digits) + e * mpmath.log(n - 1)), digits)


def power_bound_published(n: int, field: Field | str = Field.REAL,
                          digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Same bound with the published decimal exponent (weaker, since the exponent is a ceiling)."""
    field = Field.parse(field)
    if not isinstance(n, int) or n < 2:
        raise DomainError("power_bound needs n >= 2")
    with mp.workdps(working_dps(digits)):
        e = mpmath.mpf(PUBLISHED_EXPONENT[field])
        return _hp(mpmath.exp(_log_c2(field, digits) + e * mpmath.log(n - 1)), digits)


def gt_estimate(k0: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """The estimate C_{2^k0} <= 4 D**(k0 - 4), valid for k0 >= 4 (real)."""
    field = Field.parse(field)
    with mp.workdps(working_dps(digits)):
        return _hp(4 * mpmath.exp((k0 - 4) * _log_d(field, digits)), digits)


def large_n_coefficient(k0: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                        use_gt: bool = False, p0_mode: P0Mode = "exact") -> HighPrecReal:
    """C_{2^k0} / D**(k0 - 1); with ``use_gt`` the estimate 4 D**(k0-4) replaces C_{2^k0}."""
    field = Field.parse(field)
    if not isinstance(k0, int) or k0 < 1:
        raise DomainError("k0 must be a positive integer")
    if use_gt and k0 < 4:
        raise DomainError("the 4 D**(k0-4) estimate needs k0 >= 4")
    with mp.workdps(working_dps(digits)):
        ld = _log_d(field, digits)
        if use_gt:
            lc = mpmath.log(4) + (k0 - 4) * ld
        else:
            lc = mpmath.log(c_recursive(2**k0, field, digits, p0_mode).value)
        return _hp(mpmath.exp(lc - (k0 - 1) * ld), digits)


def large_n_bound(n: int, k0: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS,
                  use_gt: bool = False, p0_mode: P0Mode = "exact") -> HighPrecReal:
    """coefficient(k0) * (n-1)**log2(D), valid for n > 2**k0."""
    field = Field.parse(field)
    if n <= 2**k0:
        raise DomainError(f"large-n bound with k0={k0} needs n > {2**k0}")
    coef = large_n_coefficient(k0, field, digits, use_gt, p0_mode)
    with mp.workdps(working_dps(digits)):
        e = _log_d(field, digits) / mpmath.ln2
        return _hp(coef.value * mpmath.exp(e * mpmath.log(n - 1)), digits)


def _log_product_factor(j: int, field: Field) -> mpmath.mpf:
    """log of the j-th factor of the product bound (real factor for j >= 14 excludes 2^(-1/2))."""
    w = mpmath.mpf(-j) / (2 * j - 2)
    if field is Field.COMPLEX:
        return w * _loggamma(2 - mpmath.mpf(1) / j)
    return w * (_loggamma(mpmath.mpf(3) / 2 - mpmath.mpf(1) / j) - mpmath.log(mpmath.pi) / 2)


def product_bound(m: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Gamma-product bounds.

    complex:          prod_{j=2..m} Gamma(2 - 1/j)**(-j/(2j-2))
    real, m <= 13:    prod_{j=2..m} 2**(1/(2j-2))
    real, m >= 14:    2**(446381/55440 - m/2) prod_{j=14..m} (Gamma(3/2 - 1/j)/sqrt(pi))**(-j/(2j-2))
    """
    return product_bounds(m, field, digits)[m]


def product_bounds(max_m: int, field: Field | str = Field.REAL,
                   digits: int = DEFAULT_DIGITS) -> dict[int, HighPrecReal]:
    """product_bound for every m in 2..max_m in one cumulative pass."""
    field = Field.parse(field)
    if not isinstance(max_m, int) or max_m < 2:
        raise DomainError("product_bound needs m >= 2")
    out = {}
    with mp.workdps(working_dps(digits)):
        acc = mpmath.mpf(0)  # running log-product
        for m in range(2, max_m + 1):
            if field is Field.COMPLEX:
                acc += _log_product_factor(m, field)
                lv = acc
            elif m < REAL_PRODUCT_SWITCH:
                acc += mpmath.ln2 / (2 * m - 2)
                lv = acc
            else:
                if m == REAL_PRODUCT_SWITCH:
                    acc = mpmath.mpf(0)
                acc += _log_product_factor(m, field)
                off = REAL_PRODUCT_OFFSET - Fraction(m, 2)
                lv = (mpmath.mpf(off.numerator) / off.denominator) * mpmath.ln2 + acc
            out[m] = _hp(mpmath.exp(lv), digits)
    return out


def lower_bound(n: int, field: Field | str = Field.REAL, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """2**(1 - 1/n) for real scalars, 1 for complex."""
    field = Field.parse(field)
    if not isinstance(n, int) or n < 1:
        raise DomainError("lower_bound needs n >= 1")
    with mp.workdps(working_dps(digits)):
        if field is Field.COMPLEX:
            return _hp(mpmath.mpf(1), digits)
        return _hp(mpmath.mpf(2) ** (1 - mpmath.mpf(1) / n), digits)


def asymptotic_exponent(field: Field | str, digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Exponent of the n**e growth attached to the product bounds: (1-g)/2 complex, (2-g-ln2)/2 real."""
    field = Field.parse(field)
    with mp.workdps(working_dps(digits)):
        g = euler_gamma(digits).value
        e = (1 - g) / 2 if field is Field.COMPLEX else (2 - g - mpmath.ln2) / 2
        return _hp(e, digits)


def fitted_product_exponent(field: Field | str = Field.REAL, m_lo: int = 250, m_hi: int = 500,
                            digits: int = DEFAULT_DIGITS) -> HighPrecReal:
    """Log-log slope of product_bound between m_lo and m_hi (diagnostic)."""
    field = Field.parse(field)
    pb = product_bounds(m_hi, field, digits)
    with mp.workdps(working_dps(digits)):
        s = (mpmath.log(pb[m_hi].value) - mpmath.log(pb[m_lo].value)) / (mpmath.log(m_hi) - mpmath.log(m_lo))
        return _hp(s, digits)


def bound_families(field: Field | str, digits: int = DEFAULT_DIGITS, k0s: tuple[int, ...] = (4,),
                   p0_mode: P0Mode = "exact", include_exhaustive: bool = True) -> list[BoundFamily]:
    """Every implemented family for one field, upper bounds first, LOWER last."""
    from .search import exhaustive_engine

    field = Field.parse(field)
    fams = [BoundFamily(FamilyName.RECURSIVE, field,
                        lambda n: c_recursive(n, field, digits, p0_mode), min_n=1)]
    if include_exhaustive:
        eng = exhaustive_engine(field, digits, p0_mode)
        fams.append(BoundFamily(FamilyName.EXHAUSTIVE, field, eng.value, min_n=1))
    fams.append(BoundFamily(FamilyName.POWER_S4, field, lambda n: power_bound(n, field, digits)))
    for k0 in k0s:
        # the 4 D^(k0-4) shortcut is a real-field statement; complex uses the exact C
        fams.append(BoundFamily(
            FamilyName.LARGE_N_S5, field,
            lambda n, k0=k0: large_n_bound(n, k0, field, digits, p0_mode=p0_mode),
            min_n=2**k0 + 1, k0=k0))
    products: dict[int, HighPrecReal] = {}

    def product(n: int) -> HighPrecReal:
        if n not in products:
            products.update(product_bounds(max(n, 2 * max(products, default=1)), field, digits))
        return products[n]

    fams.append(BoundFamily(FamilyName.PRODUCT_REMARK, field, product))
    fams.append(BoundFamily(FamilyName.LOWER, field, lambda n: lower_bound(n, field, digits),
                            min_n=1, upper=False))
    return fams


def pointwise_min(n: int, families: list[BoundFamily]) -> tuple[BoundFamily, HighPrecReal]:
    """Tightest upper family at n."""
    best = None
    for fam in families:
        if not fam.upper or not fam.applies(n):
            continue
        v = fam.evaluate(n)
        if best is None or v.value < best[1].value:
            best = (fam, v)
    if best is None:
        raise DomainError(f"no upper family applies at n={n}")
    return best


def product_crossover(field: Field | str, max_m: int = 500, digits: int = DEFAULT_DIGITS,
                      p0_mode: P0Mode = "exact") -> int | None:
    """Smallest m* such that product_bound(m) < P_m for every m in m*..max_m."""
    from .search import exhaustive_engine

    field = Field.parse(field)
    pb = product_bounds(max_m, field, digits)
    eng = exhaustive_engine(field, digits, p0_mode)
    eng.extend(max_m)
    m_star = None
    for m in range(max_m, 1, -1):
        if pb[m].value < eng.value(m).value:
            m_star = m
        else:
            break
    return m_star

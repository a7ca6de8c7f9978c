from fractions import Fraction

import mpmath
import pytest

import oracles
from bhconst.closed_forms import (
    REAL_PRODUCT_OFFSET,
    FamilyName,
    asymptotic_exponent,
    bound_families,
    fitted_product_exponent,
    gt_estimate,
    large_n_bound,
    large_n_coefficient,
    log2_d,
    lower_bound,
    pointwise_min,
    power_bound,
    power_bound_published,
    product_bound,
    product_bounds,
    product_crossover,
)
from bhconst.errors import DomainError
from bhconst.numerics import Field
from bhconst.recursive import c_recursive, m_sequence
from bhconst.search import p_exhaustive

TOL = mpmath.mpf(10) ** -90


def close(a, b, tol=TOL):
    with mpmath.workdps(120):
        return abs(a - b) <= tol * max(1, abs(b))


def test_log2_d_below_published_ceilings():
    assert log2_d(Field.REAL) < Fraction("0.526322")
    assert log2_d(Field.COMPLEX) < Fraction("0.304975")
    assert log2_d(Field.REAL).lower(6) == "0.526321"
    assert log2_d(Field.COMPLEX).lower(6) == "0.304974"


def test_power_bound_anchors():
    with mpmath.workdps(120):
        assert close(power_bound(2, Field.REAL).value, mpmath.sqrt(2))
        assert close(power_bound(2, Field.COMPLEX).value, 2 / mpmath.sqrt(mpmath.pi))
    with pytest.raises(DomainError):
        power_bound(1)


@pytest.mark.parametrize("field", list(Field))
def test_power_bound_dominates_m(field):
    for n in range(2, 501):
        assert oracles.le(m_sequence(n, field, 40).value, power_bound(n, field, 40).value)
        assert power_bound(n, field, 40) <= power_bound_published(n, field, 40)


def test_gt_k0_4_is_tight():
    # C_16 = 4 exactly, so the estimate is an equality at k0 = 4
    assert close(c_recursive(16).value, mpmath.mpf(4))
    for k0 in range(5, 13):
        assert c_recursive(2**k0) < gt_estimate(k0)


def test_large_n_coefficients():
    assert large_n_coefficient(4, use_gt=True) < Fraction("1.338887")
    with mpmath.workdps(60):
        assert close(large_n_coefficient(4, use_gt=True).value, 4 / oracles.D() ** 3, mpmath.mpf(10) ** -50)
    for k0, ceiling in ((6, "1.310883"), (7, "1.306156"), (8, "1.303787")):
        assert large_n_coefficient(k0) < Fraction(ceiling)
    assert large_n_coefficient(3, Field.COMPLEX) < Fraction("1.029610")
    assert large_n_coefficient(6, Field.COMPLEX) < Fraction("0.996322")
    coefs = [large_n_coefficient(k0).value for k0 in range(4, 10)]
    assert all(b <= a for a, b in zip(coefs, coefs[1:]))
    with pytest.raises(DomainError):
        large_n_coefficient(3, use_gt=True)


def test_large_n_bound_domain():
    with pytest.raises(DomainError):
        large_n_bound(16, 4)
    assert large_n_bound(17, 4) > 0


def test_product_bound_small_values():
    with mpmath.workdps(120):
        assert close(product_bound(2, Field.REAL).value, mpmath.sqrt(2))
        assert close(product_bound(2, Field.COMPLEX).value, 2 / mpmath.sqrt(mpmath.pi))
        h12 = sum(Fraction(1, j) for j in range(1, 13))
        assert close(product_bound(13, Field.REAL).value, mpmath.mpf(2) ** (mpmath.mpf(h12.numerator) / h12.denominator / 2))


def test_product_regime_switch():
    h12 = sum(Fraction(1, j) for j in range(1, 13))
    # the rational offset is the small-m exponent plus 13/2
    assert REAL_PRODUCT_OFFSET == h12 / 2 + Fraction(13, 2)
    with mpmath.workdps(120):
        ratio = product_bound(14).value / product_bound(13).value
        pi = mpmath.pi
        want = ((mpmath.gamma(mpmath.mpf(3) / 2 - mpmath.mpf(1) / 14) / mpmath.sqrt(pi)) ** (-mpmath.mpf(14) / 26)
                * mpmath.mpf(2) ** (-mpmath.mpf(1) / 2))
        assert close(ratio, want)


@pytest.mark.parametrize("field", list(Field))
def test_product_bound_literal(field):
    pb = product_bounds(60, field, 50)
    with mpmath.workdps(70):
        for m in (2, 5, 13, 14, 15, 40, 60):
            if field is Field.COMPLEX:
                want = mpmath.fprod(mpmath.gamma(2 - mpmath.mpf(1) / j) ** (-mpmath.mpf(j) / (2 * j - 2))
                                    for j in range(2, m + 1))
            elif m <= 13:
                want = mpmath.fprod(mpmath.mpf(2) ** (mpmath.mpf(1) / (2 * j - 2)) for j in range(2, m + 1))
            else:
                off = REAL_PRODUCT_OFFSET - Fraction(m, 2)
                want = mpmath.mpf(2) ** (mpmath.mpf(off.numerator) / off.denominator) * mpmath.fprod(
                    (mpmath.gamma(mpmath.mpf(3) / 2 - mpmath.mpf(1) / j) / mpmath.sqrt(mpmath.pi))
                    ** (-mpmath.mpf(j) / (2 * j - 2)) for j in range(14, m + 1))
            assert close(pb[m].value, want, mpmath.mpf(10) ** -45)
            assert pb[m] == product_bound(m, field, 50)


def test_lower_bound():
    with mpmath.workdps(120):
        assert close(lower_bound(2, Field.REAL).value, mpmath.sqrt(2))
    assert lower_bound(1, Field.REAL) == 1
    assert all(lower_bound(n, Field.COMPLEX) == 1 for n in (1, 7, 500))


@pytest.mark.parametrize("field", list(Field))
def test_sandwich_and_family_dominance(field):
    fams = bound_families(field, 40, (4, 6))
    for n in range(2, 200):
        low = lower_bound(n, field, 40).value
        assert oracles.le(low, p_exhaustive(n, field, 40).p_value.value)
        for fam in fams:
            if fam.upper and fam.applies(n):
                assert oracles.le(low, fam.evaluate(n).value)


def test_pointwise_min():
    fams = bound_families(Field.REAL, 40, (4,))
    fam, v = pointwise_min(3, fams)
    assert fam.name is FamilyName.PRODUCT_REMARK and v == product_bound(3, Field.REAL, 40)
    with pytest.raises(DomainError):
        pointwise_min(3, [f for f in fams if not f.upper])


def test_crossover_exists():
    for field in Field:
        assert product_crossover(field, 500) == 3


def test_fitted_exponent_diagnostic():
    for field in Field:
        fit = fitted_product_exponent(field).value
        assert abs(fit - asymptotic_exponent(field).value) < mpmath.mpf("0.05")

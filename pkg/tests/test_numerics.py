import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bhconst.errors import BracketError, DomainError, PrecisionConfigError
from bhconst.numerics import (
    HighPrecReal,
    bernoulli_even,
    bisect_bracket,
    check_digits,
    euler_gamma,
    find_root_increasing,
    gamma,
    hp,
    loggamma,
    working_dps,
)


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("x", ["0.5", "1.5", "5/3", "2", "3.25", "17.125", "123.456", "1e30", "1e-5"])
def test_gamma_matches_reference(x, mp_oracle):
    xv = mp_oracle.mpf(Fraction(x).numerator) / Fraction(x).denominator
    got = gamma(Fraction(x), 100).value
    assert rel(got, mp_oracle.gamma(xv)) < mpmath.mpf(10) ** -100


def test_gamma_small_integers_are_factorials():
    for n in range(1, 30):
        assert gamma(n, 100) == math.factorial(n - 1)


def test_gamma_half_is_sqrt_pi(mp_oracle):
    assert rel(gamma(Fraction(1, 2), 100).value, mp_oracle.sqrt(mp_oracle.pi)) < mpmath.mpf(10) ** -100


def test_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        gamma(0)
    with pytest.raises(DomainError):
        gamma(-1.5)


@given(st.fractions(min_value=Fraction(1, 100), max_value=60, max_denominator=1000))
def test_gamma_recurrence(x):
    with mpmath.workdps(110):
        a = gamma(x + 1, 100).value
        b = mpmath.mpf(x.numerator) / x.denominator * gamma(x, 100).value
        assert rel(a, b) < mpmath.mpf(10) ** -98


@given(st.fractions(min_value=Fraction(1, 10), max_value=40, max_denominator=100))
def test_loggamma_consistent(x):
    with mpmath.workdps(110):
        assert rel(mpmath.exp(loggamma(x, 100).value), gamma(x, 100).value) < mpmath.mpf(10) ** -98


def _bernoulli_recurrence(n):
    # sum_{j<=m} C(m+1, j) B_j = 0
    from math import comb

    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B


def test_bernoulli_against_recurrence():
    B = _bernoulli_recurrence(60)
    for k in range(1, 31):
        assert bernoulli_even(k) == B[2 * k]


def test_euler_gamma(mp_oracle):
    assert str(euler_gamma(20).decimal())[:22] == "0.57721566490153286060"
    for digits in (20, 100, 120):
        assert rel(euler_gamma(digits).value, mp_oracle.euler) < mpmath.mpf(10) ** -digits


def test_euler_gamma_frozen_prefix():
    assert euler_gamma(30).lower(20) == "0.57721566490153286060"
    assert euler_gamma(30).upper(20) == "0.57721566490153286061"


def test_find_root_increasing():
    root = find_root_increasing(lambda x: x * x - 2, 1, 2, 100)
    with mpmath.workdps(110):
        assert abs(root.value - mpmath.sqrt(2)) < mpmath.mpf(10) ** -100


def test_bisect_bracket_errors():
    with mpmath.workdps(30):
        with pytest.raises(BracketError):
            bisect_bracket(lambda x: x * x + 1, mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf("1e-20"))
        lo, hi = bisect_bracket(lambda x: 1 - x, mpmath.mpf(0), mpmath.mpf(3), mpmath.mpf("1e-20"))
        assert lo <= 1 <= hi and hi - lo <= mpmath.mpf("1e-20")


def test_digits_validation():
    with pytest.raises(PrecisionConfigError):
        check_digits(5)
    assert working_dps(100) == 110


def test_directed_rounding():
    x = hp(Fraction(2, 3), 30)
    assert x.upper(6) == "0.666667"
    assert x.lower(6) == "0.666666"
    y = hp(Fraction(-2, 3), 30)
    assert y.upper(6) == "-0.666666"
    assert y.lower(6) == "-0.666667"
    assert hp(12345.678, 30).upper_sig(3) == "1.24e+4"


def test_high_prec_real_ordering():
    a, b = hp(1, 30), hp(Fraction(3, 2), 30)
    assert a < b and b > 1 and a == 1
    assert isinstance(a, HighPrecReal)


def test_results_do_not_depend_on_ambient_precision():
    # every public value must carry its own precision, whatever mp.dps the caller left behind
    with mpmath.workdps(15):
        values = {"euler": euler_gamma(100), "gamma": gamma(Fraction(1, 3), 100)}
    with mpmath.workdps(130):
        assert rel(values["euler"].value, mpmath.euler) < mpmath.mpf(10) ** -100
        assert rel(values["gamma"].value, mpmath.gamma(mpmath.mpf(1) / 3)) < mpmath.mpf(10) ** -100

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from bhconst.errors import DependencyError, DomainError
from bhconst.numerics import Field
from bhconst.recursive import c_recursive
from bhconst.search import (
    amplification_factor,
    doubling_gap,
    exhaustive_table,
    f_interp,
    first_improvement,
    half_range_losses,
    improvement_report,
    j_candidate,
    p_exhaustive,
    r_exponent,
    standard_k,
)

TOL = mpmath.mpf(10) ** -45


def test_f_exact_values():
    assert f_interp(r_exponent(1), r_exponent(2)) == Fraction(1, 3)
    assert f_interp(Fraction(1), Fraction(1)) == Fraction(1, 2)
    with pytest.raises(DomainError):
        f_interp(Fraction(2), Fraction(1))


@given(st.fractions(min_value=1, max_value=Fraction(1999, 1000)),
       st.fractions(min_value=1, max_value=Fraction(1999, 1000)))
def test_f_symmetry(x, y):
    assert f_interp(x, y) + f_interp(y, x) == 1


@given(st.integers(1, 400), st.integers(1, 400))
def test_f_at_r_is_weight(k, j):
    # splitting m = k + j, the weight of the k-part is k/m
    assert f_interp(r_exponent(k), r_exponent(j)) == Fraction(k, k + j)


@pytest.mark.parametrize("field", ["real", "complex"])
def test_p_against_literal_search(field):
    for m in range(1, 45):
        assert abs(p_exhaustive(m, field, 50).p_value.value - oracles.P(m, field)) < TOL * oracles.P(m, field)


def test_j_candidate_matches_search():
    for m in (5, 26, 40):
        res = p_exhaustive(m, Field.REAL, 50)
        cands = [j_candidate(k, m, Field.REAL, digits=50).value for k in range(1, m // 2 + 1)]
        assert abs(min(cands) - res.p_value.value) < TOL * res.p_value.value
        assert abs(cands[res.argmin_k - 1] - res.p_value.value) < TOL * res.p_value.value


def test_j_candidate_domain_and_table():
    with pytest.raises(DomainError):
        j_candidate(20, 26)
    j_candidate(20, 26, allow_upper_half=True)
    table = exhaustive_table(10, Field.REAL, 40)
    with pytest.raises(DependencyError):
        j_candidate(3, 20, Field.REAL, table=table, digits=40)
    assert j_candidate(5, 10, Field.REAL, table=table, digits=40) >= p_exhaustive(10, Field.REAL, 40).p_value


def test_standard_split():
    assert [standard_k(m) for m in (2, 3, 26, 27)] == [1, 1, 13, 13]


def test_published_improvements():
    rows = {r.m: r for r in improvement_report(100, Field.REAL)}
    assert rows[26].p_value < 5.22772 and rows[26].c_value > 5.22825
    assert rows[100].p_value < 10.509 and rows[100].c_value > 10.510
    assert first_improvement(list(rows.values())) == 26
    assert rows[26].argmin_k != rows[26].standard_k


def test_never_worse_than_recursion():
    for field in Field:
        for r in improvement_report(200, field, 40):
            assert r.difference.value > -mpmath.mpf(10) ** -35


def test_complex_no_improvement():
    assert not any(r.improved for r in improvement_report(200, Field.COMPLEX, 40))


def test_tie_prefers_standard_split():
    # below 26 every candidate ties with the balanced split or loses to it
    for r in improvement_report(25, Field.REAL):
        assert r.argmin_k == r.standard_k
        assert abs(r.difference.value) < mpmath.mpf(10) ** -90


def test_half_range_is_enough():
    assert half_range_losses(80, Field.REAL, 40) == []


def test_doubling_gap():
    g0 = p_exhaustive(26).difference
    assert doubling_gap(26, 0) == g0
    g = [doubling_gap(26, d, 40).value for d in range(0, 30)]
    assert all(b > a for a, b in zip(g, g[1:]))
    assert doubling_gap(26, 50) > 3450
    with pytest.raises(DomainError):
        doubling_gap(25, 3)


def test_amplification_factor_increasing():
    vals = [amplification_factor(s, Field.REAL, 40).value for s in range(13, 300)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v >= 1 for v in vals)


def test_search_and_recursion_share_c():
    assert p_exhaustive(26).c_value == c_recursive(26)

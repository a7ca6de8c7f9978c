import mpmath
import pytest

import oracles
from bhconst.errors import DependencyError, DomainError, PrecisionConfigError
from bhconst.numerics import Field
from bhconst.recursive import (
    ConstantTable,
    Strategy,
    build_table,
    c_recursive,
    d_constant,
    j_sequence,
    m_sequence,
)

TOL = mpmath.mpf(10) ** -45


@pytest.mark.parametrize("field", ["real", "complex"])
def test_c_against_literal_recursion(field):
    for m in range(1, 70):
        assert abs(c_recursive(m, field, 50).value - oracles.C(m, field)) < TOL * oracles.C(m, field)


def test_anchors():
    with mpmath.workdps(110):
        assert abs(c_recursive(2, Field.REAL).value - mpmath.sqrt(2)) < mpmath.mpf(10) ** -100
        assert abs(c_recursive(2, Field.COMPLEX).value - 2 / mpmath.sqrt(mpmath.pi)) < mpmath.mpf(10) ** -100
    assert c_recursive(1, Field.REAL) == 1
    assert c_recursive(1, Field.COMPLEX) == 1
    assert c_recursive(26) > 5.22825
    assert c_recursive(16) == 4


def test_d_constants():
    with mpmath.workdps(120):
        assert abs(d_constant("real").value - mpmath.exp(1 - mpmath.euler / 2) / mpmath.sqrt(2)) < mpmath.mpf(10) ** -100
        assert abs(d_constant("complex").value - mpmath.exp((1 - mpmath.euler) / 2)) < mpmath.mpf(10) ** -100


@pytest.mark.parametrize("field", ["real", "complex"])
def test_m_sequence(field):
    for n in range(1, 200):
        assert abs(m_sequence(n, field, 50).value - oracles.M(n, field)) < TOL * oracles.M(n, field)


@pytest.mark.parametrize("k0", [2, 3, 4])
def test_j_sequence(k0):
    for n in range(1, 150):
        want = oracles.J(n, k0)
        assert abs(j_sequence(n, k0, Field.REAL, 50).value - want) < TOL * want


def test_j_base_branch_is_c():
    for n in range(1, 65):
        assert j_sequence(n, 6, Field.REAL, 40) == c_recursive(n, Field.REAL, 40)


@pytest.mark.parametrize("k0", [4, 6, 8])
def test_j_nondecreasing(k0):
    vals = [j_sequence(n, k0, Field.REAL, 40).value for n in range(1, 501)]
    assert all(oracles.le(a, b) for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("field", ["real", "complex"])
def test_c_nondecreasing(field):
    vals = [c_recursive(m, field, 40).value for m in range(1, 501)]
    assert all(oracles.le(a, b) for a, b in zip(vals, vals[1:]))


def test_exhaustive_seed_for_j_is_no_larger():
    for n in (100, 300, 500):
        assert j_sequence(n, 6, Field.REAL, 40, seed="exhaustive") <= j_sequence(n, 6, Field.REAL, 40)


def test_build_table_strategies():
    for strategy in Strategy:
        t = build_table(strategy, Field.REAL, 40, 30, k0=4 if strategy is Strategy.JSEQ else None)
        assert len(t) == 40 and t.max_m == 40
        assert isinstance(t, ConstantTable)
    with pytest.raises(DependencyError):
        build_table(Strategy.RECURSIVE, Field.REAL, 5, 30)[6]


def test_errors():
    with pytest.raises(DomainError):
        c_recursive(0)
    with pytest.raises(PrecisionConfigError):
        c_recursive(4, Field.REAL, 10)

"""Reproduction checks behind ``bhconst report``.

Each check returns a :class:`Check`; ``run_all`` executes them in order.  The
thresholds are the published table values, pinned here.
"""

from __future__ import annotations

import random
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
from mpmath import mp

from . import cache, closed_forms, khinchine, recursive, search
from .numerics import DEFAULT_DIGITS, Field, gamma, working_dps
from .verifier import MultilinearForm, bh_ratio, kahane_form

#: m -> (P_m strictly below, C_m strictly above)
IMPROVEMENT_TABLE = {
    26: ("5.22772", "5.22825"),
    27: ("5.31314", "5.31447"),
    28: ("5.39343", "5.39626"),
    29: ("5.47164", "5.47314"),
    100: ("10.509", "10.510"),
}
EXCEPTIONS_27_500 = [31, 32, 33, 47, 48, 49, 63, 64, 65, 95, 96, 97, 127, 128, 129,
                     191, 192, 193, 255, 256, 257, 383, 384, 385]
GAP_TABLE = {50: "3450", 100: "1.19e11", 150: "4.10e18"}
# (field, k0) -> published ceiling of C_{2^k0} / D^(k0-1)
LARGE_N_TABLE = {
    (Field.REAL, 6): "1.310883",
    (Field.REAL, 7): "1.306156",
    (Field.REAL, 8): "1.303787",
    (Field.COMPLEX, 3): "1.029610",
    (Field.COMPLEX, 6): "0.996322",
}
LARGE_N_OPTIONAL = {(Field.COMPLEX, 15): "0.991365"}
GT_CEILING = "1.338887"
COMPLEX_AGREEMENT = "1e-80"
VERIFIER_SLACK = "1e-20"
MAX_M = 500


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    passed: bool
    detail: str


def _mpf(s: str) -> mpmath.mpf:
    with mp.workdps(130):
        return mpmath.mpf(s)


def check_improvement_table(digits: int = DEFAULT_DIGITS) -> Check:
    bad, shown = [], []
    for m, (p_up, c_lo) in IMPROVEMENT_TABLE.items():
        r = search.p_exhaustive(m, Field.REAL, digits)
        ok = r.p_value.value < _mpf(p_up) and r.c_value.value > _mpf(c_lo)
        shown.append(f"m={m}: P<{r.p_value.upper(6)} C>{r.c_value.lower(6)}")
        if not ok:
            bad.append(m)
    return Check(1, "improvement table (m=26..29, 100)", not bad,
                 "; ".join(shown) + (f"; FAILED rows {bad}" if bad else ""))


def check_exception_list(digits: int = DEFAULT_DIGITS) -> Check:
    rs = search.improvement_report(MAX_M, Field.REAL, digits)
    got = search.not_improved(rs, 27)
    first = search.first_improvement(rs)
    ok = got == EXCEPTIONS_27_500 and first == 26
    return Check(2, "not-improved set for m in 27..500", ok, f"first improvement m={first}; set={got}")


def check_complex_rupture(digits: int = DEFAULT_DIGITS) -> Check:
    rs = search.improvement_report(MAX_M, Field.COMPLEX, digits)
    worst = max(abs(r.difference.value) for r in rs)
    improved = [r.m for r in rs if r.improved]
    ok = worst < _mpf(COMPLEX_AGREEMENT) and not improved
    return Check(3, "complex exhaustive = recursive, m=2..500", ok,
                 f"max |C-P| = {mpmath.nstr(worst, 3)}; improved={improved}")


def check_anchors(digits: int = DEFAULT_DIGITS) -> Check:
    tol = search.comparison_tolerance(digits)
    with mp.workdps(working_dps(digits)):
        c2r = recursive.c_recursive(2, Field.REAL, digits).value
        c2c = recursive.c_recursive(2, Field.COMPLEX, digits).value
        low = closed_forms.lower_bound(2, Field.REAL, digits).value
        ratio = bh_ratio(kahane_form(), digits)
        ok = (abs(c2r - mpmath.sqrt(2)) <= tol
              and abs(c2c - 2 / mpmath.sqrt(mpmath.pi)) <= tol
              and abs(low - mpmath.sqrt(2)) <= tol
              and ratio.exact and abs(ratio.value.value - mpmath.sqrt(2)) <= tol)
    return Check(4, "C_2 anchors and Kahane ratio = sqrt(2)", ok,
                 f"Kahane ratio {mpmath.nstr(ratio.value.value, 15)} (exact={ratio.exact})")


def check_gap(digits: int = DEFAULT_DIGITS) -> Check:
    parts, ok = [], True
    for d, floor in GAP_TABLE.items():
        g = search.doubling_gap(26, d, digits)
        ok &= g.value > _mpf(floor)
        parts.append(f"26*2^{d}: >{g.lower_sig(4)} (need >{floor})")
    return Check(5, "doubling gap table", ok, "; ".join(parts))


def check_power_laws(digits: int = DEFAULT_DIGITS) -> Check:
    ok = True
    parts = []
    for field in Field:
        e = closed_forms.log2_d(field, digits)
        ceil = closed_forms.PUBLISHED_EXPONENT[field]
        ok &= e.value < _mpf(ceil)
        bad = [n for n in range(2, MAX_M + 1)
               if recursive.m_sequence(n, field, digits).value
               > closed_forms.power_bound_published(n, field, digits).value]
        ok &= not bad
        parts.append(f"{field}: log2 D={mpmath.nstr(e.value, 9)} < {ceil}, M_n violations={bad}")
    return Check(6, "power-law closed forms", ok, "; ".join(parts))


def check_large_n(digits: int = DEFAULT_DIGITS, include_optional: bool = True) -> Check:
    ok = True
    parts = []
    gt = closed_forms.large_n_coefficient(4, Field.REAL, digits, use_gt=True)
    ok &= gt.value < _mpf(GT_CEILING)
    parts.append(f"4/D^3={gt.upper(7)}")
    table = dict(LARGE_N_TABLE)
    if include_optional:
        table.update(LARGE_N_OPTIONAL)
    for (field, k0), ceil in table.items():
        c = closed_forms.large_n_coefficient(k0, field, digits)
        ok &= c.value < _mpf(ceil)
        parts.append(f"{field} k0={k0}: {c.upper(7)} < {ceil}")
    tol = search.comparison_tolerance(digits)
    gt_bad = [k0 for k0 in range(4, 13)
              if recursive.c_recursive(2**k0, Field.REAL, digits).value
              > closed_forms.gt_estimate(k0, Field.REAL, digits).value + tol]
    ok &= not gt_bad
    parts.append(f"C_2^k0 <= 4D^(k0-4) violations for k0=4..12: {gt_bad}")
    return Check(7, "large-n coefficients", ok, "; ".join(parts))


def check_properties(digits: int = DEFAULT_DIGITS) -> Check:
    failures = []
    rnd = random.Random(20131007)
    with mp.workdps(working_dps(digits)):
        for _ in range(1000):
            x = Fraction(rnd.randrange(10**6), 10**6) + 1
            y = Fraction(rnd.randrange(10**6), 10**6) + 1
            if search.f_interp(x, y) + search.f_interp(y, x) != 1:
                failures.append("f symmetry")
                break
        g_tol = mpmath.mpf(10) ** (-(digits - 5))
        for i in range(100):
            x = mpmath.mpf(rnd.randrange(1, 50 * 10**6)) / 10**6
            a, b = gamma(x + 1, digits).value, x * gamma(x, digits).value
            if abs(a - b) > g_tol * abs(a):
                failures.append(f"gamma recurrence at {x}")
                break
        for n in range(1, 21):
            if abs(gamma(n, digits).value - mpmath.factorial(n - 1)) > g_tol * mpmath.factorial(n - 1):
                failures.append(f"gamma({n})")
        p0 = khinchine.p_zero(digits).value
        eps = mpmath.mpf("1e-10")
        if abs(khinchine.a_real(p0 - eps, digits).value - khinchine.a_real(p0 + eps, digits).value) >= mpmath.mpf("1e-8"):
            failures.append("A_p continuity at p0")
        # while p(m) <= p0, A is on its power branch and A(p(m))^(-m/2) is a constant
        # power of 2; past the threshold the sequence must increase strictly
        tol_a = search.comparison_tolerance(digits)
        for label, p_of in (("2m/(m+2)", lambda m: Fraction(2 * m, m + 2)),
                            ("r(m)", search.r_exponent)):
            seq = {m: khinchine.a_real(p_of(m), digits).value ** (-mpmath.mpf(m) / 2)
                   for m in range(2, MAX_M + 1)}
            for m in range(2, MAX_M):
                a, b = seq[m], seq[m + 1]
                flat_ok = khinchine.real_branch_is_power(p_of(m + 1), digits)
                if b < a - tol_a or (not flat_ok and b <= a + tol_a):
                    failures.append(f"A({label})^(-m/2) not increasing at m={m}")
                    break
    tol = search.comparison_tolerance(digits)
    for field in Field:
        P = [search.exhaustive_engine(field, digits).value(m).value for m in range(1, MAX_M + 1)]
        C = [recursive.c_recursive(m, field, digits).value for m in range(1, MAX_M + 1)]
        if any(b < a - tol for a, b in zip(P, P[1:])):
            failures.append(f"P not monotone ({field})")
        if any(b < a - tol for a, b in zip(C, C[1:])):
            failures.append(f"C not monotone ({field})")
        for n in range(2, MAX_M + 1):
            if closed_forms.lower_bound(n, field, digits).value > P[n - 1] + tol:
                failures.append(f"lower > P at n={n} ({field})")
                break
    for k0 in (4, 6, 8):
        J = [recursive.j_sequence(n, k0, Field.REAL, digits).value for n in range(1, MAX_M + 1)]
        if any(b < a - tol for a, b in zip(J, J[1:])):
            failures.append(f"J not monotone (k0={k0})")
    lo = search.p_exhaustive(MAX_M, Field.REAL, digits).p_value.value
    hi = search.p_exhaustive(MAX_M, Field.REAL, 2 * digits).p_value.value
    with mp.workdps(2 * digits):
        if abs(lo - hi) > mpmath.mpf(10) ** (-(digits - 10)) * hi:
            failures.append("P_500 precision instability")
    table = search.exhaustive_table(MAX_M, Field.REAL, digits)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "t.jsonl"
        cache.cache_store(table, path)
        first = path.read_bytes()
        cache.cache_store(cache.cache_load(path), path)
        if path.read_bytes() != first:
            failures.append("cache round trip")
    for field in Field:
        a = search.exhaustive_table(MAX_M, field, digits, "exact")
        b = search.exhaustive_table(MAX_M, field, digits, "paper")
        if any(a.entries[m].value != b.entries[m].value for m in a.entries):
            failures.append(f"p0 modes disagree ({field})")
    return Check(8, "property suite", not failures, "all properties hold" if not failures else "; ".join(failures))


def check_verifier(digits: int = DEFAULT_DIGITS, count: int = 100, seed: int = 2014) -> Check:
    rng = np.random.default_rng(seed)
    slack = _mpf(VERIFIER_SLACK)
    worst = None
    bad = 0
    for i in range(count):
        n, N = (2, 3)[i % 2], (2, 3)[(i // 2) % 2]
        form = MultilinearForm.random(n, N, rng)
        r = bh_ratio(form, digits)
        bound = search.p_exhaustive(n, Field.REAL, digits).p_value.value
        if not r.exact or r.value.value > bound + slack:
            bad += 1
        q = r.value.value / bound
        worst = q if worst is None or q > worst else worst
        if i < 10:
            lam = mpmath.mpf(rng.uniform(-5, 5)) or mpmath.mpf(1)
            r2 = bh_ratio(form.scaled(lam), digits)
            if abs(r2.value.value - r.value.value) > search.comparison_tolerance(digits):
                bad += 1
    return Check(9, "random real forms respect P_n", bad == 0,
                 f"{count} forms, worst ratio/P_n = {mpmath.nstr(worst, 6)}, failures={bad}")


def check_remark(digits: int = DEFAULT_DIGITS) -> Check:
    tol = search.comparison_tolerance(digits)
    with mp.workdps(working_dps(digits)):
        ok = abs(closed_forms.product_bound(2, Field.REAL, digits).value - mpmath.sqrt(2)) <= tol
        ok &= abs(closed_forms.product_bound(2, Field.COMPLEX, digits).value
                  - 2 / mpmath.sqrt(mpmath.pi)) <= tol
    stars = {f: closed_forms.product_crossover(f, MAX_M, digits) for f in Field}
    ok &= all(s is not None and s <= MAX_M for s in stars.values())
    return Check(10, "product formulas and crossover m*", ok,
                 ", ".join(f"m*({f})={s}" for f, s in stars.items()))


CHECKS = [
    check_improvement_table,
    check_exception_list,
    check_complex_rupture,
    check_anchors,
    check_gap,
    check_power_laws,
    check_large_n,
    check_properties,
    check_verifier,
    check_remark,
]


def run_all(digits: int = DEFAULT_DIGITS) -> list[Check]:
    return [chk(digits) for chk in CHECKS]

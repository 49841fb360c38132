import math
import random
from fractions import Fraction

import gmpy2
import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import int_polys
from rootiso.analysis import (
    ConditionEstimate,
    OracleError,
    check_separation_condition_inequality,
    cond_grid_brackets,
    depth_bound,
    disk_family,
    global_cond_certified,
    local_cond,
    local_cond_exact,
    numeric_roots,
    obreshkoff_region,
    obreshkoff_sandwich,
    rho_count,
    rho_upper_bound,
    separation,
    working_precision,
)
from rootiso.descartes import DyadicInterval, isolate_in_unit_interval
from rootiso.poly import IntPolynomial, evaluate, one_norm, squarefree_part
from rootiso.randmodels import RandomModelConfig, sample
from rootiso.sturm import count_roots_in, sturm_sequence

P = IntPolynomial
X = sympy.Symbol("X")


# local and global condition numbers

def test_local_cond_examples():
    assert local_cond(P([0, 1]), 0) == 1.0
    assert local_cond(P([-1, 0, 2]), 0) == 3.0
    assert local_cond(P([1, -2, 1]), 1) == math.inf
    assert local_cond_exact(P([1, -2, 1]), 1) is None


def test_local_cond_is_rounded_up():
    c = local_cond_exact(P([1, 1, 1]), Fraction(1, 3))
    assert Fraction(local_cond(P([1, 1, 1]), Fraction(1, 3))) >= c


def test_global_cond_of_x_is_one():
    est = global_cond_certified(P([0, 1]))
    assert est.lower == est.upper == 1.0


def test_global_cond_of_double_root_is_infinite():
    est = global_cond_certified(P([1, -2, 1]))
    assert est.infinite and not est.finite


def test_global_cond_outside_double_root_is_finite():
    est = global_cond_certified(P([9, -6, 1]))  # (X - 3)^2
    assert est.finite


def test_global_cond_of_2x2_minus_1():
    est = global_cond_certified(P([-1, 0, 2]))
    # max of 3 / max(|2x^2 - 1|, 2|x|) is attained where 1 - 2x^2 = 2x
    x = (math.sqrt(3) - 1) / 2
    exact = 3 / (2 * x)
    assert est.lower <= exact <= est.upper
    assert est.upper / est.lower <= 1.05 + 1e-12


def _brute_force_max(f, step):
    n = int(round(2 / step))
    xs = -1 + step * np.arange(n + 1)
    c = np.array([float(v) for v in f.coeffs]) / one_norm(f)
    dc = np.array([i * float(v) for i, v in enumerate(f.coeffs)][1:]) / (one_norm(f) * f.degree)
    a = np.abs(np.polynomial.polynomial.polyval(xs, c))
    b = np.abs(np.polynomial.polynomial.polyval(xs, dc)) if len(dc) else np.zeros_like(xs)
    return float(np.max(1 / np.maximum(a, b)))


@given(int_polys(max_degree=7, bits=6))
def test_certified_bracket_contains_dense_grid_max(f):
    if f.degree < 1:
        return
    est = global_cond_certified(f)
    if est.infinite:
        return
    step = est.grid_step / 16  # a dyadic refinement containing every sampled point
    if 2 / step > 2_000_000:
        return
    brute = _brute_force_max(f, step)
    assert est.lower <= brute * (1 + 1e-9)
    assert brute <= est.upper * (1 + 1e-9)


@given(int_polys(max_degree=6, bits=6))
def test_grid_refinement_is_monotone(f):
    if f.degree < 1:
        return
    brackets = cond_grid_brackets(f, 9)
    finite = [b for b in brackets if not b.infinite]
    for a, b in zip(finite, finite[1:]):
        assert b.lower >= a.lower and b.upper <= a.upper
    est = global_cond_certified(f)
    for b in finite:
        assert b.lower <= est.upper * (1 + 1e-12) and est.lower <= b.upper * (1 + 1e-12)


def test_float_and_exact_search_agree():
    import rootiso.analysis as A

    f = sample(RandomModelConfig("uniform", 24, 12, seed=5), 0)
    fast = A._cond_float_bnb(f, 0.05, 16)
    exact = A._cond_exact_bnb(f, 0.05, 16, 10**6)
    assert fast is not None
    assert max(fast.lower, exact.lower) <= min(fast.upper, exact.upper)


# numeric oracle

def test_oracle_examples():
    r = numeric_roots(P([1, 0, 1]))
    assert sorted(complex(z).imag for z in r.roots) == pytest.approx([-1, 1], abs=1e-15)
    assert not any(r.is_real)
    r = numeric_roots(P([1, -6, 8]))
    assert [float(x) for x, _ in r.real_roots()] == pytest.approx([0.25, 0.5], abs=1e-15)
    r = numeric_roots(P([-2, 0, 1]))
    assert [float(x) for x, _ in r.real_roots()] == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-15)


def test_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        numeric_roots(P([1, -2, 1]))
    with pytest.raises(ValueError):
        numeric_roots(P([5]))


def test_oracle_reports_certification_failure():
    # a cluster far below the precision ceiling cannot be separated
    f = P([1, -2 * 10**60, 10**120 - 1]) * P([1, 1])
    with pytest.raises(OracleError, match="oracle certification failed"):
        numeric_roots(f, max_precision=128)


def test_oracle_separates_close_roots_by_raising_precision():
    f = P.from_roots([Fraction(1, 3), Fraction(1, 3) + Fraction(1, 2**150)])
    r = numeric_roots(f)
    assert r.precision_bits > 128
    assert sum(r.is_real) == 2


@given(int_polys(max_degree=12, bits=16))
def test_oracle_self_consistency(f):
    g = squarefree_part(f)
    if g.degree < 1:
        return
    r = numeric_roots(g)
    assert len(r) == g.degree
    approx = [complex(z) for z in sympy.Poly(list(reversed(g.coeffs)), X).nroots(n=30)]
    with working_precision(r.precision_bits):
        for z, rad in zip(r.roots, r.radii):
            assert min(abs(complex(z) - w) for w in approx) <= float(rad) + 1e-12 * max(1.0, abs(complex(z)))
            # the radius dominates the scaled residual recomputed here
            lc = abs(gmpy2.mpfr(g.leading))
            prod = gmpy2.mpfr(1)
            for w in r.roots:
                if w is not z:
                    prod *= abs(z - w)
            val = gmpy2.mpc(0)
            for c in reversed(g.coeffs):
                val = val * z + c
            assert g.degree * abs(val) / (lc * prod) <= rad * (1 + 1e-6)
    assert sum(r.is_real) == len(sympy.Poly(list(reversed(g.coeffs)), X).real_roots())


@given(int_polys(max_degree=10, bits=12), st.integers(0, 2**32))
def test_oracle_counts_match_sturm(f, seed):
    g = squarefree_part(f)
    if g.degree < 1:
        return
    r = numeric_roots(g)
    seq = sturm_sequence(g)
    rng = random.Random(seed)
    for _ in range(100):
        a = Fraction(rng.randint(-300, 300), rng.randint(1, 60))
        b = a + Fraction(rng.randint(1, 300), rng.randint(1, 60))
        if evaluate(g, a) == 0 or evaluate(g, b) == 0:
            continue
        definite, possible = r.count_real_in(a, b)
        assert definite == possible == count_roots_in(seq, a, b)


# separation

def test_separation_examples():
    assert separation(P([1, -6, 8]), 0).lower == pytest.approx(0.25)
    assert separation(P([1, -6, 8]), 0).upper == pytest.approx(0.25)
    assert separation(P([1, 0, 1]), 0).infinite
    f = P([-2, 0, 1]) * P([-1, 2])
    assert separation(f, 0).infinite


def test_separation_with_double_root_in_range_is_zero():
    f = P([1, -2, 1]) * P([2, 0, 1])
    s = separation(f, 0.1)
    assert s.lower == s.upper == 0.0


def test_separation_picks_up_complex_pairs_near_the_segment():
    f = P([1, 0, 100])  # roots +-i/10
    assert separation(f, 0.05).infinite
    assert separation(f, 0.2).lower == pytest.approx(0.2)


# disk family and rho

def test_disk_family_d2():
    fam = disk_family(2)
    assert fam.N == 1 and [n for n, _, _ in fam.entries] == [-1, 0, 1]
    assert fam.centre(1) == Fraction(1, 2) and fam.radius(1) == Fraction(3, 4)
    assert fam.centre(0) == 0 and fam.radius(0) == Fraction(3, 8)


def test_disk_family_d8():
    fam = disk_family(8)
    assert fam.N == 3
    assert fam.centre(1) == Fraction(5, 8) and fam.radius(1) == Fraction(3, 16)
    assert fam.centre(3) == Fraction(7, 8) and fam.radius(3) == Fraction(3, 16)


@given(st.integers(1, 4096))
def test_disk_family_closed_forms(d):
    fam = disk_family(d)
    N = fam.N
    assert 2 ** (N - 1) < d <= 2**N or (d == 1 and N == 0)
    for n, xi, rho in fam.entries:
        assert fam.centre(-n) == -xi and fam.radius(-n) == rho
        m = abs(n)
        if n == 0 and N > 0:
            assert xi == 0 and rho == Fraction(3, 8)  # sgn(0) = 0
        elif m <= N - 1:
            assert abs(xi) == 1 - Fraction(3, 4) / 2**m and rho == Fraction(3, 8) / 2**m
        else:
            assert abs(xi) == 1 - Fraction(1, 2**N) and rho == Fraction(3, 2) / 2**N


def test_rho_count_examples():
    rc = rho_count(P([1, 0, 1]))
    assert rc.definite == rc.possible == 0
    rc = rho_count(P([1, -6, 8]))
    assert rc.definite == rc.possible == 2
    rc = rho_count(P([0, 0, 0, 0, 1]))
    assert rc.definite == rc.possible == 1


def test_rho_upper_bound_examples():
    b = rho_upper_bound(P([1, 0, 1]))
    expected = math.log2(2 * math.e) + 2 * math.log2(2 * math.e / 1.25)
    assert b == pytest.approx(expected, rel=1e-9) and b >= expected
    assert round(b, 2) == 6.68
    assert 0 < rho_upper_bound(P([1])) < math.inf
    assert rho_upper_bound(P([1, -6, 8])) == math.inf  # f(1/2) = 0


@given(int_polys(max_degree=16, bits=16))
def test_rho_sandwich(f):
    if f.degree < 1:
        return
    assert rho_count(f).possible <= rho_upper_bound(f)


# Obreshkoff geometry

def test_obreshkoff_alpha_zero_is_the_diameter_disk():
    reg = obreshkoff_region(DyadicInterval(0, 1), 0)
    assert complex(reg.upper_centre) == pytest.approx(0.5)
    assert complex(reg.lower_centre) == pytest.approx(0.5)
    assert float(reg.radius) == pytest.approx(0.5)


def test_obreshkoff_alpha_one():
    reg = obreshkoff_region(DyadicInterval(0, 1), 1)
    assert float(reg.radius) == pytest.approx(1 / math.sqrt(3))
    assert complex(reg.upper_centre) == pytest.approx(complex(0.5, 1 / (2 * math.sqrt(3))))
    assert complex(reg.lower_centre) == pytest.approx(complex(0.5, -1 / (2 * math.sqrt(3))))


@given(st.integers(0, 40), st.integers(-8, 7), st.integers(0, 6))
def test_obreshkoff_boundaries_pass_through_endpoints(alpha, c, k):
    J = DyadicInterval.from_index(c % (2**k + 1) if k else 0, k) if k else DyadicInterval(-1, 1)
    reg = obreshkoff_region(J, alpha)
    with working_precision(reg.precision_bits):
        for e in (J.low, J.high):
            for centre in (reg.upper_centre, reg.lower_centre):
                assert abs(abs(centre - gmpy2.mpq(e)) - reg.radius) <= reg.radius * 2.0**-200
        assert abs(reg.diameter - gmpy2.mpfr(J.width) / gmpy2.sin(gmpy2.const_pi() / (alpha + 2))) <= 2.0**-200


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(1, 30))
def test_obreshkoff_nesting(x, y, d):
    J = DyadicInterval(Fraction(-1, 4), Fraction(1, 2))
    z = complex(x, y)
    inside_area = [obreshkoff_region(J, a).in_area(z)[0] for a in range(d + 1)]
    inside_lens = [obreshkoff_region(J, a).in_lens(z)[0] for a in range(d + 1)]
    # areas grow and lenses shrink with alpha
    assert all(not a or b for a, b in zip(inside_area, inside_area[1:]))
    assert all(not b or a for a, b in zip(inside_lens, inside_lens[1:]))


@given(int_polys(max_degree=16, bits=12))
def test_obreshkoff_sandwich_on_random_inputs(f):
    g = squarefree_part(f)
    if g.degree < 1:
        return
    _, stats = isolate_in_unit_interval(g)
    rep = obreshkoff_sandwich(g, stats)
    assert rep.ok


# separation versus condition

def test_separation_condition_examples():
    rep = check_separation_condition_inequality(P([1, -6, 8]))
    assert rep.verdict == "holds" and rep.margin > 0
    assert rep.separation.lower == pytest.approx(0.25)
    assert check_separation_condition_inequality(P([0, 1])).verdict == "holds"


def test_separation_condition_needs_finite_condition():
    with pytest.raises(ValueError):
        check_separation_condition_inequality(P([1, -2, 1]))


@given(int_polys(max_degree=12, bits=12))
def test_depth_bound_with_slack(f):
    g = squarefree_part(f)
    if g.degree < 1:
        return
    cond = global_cond_certified(g)
    if not cond.finite:
        return
    _, stats = isolate_in_unit_interval(g)
    assert stats.max_depth <= 2 * depth_bound(g, cond)

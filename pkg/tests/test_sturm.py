import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import dyadics, int_polys
from rootiso.descartes import isolate_in_unit_interval
from rootiso.poly import IntPolynomial, evaluate, sign_at, sign_variations, squarefree_part
from rootiso.sturm import (
    EndpointRootError,
    count_roots_in,
    isolate_sturm,
    isolate_sturm_all,
    sturm_sequence,
    total_sequence_bitsize,
    var_at,
)

P = IntPolynomial
X = sympy.Symbol("X")


def test_sequence_of_2x2_minus_1():
    seq = sturm_sequence(P([-1, 0, 2]))
    assert seq.polys == (P([-1, 0, 2]), P([0, 4]), P([1]))
    assert seq.is_squarefree
    assert total_sequence_bitsize(seq) == 7  # regression value: bit lengths of 2, 1, 4, 1


def test_sequence_of_x():
    seq = sturm_sequence(P([0, 1]))
    assert seq.polys == (P([0, 1]), P([1]))
    assert total_sequence_bitsize(seq) == 2


def test_sequence_of_double_root_ends_at_gcd():
    seq = sturm_sequence(P([1, -2, 1]))
    assert seq.gcd.degree == 1 and not seq.is_squarefree


def test_constant_input_rejected():
    with pytest.raises(ValueError):
        sturm_sequence(P([3]))
    with pytest.raises(ValueError):
        isolate_sturm(P([3]))


def test_var_at_examples():
    seq = sturm_sequence(P([-1, 0, 2]))
    assert var_at(seq, -1) == 2
    assert var_at(seq, 1) == 0
    assert var_at(sturm_sequence(P([0, 1])), 0) == 0


@pytest.mark.parametrize("coeffs, expected", [([-1, 0, 2], 2), ([1, 0, 1], 0), ([-2, 0, 1], 0)])
def test_count_roots_in_unit_interval(coeffs, expected):
    assert count_roots_in(sturm_sequence(P(coeffs)), -1, 1) == expected


def test_count_roots_rejects_root_endpoints():
    with pytest.raises(EndpointRootError):
        count_roots_in(sturm_sequence(P([-1, 0, 1])), -1, 0)


def test_isolate_matches_descartes_on_planted_roots():
    f = P([1, -6, 8])
    rs, _ = isolate_sturm(f)
    rd, _ = isolate_in_unit_interval(f)
    assert rs.root_count == rd.root_count == 2
    assert rs.exact_roots == rd.exact_roots == [Fraction(1, 2)]


def test_isolates_distinct_roots_of_non_squarefree_input():
    res, stats = isolate_sturm(P([0, 1, -2, 1]))  # X (X - 1)^2
    assert res.root_count == 1
    J = res.intervals[0] if res.intervals else None
    assert (J is not None and J.contains(0)) or res.exact_roots == [0]
    assert stats.total_sequence_bitsize > 0


def test_isolate_all_roots():
    res, _ = isolate_sturm_all(P([6, -5, 1]))
    assert res.root_count == 2


@given(int_polys(max_degree=8, bits=8))
def test_degrees_strictly_decrease(f):
    if f.degree < 1:
        return
    seq = sturm_sequence(f)
    degs = [p.degree for p in seq.polys]
    assert all(a > b for a, b in zip(degs, degs[1:]))
    assert seq.polys[0] == f
    assert all(s > 0 for s in seq.scale_factors)


@given(int_polys(max_degree=10, bits=10), dyadics(max_exp=6, bound=2), dyadics(max_exp=6, bound=2))
def test_count_matches_sympy(f, a, b):
    if f.degree < 1 or a == b:
        return
    a, b = min(a, b), max(a, b)
    if evaluate(f, a) == 0 or evaluate(f, b) == 0:
        return
    expected = sympy.Poly(list(reversed(squarefree_part(f).coeffs)), X).count_roots(
        sympy.Rational(a.numerator, a.denominator), sympy.Rational(b.numerator, b.denominator))
    assert count_roots_in(sturm_sequence(f), a, b) == expected


@given(int_polys(max_degree=8, bits=8), st.integers(0, 2**32), dyadics(max_exp=6, bound=2))
def test_positive_scaling_never_changes_variations(f, seed, x):
    if f.degree < 1:
        return
    seq = sturm_sequence(f)
    rng = random.Random(seed)
    scaled = [seq.polys[0]] + [p * rng.randint(1, 1000) for p in seq.polys[1:]]
    assert sign_variations(sign_at(p, x) for p in scaled) == sign_variations(sign_at(p, x) for p in seq.polys)


@given(int_polys(max_degree=12, bits=10))
def test_agrees_with_descartes(f):
    if f.degree < 1:
        return
    rs, _ = isolate_sturm(f)
    rd, _ = isolate_in_unit_interval(squarefree_part(f))
    assert rs.root_count == rd.root_count
    assert sorted(rs.exact_roots) == sorted(rd.exact_roots)
    for J in rs.intervals:
        assert sum(1 for K in rd.intervals if K.low < J.high and J.low < K.high) == 1

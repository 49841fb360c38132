"""Acceptance suite: one test per criterion, each emitting a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are repeated
in the terminal summary under "acceptance criteria".
"""

import math
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from rootiso import harness
from rootiso.analysis import (
    check_separation_condition_inequality,
    global_cond_certified,
    numeric_roots,
    obreshkoff_sandwich,
    rho_count,
    rho_upper_bound,
)
from rootiso.descartes import isolate_in_unit_interval
from rootiso.poly import (
    IntPolynomial,
    homothety,
    kth_taylor_coefficient,
    one_norm,
    reciprocal,
    squarefree_part,
    taylor_shift,
)
from rootiso.randmodels import RandomModelConfig, model_stats

SEED = 20240601


@pytest.fixture(scope="module")
def xval_report():
    return harness.cross_validate(500, d_max=64, tau_max=16, seed=SEED)


@pytest.fixture(scope="module")
def small_ensemble():
    """Square-free parts of 100 uniform samples with 1 <= d <= 32, 1 <= tau <= 16, plus their Descartes runs."""
    out, i = [], 0
    while len(out) < 100:
        f, _ = harness.xval_instance(SEED + 1, i, 32, 16)
        i += 1
        g = squarefree_part(f)
        if g.degree is None or g.degree < 1:
            continue
        _, st = isolate_in_unit_interval(g, check_squarefree=False)
        out.append((g, st))
    return out


def test_criterion_01_oracle_agreement(xval_report, verdict):
    rep = xval_report
    bad = len(rep.disagreements)
    ok = bad == 0 and len(rep.checks) == 500 and rep.seconds < 300
    verdict(1, ok, f"{len(rep.checks)} samples, {bad} disagreements, {rep.seconds:.1f}s (limit 300s)")
    assert len(rep.checks) == 500
    assert bad == 0, [c.problems for c in rep.disagreements[:5]]
    assert rep.seconds < 300


def test_criterion_02_certificate_soundness(xval_report, small_ensemble, verdict):
    nodes = xval_report.nodes_checked + sum(st.node_count for _, st in small_ensemble)
    bad = xval_report.certificate_violations + sum(harness.certificate_violations(g, st) for g, st in small_ensemble)
    verdict(2, bad == 0, f"{nodes} nodes re-certified, {bad} violations")
    assert bad == 0


def test_criterion_03_obreshkoff_sandwich(small_ensemble, verdict):
    nodes = uncertain = violations = 0
    for g, st in small_ensemble:
        rep = obreshkoff_sandwich(g, st, numeric_roots(g))
        nodes += rep.nodes
        uncertain += rep.uncertain
        violations += len(rep.violations)
    rate = uncertain / nodes
    ok = violations == 0 and rate < 0.05
    verdict(3, ok, f"{len(small_ensemble)} samples, {nodes} nodes, {violations} violations, "
                   f"{uncertain} uncertain ({100 * rate:.2f}%, limit 5%)")
    assert violations == 0
    assert rate < 0.05


def test_criterion_04_subadditivity(xval_report, small_ensemble, verdict):
    checked = sum(c.subadditivity_checks for c in xval_report.checks)
    bad = xval_report.subadditivity_violations
    for _, st in small_ensemble:
        c, b = harness.subadditivity(st)
        checked += c
        bad += b
    verdict(4, bad == 0 and checked > 0, f"{checked} bisections, {bad} violations")
    assert checked > 0 and bad == 0


def test_criterion_05_separation_condition(verdict):
    counts = {"holds": 0, "violated": 0, "inconclusive": 0}
    i = 0
    while sum(counts.values()) < 200:
        f, _ = harness.xval_instance(SEED + 5, i, 32, 16)
        i += 1
        if f.is_zero or f.degree < 1:
            continue
        cond = global_cond_certified(f)
        if not cond.finite:
            continue
        counts[check_separation_condition_inequality(f, cond).verdict] += 1
    rate = counts["inconclusive"] / 200
    ok = counts["violated"] == 0 and rate < 0.10
    verdict(5, ok, f"200 samples: {counts['holds']} hold, {counts['violated']} violated, "
                   f"{counts['inconclusive']} inconclusive ({100 * rate:.1f}%, limit 10%)")
    assert counts["violated"] == 0
    assert rate < 0.10


def test_criterion_06_rho_deterministic_bound(verdict):
    bad = infinite = 0
    for i in range(200):
        f, _ = harness.xval_instance(SEED + 6, i, 64, 32)
        if f.is_zero or f.degree < 1:
            f = IntPolynomial([1, 1])
        rc = rho_count(f)
        ub = rho_upper_bound(f)
        infinite += math.isinf(ub)
        bad += rc.possible > ub
    verdict(6, bad == 0, f"200 samples, {bad} violations ({infinite} with an infinite bound)")
    assert bad == 0


def test_criterion_07_expected_steps_scaling(verdict):
    t0 = time.perf_counter()
    exp = harness.scaling_experiment(RandomModelConfig("uniform", 64, 32, seed=SEED + 7), [64, 128, 256, 512], 200,
                                     ["descartes"])
    secs = time.perf_counter() - t0
    rep = exp.reports["descartes_nodes"]
    means = ", ".join(f"{p.d}: {p.mean:.2f}" for p in rep.points)
    ok = rep.ratio_last_first <= 3 and rep.slope < 0.5 and secs < 1800
    verdict(7, ok, f"mean nodes {means}; ratio {rep.ratio_last_first:.3f} (limit 3), "
                   f"slope {rep.slope:.3f} (limit 0.5), {secs:.0f}s")
    assert rep.ratio_last_first <= 3
    assert rep.slope < 0.5
    assert secs < 1800


def test_criterion_08_sturm_cost_growth(verdict):
    exp = harness.scaling_experiment(RandomModelConfig("uniform", 32, 32, seed=SEED + 8), [32, 64, 128, 256], 8,
                                     ["descartes", "sturm"])
    sturm = exp.reports["sturm_total_bitsize"].slope
    desc = exp.reports["descartes_bit_proxy"].slope
    ok = sturm >= 1.6 and desc < sturm
    verdict(8, ok, f"Sturm total-bitsize exponent {sturm:.3f} (limit 1.6), Descartes proxy exponent {desc:.3f}")
    assert sturm >= 1.6
    assert desc < sturm


def test_criterion_09_condition_tail(verdict):
    d, tau, n = 8, 16, 2000
    cfg = RandomModelConfig("uniform", d, tau, seed=SEED + 9)
    rep = harness.cond_tail_check(cfg, n, harness.default_t_grid("cond", d, tau) + [1e6])
    failures = [p.t for p in rep.checked if not p.passed]
    # the documented example t = 10^6 (beyond the validity limit for this d, tau) is checked as well
    lows = np.array([v[0] for v in rep.values])
    b = harness.cond_tail_bound(d, 0.0, 1e6)
    emp = float(np.mean(lows >= 1e6))
    se = math.sqrt(b * (1 - b) / n)
    example_ok = emp <= b + 3 * se
    ok = not failures and example_ok and rep.conservative_direction_holds
    verdict(9, ok, f"{len(rep.checked)} non-vacuous t inside the validity limit {rep.validity_limit:g}, "
                   f"{len(failures)} failures; t=1e6: empirical {emp:.4f} vs bound {b:.4f} + 3 SE")
    assert not failures
    assert example_ok
    assert rep.conservative_direction_holds


def test_criterion_10_rho_tail(verdict):
    d, tau = 16, 64
    rep = harness.rho_tail_check(RandomModelConfig("uniform", d, tau, seed=SEED + 10), 2000,
                                 harness.default_t_grid("rho", d, tau))
    failures = [p.t for p in rep.checked if not p.passed]
    worst = max((p.empirical_lower for p in rep.checked), default=0.0)
    ok = not failures and len(rep.checked) > 0
    verdict(10, ok, f"{len(rep.checked)} non-vacuous t, {len(failures)} failures, "
                    f"largest empirical exceedance {worst:.4f}")
    assert len(rep.checked) > 0
    assert not failures


def test_criterion_11_model_parameters(verdict):
    # compare exp(u) exactly: the float logarithm cannot resolve 2 + 2^-tau from 2 at large tau
    taus = range(1, 65)
    uniform = all(model_stats(RandomModelConfig("uniform", 8, t)).uniformity_ratio == 1 for t in taus)
    support = all(model_stats(RandomModelConfig("support", 8, t, support_set=(0, 3, 8))).uniformity_ratio == 1
                  for t in taus)
    signs = [model_stats(RandomModelConfig("signs", 8, t)).uniformity_ratio for t in taus]
    exact = [model_stats(RandomModelConfig("exact_bitsize", 8, t)).uniformity_ratio for t in taus]
    signs_ok = all(r <= 2 for r in signs)
    exact_ok = all(r <= 3 for r in exact)
    ok = uniform and support and signs_ok and exact_ok
    verdict(11, ok, f"uniform u=0: {uniform}; signs u<=ln2: {signs_ok} (max exp(u) = {float(max(signs)):.6f}); "
                    f"exact bitsize u<=ln3: {exact_ok} (max exp(u) = {float(max(exact)):.6f})")
    assert uniform and support
    assert exact_ok
    assert signs_ok, f"exp(u) for the signs model is 2 + 2^-tau, e.g. {signs[0]} at tau = 1"


def test_criterion_12_transform_algebra(verdict):
    rng = np.random.Generator(np.random.Philox(SEED + 12))
    points = [Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)]
    bad = 0
    checks = 10_000
    for _ in range(checks):
        d = int(rng.integers(1, 13))
        bits = int(rng.integers(1, 40))
        coeffs = [int(c) for c in rng.integers(-(2**bits), 2**bits + 1, size=d + 1)]
        coeffs[0] = coeffs[0] or 1
        coeffs[-1] = coeffs[-1] or 1
        f = IntPolynomial(coeffs)
        a, b = (int(v) for v in rng.integers(-50, 51, size=2))
        j, k = (int(v) for v in rng.integers(0, 8, size=2))
        bad += reciprocal(reciprocal(f)) != f
        bad += taylor_shift(taylor_shift(f, b), a) != taylor_shift(f, a + b)
        bad += homothety(homothety(f, k), j) != homothety(f, j + k)
        norm = one_norm(f)
        x = points[int(rng.integers(0, 5))]
        bad += any(abs(kth_taylor_coefficient(f, i, x)) > comb(d, i) * norm for i in range(d + 1))
    verdict(12, bad == 0, f"{checks} random instances x 4 identities, {bad} violations")
    assert bad == 0

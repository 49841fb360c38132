"""Ensemble experiments over random polynomial models, with CSV/JSON/gnuplot reports.

Samples are distributed over a process pool whose size is capped by the
``ROOTISO_THREADS`` environment variable.  Every sample is reproducible from
(config, seed, sample index) alone; wall-clock times are the only
nondeterministic output.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from rootiso import analysis
from rootiso.analysis import (
    OracleError,
    ceil_log2,
    global_cond_certified,
    numeric_roots,
    rho_count,
)
from rootiso.descartes import IsolationResult, SubdivisionStats, isolate_in_unit_interval
from rootiso.poly import (
    IntPolynomial,
    format_rational,
    sign_at,
    squarefree_part,
    var_on_interval,
    write_polynomial,
)
from rootiso.randmodels import RandomModelConfig, generator_for, model_stats, sample, uniform_below
from rootiso.sturm import isolate_sturm

log = logging.getLogger(__name__)

CSV_HEADER = ("sample_id", "solver", "d", "tau", "model", "nodes", "depth", "width", "bitsize",
              "cond_lo", "cond_hi", "rho", "seconds")
SOLVERS = ("descartes", "sturm")


# ---------------------------------------------------------------------------
# worker pool

def worker_count(requested: int | None = None) -> int:
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("ROOTISO_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            log.warning("ignoring non-integer ROOTISO_THREADS=%r", cap)
    return max(1, n)


def parallel_map(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Order-preserving map over a process pool (inline when one worker suffices)."""
    n = min(worker_count(threads), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# ---------------------------------------------------------------------------
# ensemble runs

@dataclass
class SampleRow:
    sample_id: int
    solver: str
    d: int
    tau: int
    model: str
    nodes: int | None = None
    depth: int | None = None
    width: int | None = None
    bitsize: int | None = None  # max intermediate bitsize (descartes) or total sequence bitsize (sturm)
    cond_lo: float | None = None
    cond_hi: float | None = None
    rho: int | None = None
    seconds: float | None = None
    max_intermediate_bitsize: int | None = None
    sturm_total_bitsize: int | None = None
    rho_possible: int | None = None
    roots: int | None = None
    error: str | None = None

    def csv_row(self) -> list:
        return [_csv_value(getattr(self, k)) for k in CSV_HEADER]


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


@dataclass
class ExperimentRecord:
    config: dict
    rows: list[SampleRow] = field(default_factory=list)

    def solver_rows(self, solver: str, ok_only: bool = True) -> list[SampleRow]:
        return [r for r in self.rows if r.solver == solver and (r.error is None or not ok_only)]

    def aggregates(self) -> dict:
        out = {}
        for solver in sorted({r.solver for r in self.rows}):
            rows = self.solver_rows(solver)
            agg = {"samples": len(rows), "errors": len(self.solver_rows(solver, False)) - len(rows)}
            for key in ("nodes", "depth", "width", "bitsize", "seconds", "rho"):
                vals = [getattr(r, key) for r in rows if getattr(r, key) is not None]
                agg[key] = summarize(vals)
            out[solver] = agg
        return out

    def to_json(self) -> dict:
        return {"config": self.config, "aggregates": self.aggregates(),
                "rows": [_encode(asdict(r)) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentRecord":
        return cls(data["config"], [SampleRow(**_decode(r)) for r in data["rows"]])


def summarize(values: Sequence[float]) -> dict:
    if not values:
        return {"mean": None, "median": None, "p95": None}
    a = np.asarray(values, dtype=float)
    return {"mean": float(np.mean(a)), "median": float(np.median(a)), "p95": float(np.percentile(a, 95))}


def _encode(d: dict) -> dict:
    return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in d.items()}


def _decode(d: dict) -> dict:
    return {k: (math.inf if v == "inf" else v) for k, v in d.items()}


@dataclass(frozen=True)
class _Job:
    config: RandomModelConfig
    index: int
    solvers: tuple[str, ...]
    with_cond: bool
    with_rho: bool


def _run_job(job: _Job) -> list[SampleRow]:
    cfg = job.config
    f = sample(cfg, job.index)
    base = dict(sample_id=job.index, d=cfg.d, tau=cfg.tau, model=cfg.kind)
    rows = [SampleRow(solver=s, **base) for s in job.solvers]
    if f.is_zero or f.degree < 1:
        for r in rows:
            r.error = "constant polynomial sampled"
        return rows
    extra = {}
    try:
        if job.with_cond:
            c = global_cond_certified(f)
            extra.update(cond_lo=c.lower, cond_hi=c.upper)
        if job.with_rho:
            rc = rho_count(f)
            extra.update(rho=rc.definite, rho_possible=rc.possible)
    except (OracleError, ValueError) as exc:
        extra["error"] = f"analysis: {exc}"
    for r in rows:
        for k, v in extra.items():
            setattr(r, k, v)
        try:
            t0 = time.perf_counter()
            if r.solver == "descartes":
                res, st = isolate_in_unit_interval(squarefree_part(f), check_squarefree=False)
                r.bitsize = st.max_intermediate_bitsize
            elif r.solver == "sturm":
                res, st = isolate_sturm(f)
                r.bitsize = st.total_sequence_bitsize
                r.sturm_total_bitsize = st.total_sequence_bitsize
            else:
                raise ValueError(f"unknown solver {r.solver!r}")
            r.seconds = time.perf_counter() - t0
            r.nodes, r.depth, r.width = st.node_count, st.max_depth, st.max_width
            r.max_intermediate_bitsize = st.max_intermediate_bitsize
            r.roots = res.root_count
        except Exception as exc:  # recorded per sample, never fatal for the ensemble
            r.error = f"{type(exc).__name__}: {exc}"
    return rows


def run_ensemble(model: RandomModelConfig, solvers: Iterable[str], n_samples: int, *, with_cond: bool = False,
                 with_rho: bool = False, threads: int | None = None, start: int = 0) -> ExperimentRecord:
    """Run every solver on samples ``start .. start + n_samples - 1`` of the model."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    solvers = tuple(solvers)
    for s in solvers:
        if s not in SOLVERS:
            raise ValueError(f"unknown solver {s!r}; expected one of {', '.join(SOLVERS)}")
    jobs = [_Job(model, i, solvers, with_cond, with_rho) for i in range(start, start + n_samples)]
    rows = [r for batch in parallel_map(_run_job, jobs, threads) for r in batch]
    return ExperimentRecord(model.to_json(), rows)


# ---------------------------------------------------------------------------
# scaling

@dataclass
class ScalingPoint:
    d: int
    mean: float
    ci_low: float
    ci_high: float
    samples: int


@dataclass
class ScalingReport:
    metric: str
    points: list[ScalingPoint]
    slope: float
    ratio_last_first: float
    slope_threshold: float
    ratio_threshold: float

    @property
    def polylog_consistent(self) -> bool:
        return self.slope < self.slope_threshold and self.ratio_last_first <= self.ratio_threshold

    def to_json(self) -> dict:
        return {"metric": self.metric, "points": [asdict(p) for p in self.points], "slope": self.slope,
                "ratio_last_first": self.ratio_last_first, "polylog_consistent": self.polylog_consistent}


def bootstrap_ci(values: Sequence[float], resamples: int = 1000, level: float = 0.95, seed: int = 0) -> tuple[float, float]:
    a = np.asarray(values, dtype=float)
    if len(a) == 0:
        return math.nan, math.nan
    rng = np.random.Generator(np.random.Philox(seed))
    means = a[rng.integers(0, len(a), size=(resamples, len(a)))].mean(axis=1)
    lo, hi = np.percentile(means, [50 * (1 - level), 50 * (1 + level)])
    return float(lo), float(hi)


def fit_loglog_slope(ds: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log(value)`` against ``log(d)``."""
    slope, _ = np.polyfit(np.log(np.asarray(ds, float)), np.log(np.asarray(values, float)), 1)
    return float(slope)


def scaling_report(metric: str, per_d: dict[int, list[float]], slope_threshold: float = 0.5,
                   ratio_threshold: float = 3.0) -> ScalingReport:
    if len(per_d) < 3:
        raise ValueError("scaling needs at least three degrees")
    ds = sorted(per_d)
    points = []
    for d in ds:
        lo, hi = bootstrap_ci(per_d[d], seed=d)
        points.append(ScalingPoint(d, float(np.mean(per_d[d])), lo, hi, len(per_d[d])))
    means = [p.mean for p in points]
    return ScalingReport(metric, points, fit_loglog_slope(ds, means), means[-1] / means[0],
                         slope_threshold, ratio_threshold)


@dataclass
class ScalingExperiment:
    records: dict[int, ExperimentRecord]
    reports: dict[str, ScalingReport]

    def to_json(self) -> dict:
        return {"reports": {k: v.to_json() for k, v in self.reports.items()},
                "aggregates": {str(d): r.aggregates() for d, r in self.records.items()}}


def scaling_experiment(model: RandomModelConfig, d_values: Sequence[int], n: int, solvers: Iterable[str] = ("descartes",),
                       *, with_rho: bool = False, threads: int | None = None) -> ScalingExperiment:
    """Node counts (and optionally rho, bitsize growth) across degrees with the model's tau."""
    if len(set(d_values)) < 3:
        raise ValueError("scaling needs at least three distinct degrees")
    solvers = tuple(solvers)
    records = {d: run_ensemble(model.with_degree(d), solvers, n, with_rho=with_rho, threads=threads)
               for d in sorted(set(d_values))}
    reports = {}
    if "descartes" in solvers:
        reports["descartes_nodes"] = scaling_report(
            "descartes_nodes", {d: [r.nodes for r in rec.solver_rows("descartes")] for d, rec in records.items()})
        reports["descartes_bit_proxy"] = scaling_report(
            "descartes_bit_proxy",
            {d: [r.max_intermediate_bitsize * r.nodes for r in rec.solver_rows("descartes")] for d, rec in records.items()})
    if "sturm" in solvers:
        reports["sturm_nodes"] = scaling_report(
            "sturm_nodes", {d: [r.nodes for r in rec.solver_rows("sturm")] for d, rec in records.items()})
        reports["sturm_total_bitsize"] = scaling_report(
            "sturm_total_bitsize", {d: [r.sturm_total_bitsize for r in rec.solver_rows("sturm")] for d, rec in records.items()})
    if with_rho:
        first = solvers[0]
        reports["rho"] = scaling_report(
            "rho", {d: [max(r.rho, 0.5) for r in rec.solver_rows(first) if r.rho is not None] for d, rec in records.items()})
    return ScalingExperiment(records, reports)


# ---------------------------------------------------------------------------
# tail bounds

@dataclass
class TailPoint:
    t: float
    bound: float
    empirical_lower: float  # exceedance computed from certified lower values
    empirical_upper: float  # exceedance computed from certified upper values
    standard_error: float
    status: str  # "checked" | "vacuous" | "excluded"
    passed: bool | None


@dataclass
class TailReport:
    kind: str
    d: int
    tau: int
    uniformity: float
    samples: int
    validity_limit: float
    points: list[TailPoint]
    # per-sample certified (lower, upper) values; kept out of the JSON summary
    values: list[tuple[float, float]] = field(default_factory=list, repr=False)

    @property
    def checked(self) -> list[TailPoint]:
        return [p for p in self.points if p.status == "checked"]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.checked)

    @property
    def conservative_direction_holds(self) -> bool:
        return all(p.empirical_lower <= p.empirical_upper for p in self.points)

    def to_json(self) -> dict:
        return _encode_nested({"kind": self.kind, "d": self.d, "tau": self.tau, "uniformity": self.uniformity,
                               "samples": self.samples, "validity_limit": self.validity_limit,
                               "passed": self.passed, "points": [asdict(p) for p in self.points]})


def _encode_nested(x):
    if isinstance(x, dict):
        return {k: _encode_nested(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_encode_nested(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def cond_tail_bound(d: int, u: float, t: float) -> float:
    return 8 * math.sqrt(2) * d * (d + 1) * math.exp(u) / math.sqrt(t)


def rho_tail_bound(d: int, u: float, t: float) -> float:
    m = 2 * ceil_log2(d) + 1
    return 44 * d * d * m * math.exp(u) * math.exp(-t / m)


def _tail_points(lows: Sequence[float], highs: Sequence[float], t_grid: Iterable[float],
                 bound: Callable[[float], float], limit: float) -> list[TailPoint]:
    n = len(lows)
    lo, hi = np.asarray(lows, float), np.asarray(highs, float)
    pts = []
    for t in t_grid:
        b = bound(t)
        p_lo = float(np.mean(lo >= t))
        p_hi = float(np.mean(hi >= t))
        q = min(b, 1.0)
        se = math.sqrt(q * (1 - q) / n)
        if t > limit:
            log.warning("t = %g lies above the validity limit %g; excluded", t, limit)
            status, ok = "excluded", None
        elif b >= 1:
            status, ok = "vacuous", True
        else:
            status, ok = "checked", p_lo <= b + 3 * se
        pts.append(TailPoint(float(t), b, p_lo, p_hi, se, status, ok))
    return pts


def _cond_job(args) -> tuple[float, float]:
    cfg, i = args
    f = sample(cfg, i)
    if f.is_zero:
        return math.inf, math.inf
    c = global_cond_certified(f)
    return c.lower, c.upper


def _rho_job(args) -> tuple[int, int]:
    cfg, i = args
    f = sample(cfg, i)
    if f.is_zero or f.degree < 1:
        return 0, 0
    rc = rho_count(f)
    return rc.definite, rc.possible


def cond_tail_check(model: RandomModelConfig, n_samples: int, t_grid: Iterable[float],
                    threads: int | None = None) -> TailReport:
    """Empirical ``P(cond_R >= t)`` against ``8 sqrt(2) d (d+1) e^u / sqrt(t)``.

    Pass/fail uses certified lower values, so exceedance can only be
    under-reported; exceedance from upper values is reported alongside.
    """
    st = model_stats(model)
    vals = parallel_map(_cond_job, [(model, i) for i in range(n_samples)], threads)
    limit = (model.d + 1) * 2.0**st.tau_effective
    pts = _tail_points([v[0] for v in vals], [v[1] for v in vals], t_grid,
                       lambda t: cond_tail_bound(model.d, st.uniformity, t), limit)
    return TailReport("cond", model.d, model.tau, st.uniformity, n_samples, limit, pts, list(vals))


def rho_tail_check(model: RandomModelConfig, n_samples: int, t_grid: Iterable[float],
                   threads: int | None = None) -> TailReport:
    """Empirical ``P(rho >= t)`` against ``44 d^2 (2 ceil(log d) + 1) e^u e^(-t / (2 ceil(log d) + 1))``."""
    st = model_stats(model)
    vals = parallel_map(_rho_job, [(model, i) for i in range(n_samples)], threads)
    limit = st.tau_effective * (2 * ceil_log2(model.d) + 1)
    pts = _tail_points([v[0] for v in vals], [v[1] for v in vals], t_grid,
                       lambda t: rho_tail_bound(model.d, st.uniformity, t), limit)
    return TailReport("rho", model.d, model.tau, st.uniformity, n_samples, limit, pts, list(vals))


def default_t_grid(kind: str, d: int, tau: int) -> list[float]:
    if kind == "cond":
        return [float(10**k) for k in range(1, 9)] + [float((d + 1) * 2**tau)]
    m = 2 * ceil_log2(d) + 1
    return [float(t) for t in range(0, tau * m + 1, max(1, (tau * m) // 40))]


# ---------------------------------------------------------------------------
# cross validation

@dataclass
class SampleCheck:
    sample_id: int
    d: int
    tau: int
    counts: tuple[int, int, int]  # descartes, sturm, oracle
    problems: list[str] = field(default_factory=list)
    descartes_nodes: int = 0
    certificate_violations: int = 0
    subadditivity_checks: int = 0
    subadditivity_violations: int = 0
    coefficients: list[int] = field(default_factory=list)


@dataclass
class CrossValidationReport:
    checks: list[SampleCheck]
    seconds: float

    @property
    def disagreements(self) -> list[SampleCheck]:
        return [c for c in self.checks if c.problems]

    @property
    def certificate_violations(self) -> int:
        return sum(c.certificate_violations for c in self.checks)

    @property
    def subadditivity_violations(self) -> int:
        return sum(c.subadditivity_violations for c in self.checks)

    @property
    def nodes_checked(self) -> int:
        return sum(c.descartes_nodes for c in self.checks)

    def to_json(self) -> dict:
        return {"samples": len(self.checks), "disagreements": len(self.disagreements),
                "certificate_violations": self.certificate_violations,
                "subadditivity_violations": self.subadditivity_violations,
                "nodes_checked": self.nodes_checked, "seconds": self.seconds,
                "failures": [asdict(c) for c in self.disagreements]}


def certificate_violations(g: IntPolynomial, stats: SubdivisionStats) -> int:
    """Nodes whose recorded outcome is not backed by an independently recomputed var(g, J)."""
    bad = 0
    for node in stats.nodes:
        v = var_on_interval(g, node.interval)
        if v != node.var:
            bad += 1
        elif node.outcome == "isolate" and v != 1:
            bad += 1
        elif node.outcome == "discard" and v != 0:
            bad += 1
        elif node.outcome == "split" and v < 2:
            bad += 1
    return bad


def subadditivity(stats: SubdivisionStats) -> tuple[int, int]:
    """(bisections checked, violations of var(J_L) + var(J_R) <= var(J))."""
    children: dict[int, list[int]] = {}
    for node in stats.nodes:
        if node.parent is not None:
            children.setdefault(node.parent, []).append(node.var)
    bad = sum(1 for p, vs in children.items() if sum(vs) > stats.nodes[p].var or len(vs) != 2)
    return len(children), bad


def _oracle_items(g: IntPolynomial, roots) -> tuple[list, list]:
    """Oracle real roots in (-1, 1) as (centre, radius), split into resolved and ambiguous."""
    ends = [e for e in (-1, 1) if sign_at(g, e) == 0]
    resolved, ambiguous = [], []
    with analysis.working_precision(roots.precision_bits):
        for x, r in roots.real_roots():
            if any(abs(x - e) <= r for e in ends):
                continue  # the exact root at an endpoint lies outside the open interval
            if -1 < x - r and x + r < 1:
                resolved.append((x, r))
            elif x + r > -1 and x - r < 1:
                ambiguous.append((x, r))
    return resolved, ambiguous


def match_roots(result: IsolationResult, oracle: list, precision_bits: int) -> list[str]:
    """One-to-one matching between oracle roots and isolating intervals / exact roots.

    An exact root matches the oracle disk containing it; an interval matches an
    oracle disk lying strictly inside it.
    """
    problems = []
    items = [("root", q) for q in result.exact_roots] + [("interval", J) for J in result.intervals]
    used = [0] * len(items)
    with analysis.working_precision(precision_bits):
        for x, r in oracle:
            hits = []
            for k, (kind, it) in enumerate(items):
                if kind == "root":
                    if abs(x - mpq(it)) <= r:
                        hits.append(k)
                elif x - r > mpq(it.low) and x + r < mpq(it.high):
                    hits.append(k)
            if len(hits) != 1:
                problems.append(f"oracle root {float(x)!r} matched {len(hits)} outputs")
            for k in hits:
                used[k] += 1
    for k, u in enumerate(used):
        if u != 1:
            kind, it = items[k]
            shown = format_rational(it) if kind == "root" else str(it)
            problems.append(f"{kind} {shown} matched {u} oracle roots")
    return problems


def check_sample(f: IntPolynomial, sample_id: int = 0, tau: int = 0) -> SampleCheck:
    """Descartes (on the square-free part), Sturm and the oracle on one polynomial."""
    chk = SampleCheck(sample_id, f.degree if not f.is_zero else -1, tau, (0, 0, 0), coefficients=list(f.coeffs))
    if f.is_zero or f.degree < 1:
        return chk
    g = squarefree_part(f)
    res_d, st_d = isolate_in_unit_interval(g, check_squarefree=False)
    res_s, _ = isolate_sturm(f)
    chk.descartes_nodes = st_d.node_count
    chk.certificate_violations = certificate_violations(g, st_d)
    chk.subadditivity_checks, chk.subadditivity_violations = subadditivity(st_d)
    if g.degree < 1:
        chk.counts = (res_d.root_count, res_s.root_count, 0)
    else:
        prec = analysis.START_PRECISION
        while True:
            roots = numeric_roots(g, precision_bits=prec)
            resolved, ambiguous = _oracle_items(g, roots)
            if not ambiguous:
                break
            if roots.precision_bits >= analysis.MAX_PRECISION:
                chk.problems.append("oracle could not place a root relative to +-1")
                break
            prec = 2 * roots.precision_bits
        chk.counts = (res_d.root_count, res_s.root_count, len(resolved))
        for name, res in (("descartes", res_d), ("sturm", res_s)):
            chk.problems += [f"{name}: {p}" for p in match_roots(res, resolved, roots.precision_bits)]
    if len(set(chk.counts)) != 1:
        chk.problems.append(f"root counts differ (descartes, sturm, oracle) = {chk.counts}")
    if chk.certificate_violations:
        chk.problems.append(f"{chk.certificate_violations} certificate violations")
    if chk.subadditivity_violations:
        chk.problems.append(f"{chk.subadditivity_violations} subadditivity violations")
    return chk


def xval_instance(seed: int, index: int, d_max: int, tau_max: int) -> tuple[IntPolynomial, int]:
    """Uniform-model sample with degree in [1, d_max] and bitsize in [1, tau_max] drawn per index."""
    bg = generator_for(seed, 2**32 + index)
    d_off, t_off = uniform_below(bg, d_max, 2)[0], uniform_below(bg, tau_max, 1)[0]
    cfg = RandomModelConfig("uniform", d_off + 1, t_off + 1, seed=seed)
    return sample(cfg, index), cfg.tau


def _xval_job(args) -> SampleCheck:
    seed, i, d_max, tau_max = args
    f, tau = xval_instance(seed, i, d_max, tau_max)
    try:
        return check_sample(f, i, tau)
    except Exception as exc:
        chk = SampleCheck(i, f.degree if not f.is_zero else -1, tau, (0, 0, 0), coefficients=list(f.coeffs))
        chk.problems.append(f"{type(exc).__name__}: {exc}")
        return chk


def cross_validate(n_samples: int, d_max: int = 64, tau_max: int = 16, seed: int = 0, threads: int | None = None,
                   artifact_dir: str | Path | None = None) -> CrossValidationReport:
    """Three-way agreement on (-1, 1); failing instances are dumped to ``artifact_dir``."""
    t0 = time.perf_counter()
    checks = parallel_map(_xval_job, [(seed, i, d_max, tau_max) for i in range(n_samples)], threads)
    rep = CrossValidationReport(checks, time.perf_counter() - t0)
    if artifact_dir is not None and rep.disagreements:
        out = Path(artifact_dir)
        out.mkdir(parents=True, exist_ok=True)
        for c in rep.disagreements:
            write_polynomial(out / f"sample_{c.sample_id}.poly", IntPolynomial(c.coefficients))
            (out / f"sample_{c.sample_id}.json").write_text(json.dumps(asdict(c), indent=2))
    return rep


# ---------------------------------------------------------------------------
# reports

def write_csv(path: str | Path, rows: Iterable[SampleRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(r.csv_row())


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


_PLOT = """# gnuplot script; run with: gnuplot {name}
set datafile separator ','
set terminal pngcairo size 900,600
set key top left
set logscale xy
set xlabel 'degree d'
set ylabel 'nodes'
set output 'nodes_vs_d.png'
plot '{csv}' using 3:6 every ::1 with points title 'nodes per sample'
"""

_TAIL_PLOT = """
set output 'tail_{kind}.png'
set xlabel 't'
set ylabel 'P(X >= t)'
plot '{data}' using 1:2 with linespoints title 'bound', \\
     '{data}' using 1:3 with linespoints title 'empirical'
"""


def emit_report(record: ExperimentRecord | None, out_dir: str | Path, tails: Sequence[TailReport] = (),
                extra: dict | None = None) -> dict[str, Path]:
    """Write rows.csv, summary.json and plot.gp (plus one data file per tail report)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    record = record or ExperimentRecord({})
    paths = {"csv": out / "rows.csv", "json": out / "summary.json", "plot": out / "plot.gp"}
    write_csv(paths["csv"], record.rows)
    summary = record.to_json()
    summary["tails"] = [t.to_json() for t in tails]
    if extra:
        summary.update(_encode_nested(extra))
    paths["json"].write_text(json.dumps(summary, indent=2, sort_keys=True))
    script = _PLOT.format(name=paths["plot"].name, csv=paths["csv"].name)
    for t in tails:
        data = out / f"tail_{t.kind}.dat"
        with open(data, "w") as fh:
            for p in t.points:
                if p.t > 0:
                    fh.write(f"{p.t} {min(p.bound, 1.0)} {p.empirical_lower}\n")
        paths[f"tail_{t.kind}"] = data
        script += _TAIL_PLOT.format(kind=t.kind, data=data.name).replace("set logscale xy", "")
    paths["plot"].write_text(script)
    return paths


def load_report(out_dir: str | Path) -> ExperimentRecord:
    data = json.loads((Path(out_dir) / "summary.json").read_text())
    return ExperimentRecord.from_json(data)


def analyze_polynomial(f: IntPolynomial) -> dict:
    """Condition, separation, rho and per-node Obreshkoff checks for a single input."""
    if f.is_zero or f.degree < 1:
        raise ValueError("analysis needs a nonconstant polynomial")
    cond = global_cond_certified(f)
    g = squarefree_part(f)
    roots = numeric_roots(g) if g.degree >= 1 else None
    out: dict = {"degree": f.degree, "cond_lower": cond.lower, "cond_upper": cond.upper}
    if cond.finite:
        rep = analysis.check_separation_condition_inequality(f, cond, roots if g.degree == f.degree else None)
        out["separation"] = {"eps": rep.eps, "lower": rep.separation.lower, "upper": rep.separation.upper,
                             "threshold": rep.threshold_high, "inequality": rep.verdict}
    else:
        out["separation"] = {"eps": 0.0, "lower": 0.0, "upper": 0.0, "threshold": None, "inequality": "singular"}
    rc = rho_count(f, roots) if roots is not None else analysis.RhoCount(0, 0)
    out["rho"] = {"definite": rc.definite, "possible": rc.possible}
    out["rho_bound"] = analysis.rho_upper_bound(f)
    if roots is not None:
        _, st = isolate_in_unit_interval(g, check_squarefree=False)
        sw = analysis.obreshkoff_sandwich(g, st, roots)
        out["obreshkoff_checks"] = {"nodes": sw.nodes, "violations": len(sw.violations), "uncertain": sw.uncertain}
    else:
        out["obreshkoff_checks"] = {"nodes": 0, "violations": 0, "uncertain": 0}
    return _encode_nested(out)

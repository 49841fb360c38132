"""Command line entry point: ``rootiso <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from rootiso import harness
from rootiso.descartes import isolate_all_with_stats, isolate_in_unit_interval
from rootiso.poly import format_rational, read_polynomial, squarefree_part
from rootiso.randmodels import RandomModelConfig, load_config
from rootiso.sturm import isolate_sturm, isolate_sturm_all


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _solver_list(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in harness.SOLVERS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"solvers must be drawn from {','.join(harness.SOLVERS)}")
    return names


def _write_json(path: str | None, data: dict) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if path is None or path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def cmd_isolate(args) -> int:
    f = read_polynomial(args.input)
    if f.is_zero:
        raise ValueError("the zero polynomial has no isolated roots")
    stats_json: dict = {"solver": args.solver, "degree": f.degree}
    if args.solver == "descartes":
        g = squarefree_part(f)
        if g.degree < f.degree:
            print(f"# removed repeated factors: isolating the square-free part of degree {g.degree}", file=sys.stderr)
        if args.all_roots:
            res, inner, outer = isolate_all_with_stats(g, check_squarefree=False)
            stats_json["inner"] = inner.to_json()
            stats_json["outer"] = outer.to_json() if outer is not None else None
        else:
            res, st = isolate_in_unit_interval(g, check_squarefree=False)
            stats_json.update(st.to_json())
    else:
        res, st = isolate_sturm_all(f) if args.all_roots else isolate_sturm(f)
        stats_json.update(st.to_json())
    stats_json["result"] = res.to_json()
    for J in res.intervals:
        print(f"({format_rational(J.low)}, {format_rational(J.high)})")
    for r in res.exact_roots:
        print(f"root {format_rational(r)}")
    if args.stats:
        _write_json(args.stats, stats_json)
    return 0


def cmd_analyze(args) -> int:
    _write_json(args.out, harness.analyze_polynomial(read_polynomial(args.input)))
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.model)
    rec = harness.run_ensemble(cfg, args.solvers, args.n, with_cond=args.analyze, with_rho=args.analyze,
                               threads=args.threads)
    paths = harness.emit_report(rec, args.out)
    _print_aggregates(rec)
    print(f"wrote {paths['csv']}, {paths['json']}, {paths['plot']}")
    return 0


def _print_aggregates(rec: harness.ExperimentRecord) -> None:
    for solver, agg in rec.aggregates().items():
        nodes = agg["nodes"]
        print(f"{solver}: {agg['samples']} samples, {agg['errors']} errors, "
              f"nodes mean {nodes['mean']:.2f} median {nodes['median']:.1f} p95 {nodes['p95']:.1f}")


def cmd_scale(args) -> int:
    cfg = RandomModelConfig(args.model, args.d[0], args.tau, seed=args.seed)
    exp = harness.scaling_experiment(cfg, args.d, args.n, args.solvers, with_rho=args.rho, threads=args.threads)
    for name, rep in exp.reports.items():
        means = ", ".join(f"d={p.d}: {p.mean:.4g} [{p.ci_low:.4g}, {p.ci_high:.4g}]" for p in rep.points)
        print(f"{name}: {means}; log-log slope {rep.slope:.3f}; ratio last/first {rep.ratio_last_first:.3f}")
    if "descartes_nodes" in exp.reports:
        verdict = "consistent" if exp.reports["descartes_nodes"].polylog_consistent else "NOT consistent"
        print(f"descartes node growth {verdict} with polylogarithmic growth")
    if args.out:
        rows = [r for d in sorted(exp.records) for r in exp.records[d].rows]
        harness.emit_report(harness.ExperimentRecord(cfg.to_json(), rows), args.out, extra={"scaling": exp.to_json()})
    return 0


def cmd_tails(args) -> int:
    d = args.d if args.d is not None else (8 if args.kind == "cond" else 16)
    tau = args.tau if args.tau is not None else (16 if args.kind == "cond" else 64)
    cfg = RandomModelConfig(args.model, d, tau, seed=args.seed)
    grid = args.t_grid or harness.default_t_grid(args.kind, d, tau)
    check = harness.cond_tail_check if args.kind == "cond" else harness.rho_tail_check
    rep = check(cfg, args.n, grid, threads=args.threads)
    print(f"{args.kind} tail, d={d}, tau={tau}, u={rep.uniformity:.4f}, {rep.samples} samples, "
          f"validity limit t <= {rep.validity_limit:g}")
    for p in rep.points:
        verdict = {True: "PASS", False: "FAIL", None: "-"}[p.passed]
        print(f"  t={p.t:<12g} bound={min(p.bound, 1.0):<10.4g} empirical={p.empirical_lower:<8.4g} "
              f"(upper-based {p.empirical_upper:.4g})  {p.status:<8} {verdict}")
    print("PASS" if rep.passed else "FAIL")
    if args.out:
        harness.emit_report(None, args.out, tails=[rep])
    return 0 if rep.passed else 1


def cmd_xval(args) -> int:
    rep = harness.cross_validate(args.n, args.d_max, args.tau_max, seed=args.seed, threads=args.threads,
                                 artifact_dir=args.out)
    summary = rep.to_json()
    print(f"{summary['samples']} samples, {summary['disagreements']} disagreements, "
          f"{summary['certificate_violations']} certificate violations, "
          f"{summary['subadditivity_violations']} subadditivity violations, "
          f"{summary['nodes_checked']} nodes checked, {summary['seconds']:.1f}s")
    for c in rep.disagreements:
        print(f"  sample {c.sample_id}: " + "; ".join(c.problems))
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        _write_json(str(Path(args.out) / "xval.json"), summary)
    return 1 if rep.disagreements else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rootiso", description="Exact real root isolation and random-polynomial experiments.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("isolate", help="isolate the real roots of one polynomial")
    s.add_argument("--solver", choices=harness.SOLVERS, default="descartes")
    s.add_argument("--input", required=True, help="polynomial file ('d=<degree>' then '<index> <coefficient>' lines)")
    s.add_argument("--all-roots", action="store_true", help="isolate on the whole real line instead of (-1, 1)")
    s.add_argument("--stats", help="write subdivision statistics as JSON to this path")
    s.set_defaults(func=cmd_isolate)

    s = sub.add_parser("analyze", help="condition, separation, rho and Obreshkoff checks for one polynomial")
    s.add_argument("--input", required=True)
    s.add_argument("--out", help="JSON output path (stdout if omitted)")
    s.set_defaults(func=cmd_analyze)

    def pool(s):
        s.add_argument("--threads", type=int, default=None, help="worker processes (capped by ROOTISO_THREADS)")

    s = sub.add_parser("bench", help="run solvers over a random model")
    s.add_argument("--model", required=True, help="model config JSON")
    s.add_argument("--solvers", type=_solver_list, default=list(harness.SOLVERS))
    s.add_argument("--n", type=int, default=200)
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--analyze", action="store_true", help="also compute condition numbers and rho per sample")
    pool(s)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("scale", help="node counts and bit costs across degrees")
    s.add_argument("--d", type=_int_list, default=[64, 128, 256, 512])
    s.add_argument("--tau", type=int, default=32)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--model", choices=("uniform", "exact_bitsize"), default="uniform")
    s.add_argument("--solvers", type=_solver_list, default=["descartes"])
    s.add_argument("--rho", action="store_true", help="also measure rho per sample")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output directory")
    pool(s)
    s.set_defaults(func=cmd_scale)

    s = sub.add_parser("tails", help="empirical tail frequencies against the probabilistic bounds")
    s.add_argument("--kind", choices=("cond", "rho"), required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--tau", type=int)
    s.add_argument("--n", type=int, default=2000)
    s.add_argument("--model", choices=("uniform", "exact_bitsize"), default="uniform")
    s.add_argument("--t-grid", type=_float_list, help="comma-separated thresholds")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output directory")
    pool(s)
    s.set_defaults(func=cmd_tails)

    s = sub.add_parser("xval", help="cross-check Descartes, Sturm and the numeric oracle")
    s.add_argument("--n", type=int, default=500)
    s.add_argument("--d-max", type=int, default=64)
    s.add_argument("--tau-max", type=int, default=16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="directory for the summary and any failing instances")
    pool(s)
    s.set_defaults(func=cmd_xval)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"rootiso: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

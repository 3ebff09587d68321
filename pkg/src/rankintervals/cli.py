"""Command-line interface.

Exit status: 0 success, 2 usage or input error, 3 ranking not compatible
(``check`` only).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import simulation as sim
from .analysis import analyze
from .counting import DEFAULT_BUDGET, DEFAULT_MAX_SAMPLES, BudgetExceeded
from .inference import (ADJUSTMENTS, CiSpec, build_confidence_intervals,
                        intervals_from_standard_errors, product_set_contains,
                        set_estimator_contains)
from .ingest import (SUMMARY_COLUMNS, InputError, read_intervals, read_standard_errors,
                     read_summaries, sniff_columns)
from .order import IntervalFamily, cover_graph, distinguish_endpoints, validate_ranking

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCOMPATIBLE = 3


def _open_text(path: str):
    if path == "-":
        return sys.stdin
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    return p.open(encoding="utf-8", newline="")


def load_family(path: str, level: float = 0.95, adjustment: str = "unadjusted",
                quantile: str = "t") -> IntervalFamily:
    """Intervals from ``label,lower,upper``, or confidence intervals built from
    ``label,mean,sd,n`` summaries."""
    with _open_text(path) as fh:
        text = fh.read()
    columns = sniff_columns(text)
    if all(c in columns for c in SUMMARY_COLUMNS) and "lower" not in columns:
        summaries = read_summaries(io.StringIO(text))
        return build_confidence_intervals(summaries, CiSpec(level, adjustment, quantile))
    return read_intervals(io.StringIO(text))


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _count_options(args) -> dict:
    return {"method": args.method, "budget": args.exact_budget, "epsilon": args.epsilon,
            "delta": args.delta, "seed": args.seed, "max_samples": args.max_samples,
            "workers": args.workers}


def _report(family, args) -> int:
    report = analyze(family, ks=args.k or (), **_count_options(args))
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    family = load_family(args.input, args.level, args.adjustment, args.quantile)
    return _report(family, args)


def cmd_acs(args) -> int:
    with _open_text(args.input) as fh:
        labels, means, ses = read_standard_errors(fh)
    family = intervals_from_standard_errors(labels, means, ses, args.level, args.adjustment)
    return _report(family, args)


def parse_ranking(text: str, p: int) -> list[int]:
    try:
        ranks = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"ranking {text!r} must be comma-separated integers") from None
    return validate_ranking(ranks, p).tolist()


def cmd_check(args) -> int:
    family = load_family(args.input)
    ranking = parse_ranking(args.ranking, family.p)
    work = family if family.endpoints_distinct() else distinguish_endpoints(family)
    result = {"compatible": set_estimator_contains(ranking, family),
              "inProductSet": product_set_contains(ranking, work)}
    _emit(json.dumps(result) + "\n", args.output)
    return EXIT_OK if result["compatible"] else EXIT_INCOMPATIBLE


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(family: IntervalFamily) -> str:
    """Cover graph in DOT; nodes in input order, edges from lower to higher."""
    lines = ["digraph order {"]
    lines += [f"  {_dot_id(s)};" for s in family.labels]
    lines += [f"  {_dot_id(family.labels[i])} -> {_dot_id(family.labels[j])};"
              for i, j in cover_graph(family)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_dot(args) -> int:
    _emit(to_dot(load_family(args.input)), args.output)
    return EXIT_OK


def interval_plot_rows(family: IntervalFamily) -> list[tuple[str, float, float, int]]:
    """One plotting row per interval, stacked bottom-up by lower endpoint."""
    order = np.lexsort((np.arange(family.p), family.rights, family.lefts))
    return [(family.labels[j], float(family.lefts[j]), float(family.rights[j]), row)
            for row, j in enumerate(order, start=1)]


def to_tsv(family: IntervalFamily) -> str:
    lines = ["label\tlower\tupper\tdisplayRow"]
    lines += [f"{s}\t{lo!r}\t{hi!r}\t{row}" for s, lo, hi, row in interval_plot_rows(family)]
    return "\n".join(lines) + "\n"


def cmd_plot(args) -> int:
    _emit(to_tsv(load_family(args.input)), args.output)
    return EXIT_OK


def _simulate(args) -> tuple[dict, str]:
    common = {"fast": args.fast, "workers": args.workers}
    if args.experiment == 1:
        cases = args.cases or list(sim.CASES)
        out, tables = [], []
        for spec in sim.CI_SPECS:
            results = {c: sim.run_experiment1(c, spec, args.seed, args.trials, **common)
                       for c in cases}
            out += [{"case": c, "level": spec.level, "adjustment": spec.adjustment,
                     **r.as_dict()} for c, r in results.items()]
            tables.append(f"{spec} confidence intervals\n" + sim.table_experiment1(results))
        return {"results": out}, "\n\n".join(tables)
    if args.experiment == 2:
        factors = args.factors or list(sim.SCALE_FACTORS)
        results = sim.run_experiment2(factors, args.seed, args.trials, **common)
        out = [{"factor": f, **r.as_dict()} for f, r in zip(factors, results)]
        return {"results": out}, sim.table_experiment2(factors, results)
    levels = args.levels or list(sim.EXPERIMENT3_LEVELS)
    rows = sim.run_experiment3(args.p, levels, args.seed, args.trials, **common)
    return {"p": args.p, "results": [r.as_dict() for r in rows]}, sim.table_experiment3(rows)


def cmd_simulate(args) -> int:
    payload, table = _simulate(args)
    payload = {"experiment": args.experiment, "seed": args.seed, "trials": args.trials,
               "fast": args.fast, **payload}
    if args.json:
        _emit(json.dumps(payload, indent=2) + "\n", args.json)
    _emit(table + "\n", args.output)
    return EXIT_OK


def _probability(text: str) -> float:
    x = float(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return x


def _positive_int(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankintervals",
        description="Rankings compatible with interval estimates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p):
        p.add_argument("input", help="CSV file ('-' for stdin)")
        p.add_argument("-o", "--output", help="write here instead of stdout")

    def ci_args(p, level, adjustment):
        p.add_argument("--level", type=_probability, default=level,
                       help="joint confidence level (default %(default)s)")
        p.add_argument("--adjustment", choices=ADJUSTMENTS, default=adjustment)

    def count_args(p, epsilon=0.01, delta=0.005):
        p.add_argument("--k", type=_positive_int, action="append",
                       help="report k-top and k-bottom sets (repeatable)")
        p.add_argument("--method", choices=("auto", "exact", "approximate"), default="auto")
        p.add_argument("--exact-budget", type=_positive_int, default=DEFAULT_BUDGET,
                       help="max down-set states per block (default %(default)s)")
        p.add_argument("--epsilon", type=float, default=epsilon)
        p.add_argument("--delta", type=_probability, default=delta)
        p.add_argument("--seed", type=int, help="required whenever sampling is used")
        p.add_argument("--max-samples", type=_positive_int, default=DEFAULT_MAX_SAMPLES)
        p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("analyze", help="full analysis report (JSON)",
                       description="Input: label,lower,upper  or  label,mean,sd,n.")
    io_args(p)
    ci_args(p, 0.95, "unadjusted")
    p.add_argument("--quantile", choices=("t", "z"), default="t")
    count_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("acs", help="analysis from label,mean,se survey estimates")
    io_args(p)
    ci_args(p, 0.90, "bonferroni")
    count_args(p)
    p.set_defaults(func=cmd_acs)

    p = sub.add_parser("check", help="is a ranking compatible / in the product set")
    io_args(p)
    p.add_argument("ranking", help="comma-separated ranks, rank of parameter j at position j")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dot", help="cover graph as DOT")
    io_args(p)
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("plot", help="interval-plot data as TSV")
    io_args(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("simulate", help="run a simulation experiment")
    p.add_argument("--experiment", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--cases", nargs="+", choices=list(sim.CASES))
    p.add_argument("--factors", nargs="+", type=float)
    p.add_argument("--levels", nargs="+", type=_probability)
    p.add_argument("--p", type=_positive_int, default=1000, help="dimension for experiment 3")
    p.add_argument("--fast", action="store_true",
                   help="sample (mean, sd) directly instead of observations")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--json", help="also write results as JSON to this path ('-' for stdout)")
    p.add_argument("-o", "--output", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

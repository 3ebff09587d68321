"""Normal-mean simulation experiments.

Every trial draws from its own generator,
``Generator(PCG64(SeedSequence([seed, trial])))``, so results are identical
whether trials run serially or across worker processes, and different CI
procedures run with the same seed see the same data.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .counting import count_exact
from .inference import (CiSpec, SampleSummary, build_confidence_intervals,
                        product_set_contains, set_estimator_contains, true_ranking)

QUANTILE_LEVELS = (0.1, 0.5, 0.9)


@dataclass(frozen=True)
class GaussianConfig:
    mu: tuple[float, ...]
    sigma: tuple[float, ...]
    n_obs: int = 30
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "sigma", tuple(float(x) for x in self.sigma))
        if len(self.mu) != len(self.sigma):
            raise ValueError("mu and sigma differ in length")
        if len(set(self.mu)) != len(self.mu):
            raise ValueError("true means must be distinct")
        if not all(s > 0 for s in self.sigma):
            raise ValueError("standard deviations must be positive")
        if self.n_obs < 2:
            raise ValueError("need at least 2 observations per component")
        if self.trials < 1:
            raise ValueError("need at least one trial")

    @property
    def p(self) -> int:
        return len(self.mu)

    def scaled(self, factor: float) -> "GaussianConfig":
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return replace(self, sigma=tuple(s * factor for s in self.sigma))


_MU = (10.0, 10.2, 10.4, 10.6, 10.8)
CASES = {
    "i": GaussianConfig(_MU, (0.07,) * 5),
    "ii": GaussianConfig(_MU, (0.05, 0.05, 0.2, 0.2, 0.2)),
    "iii": GaussianConfig((10.0, 10.2, 10.7, 11.2, 11.4), (0.15, 0.15, 0.25, 0.15, 0.15)),
    "iv": GaussianConfig((10.0, 10.5, 10.7, 11.0, 11.2), (0.1, 0.3, 0.3, 0.1, 0.5)),
    "v": GaussianConfig((9.8, 10.5, 10.7, 10.9, 11.6), (0.5, 0.1, 0.1, 0.1, 0.5)),
}
CI_SPECS = (
    CiSpec(0.90, "bonferroni"),
    CiSpec(0.90, "unadjusted"),
    CiSpec(0.95, "bonferroni"),
    CiSpec(0.95, "unadjusted"),
)
SCALE_FACTORS = (0.25, 0.5, 1.0, 2.0, 4.0)
EXPERIMENT3_LEVELS = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1)


@dataclass
class ExperimentResult:
    q10: float
    q50: float
    q90: float
    coverage: float
    trials: int
    per_trial_counts: list[int] | None = field(default=None, repr=False)

    def as_dict(self, with_counts: bool = False) -> dict:
        d = {"q10": self.q10, "q50": self.q50, "q90": self.q90,
             "coverage": self.coverage, "trials": self.trials}
        if with_counts and self.per_trial_counts is not None:
            d["per_trial_counts"] = list(self.per_trial_counts)
        return d


@dataclass
class CoverageRow:
    level: float
    set_coverage: float
    product_coverage: float
    trials: int
    implication_failures: int

    def as_dict(self) -> dict:
        return {"level": self.level, "set_coverage": self.set_coverage,
                "product_coverage": self.product_coverage, "trials": self.trials,
                "implication_failures": self.implication_failures}


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def draw_estimates(mu, sigma, n_obs: int, rng: np.random.Generator,
                   fast: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Sample means and standard deviations of ``n_obs`` draws per component.

    ``fast`` samples the pair from its exact sampling distribution instead of
    drawing the observations.
    """
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if fast:
        means = rng.normal(mu, sigma / np.sqrt(n_obs))
        sds = sigma * np.sqrt(rng.chisquare(n_obs - 1, size=len(mu)) / (n_obs - 1))
        return means, sds
    obs = rng.normal(mu, sigma, size=(n_obs, len(mu)))
    return obs.mean(axis=0), obs.std(axis=0, ddof=1)


def empirical_quantiles(counts, levels=QUANTILE_LEVELS) -> list[float]:
    """Lower nearest-rank quantiles (always an observed count)."""
    return [float(q) for q in np.quantile(np.asarray(counts), levels, method="lower")]


def _summaries(means, sds, n_obs):
    return [SampleSummary(str(j + 1), float(m), float(s), n_obs)
            for j, (m, s) in enumerate(zip(means, sds))]


def _count_trials(config: GaussianConfig, spec: CiSpec, fast: bool,
                  trials: Sequence[int]) -> list[tuple[int, bool]]:
    truth = true_ranking(config.mu)
    out = []
    for t in trials:
        means, sds = draw_estimates(config.mu, config.sigma, config.n_obs,
                                    trial_rng(config.seed, t), fast)
        family = build_confidence_intervals(_summaries(means, sds, config.n_obs), spec)
        out.append((count_exact(family).value, set_estimator_contains(truth, family)))
    return out


def _chunks(n: int, k: int) -> list[range]:
    size = -(-n // k)
    return [range(a, min(n, a + size)) for a in range(0, n, size)]


def _map_trials(fn, args, trials: int, workers: int):
    if workers <= 1:
        return fn(*args, range(trials))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args, chunk) for chunk in _chunks(trials, workers * 4)]
        return [row for f in futures for row in f.result()]


def run_counting_experiment(config: GaussianConfig, spec: CiSpec, *, fast: bool = False,
                            workers: int = 1) -> ExperimentResult:
    """Per trial: simulate, build intervals, count compatible rankings
    exactly and check whether the true ranking is among them."""
    rows = _map_trials(_count_trials, (config, spec, fast), config.trials, workers)
    counts = [c for c, _ in rows]
    q10, q50, q90 = empirical_quantiles(counts)
    coverage = sum(hit for _, hit in rows) / len(rows)
    return ExperimentResult(q10, q50, q90, coverage, len(rows), counts)


def run_experiment1(case: str, spec: CiSpec, seed: int, trials: int = 1000, **kwargs) -> ExperimentResult:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {list(CASES)}")
    config = replace(CASES[case], seed=seed, trials=trials)
    return run_counting_experiment(config, spec, **kwargs)


def run_experiment2(scale_factors: Sequence[float] = SCALE_FACTORS, seed: int = 0,
                    trials: int = 1000, **kwargs) -> list[ExperimentResult]:
    """Case (iv), 95% unadjusted intervals, standard deviations scaled."""
    base = replace(CASES["iv"], seed=seed, trials=trials)
    spec = CiSpec(0.95, "unadjusted")
    return [run_counting_experiment(base.scaled(f), spec, **kwargs) for f in scale_factors]


def _coverage_trials(config: GaussianConfig, levels: Sequence[float], fast: bool,
                     trials: Sequence[int]) -> list[list[tuple[bool, bool]]]:
    truth = true_ranking(config.mu)
    specs = [CiSpec(level, "unadjusted") for level in levels]
    out = []
    for t in trials:
        means, sds = draw_estimates(config.mu, config.sigma, config.n_obs,
                                    trial_rng(config.seed, t), fast)
        summaries = _summaries(means, sds, config.n_obs)
        row = []
        for spec in specs:
            family = build_confidence_intervals(summaries, spec)
            row.append((set_estimator_contains(truth, family),
                        product_set_contains(truth, family)))
        out.append(row)
    return out


def run_coverage_experiment(config: GaussianConfig, levels: Sequence[float], *,
                            fast: bool = False, workers: int = 1) -> list[CoverageRow]:
    """Coverage of both confidence sets at each level, unadjusted intervals.

    All levels are evaluated on the same simulated data within a trial.
    """
    for level in levels:
        CiSpec(level)
    rows = _map_trials(_coverage_trials, (config, tuple(levels), fast), config.trials, workers)
    result = []
    for k, level in enumerate(levels):
        hits = [row[k] for row in rows]
        result.append(CoverageRow(
            level=level,
            set_coverage=sum(s for s, _ in hits) / len(hits),
            product_coverage=sum(c for _, c in hits) / len(hits),
            trials=len(hits),
            implication_failures=sum(s and not c for s, c in hits)))
    return result


def run_experiment3(p: int = 1000, levels: Sequence[float] = EXPERIMENT3_LEVELS,
                    seed: int = 0, trials: int = 1000, **kwargs) -> list[CoverageRow]:
    """mu_i = i, sigma_i^2 = 2, independent components."""
    config = GaussianConfig(tuple(range(1, p + 1)), (np.sqrt(2.0),) * p,
                            n_obs=30, trials=trials, seed=seed)
    return run_coverage_experiment(config, levels, **kwargs)


def _fmt(x: float) -> str:
    return f"{x:g}"


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def table_experiment1(results: dict[str, ExperimentResult]) -> str:
    rows = [[case, _fmt(r.q10), _fmt(r.q50), _fmt(r.q90), f"{r.coverage:.2f}"]
            for case, r in results.items()]
    return format_table(["Case", "q(0.1)", "q(0.5)", "q(0.9)", "p_c"], rows)


def table_experiment2(factors: Sequence[float], results: Sequence[ExperimentResult]) -> str:
    rows = [[_fmt(f), _fmt(r.q10), _fmt(r.q50), _fmt(r.q90), f"{r.coverage:.2f}"]
            for f, r in zip(factors, results)]
    return format_table(["Scaling Factor", "q(0.1)", "q(0.5)", "q(0.9)", "p_c"], rows)


def table_experiment3(rows: Sequence[CoverageRow]) -> str:
    body = [[f"{r.level:.2f}", f"{r.set_coverage:.2f}", f"{r.product_coverage:.2f}"]
            for r in rows]
    return format_table(["1 - alpha", "p_LE", "p_pc"], body)

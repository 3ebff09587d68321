"""Confidence intervals and the two confidence sets for the true ranking.

The set of compatible rankings is the primary estimator; the box of index
intervals (the product confidence set) always contains it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from .order import IntervalFamily, index_intervals, is_compatible, validate_ranking

ADJUSTMENTS = ("bonferroni", "unadjusted")
QUANTILES = ("t", "z")


@dataclass(frozen=True)
class SampleSummary:
    label: str
    mean: float
    sd: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"{self.label}: need at least 2 observations, got {self.n}")
        if not self.sd >= 0:
            raise ValueError(f"{self.label}: standard deviation must be non-negative")


@dataclass(frozen=True)
class CiSpec:
    """Joint level ``1 - alpha`` and the multiplicity adjustment.

    ``quantile`` selects Student-t (n - 1 degrees of freedom) or normal
    critical values.
    """

    level: float
    adjustment: str = "unadjusted"
    quantile: str = "t"

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        if self.adjustment not in ADJUSTMENTS:
            raise ValueError(f"adjustment must be one of {ADJUSTMENTS}")
        if self.quantile not in QUANTILES:
            raise ValueError(f"quantile must be one of {QUANTILES}")

    def tail_probability(self, p: int) -> float:
        """Upper-tail probability used for each two-sided interval."""
        m = p if self.adjustment == "bonferroni" else 1
        return (1.0 - self.level) / (2 * m)

    def critical_values(self, n, p: int):
        a = self.tail_probability(p)
        if self.quantile == "z":
            return np.broadcast_to(stats.norm.isf(a), np.shape(n)).astype(float)
        return stats.t.isf(a, np.asarray(n) - 1)

    def __str__(self) -> str:
        return f"{self.level:.0%} {self.adjustment}"


def intervals_from_estimates(means, scales, crit, labels=None) -> IntervalFamily:
    """Intervals ``mean ± crit * scale`` (scale is a standard error)."""
    means = np.asarray(means, dtype=float)
    half = np.asarray(crit, dtype=float) * np.asarray(scales, dtype=float)
    zero = np.flatnonzero(~(half > 0))
    if zero.size:
        name = labels[zero[0]] if labels is not None else str(zero[0] + 1)
        raise ValueError(
            f"{name}: zero-width confidence interval (standard error is 0); "
            "widen the interval explicitly before ranking")
    return IntervalFamily(means - half, means + half, labels)


def build_confidence_intervals(summaries: Sequence[SampleSummary], spec: CiSpec) -> IntervalFamily:
    """mean_j ± q * sd_j / sqrt(n_j), q the per-interval critical value."""
    if not summaries:
        raise ValueError("no summaries")
    n = np.array([s.n for s in summaries])
    crit = spec.critical_values(n, len(summaries))
    se = np.array([s.sd for s in summaries]) / np.sqrt(n)
    return intervals_from_estimates([s.mean for s in summaries], se, crit,
                                    [s.label for s in summaries])


def intervals_from_standard_errors(labels, means, ses, level: float,
                                   adjustment: str = "bonferroni") -> IntervalFamily:
    """Normal-quantile intervals from reported standard errors (treated as
    known), as used for large survey estimates."""
    spec = CiSpec(level, adjustment, quantile="z")
    crit = spec.critical_values(np.ones(len(means)), len(means))
    return intervals_from_estimates(means, ses, crit, list(labels))


def true_ranking(values) -> list[int]:
    """Rank vector of distinct true parameter values."""
    values = np.asarray(values, dtype=float)
    if len(np.unique(values)) != len(values):
        raise ValueError("true parameter values must be distinct")
    return (np.argsort(np.argsort(values, kind="stable"), kind="stable") + 1).tolist()


def set_estimator_contains(ranking, family: IntervalFamily) -> bool:
    """Whether the set of compatible rankings covers ``ranking``."""
    return is_compatible(ranking, family)


def product_set_contains(ranking, family: IntervalFamily) -> bool:
    r = validate_ranking(ranking, family.p)
    return all(lo <= rj <= hi for rj, (lo, hi) in zip(r, index_intervals(family)))


def product_set_size(family: IntervalFamily) -> int:
    """Number of rank vectors inside the box of index intervals (not all of
    them are permutations, so this can exceed p!)."""
    return math.prod(hi - lo + 1 for lo, hi in index_intervals(family))

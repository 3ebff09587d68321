"""Full analysis of an interval family, as consumed by the command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .counting import (DEFAULT_BUDGET, DEFAULT_MAX_SAMPLES, MAX_EXACT_BLOCK, BudgetExceeded,
                       ExtensionCount, combine_counts, count_approximate, count_exact,
                       uncertainty_measure)
from .order import (IntervalFamily, cover_graph, distinguish_endpoints, index_intervals,
                    k_bottom_set, k_top_set, partition_order)

METHODS = ("auto", "exact", "approximate")


class SeedRequired(ValueError):
    """Approximate counting was needed but no seed was supplied."""


@dataclass
class BlockResult:
    labels: list[str]
    count: ExtensionCount

    def as_dict(self) -> dict:
        measure = uncertainty_measure(self.count, len(self.labels))
        return {"labels": self.labels, "size": len(self.labels),
                "count": self.count.as_dict(), "proportion": measure.proportion,
                "log_proportion": measure.log_count - measure.log_total}


@dataclass
class AnalysisReport:
    family: IntervalFamily
    endpoints_distinct: bool
    partition: list[list[str]]
    index_intervals: list[tuple[int, int]]
    k_top: dict[int, list[str]]
    k_bottom: dict[int, list[str]]
    blocks: list[BlockResult]
    count: ExtensionCount
    cover_edges: list[tuple[str, str]]
    settings: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.family.p

    def as_dict(self) -> dict:
        labels = list(self.family.labels)
        measure = uncertainty_measure(self.count, self.p)
        return {
            "p": self.p,
            "labels": labels,
            "intervals": [{"label": s, "lower": a, "upper": b}
                          for s, (a, b) in zip(labels, self.family)],
            "endpoints_distinct": self.endpoints_distinct,
            "partition": self.partition,
            "index_intervals": [{"label": s, "lower": lo, "upper": hi}
                                for s, (lo, hi) in zip(labels, self.index_intervals)],
            "k_top": {str(k): v for k, v in self.k_top.items()},
            "k_bottom": {str(k): v for k, v in self.k_bottom.items()},
            "blocks": [b.as_dict() for b in self.blocks],
            "count": self.count.as_dict(),
            "uncertainty": measure.as_dict(),
            "cover_edges": [list(e) for e in self.cover_edges],
            "settings": self.settings,
        }


def count_blocks(family: IntervalFamily, *, method: str = "auto", budget: int = DEFAULT_BUDGET,
                 epsilon: float = 0.01, delta: float = 0.005, seed: int | None = None,
                 max_samples: int = DEFAULT_MAX_SAMPLES, workers: int = 1) -> list[BlockResult]:
    """Count each block of the maximal order partition.

    ``budget`` applies to each block separately.  ``auto`` counts exactly
    and falls back to sampling for blocks that exceed the budget;
    ``approximate`` samples every block with more than one element.
    Sampling needs an explicit seed.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    out = []
    for block in partition_order(family):
        sub = family.subset(block)
        labels = list(sub.labels)
        count = None
        if len(block) == 1:
            count = ExtensionCount.exact(1)
        elif method != "approximate" and len(block) <= MAX_EXACT_BLOCK:
            try:
                count = count_exact(sub, budget=budget)
            except BudgetExceeded:
                if method == "exact":
                    raise BudgetExceeded(
                        f"exact count of the {len(block)}-element block starting at "
                        f"{labels[0]!r} exceeds the budget of {budget} states", block) from None
        elif method == "exact":
            raise BudgetExceeded(
                f"block of {len(block)} elements exceeds the exact-counting limit", block)
        if count is None:
            if seed is None:
                raise SeedRequired(
                    f"the {len(block)}-element block starting at {labels[0]!r} needs "
                    "approximate counting; pass --seed")
            count = count_approximate(sub, epsilon, delta, seed, max_samples=max_samples,
                                      workers=workers)
        out.append(BlockResult(labels, count))
    return out


def analyze(family: IntervalFamily, ks: Sequence[int] = (), **count_options) -> AnalysisReport:
    distinct = family.endpoints_distinct()
    work = family if distinct else distinguish_endpoints(family)
    labels = family.labels
    blocks = count_blocks(family, **count_options)
    ks = sorted(set(ks))
    return AnalysisReport(
        family=family,
        endpoints_distinct=distinct,
        partition=partition_order(family).labeled(family),
        index_intervals=[tuple(iv) for iv in index_intervals(work)],
        k_top={k: [labels[j] for j in k_top_set(work, k)] for k in ks},
        k_bottom={k: [labels[j] for j in k_bottom_set(work, k)] for k in ks},
        blocks=blocks,
        count=combine_counts([b.count for b in blocks]),
        cover_edges=[(labels[i], labels[j]) for i, j in cover_graph(family)],
        settings={k: v for k, v in count_options.items() if k != "workers"},
    )

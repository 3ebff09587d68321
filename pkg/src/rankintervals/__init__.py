"""Uncertainty in rankings estimated from interval estimates.

The interval estimates induce an interval order; the rankings compatible
with the data are exactly its linear extensions.
"""

from .analysis import AnalysisReport, analyze
from .counting import (BudgetExceeded, ExtensionCount, UncertaintyMeasure, count_approximate,
                       count_exact, uncertainty_measure)
from .inference import (CiSpec, SampleSummary, build_confidence_intervals, product_set_contains,
                        product_set_size, set_estimator_contains)
from .order import (EndpointTieError, IndexInterval, Interval, IntervalFamily,
                    NotAnIntervalOrderError, OrderPartition, StrictOrder, build_order,
                    canonical_intervals, cover_graph, distinguish_endpoints,
                    down_set_cardinalities, index_intervals, is_compatible, k_bottom_set,
                    k_top_set, negate, partition_order, up_set_cardinalities)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "BudgetExceeded", "CiSpec", "EndpointTieError", "ExtensionCount",
    "IndexInterval", "Interval", "IntervalFamily", "NotAnIntervalOrderError", "OrderPartition",
    "SampleSummary", "StrictOrder", "UncertaintyMeasure", "analyze", "build_confidence_intervals",
    "build_order", "canonical_intervals", "count_approximate", "count_exact", "cover_graph",
    "distinguish_endpoints", "down_set_cardinalities", "index_intervals", "is_compatible",
    "k_bottom_set", "k_top_set", "negate", "partition_order", "product_set_contains",
    "product_set_size", "set_estimator_contains", "uncertainty_measure", "up_set_cardinalities",
]

"""Counting linear extensions of interval orders.

Exact counts come from a dynamic program over down-sets, run separately on
each block of the maximal order partition.  Approximate counts come from a
sequential sampler that builds a linear extension by repeatedly picking a
uniformly random minimal element; the product of the number of choices at
each step is an unbiased estimate of the count.

Random streams: batch ``b`` of a run seeded with ``seed`` draws from
``numpy.random.Generator(PCG64(SeedSequence([seed, b])))``, so the result
does not depend on how batches are spread across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .order import IntervalFamily, build_order, partition_order, width

DEFAULT_BUDGET = 10**7
DEFAULT_MAX_SAMPLES = 10**6
MAX_EXACT_BLOCK = 64
BATCH_SIZE = 4096


class BudgetExceeded(RuntimeError):
    """The exact counter would visit more down-sets than allowed."""

    def __init__(self, message: str, block: tuple[int, ...] | None = None):
        super().__init__(message)
        self.block = block


@dataclass(frozen=True)
class ExtensionCount:
    """Exact (``value`` is an int) or approximate (``value`` is a float)
    number of linear extensions.

    For approximate counts, ``log_value`` is authoritative; ``value`` is
    ``inf`` if the estimate exceeds the float range.  ``half_width`` is the
    absolute error bound at confidence ``1 - delta`` and ``converged`` is
    false when the sample cap was hit before reaching relative error
    ``epsilon``.
    """

    kind: str
    value: int | float
    log_value: float
    epsilon: float = 0.0
    delta: float = 0.0
    samples: int = 0
    half_width: float = 0.0
    converged: bool = True
    details: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def exact(cls, n: int) -> "ExtensionCount":
        return cls("exact", int(n), math.log(n))

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def relative_error(self) -> float:
        """Achieved relative half-width (0 for exact counts)."""
        if self.is_exact:
            return 0.0
        return self.details.get("relative_half_width", math.inf)

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "value": self.value, "log_value": self.log_value}
        if not self.is_exact:
            d.update(epsilon=self.epsilon, delta=self.delta, samples=self.samples,
                     half_width=self.half_width,
                     relative_half_width=self.relative_error,
                     converged=self.converged)
        if isinstance(d["value"], float) and not math.isfinite(d["value"]):
            d["value"] = None
        return d


def combine_counts(counts: list[ExtensionCount]) -> ExtensionCount:
    """Product of counts of independent blocks.

    Relative errors compound multiplicatively and the failure probabilities
    add (union bound).
    """
    if all(c.is_exact for c in counts):
        return ExtensionCount.exact(math.prod(c.value for c in counts))
    log_value = sum(c.log_value for c in counts)
    factor = math.prod(1.0 + c.relative_error for c in counts)
    rel = factor - 1.0
    eps = math.prod(1.0 + c.epsilon for c in counts) - 1.0
    delta = min(1.0, sum(c.delta for c in counts))
    value = _exp_or_inf(log_value)
    return ExtensionCount(
        "approximate", value, log_value, epsilon=eps, delta=delta,
        samples=sum(c.samples for c in counts), half_width=rel * value,
        converged=all(c.converged for c in counts),
        details={"relative_half_width": rel})


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _pred_masks(matrix: np.ndarray) -> list[int]:
    return [sum(1 << int(i) for i in np.flatnonzero(matrix[:, j])) for j in range(matrix.shape[0])]


def _down_set_dp(matrix: np.ndarray, budget: int) -> tuple[int, int]:
    """Layered DP over down-sets encoded as bitmasks: ``ways[D]`` is the
    number of orderings of D that respect the order.  Only two layers are
    live.  Returns (count, states visited)."""
    n = matrix.shape[0]
    preds = _pred_masks(matrix)
    layer = {0: 1}
    visited = 1
    for _ in range(n):
        nxt: dict[int, int] = {}
        for down, ways in layer.items():
            for e in range(n):
                bit = 1 << e
                if not down & bit and preds[e] & down == preds[e]:
                    key = down | bit
                    nxt[key] = nxt.get(key, 0) + ways
        visited += len(nxt)
        if visited > budget:
            raise BudgetExceeded(f"more than {budget} down-sets needed")
        layer = nxt
    (total,) = layer.values()
    return total, visited


def count_block(matrix: np.ndarray, budget: int = DEFAULT_BUDGET) -> int:
    """Number of linear extensions of the strict order given by ``matrix``."""
    return _down_set_dp(np.asarray(matrix, dtype=bool), budget)[0]


def count_exact(family: IntervalFamily, budget: int = DEFAULT_BUDGET) -> ExtensionCount:
    """Exact count, multiplied over the blocks of the maximal order partition.

    ``budget`` bounds the total number of down-sets visited across blocks.
    Raises BudgetExceeded (with the offending block attached) otherwise.
    """
    matrix = build_order(family).matrix
    total = 1
    remaining = budget
    for block in partition_order(family):
        if len(block) > MAX_EXACT_BLOCK:
            raise BudgetExceeded(
                f"block of {len(block)} elements exceeds the exact-counting limit "
                f"of {MAX_EXACT_BLOCK}", block)
        try:
            n, visited = _down_set_dp(matrix[np.ix_(block, block)], remaining)
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), block) from None
        total *= n
        remaining -= visited
    return ExtensionCount.exact(total)


def _weight_bound_log(family: IntervalFamily) -> float:
    """log of an upper bound on any sample weight: at most min(width, m)
    minimal elements remain when m elements are left."""
    w = width(family)
    return sum(math.log(min(w, m)) for m in range(1, family.p + 1))


def _sample_log_weights(matrix: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Log weights of ``n`` independent sequential samples."""
    p = matrix.shape[0]
    succ = matrix.astype(np.int32)
    indeg = np.broadcast_to(succ.sum(axis=0), (n, p)).copy()
    used = np.zeros((n, p), dtype=bool)
    logw = np.zeros(n)
    rows = np.arange(n)
    for _ in range(p):
        avail = (indeg == 0) & ~used
        counts = avail.sum(axis=1)
        logw += np.log(counts)
        pick = np.floor(rng.random(n) * counts).astype(np.int64)
        chosen = np.argmax(np.cumsum(avail, axis=1) > pick[:, None], axis=1)
        used[rows, chosen] = True
        indeg -= succ[chosen]
    return logw


def sample_log_weights(family: IntervalFamily, n_batches: int, seed: int,
                       first_batch: int = 0, batch_size: int = BATCH_SIZE,
                       workers: int = 1) -> np.ndarray:
    """Log weights for batches ``first_batch .. first_batch + n_batches - 1``.

    Each batch has its own stream keyed by (seed, batch index), so the
    output is identical for any ``workers``.
    """
    matrix = build_order(family).matrix

    def run(b):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, b])))
        return _sample_log_weights(matrix, batch_size, rng)

    batches = range(first_batch, first_batch + n_batches)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, batches))
    else:
        parts = [run(b) for b in batches]
    return np.concatenate(parts) if parts else np.empty(0)


def bernstein_half_width(logw: np.ndarray, log_range: float, delta: float) -> tuple[float, float, float]:
    """Empirical-Bernstein confidence bound on the mean weight.

    Returns (log mean, relative half-width, log half-width).  Weights lie in
    [1, exp(log_range)]; everything is computed relative to the largest
    log weight so huge counts stay in float range.
    """
    n = len(logw)
    scale = max(float(np.max(logw)), log_range)
    w = np.exp(logw - scale)
    mean = float(np.mean(w))
    sd = float(np.std(w, ddof=1)) if n > 1 else math.inf
    # weight range U - 1 in units of exp(scale), with U = exp(log_range)
    spread = -math.expm1(-log_range) * math.exp(log_range - scale)
    log3d = math.log(3.0 / delta)
    hw = sd * math.sqrt(2.0 * log3d / n) + 3.0 * spread * log3d / n
    log_mean = math.log(mean) + scale
    return log_mean, hw / mean, (math.log(hw) + scale) if hw > 0 else -math.inf


def count_approximate(family: IntervalFamily, epsilon: float, delta: float, seed: int,
                      max_samples: int = DEFAULT_MAX_SAMPLES,
                      batch_size: int = BATCH_SIZE, workers: int = 1) -> ExtensionCount:
    """Sequential-sampling estimate of the number of linear extensions.

    Samples are drawn in batches; after 1, 2, 4, ... batches an
    empirical-Bernstein bound at confidence level ``1 - delta/(k(k+1))`` is
    checked (k counts checkpoints, so the levels sum to ``delta``).
    Sampling stops once the estimate is within a factor ``1 + epsilon`` of
    the true count on that event, or when ``max_samples`` is reached.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if max_samples < 2:
        raise ValueError("max_samples must be at least 2")
    log_range = _weight_bound_log(family)
    max_batches = max(1, -(-max_samples // batch_size))
    target = epsilon / (1.0 + epsilon)

    logw = np.empty(0)
    done = 0
    k = 0
    while True:
        want = min(max_batches, max(1, 2 * done))
        logw = np.concatenate([logw, sample_log_weights(
            family, want - done, seed, first_batch=done,
            batch_size=batch_size, workers=workers)])
        done = want
        k += 1
        n = min(len(logw), max_samples)
        log_mean, rel, log_hw = bernstein_half_width(
            logw[:n], log_range, delta / (k * (k + 1)))
        if log_range == 0.0 or rel <= target:
            converged = True
            break
        if done >= max_batches:
            converged = False
            break

    sd_rel = float(np.std(np.exp(logw[:n] - logw[:n].max()), ddof=1)
                   / np.mean(np.exp(logw[:n] - logw[:n].max()))) if n > 1 else 0.0
    return ExtensionCount(
        "approximate", _exp_or_inf(log_mean), log_mean,
        epsilon=epsilon, delta=delta, samples=n,
        half_width=_exp_or_inf(log_hw) if log_hw > -math.inf else 0.0,
        converged=converged,
        details={"relative_half_width": 0.0 if log_range == 0.0 else rel,
                 "relative_standard_error": sd_rel / math.sqrt(n),
                 "log_weight_bound": log_range,
                 "checkpoints": k})


@dataclass(frozen=True)
class UncertaintyMeasure:
    """Fraction of all p! rankings that are compatible with the data."""

    log_count: float
    log_total: float
    proportion: float

    def as_dict(self) -> dict:
        return {"log_count": self.log_count, "log_total": self.log_total,
                "proportion": self.proportion}


def log_factorial(p: int) -> float:
    return math.fsum(math.log(i) for i in range(2, p + 1))


def uncertainty_measure(count: ExtensionCount, p: int) -> UncertaintyMeasure:
    if p < 1:
        raise ValueError("p must be positive")
    log_total = log_factorial(p)
    if count.is_exact:
        # correctly rounded ratio of the integers
        proportion = float(Fraction(int(count.value), math.factorial(p)))
    else:
        proportion = math.exp(count.log_value - log_total)
    return UncertaintyMeasure(count.log_value, log_total, proportion)

"""Interval orders and the polynomial-time computations on them.

Elements are addressed by 0-based position in the family.  Rankings are
rank vectors: ``ranks[j]`` is the rank (1 = smallest) of parameter ``j``.

Comparability is strict: ``i`` precedes ``j`` iff ``right[i] < left[j]``.
Intervals that touch at an endpoint are incomparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np


class EndpointTieError(ValueError):
    """Raised when an operation needs pairwise-distinct endpoints."""


class NotAnIntervalOrderError(ValueError):
    """Raised when a relation contains a 2+2 (or is not a strict order)."""

    def __init__(self, message: str, witness: tuple[int, int, int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class Interval(NamedTuple):
    left: float
    right: float


class IndexInterval(NamedTuple):
    lower: int
    upper: int


class IntervalFamily:
    """An ordered, labeled collection of ``p`` intervals.

    Zero-length intervals are rejected unless ``allow_points`` is set; the
    latter exists only for integer canonical representations, which are
    passed through :func:`distinguish_endpoints` before further use.
    """

    __slots__ = ("_lefts", "_rights", "_labels")

    def __init__(self, lefts, rights, labels: Sequence[str] | None = None,
                 *, allow_points: bool = False):
        lefts = np.array(lefts, dtype=float)
        rights = np.array(rights, dtype=float)
        if lefts.ndim != 1 or lefts.shape != rights.shape:
            raise ValueError("lefts and rights must be 1-d and of equal length")
        p = len(lefts)
        if p < 1:
            raise ValueError("no intervals")
        if not (np.all(np.isfinite(lefts)) and np.all(np.isfinite(rights))):
            raise ValueError("interval endpoints must be finite")
        bad = np.flatnonzero(lefts > rights if allow_points else lefts >= rights)
        if bad.size:
            j = int(bad[0])
            raise ValueError(
                f"interval {j} has non-positive length: [{lefts[j]}, {rights[j]}]"
                " (widen point estimates explicitly)")
        if labels is None:
            labels = [str(j + 1) for j in range(p)]
        labels = tuple(str(s) for s in labels)
        if len(labels) != p:
            raise ValueError("labels and intervals differ in length")
        if len(set(labels)) != p:
            seen = set()
            dup = next(s for s in labels if s in seen or seen.add(s))
            raise ValueError(f"duplicate label {dup!r}")
        lefts.setflags(write=False)
        rights.setflags(write=False)
        self._lefts = lefts
        self._rights = rights
        self._labels = labels

    @classmethod
    def from_pairs(cls, pairs, labels=None, **kwargs) -> "IntervalFamily":
        pairs = list(pairs)
        return cls([a for a, _ in pairs], [b for _, b in pairs], labels, **kwargs)

    @property
    def lefts(self) -> np.ndarray:
        return self._lefts

    @property
    def rights(self) -> np.ndarray:
        return self._rights

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def p(self) -> int:
        return len(self._lefts)

    def __len__(self) -> int:
        return self.p

    def __getitem__(self, j: int) -> Interval:
        return Interval(float(self._lefts[j]), float(self._rights[j]))

    def __iter__(self) -> Iterator[Interval]:
        return (self[j] for j in range(self.p))

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalFamily):
            return NotImplemented
        return (self._labels == other._labels
                and np.array_equal(self._lefts, other._lefts)
                and np.array_equal(self._rights, other._rights))

    def __repr__(self) -> str:
        body = ", ".join(f"{s}=[{a:g}, {b:g}]" for s, (a, b) in zip(self._labels, self))
        return f"IntervalFamily({body})"

    def endpoints_distinct(self) -> bool:
        allpts = np.concatenate([self._lefts, self._rights])
        return len(np.unique(allpts)) == len(allpts)

    def subset(self, indices: Sequence[int]) -> "IntervalFamily":
        idx = list(indices)
        return IntervalFamily(self._lefts[idx], self._rights[idx],
                              [self._labels[j] for j in idx], allow_points=True)


def negate(family: IntervalFamily) -> IntervalFamily:
    """Image of the family under x -> -x; generates the dual order."""
    return IntervalFamily(-family.rights, -family.lefts, family.labels, allow_points=True)


@dataclass(frozen=True, eq=False)
class StrictOrder:
    """A strict partial order on ``range(p)`` as a boolean relation matrix.

    ``matrix[i, j]`` is true iff ``i`` precedes ``j``.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("relation matrix must be square")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, p: int, pairs) -> "StrictOrder":
        m = np.zeros((p, p), dtype=bool)
        for i, j in pairs:
            m[i, j] = True
        return cls(m)

    @property
    def p(self) -> int:
        return self.matrix.shape[0]

    @property
    def pairs(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in zip(*np.nonzero(self.matrix))}

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrictOrder):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def is_strict_order(self) -> bool:
        m = self.matrix
        if m.diagonal().any() or (m & m.T).any():
            return False
        return np.array_equal(transitive_closure(m), m)

    def predecessor_counts(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def successor_counts(self) -> np.ndarray:
        return self.matrix.sum(axis=1)


def transitive_closure(matrix: np.ndarray) -> np.ndarray:
    """Warshall's algorithm on a boolean adjacency matrix."""
    m = np.array(matrix, dtype=bool)
    for k in range(m.shape[0]):
        m |= np.outer(m[:, k], m[k, :])
    return m


def build_order(family: IntervalFamily) -> StrictOrder:
    return StrictOrder(family.rights[:, None] < family.lefts[None, :])


@dataclass(frozen=True)
class OrderPartition:
    """Ordered blocks; every element of an earlier block precedes every
    element of a later block."""

    blocks: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def labeled(self, family: IntervalFamily) -> list[list[str]]:
        return [[family.labels[j] for j in block] for block in self.blocks]


def partition_order(family: IntervalFamily) -> OrderPartition:
    """Maximal order partition, splitting wherever the largest right endpoint
    seen so far lies strictly left of the next left endpoint."""
    order = np.argsort(family.lefts, kind="stable")
    lefts = family.lefts[order]
    reach = np.maximum.accumulate(family.rights[order])
    cuts = np.flatnonzero(reach[:-1] < lefts[1:]) + 1
    blocks = np.split(order, cuts)
    return OrderPartition(tuple(tuple(sorted(int(j) for j in b)) for b in blocks))


def validate_ranking(ranking: Sequence[int], p: int | None = None) -> np.ndarray:
    r = np.asarray(ranking)
    if r.ndim != 1:
        raise ValueError("ranking must be a flat sequence of ranks")
    if p is not None and len(r) != p:
        raise ValueError(f"ranking has length {len(r)} but the family has {p} intervals")
    if not np.issubdtype(r.dtype, np.integer):
        if not np.all(r == np.round(r)):
            raise ValueError("ranks must be integers")
        r = r.astype(int)
    if not np.array_equal(np.sort(r), np.arange(1, len(r) + 1)):
        raise ValueError(f"ranking is not a permutation of 1..{len(r)}")
    return r


def ranking_from_sequence(seq: Sequence[int]) -> list[int]:
    """Rank vector from elements listed smallest first."""
    ranks = [0] * len(seq)
    for pos, j in enumerate(seq, start=1):
        ranks[j] = pos
    return validate_ranking(ranks).tolist()


def sequence_from_ranking(ranking: Sequence[int]) -> list[int]:
    """Elements listed smallest first, from a rank vector."""
    return np.argsort(validate_ranking(ranking)).tolist()


def is_compatible(ranking: Sequence[int], family: IntervalFamily) -> bool:
    """True iff the ranking is a linear extension of the interval order.

    Visits intervals in increasing rank and fails as soon as some interval
    still to come lies strictly left of the current one.
    """
    r = validate_ranking(ranking, family.p)
    seq = np.argsort(r)
    rights = family.rights[seq]
    # min right endpoint over the current and all later positions
    tail_min = np.minimum.accumulate(rights[::-1])[::-1]
    return bool(np.all(tail_min >= family.lefts[seq]))


def _require_distinct(family: IntervalFamily) -> None:
    if not family.endpoints_distinct():
        raise EndpointTieError(
            "interval endpoints are not pairwise distinct; "
            "apply distinguish_endpoints() first")


def down_set_cardinalities(family: IntervalFamily) -> np.ndarray:
    """|down-set of j| (j included) for every j, by one sweep over the sorted
    endpoints: a left endpoint records one plus the right endpoints seen so far."""
    _require_distinct(family)
    p = family.p
    points = np.concatenate([family.lefts, family.rights])
    is_right = np.repeat([False, True], p)
    owner = np.tile(np.arange(p), 2)
    order = np.argsort(points)
    rights_seen = np.cumsum(is_right[order])
    out = np.empty(p, dtype=int)
    lefts_at = ~is_right[order]
    out[owner[order][lefts_at]] = 1 + rights_seen[lefts_at]
    return out


def up_set_cardinalities(family: IntervalFamily) -> np.ndarray:
    return down_set_cardinalities(negate(family))


def index_intervals(family: IntervalFamily) -> list[IndexInterval]:
    p = family.p
    down = down_set_cardinalities(family)
    up = up_set_cardinalities(family)
    return [IndexInterval(int(d), int(p + 1 - u)) for d, u in zip(down, up)]


def _check_k(k: int, p: int) -> None:
    if not 1 <= k <= p:
        raise ValueError(f"k must lie in 1..{p}, got {k}")


def k_top_set(family: IntervalFamily, k: int) -> list[int]:
    """Elements that are among the k smallest in some compatible ranking."""
    _check_k(k, family.p)
    return np.flatnonzero(down_set_cardinalities(family) <= k).tolist()


def k_bottom_set(family: IntervalFamily, k: int) -> list[int]:
    """Elements that are among the k largest in some compatible ranking."""
    _check_k(k, family.p)
    return k_top_set(negate(family), k)


def find_two_plus_two(order: StrictOrder) -> tuple[int, int, int, int] | None:
    """Return (a, b, c, d) with a<b, c<d and no other relations among them,
    or None if the order is 2+2-free.

    Uses the fact that an order is 2+2-free iff its predecessor sets form a
    chain under inclusion, so only adjacent sets (by size) need comparing.
    """
    m = order.matrix
    sizes = m.sum(axis=0)
    by_size = np.argsort(sizes, kind="stable")
    for x, y in zip(by_size[:-1], by_size[1:]):
        extra = m[:, x] & ~m[:, y]
        if extra.any():
            a = int(np.argmax(extra))
            c = int(np.argmax(m[:, y] & ~m[:, x]))
            return a, int(x), c, int(y)
    return None


def canonical_intervals(order: StrictOrder, labels: Sequence[str] | None = None) -> IntervalFamily:
    """Integer canonical representation of an interval order.

    Left endpoint of j: number of distinct predecessor sets strictly inside
    pred(j).  Right endpoint: number of distinct successor sets strictly
    containing succ(j).  Both families of sets are chains, so comparing
    sizes is enough once the chain property has been checked.
    """
    if not order.is_strict_order():
        raise NotAnIntervalOrderError("relation is not a strict partial order")
    witness = find_two_plus_two(order)
    if witness is not None:
        a, b, c, d = witness
        raise NotAnIntervalOrderError(
            f"not an interval order: {a}<{b} and {c}<{d} form a 2+2", witness)
    pred_sizes = order.predecessor_counts()
    succ_sizes = order.successor_counts()
    distinct_pred = np.unique(pred_sizes)
    distinct_succ = np.unique(succ_sizes)
    lefts = np.searchsorted(distinct_pred, pred_sizes, side="left")
    rights = len(distinct_succ) - np.searchsorted(distinct_succ, succ_sizes, side="right")
    return IntervalFamily(lefts, rights, labels, allow_points=True)


def distinguish_endpoints(family: IntervalFamily) -> IntervalFamily:
    """Order-preserving integer relabeling with pairwise-distinct endpoints.

    Each endpoint value v maps to ``2p * rank(v) + offset`` where rank is
    taken over the distinct values and the offset (1..2p) breaks ties: left
    endpoints by interval index first, then right endpoints by interval
    index.  Right after left keeps touching intervals incomparable.
    """
    p = family.p
    points = np.concatenate([family.lefts, family.rights])
    values, rank = np.unique(points, return_inverse=True)
    is_right = np.repeat([0, 1], p)
    owner = np.tile(np.arange(p), 2)
    order = np.lexsort((owner, is_right, rank))
    offset = np.empty(2 * p, dtype=np.int64)
    sorted_rank = rank[order]
    starts = np.r_[0, np.flatnonzero(np.diff(sorted_rank)) + 1]
    group_start = np.repeat(starts, np.diff(np.r_[starts, 2 * p]))
    offset[order] = np.arange(2 * p) - group_start + 1
    new = 2 * p * rank.astype(np.int64) + offset
    return IntervalFamily(new[:p], new[p:], family.labels)


def cover_graph(family: IntervalFamily) -> list[tuple[int, int]]:
    """Transitive reduction of the interval order, as sorted (i, j) edges."""
    m = build_order(family).matrix
    mi = m.astype(np.int64)
    through = (mi @ mi) > 0
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(m & ~through))]


def width(family: IntervalFamily) -> int:
    """Size of the largest antichain (largest set of mutually overlapping
    intervals, touching counted as overlap)."""
    points = np.concatenate([family.lefts, family.rights])
    delta = np.repeat([1, -1], family.p)
    # at equal coordinates openings are processed before closings
    order = np.lexsort((-delta, points))
    return int(np.max(np.cumsum(delta[order])))

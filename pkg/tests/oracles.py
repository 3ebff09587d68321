"""Brute-force references.  Nothing here imports the package under test."""

from functools import lru_cache
from itertools import permutations

import numpy as np


def relation_pairs(intervals):
    """(i, j) with interval i strictly left of interval j."""
    return [(i, j) for i, (_, ri) in enumerate(intervals)
            for j, (lj, _) in enumerate(intervals) if ri < lj]


@lru_cache(maxsize=None)
def all_rank_vectors(p):
    """Every permutation of 1..p as rank vectors, shape (p!, p)."""
    return np.array(list(permutations(range(1, p + 1))), dtype=np.int8).reshape(-1, p)


def compatible_rank_vectors(intervals):
    ranks = all_rank_vectors(len(intervals))
    ok = np.ones(len(ranks), dtype=bool)
    for i, j in relation_pairs(intervals):
        ok &= ranks[:, i] < ranks[:, j]
    return ranks[ok]


def brute_count(intervals):
    return len(compatible_rank_vectors(intervals))


def brute_is_compatible(ranking, intervals):
    return all(ranking[i] < ranking[j] for i, j in relation_pairs(intervals))


def brute_down_up(intervals):
    p = len(intervals)
    pairs = relation_pairs(intervals)
    down = [1 + sum(1 for i, j in pairs if j == k) for k in range(p)]
    up = [1 + sum(1 for i, j in pairs if i == k) for k in range(p)]
    return down, up


def brute_reduction(intervals):
    pairs = set(relation_pairs(intervals))
    p = len(intervals)
    return sorted((i, j) for i, j in pairs
                  if not any((i, k) in pairs and (k, j) in pairs for k in range(p)))


def closure(p, edges):
    reach = set(edges)
    changed = True
    while changed:
        changed = False
        for i, j in list(reach):
            for k, m in list(reach):
                if j == k and (i, m) not in reach:
                    reach.add((i, m))
                    changed = True
    return reach

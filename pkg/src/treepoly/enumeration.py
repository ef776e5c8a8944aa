"""Exhaustive generation of unlabeled rooted trees and forests.

Trees are produced from canonical level sequences with the Beyer-Hedetniemi
successor rule, which runs in constant amortized time and visits the
sequences in lexicographically decreasing order, starting from the path.
:func:`count_rooted_trees` counts the same classes arithmetically and never
enumerates anything, so the two can check each other.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .trees import RootedForest, RootedTree, parse_level_sequence, remove_root

__all__ = [
    "level_sequences",
    "enumerate_rooted_trees",
    "enumerate_forests",
    "count_rooted_trees",
    "count_forests",
    "TreeStream",
]


def level_sequences(n: int) -> Iterator[list[int]]:
    """Yield every canonical level sequence on ``n`` vertices (root depth 0).

    The yielded list is reused between steps; copy it to keep it.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    seq = list(range(n))
    while True:
        yield seq
        p = n - 1
        while p > 0 and seq[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while seq[q] != seq[p] - 1:
            q -= 1
        shift = p - q
        for i in range(p, n):
            seq[i] = seq[i - shift]


class TreeStream:
    """Single-consumer iterator over one shard of the n-vertex trees.

    Shard ``k`` of ``shards`` receives the trees whose position in generation
    order is congruent to ``k``; the shards are disjoint and together
    exhaustive for every shard count.
    """

    def __init__(self, n: int, shard: int = 0, shards: int = 1):
        if n < 1:
            raise ValueError("n must be at least 1")
        if shards < 1 or not 0 <= shard < shards:
            raise ValueError(f"invalid shard {shard} of {shards}")
        self.n = n
        self.shard = shard
        self.shards = shards
        self._it = self._generate()

    def _generate(self) -> Iterator[RootedTree]:
        for i, seq in enumerate(level_sequences(self.n)):
            if i % self.shards == self.shard:
                yield parse_level_sequence(seq)

    def __iter__(self):
        return self

    def __next__(self) -> RootedTree:
        return next(self._it)


def enumerate_rooted_trees(n: int, shard: int = 0, shards: int = 1) -> TreeStream:
    return TreeStream(n, shard, shards)


def enumerate_forests(n: int, shard: int = 0, shards: int = 1) -> Iterator[RootedForest]:
    """All forests on ``n`` vertices, as the root-deleted trees on ``n + 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for t in TreeStream(n + 1, shard, shards):
        yield remove_root(t)


@lru_cache(maxsize=None)
def count_rooted_trees(n: int) -> int:
    """Number of unlabeled rooted trees on ``n`` vertices.

    Uses ``(n-1) a(n) = sum_{k=1}^{n-1} (sum_{d | k} d a(d)) a(n-k)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return 1
    total = 0
    for k in range(1, n):
        total += _divisor_weight(k) * count_rooted_trees(n - k)
    q, r = divmod(total, n - 1)
    assert r == 0
    return q


@lru_cache(maxsize=None)
def _divisor_weight(k: int) -> int:
    return sum(d * count_rooted_trees(d) for d in range(1, k + 1) if k % d == 0)


def count_forests(n: int) -> int:
    return count_rooted_trees(n + 1)

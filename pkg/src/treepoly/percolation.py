"""Seeded Monte Carlo for site percolation and the cutting model on a rooted tree.

Vertices are addressed by pre-order index (root = 0).  Randomness comes only
from explicit integer seeds through :class:`numpy.random.Generator`; batch
``i`` of a run with seed ``s`` draws from ``SeedSequence([s, i])``, so the
merged result does not depend on how batches are scheduled.

Percolation keep-probabilities are multiples of 2**-16 (see
:func:`quantize_probability`); each vertex is kept when a 16-bit uniform
draw falls below ``q * 2**16``.  Cutting clocks are 64-bit uniform integers,
read as times ``clock / 2**64``; equal clocks ring in pre-order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .invariants import pgf_separation, poly_p
from .poly import ONE, Z, MultiPoly, integrate_unit_interval, substitute
from .trees import RootedTree

__all__ = [
    "Estimate",
    "CuttingOutcome",
    "Comparison",
    "Q_BITS",
    "BATCH_SIZE",
    "quantize_probability",
    "percolate_root_cluster",
    "percolation_cluster",
    "estimate_p",
    "draw_clocks",
    "simulate_cutting",
    "cutting_from_clocks",
    "cutting_cluster_at",
    "separation_survivors",
    "separation_counts",
    "estimate_separation_histogram",
    "is_admissible",
    "separation_probability",
    "compare_p",
    "compare_histogram",
    "within_band",
]

Q_BITS = 16
_Q_SCALE = 1 << Q_BITS
BATCH_SIZE = 1 << 14

Probability = Union[Fraction, float, str, int]


@dataclass(frozen=True)
class Estimate:
    value: float
    samples: int
    hits: int

    @property
    def stderr(self) -> float:
        return math.sqrt(self.value * (1.0 - self.value) / self.samples)


@dataclass(frozen=True)
class CuttingOutcome:
    vertices: frozenset[int]
    size: int
    boundary_size: int


def quantize_probability(q: Probability) -> Fraction:
    """Round ``q`` to the nearest multiple of 2**-16 (ties to even).

    Strings are read as exact decimals, so ``"0.1"`` becomes 6554/65536.
    """
    exact = Fraction(q)
    if not 0 <= exact <= 1:
        raise ValueError(f"probability {q} is outside [0, 1]")
    return Fraction(round(exact * _Q_SCALE), _Q_SCALE)


class _Shape:
    """Array view of a tree: parents, leaves and pre-order layout."""

    def __init__(self, t: RootedTree):
        self.parents = t.parents()
        self.n = len(self.parents)
        has_child = [False] * self.n
        for p in self.parents[1:]:
            has_child[p] = True
        self.leaves = [v for v in range(self.n) if not has_child[v]]
        self.is_leaf = [not c for c in has_child]
        self.children: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parents[1:], start=1):
            self.children[p].append(v)


def _rng(seed: int, batch: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), batch]))


def _batches(samples: int) -> list[tuple[int, int]]:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    out = []
    start = 0
    idx = 0
    while start < samples:
        size = min(BATCH_SIZE, samples - start)
        out.append((idx, size))
        start += size
        idx += 1
    return out


def _run_batches(func, samples: int, jobs: int):
    batches = _batches(samples)
    if jobs <= 1:
        return [func(b, size) for b, size in batches]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda bs: func(*bs), batches))


# -- percolation -----------------------------------------------------------------

def percolation_cluster(t: RootedTree, kept: Sequence[bool]) -> frozenset[int]:
    """Root cluster of the kept vertices (empty when the root is deleted)."""
    parents = t.parents()
    if len(kept) != len(parents):
        raise ValueError("kept must have one entry per vertex")
    if not kept[0]:
        return frozenset()
    inside = [False] * len(parents)
    inside[0] = True
    for v in range(1, len(parents)):
        inside[v] = bool(kept[v]) and inside[parents[v]]
    return frozenset(v for v, flag in enumerate(inside) if flag)


def percolate_root_cluster(t: RootedTree, q: Probability, seed: int) -> frozenset[int]:
    """One Ber(q) site percolation sample; returns the root cluster."""
    threshold = int(quantize_probability(q) * _Q_SCALE)
    draws = _rng(seed).integers(0, _Q_SCALE, size=t.size)
    return percolation_cluster(t, draws < threshold)


def _p_batch(shape: _Shape, threshold: int, seed: int, batch: int, size: int) -> int:
    draws = _rng(seed, batch).integers(0, _Q_SCALE, size=(size, shape.n), dtype=np.uint32)
    kept = draws < threshold
    reach = np.empty_like(kept)
    reach[:, 0] = kept[:, 0]
    for v in range(1, shape.n):
        reach[:, v] = kept[:, v] & reach[:, shape.parents[v]]
    return int(reach[:, shape.leaves].any(axis=1).sum())


def estimate_p(t: RootedTree, q: Probability, samples: int, seed: int, jobs: int = 1) -> Estimate:
    """Fraction of samples whose root cluster reaches an original leaf."""
    threshold = int(quantize_probability(q) * _Q_SCALE)
    shape = _Shape(t)
    hits = sum(_run_batches(lambda b, s: _p_batch(shape, threshold, seed, b, s), samples, jobs))
    return Estimate(hits / samples, samples, hits)


# -- cutting model ---------------------------------------------------------------------

def draw_clocks(t: RootedTree, seed: int, batch: int = 0) -> list[int]:
    """Alarm clocks for every vertex as 64-bit integers."""
    raw = _rng(seed, batch).integers(0, 2**64, size=t.size, dtype=np.uint64, endpoint=False)
    return [int(c) for c in raw]


def cutting_from_clocks(t: RootedTree, clocks: Sequence[int]) -> CuttingOutcome:
    """Replay cuts in clock order until no original leaf is left in the root cluster."""
    shape = _Shape(t)
    if len(clocks) != shape.n:
        raise ValueError("need one clock per vertex")
    alive = [True] * shape.n
    leaves_alive = len(shape.leaves)
    for v in sorted(range(shape.n), key=lambda u: (clocks[u], u)):
        if not alive[v]:
            continue
        # cut v and discard everything below it
        stack = [v]
        while stack:
            u = stack.pop()
            alive[u] = False
            if shape.is_leaf[u]:
                leaves_alive -= 1
            stack.extend(w for w in shape.children[u] if alive[w])
        if leaves_alive == 0:
            break
    kept = frozenset(v for v in range(shape.n) if alive[v])
    return CuttingOutcome(kept, len(kept), _boundary_size(shape, kept))


def _boundary_size(shape: _Shape, kept: frozenset[int]) -> int:
    if not kept:
        return 1
    return sum(1 for v in range(1, shape.n) if v not in kept and shape.parents[v] in kept)


def simulate_cutting(t: RootedTree, seed: int) -> CuttingOutcome:
    return cutting_from_clocks(t, draw_clocks(t, seed))


def cutting_cluster_at(t: RootedTree, clocks: Sequence[int], time: int) -> frozenset[int]:
    """Root cluster of the cutting model once every clock ``<= time`` has rung."""
    shape = _Shape(t)
    alive = [True] * shape.n
    for v in sorted(range(shape.n), key=lambda u: (clocks[u], u)):
        if clocks[v] > time:
            break
        if not alive[v]:
            continue
        stack = [v]
        while stack:
            u = stack.pop()
            alive[u] = False
            stack.extend(w for w in shape.children[u] if alive[w])
    return frozenset(v for v in range(shape.n) if alive[v])


def is_admissible(t: RootedTree, vertices: frozenset[int]) -> bool:
    """Empty, or a root-containing connected set avoiding every leaf."""
    if not vertices:
        return True
    shape = _Shape(t)
    if 0 not in vertices:
        return False
    for v in vertices:
        if shape.is_leaf[v]:
            return False
        if v and shape.parents[v] not in vertices:
            return False
    return True


def separation_survivors(t_or_shape, clocks: np.ndarray) -> np.ndarray:
    """Vectorized separation: one row of clocks per run, one column per vertex.

    The root cluster at time s is {v : min clock on the root path to v > s},
    so separation happens at the largest such minimum over the leaves.
    Returns a boolean array marking the vertices left at separation.
    """
    shape = t_or_shape if isinstance(t_or_shape, _Shape) else _Shape(t_or_shape)
    path_min = np.empty_like(clocks)
    path_min[:, 0] = clocks[:, 0]
    for v in range(1, shape.n):
        np.minimum(clocks[:, v], path_min[:, shape.parents[v]], out=path_min[:, v])
    sep_time = path_min[:, shape.leaves].max(axis=1)
    survivors = path_min > sep_time[:, None]
    if survivors[:, shape.leaves].any():
        raise AssertionError("a leaf survived separation")
    if not np.array_equal(survivors.any(axis=1), survivors[:, 0]):
        raise AssertionError("non-empty outcome without the root")
    return survivors


def _cutting_batch(shape: _Shape, seed: int, batch: int, size: int) -> np.ndarray:
    clocks = _rng(seed, batch).integers(0, 2**64, size=(size, shape.n), dtype=np.uint64, endpoint=False)
    sizes = separation_survivors(shape, clocks).sum(axis=1)
    return np.bincount(sizes, minlength=shape.n + 1)


def separation_counts(t: RootedTree, samples: int, seed: int, jobs: int = 1) -> list[int]:
    """Counts of ``|T_sep| = k`` for k = 0..n over ``samples`` cutting runs."""
    shape = _Shape(t)
    parts = _run_batches(lambda b, s: _cutting_batch(shape, seed, b, s), samples, jobs)
    total = np.sum(parts, axis=0)
    return [int(c) for c in total]


def estimate_separation_histogram(t: RootedTree, samples: int, seed: int, jobs: int = 1) -> dict[int, float]:
    counts = separation_counts(t, samples, seed, jobs)
    return {k: c / samples for k, c in enumerate(counts) if c}


def separation_probability(t: RootedTree, vertices: frozenset[int]) -> Fraction:
    """Exact probability that the cutting model separates leaving ``vertices``."""
    if not is_admissible(t, vertices):
        return Fraction(0)
    shape = _Shape(t)
    nodes = list(t.preorder())
    boundary = [0] if not vertices else [
        v for v in range(1, shape.n) if v not in vertices and shape.parents[v] in vertices
    ]
    fringe = MultiPoly()
    for v in boundary:
        fringe = fringe + substitute(poly_p(nodes[v]), {"x": Z})
    # u^(|T'|-1) (1-u)^(|boundary|-1) * sum p_v(u); p_v(0) = 0 keeps this polynomial
    integrand = (ONE - Z) ** (len(boundary) - 1) * fringe
    shifted = MultiPoly({(0, 0, c + len(vertices) - 1): k for (_, _, c), k in integrand.terms.items()})
    return integrate_unit_interval(shifted).evaluate(0)


# -- comparison against exact values ------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    label: str
    exact: Fraction
    estimate: Estimate
    sigma: float
    passed: bool


def within_band(exact: Fraction, est: Estimate, width: float = 4.0) -> tuple[bool, float]:
    """4-sigma test of an estimate against an exact probability.

    Sigma is the estimate's own standard error.  When the estimate sits at
    0 or 1 its standard error vanishes; sigma then falls back to the binomial
    standard error at the exact value.
    """
    sigma = est.stderr
    if est.hits in (0, est.samples):
        e = float(exact)
        sigma = math.sqrt(e * (1.0 - e) / est.samples)
    return abs(est.value - float(exact)) <= width * sigma, sigma


def compare_p(t: RootedTree, q: Probability, samples: int, seed: int, jobs: int = 1) -> Comparison:
    qq = quantize_probability(q)
    est = estimate_p(t, qq, samples, seed, jobs)
    exact = poly_p(t).evaluate(qq)
    ok, sigma = within_band(exact, est)
    return Comparison(f"p(q={qq})", Fraction(exact), est, sigma, ok)


def compare_histogram(t: RootedTree, samples: int, seed: int, jobs: int = 1) -> list[Comparison]:
    """One comparison per size that is possible or observed."""
    counts = separation_counts(t, samples, seed, jobs)
    pgf = pgf_separation(t)
    out = []
    for k in range(len(counts)):
        exact = pgf.coefficient(k)
        if exact == 0 and counts[k] == 0:
            continue
        est = Estimate(counts[k] / samples, samples, counts[k])
        ok, sigma = within_band(exact, est)
        if exact == 0:
            ok = counts[k] == 0
        out.append(Comparison(f"P(|T_sep|={k})", exact, est, sigma, ok))
    return out

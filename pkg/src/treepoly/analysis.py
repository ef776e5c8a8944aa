"""Exhaustive collision search, completeness sweeps and tree reconstruction.

Trees (or forests) of one size are grouped by the exact printed form of an
invariant.  Any group with two or more members is a collision class, i.e. a
witness that the invariant is not complete at that size.  Shards are
processed independently and merged, then sorted, so the report does not
depend on how the work was split.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional

from . import invariants as inv
from .enumeration import enumerate_forests, enumerate_rooted_trees
from .poly import ONE, MultiPoly, degree, serialize_poly, substitute
from .trees import RootedTree, tree_stats

__all__ = [
    "INVARIANTS",
    "FOREST_INVARIANTS",
    "DESK_BOUNDS",
    "CollisionClass",
    "CollisionReport",
    "CompletenessRow",
    "StrengthRow",
    "StrengthFindings",
    "VerifyFailure",
    "invariant_key",
    "collision_search",
    "completeness_report",
    "reconstruct_from_polynomial",
    "size_from_invariant",
    "cross_invariant_strength",
    "verify_all",
    "encode",
]

INVARIANTS = ("P", "p", "S", "A", "M", "pgf")
FOREST_INVARIANTS = ("P", "S")

#: Largest size swept by default; pass ``allow_large=True`` to go beyond.
DESK_BOUNDS = {"P": 14, "S": 14, "p": 14, "A": 14, "M": 13, "pgf": 11}


def _check_invariant(name: str, forests: bool = False):
    if name not in INVARIANTS:
        raise ValueError(f"unknown invariant {name!r}; choose from {', '.join(INVARIANTS)}")
    if forests and name not in FOREST_INVARIANTS:
        raise ValueError(f"invariant {name!r} is only defined for trees")


def invariant_key(name: str, obj) -> str:
    """Printed value of the named invariant; the grouping key for collisions."""
    if name == "P":
        return serialize_poly(inv.poly_P(obj))
    if name == "S":
        return serialize_poly(inv.poly_S(obj))
    if name == "A":
        return serialize_poly(inv.poly_A(obj))
    if name == "p":
        return serialize_poly(inv.poly_p(obj))
    if name == "M":
        return serialize_poly(inv.poly_M(obj))
    if name == "pgf":
        return str(inv.pgf_separation(obj))
    raise ValueError(f"unknown invariant {name!r}")


def encode(obj) -> str:
    """Tree encoding, or a forest's component encodings joined by spaces."""
    if isinstance(obj, RootedTree):
        return obj.key
    return " ".join(t.key for t in obj.trees)


@dataclass
class CollisionClass:
    polynomial: str
    trees: list[str]


@dataclass
class CollisionReport:
    invariant: str
    n: int
    forests: bool
    scanned: int
    classes: list[CollisionClass] = field(default_factory=list)

    @property
    def colliding(self) -> int:
        return sum(len(c.trees) for c in self.classes)

    def records(self) -> list[dict]:
        return [
            {"invariant": self.invariant, "n": self.n, "forests": self.forests,
             "polynomial": c.polynomial, "trees": c.trees}
            for c in self.classes
        ]


def _shard_keys(name: str, n: int, shard: int, shards: int, forests: bool) -> list[tuple[str, str]]:
    source = enumerate_forests(n, shard, shards) if forests else enumerate_rooted_trees(n, shard, shards)
    return [(invariant_key(name, obj), encode(obj)) for obj in source]


def collision_search(
    name: str,
    n: int,
    shards: int = 1,
    jobs: int = 1,
    forests: bool = False,
    allow_large: bool = False,
) -> CollisionReport:
    """Group all n-vertex trees (or forests) by the exact value of an invariant."""
    _check_invariant(name, forests)
    if n < (0 if forests else 1):
        raise ValueError(f"n must be at least {0 if forests else 1}")
    if not allow_large and n > DESK_BOUNDS[name]:
        raise ValueError(f"n={n} exceeds the sweep bound {DESK_BOUNDS[name]} for {name}; pass allow_large to override")
    if shards < 1 or jobs < 1:
        raise ValueError("shards and jobs must be positive")
    args = [(name, n, k, shards, forests) for k in range(shards)]
    if jobs == 1:
        parts = [_shard_keys(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_shard_keys, *zip(*args)))
    groups: dict[str, list[str]] = {}
    scanned = 0
    for part in parts:
        for key, code in part:
            groups.setdefault(key, []).append(code)
            scanned += 1
    classes = [
        CollisionClass(key, sorted(codes))
        for key, codes in groups.items()
        if len(codes) >= 2
    ]
    classes.sort(key=lambda c: (c.polynomial, c.trees))
    return CollisionReport(name, n, forests, scanned, classes)


@dataclass
class CompletenessRow:
    n: int
    scanned: int
    classes: int
    colliding: int


def completeness_report(
    name: str,
    n_max: int,
    forests: bool = False,
    shards: int = 1,
    jobs: int = 1,
    allow_large: bool = False,
) -> list[CompletenessRow]:
    """Collision class counts for every size up to ``n_max``.

    Invariants only ever collide within one size (P, S and p all have
    x-degree equal to the vertex count), so per-size sweeps cover all pairs.
    """
    start = 0 if forests else 1
    rows = []
    for n in range(start, n_max + 1):
        rep = collision_search(name, n, shards, jobs, forests, allow_large)
        rows.append(CompletenessRow(n, rep.scanned, len(rep.classes), rep.colliding))
    return rows


def size_from_invariant(name: str, target: MultiPoly) -> int:
    """Vertex count of any tree carrying the invariant value ``target``."""
    if name in ("P", "S", "p"):
        n = degree(target, "x")
    elif name == "A":
        n = degree(ONE - substitute(target, {"y": ONE - MultiPoly.monomial(1)}), "x")
    elif name == "M":
        # at x = 0 only the empty subtree survives, leaving p(z)/z
        n = degree(substitute(target, {"x": 0, "y": 0}), "z") + 1
    else:
        raise ValueError(f"cannot reconstruct from invariant {name!r}")
    if n < 1:
        raise ValueError(f"target polynomial implies {n} vertices; need a positive x-degree")
    return int(n)


_POLY_FUNCS: dict[str, Callable[[RootedTree], MultiPoly]] = {
    "P": lambda t: inv.poly_P(t),
    "p": lambda t: inv.poly_p(t),
    "S": lambda t: inv.poly_S(t),
    "A": lambda t: inv.poly_A(t),
    "M": lambda t: inv.poly_M(t),
}


def reconstruct_from_polynomial(name: str, target: MultiPoly, max_vertices: int = 16) -> list[RootedTree]:
    """All trees whose invariant ``name`` equals ``target`` exactly."""
    if name not in _POLY_FUNCS:
        raise ValueError(f"cannot reconstruct from invariant {name!r}; choose from P, p, S, A, M")
    if name == "P" and target.constant_term() != 1:
        raise ValueError("a P-polynomial always has constant term 1 (the empty subforest)")
    n = size_from_invariant(name, target)
    if n > max_vertices:
        raise ValueError(f"target implies {n} vertices, above the search limit {max_vertices}")
    func = _POLY_FUNCS[name]
    return sorted((t for t in enumerate_rooted_trees(n) if func(t) == target), key=lambda t: t.key)


@dataclass
class StrengthRow:
    n: int
    p_classes: int
    p_pairs: int
    p_pairs_split_by_A: int
    A_classes: int
    A_pairs: int
    A_pairs_split_by_M: int
    M_classes: int


@dataclass
class StrengthFindings:
    rows: list[StrengthRow]
    hierarchy_violations: list[tuple[str, str, str]]

    @property
    def A_strictly_stronger_than_p(self) -> bool:
        return any(r.p_pairs_split_by_A for r in self.rows)

    @property
    def M_strictly_stronger_than_A(self) -> bool:
        return any(r.A_pairs_split_by_M for r in self.rows)

    def as_dict(self) -> dict:
        return asdict(self)


def _group(trees: Iterable[RootedTree], key) -> list[list[RootedTree]]:
    groups: dict[str, list[RootedTree]] = {}
    for t in trees:
        groups.setdefault(key(t), []).append(t)
    return [g for g in groups.values() if len(g) >= 2]


def cross_invariant_strength(n_max: int) -> StrengthFindings:
    """Compare p, A and M on every colliding pair up to ``n_max`` vertices.

    Equal M must force equal A, and equal A must force equal p; any pair
    breaking that is recorded as ``(relation, tree, tree)``.
    """
    rows = []
    violations = []
    for n in range(1, n_max + 1):
        trees = list(enumerate_rooted_trees(n))
        key_p = lambda t: serialize_poly(inv.poly_p(t))
        key_A = lambda t: serialize_poly(inv.poly_A(t))
        key_M = lambda t: serialize_poly(inv.poly_M(t))
        p_groups = _group(trees, key_p)
        A_groups = _group(trees, key_A)
        M_groups = _group(trees, key_M)
        p_pairs = [pair for g in p_groups for pair in itertools.combinations(g, 2)]
        A_pairs = [pair for g in A_groups for pair in itertools.combinations(g, 2)]
        split_A = sum(1 for a, b in p_pairs if key_A(a) != key_A(b))
        split_M = sum(1 for a, b in A_pairs if key_M(a) != key_M(b))
        for a, b in A_pairs:
            if key_p(a) != key_p(b):
                violations.append(("A-equal but p-distinct", a.key, b.key))
        for g in M_groups:
            for a, b in itertools.combinations(g, 2):
                if key_A(a) != key_A(b):
                    violations.append(("M-equal but A-distinct", a.key, b.key))
        rows.append(StrengthRow(n, len(p_groups), len(p_pairs), split_A,
                                len(A_groups), len(A_pairs), split_M, len(M_groups)))
    return StrengthFindings(rows, violations)


@dataclass
class VerifyFailure:
    check: str
    subject: str
    lhs: str
    rhs: str


def verify_all(
    n_max: int,
    oracle_max: int = 8,
    oracle_M_max: int = 10,
    progress: Optional[Callable[[str], None]] = None,
) -> list[VerifyFailure]:
    """Run every exact check on all trees up to ``n_max`` and all forests below it.

    Brute-force oracles run only up to ``oracle_max`` (P, S, A) and
    ``oracle_M_max`` (M) vertices.
    """
    failures: list[VerifyFailure] = []

    def expect(check, subject, lhs, rhs):
        if lhs != rhs:
            show = lambda v: serialize_poly(v) if isinstance(v, MultiPoly) else str(v)
            failures.append(VerifyFailure(check, subject, show(lhs), show(rhs)))

    for n in range(1, n_max + 1):
        count = 0
        for t in enumerate_rooted_trees(n):
            count += 1
            code = t.key
            if n <= oracle_max:
                expect("P = brute P", code, inv.poly_P(t), inv.brute_P(t))
                expect("S = brute S", code, inv.poly_S(t), inv.brute_S(t))
                expect("A = brute A", code, inv.poly_A(t), inv.brute_A(t))
            if n <= oracle_M_max:
                expect("M = brute M", code, inv.poly_M(t), inv.brute_M(t))
            expect("p recursion = 1 - P(x,-1)", code, inv.poly_p(t), inv.p_from_P(t))
            for check in inv.check_identities(t).failures():
                failures.append(VerifyFailure(check.name, code, check.lhs, check.rhs))
            expect("pgf(1) = 1", code, inv.pgf_separation(t).evaluate(1), 1)
            expect("Eisenstein hypotheses hold for a tree", code, inv.eisenstein_check(t), True)
        # forests with n - 1 vertices
        for f in enumerate_forests(n - 1):
            code = encode(f)
            stats = tree_stats(f)
            expect("-dP/dx(1,-1) = stem", code, inv.stem_from_P(inv.poly_P(f)), stats.stem_length)
            expect("deg_x P = vertices", code, max(degree(inv.poly_P(f), "x"), 0), stats.n_vertices)
            if len(f.trees) >= 2:
                expect("Eisenstein hypotheses fail for a forest", code, inv.eisenstein_check(f), False)
            if n - 1 <= oracle_max:
                expect("P = brute P (forest)", code, inv.poly_P(f), inv.brute_P(f))
        if progress:
            progress(f"n={n}: {count} trees checked, {len(failures)} failures so far")
    return failures

"""Polynomial invariants of rooted trees and forests.

Each invariant has two independent implementations:

* a recursive one over the branches of the root (``poly_*``), memoized on
  canonical subtrees, used everywhere performance matters, and
* a brute-force one that sums the defining generating function over explicit
  vertex subsets (``brute_*``), used only as an oracle at small sizes.

Invariants:

``P(x, y)``   leaf-induced subforests by vertices and leaves
``p(x)``      ``1 - P(x, -1)``, root-to-leaf percolation probability
``S(x, y)``   subtrees by vertices and boundary vertices
``A(x, y)``   admissible subtrees (empty, or containing the root and no leaf)
``M(x,y,z)``  admissible subtrees weighted by the fringe ``p`` of each
              boundary vertex
``pgf``       distribution of the tree size at separation in the cutting model
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .poly import (
    ONE,
    X,
    Y,
    Z,
    MultiPoly,
    UniRatPoly,
    coefficient_of,
    degree,
    integrate_unit_interval,
    partial_derivative,
    serialize_poly,
    substitute,
)
from .trees import RootedForest, RootedTree, TreeLike, as_forest, tree_stats

__all__ = [
    "OracleBoundError",
    "IdentityCheck",
    "IdentityReport",
    "poly_P",
    "poly_p",
    "p_from_P",
    "poly_S",
    "poly_A",
    "poly_M",
    "pgf_separation",
    "brute_P",
    "brute_S",
    "brute_A",
    "brute_M",
    "stem_from_P",
    "eisenstein_check",
    "check_identities",
    "BRUTE_P_MAX_LEAVES",
    "BRUTE_SA_MAX_VERTICES",
    "BRUTE_M_MAX_VERTICES",
]

BRUTE_P_MAX_LEAVES = 30
BRUTE_SA_MAX_VERTICES = 20
BRUTE_M_MAX_VERTICES = 16

_P_LEAF = ONE + X * Y
_S_LEAF = Y + X


class OracleBoundError(ValueError):
    """Input too large for an exhaustive oracle."""


def _require_tree(f: TreeLike, what: str) -> RootedTree:
    if isinstance(f, RootedTree):
        return f
    if len(f.trees) == 1:
        return f.trees[0]
    raise ValueError(f"{what} is defined for trees only; got a forest with {len(f.trees)} components")


def _product(polys) -> MultiPoly:
    out = ONE
    for q in polys:
        out = out * q
    return out


# -- recursive forms -------------------------------------------------------------

@lru_cache(maxsize=None)
def _P_tree(t: RootedTree) -> MultiPoly:
    if not t.children:
        return _P_LEAF
    return ONE - X + X * _product(_P_tree(c) for c in t.children)


def poly_P(f: TreeLike) -> MultiPoly:
    """P of a tree, or the product over components of a forest (1 if empty)."""
    if isinstance(f, RootedTree):
        return _P_tree(f)
    return _product(_P_tree(t) for t in f.trees)


@lru_cache(maxsize=None)
def poly_p(t: RootedTree) -> MultiPoly:
    """Root-to-leaf percolation polynomial, as a polynomial in x."""
    if not t.children:
        return X
    survive_all = _product(ONE - poly_p(c) for c in t.children)
    return X * (ONE - survive_all)


def p_from_P(t: RootedTree) -> MultiPoly:
    """``1 - P(x, -1)``: the same polynomial as :func:`poly_p`, by substitution."""
    return ONE - substitute(poly_P(t), {"y": -1})


@lru_cache(maxsize=None)
def _S_tree(t: RootedTree) -> MultiPoly:
    return Y + X * _product(_S_tree(c) for c in t.children)


@lru_cache(maxsize=None)
def _A_tree(t: RootedTree) -> MultiPoly:
    if not t.children:
        return Y
    return Y + X * _product(_A_tree(c) for c in t.children)


def poly_S(f: TreeLike) -> MultiPoly:
    if isinstance(f, RootedTree):
        return _S_tree(f)
    return _product(_S_tree(t) for t in f.trees)


def poly_A(f: TreeLike) -> MultiPoly:
    if isinstance(f, RootedTree):
        return _A_tree(f)
    return _product(_A_tree(t) for t in f.trees)


def _p_over_z(t: RootedTree) -> MultiPoly:
    # p(z)/z, exact since p has no constant term
    terms = {}
    for (a, b, c), k in poly_p(t).terms.items():
        if a == 0:
            raise ArithmeticError("p has a nonzero constant term")
        terms[(0, 0, a - 1)] = k
    return MultiPoly(terms)


@lru_cache(maxsize=None)
def _M_tree(t: RootedTree) -> MultiPoly:
    if not t.children:
        return ONE
    kids = t.children
    A = [poly_A(c) for c in kids]
    # prefix/suffix products give every "all but one" product in linear time
    prefix = [ONE]
    for a in A:
        prefix.append(prefix[-1] * a)
    suffix = [ONE]
    for a in reversed(A):
        suffix.append(suffix[-1] * a)
    suffix.reverse()
    total = MultiPoly()
    for i, c in enumerate(kids):
        total = total + _M_tree(c) * prefix[i] * suffix[i + 1]
    return _p_over_z(t) + X * total


def poly_M(t: TreeLike) -> MultiPoly:
    return _M_tree(_require_tree(t, "M"))


def pgf_separation(t: TreeLike) -> UniRatPoly:
    """Probability generating function of the size of the tree at separation."""
    m = poly_M(t)
    # u lives in the z slot: x -> x*u, y -> 1 - u, z -> u
    integrand = substitute(m, {"x": X * Z, "y": ONE - Z})
    return integrate_unit_interval(integrand)


# -- brute-force oracles ------------------------------------------------------------

def _flatten(f: RootedForest) -> tuple[list[int], list[list[int]]]:
    """Pre-order parent and children arrays for a whole forest (roots have parent -1)."""
    parents: list[int] = []
    children: list[list[int]] = []
    for t in f.trees:
        offset = len(parents)
        for p in t.parents():
            parents.append(p + offset if p >= 0 else -1)
            children.append([])
    for v, p in enumerate(parents):
        if p >= 0:
            children[p].append(v)
    return parents, children


def brute_P(f: TreeLike) -> MultiPoly:
    """Sum over all subsets of leaves of x^(vertices covered) y^(leaves chosen)."""
    f = as_forest(f)
    parents, children = _flatten(f)
    leaves = [v for v, ch in enumerate(children) if not ch]
    if len(leaves) > BRUTE_P_MAX_LEAVES:
        raise OracleBoundError(f"brute_P enumerates 2^leaves subsets; {len(leaves)} leaves exceeds {BRUTE_P_MAX_LEAVES}")
    masks = []
    for leaf in leaves:
        m, v = 0, leaf
        while v >= 0:
            m |= 1 << v
            v = parents[v]
        masks.append(m)
    counts: dict[tuple[int, int, int], int] = {}

    def walk(i: int, cover: int, chosen: int):
        if i == len(masks):
            key = (bin(cover).count("1"), chosen, 0)
            counts[key] = counts.get(key, 0) + 1
            return
        walk(i + 1, cover, chosen)
        walk(i + 1, cover | masks[i], chosen + 1)

    walk(0, 0, 0)
    return MultiPoly(counts)


def _rooted_subtrees(parents: list[int], allowed: list[bool]) -> Iterator[tuple[int, list[int]]]:
    """Yield (size, boundary) for every non-empty subtree containing vertex 0.

    A vertex can join only once its parent has; ``allowed[v]`` false keeps it out.
    """
    n = len(parents)
    inside = [False] * n

    def grow(i: int, size: int, boundary: list[int]):
        if i == n:
            yield size, list(boundary)
            return
        if not inside[parents[i]]:
            yield from grow(i + 1, size, boundary)
            return
        boundary.append(i)
        yield from grow(i + 1, size, boundary)
        boundary.pop()
        if allowed[i]:
            inside[i] = True
            yield from grow(i + 1, size + 1, boundary)
            inside[i] = False

    if not allowed[0]:
        return
    inside[0] = True
    yield from grow(1, 1, [])


def _subtree_sum(t: RootedTree, admissible: bool) -> MultiPoly:
    if t.size > BRUTE_SA_MAX_VERTICES:
        raise OracleBoundError(f"subtree enumeration limited to {BRUTE_SA_MAX_VERTICES} vertices; got {t.size}")
    parents = t.parents()
    is_leaf = [True] * len(parents)
    for p in parents[1:]:
        is_leaf[p] = False
    allowed = [not (admissible and leaf) for leaf in is_leaf]
    counts = {(0, 1, 0): 1}  # the empty subtree, whose boundary is the root
    for size, boundary in _rooted_subtrees(parents, allowed):
        key = (size, len(boundary), 0)
        counts[key] = counts.get(key, 0) + 1
    return MultiPoly(counts)


def brute_S(t: RootedTree) -> MultiPoly:
    return _subtree_sum(t, admissible=False)


def brute_A(t: RootedTree) -> MultiPoly:
    return _subtree_sum(t, admissible=True)


def brute_M(t: RootedTree) -> MultiPoly:
    """Evaluate the defining sum of M over admissible subtrees directly."""
    if t.size > BRUTE_M_MAX_VERTICES:
        raise OracleBoundError(f"brute_M limited to {BRUTE_M_MAX_VERTICES} vertices; got {t.size}")
    parents = t.parents()
    nodes = list(t.preorder())
    fringe = []
    for node in nodes:
        p_v = ONE - substitute(brute_P(node), {"y": -1})
        fringe.append(MultiPoly({(0, 0, a - 1): k for (a, _, _), k in p_v.terms.items()}))
    allowed = [bool(node.children) for node in nodes]
    total = fringe[0]  # empty subtree: x^0 y^0 * p_root(z)/z
    for size, boundary in _rooted_subtrees(parents, allowed):
        weight = MultiPoly.monomial(size, len(boundary) - 1)
        total = total + weight * _product_sum(fringe[v] for v in boundary)
    return total


def _product_sum(polys) -> MultiPoly:
    out = MultiPoly()
    for q in polys:
        out = out + q
    return out


# -- structural facts ----------------------------------------------------------------

def stem_from_P(p: MultiPoly) -> int:
    """Stem length read off a P-polynomial: ``-dP/dx`` at ``(1, -1)``."""
    return -partial_derivative(p, "x").evaluate(1, -1, 0)


def eisenstein_check(f: TreeLike) -> bool:
    """Check the Eisenstein hypotheses for S at the prime ``y``.

    Writing ``S = sum a_i(y) x^i`` with top degree n: ``a_n == 1``, ``y``
    divides every lower ``a_i``, and ``a_0 == y``.
    """
    s = poly_S(f)
    n = degree(s, "x")
    if n < 1:
        return False
    if coefficient_of(s, "x", n) != ONE:
        return False
    if any(b == 0 for (a, b, _c) in s.terms if a < n):
        return False
    return coefficient_of(s, "x", 0) == Y


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    lhs: str = ""
    rhs: str = ""


@dataclass
class IdentityReport:
    tree: str
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]


def check_identities(t: RootedTree) -> IdentityReport:
    """Evaluate the relations between P, p, A and M on one tree."""
    report = IdentityReport(tree=t.key)
    stats = tree_stats(t)

    def record(name, lhs, rhs):
        ok = lhs == rhs
        report.checks.append(
            IdentityCheck(name, ok, "" if ok else _show(lhs), "" if ok else _show(rhs))
        )

    P = poly_P(t)
    p = poly_p(t)
    A = poly_A(t)
    M = poly_M(t)
    record("M(x,y,1) = dA/dy", substitute(M, {"z": 1}), partial_derivative(A, "y"))
    record("A(x,1-x) = 1 - p(x)", substitute(A, {"y": ONE - X}), ONE - p)
    record("M(x,1-x,x) = p'(x)", substitute(M, {"y": ONE - X, "z": X}), partial_derivative(p, "x"))
    record("P(1,y) = (1+y)^leaves", substitute(P, {"x": 1}), (ONE + Y) ** stats.n_leaves)
    record("deg_x P = vertices", degree(P, "x"), stats.n_vertices)
    record("deg_y P = leaves", degree(P, "y"), stats.n_leaves)
    record("-dP/dx(1,-1) = stem", stem_from_P(P), stats.stem_length)
    return report


def _show(v) -> str:
    return serialize_poly(v) if isinstance(v, MultiPoly) else str(v)

"""Polynomial invariants of rooted trees: exact computation, exhaustive
verification, and Monte Carlo checks of their probabilistic meaning."""

from .invariants import (
    brute_A,
    brute_M,
    brute_P,
    brute_S,
    check_identities,
    eisenstein_check,
    pgf_separation,
    poly_A,
    poly_M,
    poly_P,
    poly_p,
    poly_S,
    stem_from_P,
)
from .poly import MultiPoly, UniRatPoly, parse_poly, serialize_poly
from .trees import (
    RootedForest,
    RootedTree,
    parse_forest,
    parse_tree,
    remove_root,
    serialize_canonical,
    tree_stats,
    wedge,
)

__all__ = [
    "brute_A",
    "brute_M",
    "brute_P",
    "brute_S",
    "check_identities",
    "eisenstein_check",
    "pgf_separation",
    "poly_A",
    "poly_M",
    "poly_P",
    "poly_p",
    "poly_S",
    "stem_from_P",
    "MultiPoly",
    "UniRatPoly",
    "parse_poly",
    "serialize_poly",
    "RootedForest",
    "RootedTree",
    "parse_forest",
    "parse_tree",
    "remove_root",
    "serialize_canonical",
    "tree_stats",
    "wedge",
]

__version__ = "0.1.0"

"""Rooted trees and forests up to isomorphism.

A :class:`RootedTree` is stored in canonical form: its children are sorted in
descending lexicographic order of their parenthesis encodings, recursively.
Two trees therefore compare equal exactly when they are isomorphic as rooted
trees, and the encoding doubles as a hash key.

Text format::

    tree   := "(" tree* ")"
    forest := tree per line (empty text is the empty forest)

Vertices are addressed by their index in a depth-first pre-order traversal of
the canonical form (root = 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "TreeParseError",
    "RootedTree",
    "RootedForest",
    "TreeStats",
    "parse_tree",
    "parse_forest",
    "parse_level_sequence",
    "serialize_canonical",
    "serialize_forest",
    "level_sequence",
    "wedge",
    "remove_root",
    "tree_stats",
    "fringe_subtree",
    "as_forest",
    "path",
    "star",
    "POINT",
]


class TreeParseError(ValueError):
    """Malformed tree text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class RootedTree:
    """Immutable isomorphism class of a rooted tree."""

    __slots__ = ("children", "size", "key", "_hash")

    def __init__(self, children: Iterable[RootedTree] = ()):
        kids = tuple(sorted(children, key=_tree_key, reverse=True))
        self.children: tuple[RootedTree, ...] = kids
        self.size: int = 1 + sum(c.size for c in kids)
        self.key: str = "(" + "".join(c.key for c in kids) + ")"
        self._hash = hash(self.key)

    def __eq__(self, other):
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"RootedTree({self.key!r})"

    def __str__(self):
        return self.key

    def __reduce__(self):
        return (parse_tree, (self.key,))

    def is_leaf(self) -> bool:
        return not self.children

    def preorder(self) -> Iterator[RootedTree]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def parents(self) -> list[int]:
        """Parent index of each vertex in pre-order; the root maps to -1."""
        out: list[int] = []
        stack: list[tuple[RootedTree, int]] = [(self, -1)]
        while stack:
            node, parent = stack.pop()
            idx = len(out)
            out.append(parent)
            for child in reversed(node.children):
                stack.append((child, idx))
        return out


def _tree_key(t: RootedTree) -> str:
    return t.key


class RootedForest:
    """Immutable multiset of rooted trees, possibly empty."""

    __slots__ = ("trees", "size", "key", "_hash")

    def __init__(self, trees: Iterable[RootedTree] = ()):
        self.trees: tuple[RootedTree, ...] = tuple(sorted(trees, key=_tree_key, reverse=True))
        self.size: int = sum(t.size for t in self.trees)
        self.key: str = "\n".join(t.key for t in self.trees)
        self._hash = hash(("forest", self.key))

    def __eq__(self, other):
        if not isinstance(other, RootedForest):
            return NotImplemented
        return self.trees == other.trees

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __repr__(self):
        return f"RootedForest({[t.key for t in self.trees]!r})"

    def __reduce__(self):
        return (RootedForest, (self.trees,))


TreeLike = Union[RootedTree, RootedForest]


@dataclass(frozen=True)
class TreeStats:
    n_vertices: int
    n_leaves: int
    stem_length: int


POINT = RootedTree()


def path(n: int) -> RootedTree:
    """Path on ``n`` vertices rooted at an end."""
    if n < 1:
        raise ValueError("a path needs at least one vertex")
    t = POINT
    for _ in range(n - 1):
        t = RootedTree([t])
    return t


def star(n_leaves: int) -> RootedTree:
    """Star with the root in the centre and ``n_leaves`` leaf children."""
    return RootedTree([POINT] * n_leaves)


def as_forest(f: TreeLike) -> RootedForest:
    if isinstance(f, RootedTree):
        return RootedForest([f])
    return f


# -- parsing -----------------------------------------------------------------

_WS = " \t\r\n\f\v"


def _parse_at(text: str, pos: int) -> tuple[RootedTree, int]:
    # Iterative so that long paths do not hit the recursion limit.
    if text[pos] != "(":
        raise TreeParseError(f"expected '(' but found {text[pos]!r}", pos)
    stack: list[list[RootedTree]] = [[]]
    pos += 1
    n = len(text)
    while True:
        while pos < n and text[pos] in _WS:
            pos += 1
        if pos >= n:
            raise TreeParseError("unbalanced parentheses: missing ')'", pos)
        ch = text[pos]
        if ch == "(":
            stack.append([])
        elif ch == ")":
            node = RootedTree(stack.pop())
            if not stack:
                return node, pos + 1
            stack[-1].append(node)
        else:
            raise TreeParseError(f"unexpected character {ch!r}", pos)
        pos += 1


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in _WS:
        pos += 1
    return pos


def parse_tree(text: str) -> RootedTree:
    """Parse one tree in parenthesis form and return its canonical form."""
    pos = _skip_ws(text, 0)
    if pos >= len(text):
        raise TreeParseError("empty input", pos)
    tree, pos = _parse_at(text, pos)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise TreeParseError(f"trailing garbage {text[pos]!r}", pos)
    return tree


def parse_forest(text: str) -> RootedForest:
    """Parse newline-separated trees; blank text is the empty forest."""
    trees = []
    pos = _skip_ws(text, 0)
    while pos < len(text):
        tree, pos = _parse_at(text, pos)
        trees.append(tree)
        pos = _skip_ws(text, pos)
    return RootedForest(trees)


def parse_level_sequence(text: Union[str, Sequence[int]]) -> RootedTree:
    """Build a tree from pre-order depths, root at depth 0 (e.g. ``"0 1 2 1"``)."""
    if isinstance(text, str):
        try:
            depths = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise TreeParseError(f"bad level sequence: {exc}", 0) from None
    else:
        depths = list(text)
    if not depths or depths[0] != 0:
        raise TreeParseError("level sequence must start with the root depth 0", 0)
    stack: list[list[RootedTree]] = [[]]
    for i, d in enumerate(depths[1:], start=1):
        if d < 1 or d > len(stack):
            raise TreeParseError(f"invalid depth {d} at position {i}", i)
        while len(stack) > d:
            kids = stack.pop()
            stack[-1].append(RootedTree(kids))
        stack.append([])
    while len(stack) > 1:
        kids = stack.pop()
        stack[-1].append(RootedTree(kids))
    return RootedTree(stack[0])


def serialize_canonical(t: RootedTree) -> str:
    return t.key


def serialize_forest(f: RootedForest) -> str:
    return f.key


def level_sequence(t: RootedTree) -> list[int]:
    """Pre-order depths of the canonical form."""
    out: list[int] = []
    stack = [(t, 0)]
    while stack:
        node, d = stack.pop()
        out.append(d)
        for child in reversed(node.children):
            stack.append((child, d + 1))
    return out


# -- structure -----------------------------------------------------------------

def wedge(f: TreeLike) -> RootedTree:
    """Join a new root to every component root of ``f``."""
    return RootedTree(as_forest(f).trees)


def remove_root(t: RootedTree) -> RootedForest:
    return RootedForest(t.children)


def _stem(t: RootedTree) -> int:
    s = 1
    while len(t.children) == 1:
        t = t.children[0]
        s += 1
    return s


def tree_stats(f: TreeLike) -> TreeStats:
    f = as_forest(f)
    n_leaves = sum(1 for t in f.trees for v in t.preorder() if not v.children)
    stem = _stem(f.trees[0]) if len(f.trees) == 1 else 0
    return TreeStats(n_vertices=f.size, n_leaves=n_leaves, stem_length=stem)


def fringe_subtree(t: RootedTree, v: int) -> RootedTree:
    """Subtree hanging from the vertex with pre-order index ``v``."""
    if not 0 <= v < t.size:
        raise IndexError(f"vertex handle {v} out of range for a tree on {t.size} vertices")
    node = t
    # Descend by skipping whole sibling subtrees.
    while v:
        v -= 1
        for child in node.children:
            if v < child.size:
                node = child
                break
            v -= child.size
    return node

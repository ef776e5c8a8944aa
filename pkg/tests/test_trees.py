import random

import pytest
from hypothesis import given, strategies as st

from conftest import _text, tree_shapes, trees
from treepoly.enumeration import enumerate_forests, enumerate_rooted_trees
from treepoly.trees import (
    POINT,
    RootedForest,
    TreeParseError,
    TreeStats,
    fringe_subtree,
    level_sequence,
    parse_forest,
    parse_level_sequence,
    parse_tree,
    path,
    remove_root,
    serialize_canonical,
    star,
    tree_stats,
    wedge,
)

CHERRY = star(2)


def test_parse_point_and_path():
    assert parse_tree("()") == POINT
    assert parse_tree("((()))") == path(3)
    assert parse_tree("((()))").size == 3


def test_parse_canonicalizes_child_order():
    assert parse_tree("(()(()))") == parse_tree("((())())")
    assert serialize_canonical(parse_tree("((())())")) == "(()(()))"


def test_serialize_examples():
    assert serialize_canonical(POINT) == "()"
    assert serialize_canonical(CHERRY) == "(()())"


def test_parse_skips_ascii_whitespace():
    assert parse_tree(" ( ()\n( ) ) ") == CHERRY


@pytest.mark.parametrize(
    "text, offset",
    [("", 0), ("(", 1), ("(()", 3), ("())", 2), ("()x", 2), ("(a)", 1), ("x", 0), ("   ", 3)],
)
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(TreeParseError) as info:
        parse_tree(text)
    assert info.value.offset == offset


def test_deep_path_does_not_recurse():
    t = parse_tree("(" * 5000 + ")" * 5000)
    assert t.size == 5000
    assert tree_stats(t).stem_length == 5000


def test_round_trip_on_all_small_trees():
    for n in range(1, 10):
        for t in enumerate_rooted_trees(n):
            s = serialize_canonical(t)
            assert serialize_canonical(parse_tree(s)) == s


@given(tree_shapes, st.randoms(use_true_random=False))
def test_shuffling_children_keeps_canonical_form(shape, rnd):
    def shuffled(node):
        kids = [shuffled(c) for c in node]
        rnd.shuffle(kids)
        return kids

    assert parse_tree(_text(shuffled(shape))) == parse_tree(_text(shape))


@given(trees)
def test_children_sorted_descending(t):
    for node in t.preorder():
        keys = [c.key for c in node.children]
        assert keys == sorted(keys, reverse=True)
        assert node.size == 1 + sum(c.size for c in node.children)


def test_wedge_examples():
    assert wedge(RootedForest()) == POINT
    assert wedge(RootedForest([POINT, POINT])) == CHERRY
    assert wedge(RootedForest([path(2)])) == path(3)


def test_remove_root_examples():
    assert remove_root(POINT) == RootedForest()
    assert remove_root(CHERRY) == RootedForest([POINT, POINT])
    assert remove_root(path(3)) == RootedForest([path(2)])


def test_wedge_remove_root_are_inverse():
    for n in range(1, 11):
        for t in enumerate_rooted_trees(n):
            assert wedge(remove_root(t)) == t
    for n in range(0, 10):
        for f in enumerate_forests(n):
            assert remove_root(wedge(f)) == f


def test_forest_equality_is_multiset_equality():
    a = RootedForest([POINT, path(2), POINT])
    b = RootedForest([path(2), POINT, POINT])
    assert a == b and hash(a) == hash(b)
    assert a != RootedForest([POINT, path(2)])


def test_tree_stats_examples():
    assert tree_stats(path(3)) == TreeStats(3, 1, 3)
    assert tree_stats(CHERRY) == TreeStats(3, 2, 1)
    assert tree_stats(RootedForest([POINT, POINT])) == TreeStats(2, 2, 0)
    assert tree_stats(RootedForest()) == TreeStats(0, 0, 0)


@given(trees)
def test_leaves_are_childless_vertices(t):
    stats = tree_stats(t)
    assert stats.n_leaves == sum(1 for v in t.preorder() if not v.children)
    assert 1 <= stats.stem_length <= stats.n_vertices


def test_fringe_subtree():
    t = parse_tree("((())(()()))")
    assert fringe_subtree(t, 0) == t
    assert fringe_subtree(path(3), 1) == path(2)
    assert fringe_subtree(path(3), 2) == POINT
    nodes = list(t.preorder())
    for i, node in enumerate(nodes):
        assert fringe_subtree(t, i) == node
    with pytest.raises(IndexError):
        fringe_subtree(t, t.size)
    with pytest.raises(IndexError):
        fringe_subtree(t, -1)


def test_parents_follow_preorder():
    t = parse_tree("((())(()()))")
    parents = t.parents()
    assert parents[0] == -1
    assert all(parents[v] < v for v in range(1, t.size))


def test_level_sequence_round_trip():
    for n in range(1, 9):
        for t in enumerate_rooted_trees(n):
            assert parse_level_sequence(level_sequence(t)) == t
    assert parse_level_sequence("0 1 2 1") == parse_tree("((())())")


@pytest.mark.parametrize("text", ["", "1 2", "0 2", "0 1 3", "0 x"])
def test_bad_level_sequences(text):
    with pytest.raises(TreeParseError):
        parse_level_sequence(text)


def test_parse_forest():
    assert parse_forest("") == RootedForest()
    assert parse_forest("(())\n()\n") == RootedForest([path(2), POINT])
    with pytest.raises(TreeParseError):
        parse_forest("(()\n")


def test_trees_pickle():
    import pickle

    t = parse_tree("(()(()))")
    assert pickle.loads(pickle.dumps(t)) == t
    f = RootedForest([t, POINT])
    assert pickle.loads(pickle.dumps(f)) == f


def test_random_shuffle_smoke():
    rnd = random.Random(7)
    for t in enumerate_rooted_trees(8):
        parts = [c.key for c in t.children]
        rnd.shuffle(parts)
        assert parse_tree("(" + "".join(parts) + ")") == t

import pytest

from treepoly.enumeration import (
    count_forests,
    count_rooted_trees,
    enumerate_forests,
    enumerate_rooted_trees,
    level_sequences,
)
from treepoly.trees import POINT, RootedForest, RootedTree, parse_tree, path, remove_root, star


def grown_trees(n):
    """All n-vertex trees by attaching one leaf anywhere to every (n-1)-vertex tree."""
    level = {POINT}
    for _ in range(n - 1):
        nxt = set()
        for t in level:
            nxt.update(_attach_everywhere(t))
        level = nxt
    return level


def _attach_everywhere(t):
    yield RootedTree(t.children + (POINT,))
    for i, child in enumerate(t.children):
        for grown in _attach_everywhere(child):
            yield RootedTree(t.children[:i] + (grown,) + t.children[i + 1:])


def test_small_streams():
    assert list(enumerate_rooted_trees(1)) == [POINT]
    assert set(enumerate_rooted_trees(3)) == {path(3), star(2)}
    assert len(list(enumerate_rooted_trees(3))) == 2


def test_counts_from_recurrence():
    assert [count_rooted_trees(n) for n in range(1, 6)] == [1, 1, 2, 4, 9]
    assert count_rooted_trees(9) == 286
    assert count_rooted_trees(13) == 12486


@pytest.mark.parametrize("n", range(1, 10))
def test_stream_matches_growth_oracle(n):
    grown = grown_trees(n)
    streamed = list(enumerate_rooted_trees(n))
    assert len(streamed) == len(set(streamed))
    assert set(streamed) == grown
    assert len(grown) == count_rooted_trees(n)


def test_counts_through_twelve_and_distinct():
    for n in range(1, 13):
        keys = [t.key for t in enumerate_rooted_trees(n)]
        assert len(keys) == count_rooted_trees(n)
        assert len(set(keys)) == len(keys)


def test_yielded_trees_are_canonical():
    for t in enumerate_rooted_trees(9):
        assert parse_tree(t.key) == t
        assert parse_tree(t.key).key == t.key


def test_generation_order_is_deterministic():
    a = [t.key for t in enumerate_rooted_trees(8)]
    b = [t.key for t in enumerate_rooted_trees(8)]
    assert a == b
    assert a[0] == path(8).key and a[-1] == star(7).key


def test_level_sequences_decrease():
    seqs = [tuple(s) for s in level_sequences(8)]
    assert seqs == sorted(seqs, reverse=True)


@pytest.mark.parametrize("shards", [1, 2, 3, 7])
def test_shards_are_disjoint_and_exhaustive(shards):
    full = [t.key for t in enumerate_rooted_trees(10)]
    parts = [[t.key for t in enumerate_rooted_trees(10, k, shards)] for k in range(shards)]
    merged = [k for part in parts for k in part]
    assert sorted(merged) == sorted(full)
    assert len(merged) == len(set(merged))


def test_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_rooted_trees(0)
    with pytest.raises(ValueError):
        enumerate_rooted_trees(5, 3, 3)
    with pytest.raises(ValueError):
        list(enumerate_forests(-1))
    with pytest.raises(ValueError):
        count_rooted_trees(0)


def test_forest_examples():
    assert list(enumerate_forests(0)) == [RootedForest()]
    assert set(enumerate_forests(2)) == {RootedForest([path(2)]), RootedForest([POINT, POINT])}


def test_forest_stream_is_root_deletion_image():
    for n in range(0, 10):
        forests = list(enumerate_forests(n))
        assert len(forests) == count_forests(n) == count_rooted_trees(n + 1)
        assert len(set(forests)) == len(forests)
        assert all(f.size == n for f in forests)
        assert set(forests) == {remove_root(t) for t in enumerate_rooted_trees(n + 1)}

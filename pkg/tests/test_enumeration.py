import math
import random

import networkx as nx
import pytest

from treenergy.enumeration import (
    FREE_TREE_COUNTS,
    automorphism_count,
    enumerate_trees,
    labeled_tree_total,
    leaf_growth_codes,
    level_sequences,
    partitions,
    prufer_classes,
    prufer_decode,
    random_tree,
)
from treenergy.errors import CapExceeded
from treenergy.graph import Forest, Path, Starlike, build, canonical_code


def test_tiny_orders():
    assert len(list(enumerate_trees(1))) == 1
    assert len(list(enumerate_trees(4))) == 2
    assert len(list(enumerate_trees(7))) == 11


@pytest.mark.parametrize("n", range(1, 15))
def test_counts_and_distinct(n):
    trees = list(enumerate_trees(n))
    assert len(trees) == FREE_TREE_COUNTS[n - 1]
    codes = {canonical_code(t) for t in trees}
    assert len(codes) == len(trees)
    assert all(t.n == n and t.is_tree for t in trees)


@pytest.mark.parametrize("n", range(1, 8))
def test_prufer_bucketing(n):
    # every labelled tree lands in one class, and the classes are exactly the enumerated trees
    classes = prufer_classes(n)
    assert sum(classes.values()) == max(1, n ** (n - 2))
    assert set(classes) == {canonical_code(t) for t in enumerate_trees(n)}


@pytest.mark.parametrize("n", range(2, 13))
def test_cayley_identity(n):
    trees = list(enumerate_trees(n))
    assert labeled_tree_total(trees) == n ** (n - 2)


@pytest.mark.parametrize("n", [6, 9, 11])
def test_leaf_growth_oracle(n):
    assert leaf_growth_codes(n) == {canonical_code(t) for t in enumerate_trees(n)}


def test_networkx_generator_agrees():
    for n in range(2, 12):
        ours = {canonical_code(t) for t in enumerate_trees(n)}
        theirs = set()
        for g in nx.nonisomorphic_trees(n):
            theirs.add(canonical_code(Forest.from_edges(n, g.edges())))
        assert ours == theirs


def test_automorphisms():
    assert automorphism_count(build(Path(5))) == 2
    assert automorphism_count(build(Starlike(6, (1, 1, 1, 1, 1)))) == math.factorial(5)
    assert automorphism_count(build(Path(1))) == 1


def test_deterministic_order():
    assert list(level_sequences(9)) == list(level_sequences(9))


def test_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_trees(21))
    assert len(list(enumerate_trees(5, cap=5))) == 3


def test_prufer_decode_known():
    t = prufer_decode([3, 3, 3, 4], 6)
    assert t.edges == {(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)}


def test_random_tree_is_tree():
    rng = random.Random(3)
    for n in range(1, 30):
        assert random_tree(n, rng).is_tree


def test_partitions():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert all(len(p) >= 3 for p in partitions(9, min_parts=3))
    assert sum(1 for _ in partitions(10)) == 42

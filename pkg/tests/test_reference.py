"""The reference oracles are themselves differentially tested."""

from __future__ import annotations

import pytest

from xtno.errors import InstanceTooLargeError
from xtno.graphs import DirectedGraph, UndirectedGraph
from xtno import reference as ref

from conftest import random_digraph


def test_kpath_two_styles_agree(rng):
    for _ in range(100):
        g = random_digraph(rng, rng.randint(2, 8), 0.3)
        k = rng.randint(1, 5)
        assert ref.bf_kpath(g, k) == ref.bf_kpath_dp(g, k)


def test_kpath_count_examples():
    k4 = DirectedGraph.from_edges(
        4, [(u, v) for u in range(1, 5) for v in range(1, 5) if u != v]
    )
    assert ref.bf_kpath_count(k4, 3) == 24
    path = DirectedGraph.from_edges(3, [(1, 2), (2, 3)])
    assert ref.bf_kpath_count(path, 3) == 1
    empty = DirectedGraph.from_edges(3, [])
    assert not ref.bf_kpath(empty, 2)
    assert ref.bf_kpath_count(empty, 2) == 0


def test_exact_cover_two_styles_agree(rng):
    for _ in range(100):
        nsets = rng.randint(0, 8)
        sets = [
            rng.sample(range(1, 9), rng.randint(1, 4)) for _ in range(nsets)
        ]
        k = rng.randint(1, 8)
        assert ref.bf_exact_cover(sets, k) == ref.bf_exact_cover_rec(sets, k)
    assert not ref.bf_exact_cover([], 1)


def test_partial_cover_two_styles_agree(rng):
    for _ in range(100):
        nsets = rng.randint(0, 7)
        sets = [rng.sample(range(1, 9), rng.randint(1, 4)) for _ in range(nsets)]
        k = rng.randint(1, 8)
        assert ref.bf_partial_cover_min(sets, k) == ref.bf_partial_cover_min_greedyfree(
            sets, k
        )
    assert ref.bf_partial_cover_min([{1, 2}, {2, 3}, {4}], 4) == 3


def test_kwalk_two_styles_agree(rng):
    for _ in range(100):
        g = random_digraph(rng, rng.randint(2, 6), 0.35)
        k = rng.randint(2, 5)
        assert ref.bf_kwalk_one_repeat(g, k) == ref.bf_kwalk_one_repeat_iter(g, k)


def test_packing_and_count():
    sets = [[1, 2], [3, 4], [5, 6]]
    assert ref.bf_packing(sets, 2, 2)
    assert ref.bf_packing_count(sets, 2, 2) == 3
    assert not ref.bf_packing([[1, 2], [1, 3]], 2, 2)
    with pytest.raises(ValueError):
        ref.bf_packing([[1, 2, 3]], 2, 1)


def test_tdom_examples():
    star = UndirectedGraph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    assert ref.bf_tdom(star, 4) == 1
    chipped = UndirectedGraph.from_edges(4, [(1, 2), (1, 3)])
    assert ref.bf_tdom(chipped, 4) == 2
    empty = UndirectedGraph.from_edges(3, [])
    assert ref.bf_tdom(empty, 2) == 2


def test_ddim():
    assert ref.bf_ddim([(1, 1), (2, 2)], 2, 2)
    assert not ref.bf_ddim([(1, 1), (1, 2)], 2, 2)
    with pytest.raises(ValueError):
        ref.bf_ddim([(1, 1, 1)], 2, 1)


def test_admissible_walk_enumeration_respects_the_ban():
    g = UndirectedGraph.from_edges(3, [(1, 2), (2, 3)])
    side = {1: 2, 2: 1, 3: 1}  # vertex 1 on side 2
    walks = ref.bf_admissible_walks(g, side, 3)
    assert (1, 2, 1) not in walks  # bounce through side-1 vertex 2
    side_all1 = {1: 1, 2: 2, 3: 1}
    assert (1, 2, 1) in ref.bf_admissible_walks(g, side_all1, 3)


def test_guards_fail_loudly():
    big = DirectedGraph.from_edges(15, [])
    with pytest.raises(InstanceTooLargeError):
        ref.bf_kpath(big, 2)
    with pytest.raises(InstanceTooLargeError):
        ref.bf_exact_cover([[1]] * 13, 2)
    with pytest.raises(InstanceTooLargeError):
        ref.bf_tdom(UndirectedGraph.from_edges(3, []), 9)

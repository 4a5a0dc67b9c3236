"""Shared generators for randomized differential tests."""

from __future__ import annotations

import random

import pytest

from xtno.graphs import DirectedGraph, UndirectedGraph, UpdateBatch


def random_digraph(rng: random.Random, n: int, p: float = 0.3) -> DirectedGraph:
    edges = {
        (u, v)
        for u in range(1, n + 1)
        for v in range(1, n + 1)
        if u != v and rng.random() < p
    }
    return DirectedGraph.from_edges(n, edges)


def random_ugraph(rng: random.Random, n: int, p: float = 0.3) -> UndirectedGraph:
    edges = {
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < p
    }
    return UndirectedGraph.from_edges(n, edges)


def random_batch(
    rng: random.Random,
    graph,
    max_edits: int,
    failures: bool = False,
    undirected: bool = False,
) -> UpdateBatch:
    """A valid batch against the initial graph (no duplicates, no conflicts)."""
    n = graph.n
    ins, dels, fails = [], [], []
    if undirected:
        universe = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    else:
        universe = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    for _ in range(rng.randint(0, max_edits)):
        e = rng.choice(universe)
        if graph.has_edge(*e):
            if e not in dels:
                dels.append(e)
        elif e not in ins:
            ins.append(e)
    if failures and rng.random() < 0.5:
        fails.append(rng.randint(1, n))
    return UpdateBatch.build(ins, dels, fails)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)

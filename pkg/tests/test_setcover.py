"""Dynamic-structure tests: examples, ground truth, involution, inverses."""

from __future__ import annotations

import numpy as np
import pytest

from xtno._intops import int_unit, int_zeros
from xtno.errors import CapabilityError, UnknownHandleError
from xtno.graphs import UndirectedGraph
from xtno.reference import (
    bf_ddim,
    bf_exact_cover,
    bf_partial_cover_min,
    bf_tdom,
)
from xtno.setcover import (
    CoverAtLeastState,
    DominatingState,
    ExactCoverState,
    MatchingState,
    PackingCounter,
    PackingState,
    PartialCoverState,
)

from conftest import random_ugraph

MODES = ("randomized", "deterministic")


# -- worked examples -----------------------------------------------------------


@pytest.mark.parametrize("mode", MODES)
def test_exact_cover_examples(mode):
    st = ExactCoverState(3, mode, seed=1)
    st.insert([1, 2])
    h_single = st.insert([3])
    st.insert([1, 3])
    assert st.query()
    st.remove(h_single)
    assert not st.query()
    st2 = ExactCoverState(2, mode, seed=2)
    st2.insert([1, 2])
    assert st2.query()


@pytest.mark.parametrize("mode", MODES)
def test_partial_cover_examples(mode):
    st = PartialCoverState(4, mode, seed=1)
    for s in ([1, 2], [2, 3], [4]):
        st.insert(s)
    assert st.query() == 3
    big = st.insert([5, 6, 7, 8])
    assert st.query() == 1
    st.remove(big)
    assert st.query() == 3
    assert PartialCoverState(4, mode, seed=2).query() is None


@pytest.mark.parametrize("mode", MODES)
def test_packing_examples(mode):
    st = PackingState(2, 2, mode, seed=1)
    for s in ([1, 2], [3, 4], [1, 3]):
        st.insert(s)
    assert st.query()
    st2 = PackingState(2, 2, mode, seed=2)
    st2.insert([1, 2])
    st2.insert([1, 3])
    assert not st2.query()
    with pytest.raises(CapabilityError):
        st2.insert([1, 2, 3])


@pytest.mark.parametrize("mode", MODES)
def test_dominating_examples(mode):
    star = UndirectedGraph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    st = DominatingState(star, 4, mode, seed=1)
    assert st.query() == 1
    st.update_edge(1, 4, insert=False)
    assert st.query() == 2
    empty = DominatingState(UndirectedGraph.from_edges(3, []), 2, mode, seed=2)
    assert empty.query() == 2


@pytest.mark.parametrize("mode", MODES)
def test_matching_examples(mode):
    st = MatchingState(2, 2, mode, seed=1)
    st.insert((1, 1))
    h = st.insert((2, 2))
    st.insert((1, 2))
    assert st.query()
    st.remove(h)
    assert not st.query()
    single = MatchingState(3, 1, mode, seed=2)
    single.insert((1, 2, 3))
    assert single.query()


def test_cover_at_least():
    st = CoverAtLeastState(3, "randomized", seed=1)
    st.insert([1, 2])
    st.insert([2, 3])
    assert not st.query()
    h = st.insert([4, 5])
    assert st.query()
    st.remove(h)
    assert not st.query()
    big = st.insert([1, 2, 3])
    assert st.query()
    st.remove(big)
    assert not st.query()


def test_validation_errors():
    st = ExactCoverState(3, "deterministic", seed=1)
    with pytest.raises(CapabilityError):
        st.insert([])
    with pytest.raises(CapabilityError):
        st.insert([1, 1])
    with pytest.raises(CapabilityError):
        st.insert([0])
    with pytest.raises(UnknownHandleError):
        st.remove(99)
    h = st.insert([1])
    st.remove(h)
    with pytest.raises(UnknownHandleError):
        st.remove(h)
    mt = MatchingState(2, 2, "deterministic", seed=1)
    with pytest.raises(CapabilityError):
        mt.insert((1, 2, 3))


def test_duplicate_sets_are_legal():
    st = PartialCoverState(4, "randomized", seed=3)
    a = st.insert([1, 2])
    b = st.insert([1, 2])
    c = st.insert([3, 4])
    assert st.query() == 2
    st.remove(a)
    assert st.query() == 2
    st.remove(b)
    assert st.query() is None
    ex = ExactCoverState(4, "randomized", seed=4)
    ex.insert([1, 2])
    ex.insert([1, 2])
    ex.insert([3, 4])
    assert ex.query()


def test_oversize_sets_are_identity_factors():
    st = ExactCoverState(2, "deterministic", seed=1)
    before = list(st.product)
    h = st.insert([1, 2, 3])
    assert list(st.product) == before
    st.insert([4, 5])
    assert st.query()
    st.remove(h)
    assert st.query()


# -- ground truth over random sessions --------------------------------------------


@pytest.mark.parametrize("mode", MODES)
def test_exact_cover_sessions(rng, mode):
    for s in range(12):
        k = rng.randint(1, 6)
        st = ExactCoverState(k, mode, seed=s)
        live = {}
        for _ in range(30):
            r = rng.random()
            if (r < 0.5 and len(live) < 10) or not live:
                elems = tuple(sorted(rng.sample(range(1, 11), rng.randint(1, 6))))
                live[st.insert(elems)] = elems
            elif r < 0.75:
                h = rng.choice(list(live))
                st.remove(h)
                del live[h]
            else:
                want = bf_exact_cover(list(live.values()), k)
                if mode == "deterministic":
                    assert st.query() == want
                else:
                    assert st.query() == want  # field is huge; misses are 2^-16-rare


@pytest.mark.parametrize("mode", MODES)
def test_partial_cover_sessions(rng, mode):
    for s in range(10):
        k = rng.randint(1, 6)
        st = PartialCoverState(k, mode, seed=s)
        live = {}
        for _ in range(24):
            r = rng.random()
            if (r < 0.5 and len(live) < 10) or not live:
                elems = tuple(sorted(rng.sample(range(1, 11), rng.randint(1, 6))))
                live[st.insert(elems)] = elems
            elif r < 0.75:
                h = rng.choice(list(live))
                st.remove(h)
                del live[h]
            else:
                assert st.query() == bf_partial_cover_min(list(live.values()), k)


def test_matching_sessions(rng):
    for s in range(10):
        mode = MODES[s % 2]
        d = rng.choice([2, 3])
        k = rng.randint(1, 6 if d == 2 else 3)
        st = MatchingState(d, k, mode, seed=s)
        live = {}
        for _ in range(24):
            r = rng.random()
            if (r < 0.5 and len(live) < 10) or not live:
                tup = tuple(rng.randint(1, 5) for _ in range(d))
                live[st.insert(tup)] = tup
            elif r < 0.75:
                h = rng.choice(list(live))
                st.remove(h)
                del live[h]
            else:
                assert st.query() == bf_ddim(list(live.values()), d, k)


def test_dominating_sessions(rng):
    for s in range(8):
        mode = MODES[s % 2]
        g = random_ugraph(rng, rng.randint(2, 7), 0.3)
        t = rng.randint(1, min(6, g.n))
        st = DominatingState(g, t, mode, seed=s)
        edges = {e for e in g.edges}
        for _ in range(10):
            pairs = [
                (u, v) for u in sorted(st.adj) for v in sorted(st.adj) if u < v
            ]
            if rng.random() < 0.5 and pairs:
                u, v = rng.choice(pairs)
                if (u, v) in edges:
                    st.update_edge(u, v, insert=False)
                    edges.discard((u, v))
                else:
                    st.update_edge(u, v, insert=True)
                    edges.add((u, v))
            else:
                g2 = UndirectedGraph.from_edges(g.n, edges)
                assert st.query() == bf_tdom(g2, t)


def test_dominating_vertex_updates():
    st = DominatingState(UndirectedGraph.from_edges(2, [(1, 2)]), 3, "deterministic", 1)
    assert st.query() is None  # only two vertices exist
    v = st.add_vertex()
    assert st.query() == 2  # one edge endpoint plus the isolated vertex
    st.update_edge(1, v, insert=True)
    assert st.query() == 1
    st.remove_vertex(v)
    assert st.query() is None


# -- involution and inverse identities ----------------------------------------------


def _snapshot(state):
    if state.mode == "randomized":
        return [arr.copy() for arr in _arrays(state)]
    return [arr.copy() for arr in _arrays(state)]


def _arrays(state):
    if isinstance(state, ExactCoverState):
        return [state.product]
    if isinstance(state, PartialCoverState):
        return state.slot_sums if state.mode == "randomized" else state.poly
    if isinstance(state, MatchingState):
        return state.poly
    raise AssertionError


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("kind", ["exact", "partial", "matching"])
def test_insert_remove_involution(rng, mode, kind):
    for trial in range(60):
        k = rng.randint(1, 5)
        if kind == "exact":
            st = ExactCoverState(k, mode, seed=trial)
            ins = lambda: st.insert(sorted(rng.sample(range(1, 10), rng.randint(1, 5))))
        elif kind == "partial":
            st = PartialCoverState(k, mode, seed=trial)
            ins = lambda: st.insert(sorted(rng.sample(range(1, 10), rng.randint(1, 5))))
        else:
            st = MatchingState(2, k, mode, seed=trial)
            ins = lambda: st.insert((rng.randint(1, 5), rng.randint(1, 5)))
        for _ in range(rng.randint(0, 4)):
            ins()
        before = [np.array(a, dtype=object) for a in _arrays(st)]
        h = ins()
        st.remove(h)
        after = _arrays(st)
        for b, a in zip(before, after):
            assert all(x == y for x, y in zip(b, a))


def test_factor_nilpotence_small_k():
    # the removal series relies on X^(k+1) = 0 for X = z*(setprod - 1)
    for k in (2, 3, 4):
        st = PartialCoverState(k, "deterministic", seed=k)
        elems = list(range(1, min(k, 3) + 1))[: k - 1] or [1]
        wide = st._poly_times_setprod(
            [int_unit(st.dims)] + [int_zeros(st.dims) for _ in range(k)], elems
        )
        x_poly = [int_zeros(st.dims)] + [wide[t] - ([int_unit(st.dims)] + [int_zeros(st.dims)] * k)[t] for t in range(k)]
        # power X up explicitly: after k+1 multiplications nothing survives
        power = x_poly
        for _ in range(k):
            nxt_wide = st._poly_times_setprod(power, elems)
            power = [int_zeros(st.dims)] + [
                nxt_wide[t - 1] - power[t - 1] for t in range(1, k + 1)
            ]
        assert not any(arr.any() for arr in power)


def test_even_support_assertion_holds(rng):
    st = ExactCoverState(3, "deterministic", seed=5)
    for _ in range(6):
        st.insert(sorted(rng.sample(range(1, 8), rng.randint(1, 3))))
    odd = [m for m in range(1 << st.dims) if bin(m).count("1") % 2]
    assert not any(st.product[m] for m in odd)


def test_truncation_guard_is_active():
    st = PartialCoverState(3, "deterministic", seed=1)
    for s in ([1, 2], [3, 4], [5, 6], [7, 8]):
        st.insert(s)  # plenty of factors; the degree cap must never trip
    assert st.query() == 2


# -- approximate packing count --------------------------------------------------


def test_packing_counter():
    cnt = PackingCounter(2, 2, 0.5, seed=2)
    handles = [cnt.insert(s) for s in ([1, 2], [3, 4], [5, 6])]
    est = float(cnt.estimate())
    assert 1.5 <= est <= 4.5
    cnt.remove(handles[2])
    est2 = float(cnt.estimate())
    assert 0.4 <= est2 <= 1.6  # exactly one disjoint pair remains
    empty = PackingCounter(2, 2, 0.5, seed=3)
    assert empty.estimate() == 0

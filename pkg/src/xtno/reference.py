"""Exhaustive reference solvers used as ground truth in tests.

Every solver enumerates literally, with no algebraic shortcuts, and
fails loudly when asked to exceed its size guard; a silently exploding
exponential search in CI is worse than a skipped case.  Where it
matters, a second implementation in a different style exists so the
references can be differentially tested against each other.
"""

from __future__ import annotations

from itertools import combinations

from .errors import InstanceTooLargeError
from .graphs import DirectedGraph, UndirectedGraph

MAX_PATH_VERTS = 14
MAX_SET_SYSTEM = 12
MAX_PARAM = 8


def _guard(cond: bool, what: str) -> None:
    if not cond:
        raise InstanceTooLargeError(f"reference oracle guard exceeded: {what}")


def _succ(graph) -> dict[int, set[int]]:
    out: dict[int, set[int]] = {v: set() for v in range(1, graph.n + 1)}
    if isinstance(graph, DirectedGraph):
        for u, v in graph.edges:
            out[u].add(v)
    else:
        for u, v in graph.edges:
            out[u].add(v)
            out[v].add(u)
    return out


def bf_kpath(graph, k: int) -> bool:
    """Does the graph contain a simple path on k vertices?  DFS style."""
    _guard(graph.n <= MAX_PATH_VERTS, f"n={graph.n}")
    if k < 1:
        return False
    if k == 1:
        return graph.n >= 1
    succ = _succ(graph)

    def extend(v: int, seen: set[int], depth: int) -> bool:
        if depth == k:
            return True
        for w in succ[v]:
            if w not in seen and extend(w, seen | {w}, depth + 1):
                return True
        return False

    return any(extend(v, {v}, 1) for v in range(1, graph.n + 1))


def bf_kpath_dp(graph, k: int) -> bool:
    """Same question, bitmask-DP style (the differential partner)."""
    _guard(graph.n <= MAX_PATH_VERTS, f"n={graph.n}")
    if k < 1:
        return False
    if k == 1:
        return graph.n >= 1
    succ = _succ(graph)
    n = graph.n
    reach = {(1 << (v - 1), v) for v in range(1, n + 1)}
    for _ in range(k - 1):
        nxt = set()
        for mask, v in reach:
            for w in succ[v]:
                bit = 1 << (w - 1)
                if not mask & bit:
                    nxt.add((mask | bit, w))
        reach = nxt
        if not reach:
            return False
    return bool(reach)


def bf_kpath_count(graph: DirectedGraph, k: int) -> int:
    """Exact count of ordered k-vertex simple paths."""
    _guard(graph.n <= MAX_PATH_VERTS, f"n={graph.n}")
    if k < 1:
        return 0
    if k == 1:
        return graph.n
    succ = _succ(graph)

    def extend(v: int, seen: set[int], depth: int) -> int:
        if depth == k:
            return 1
        total = 0
        for w in succ[v]:
            if w not in seen:
                total += extend(w, seen | {w}, depth + 1)
        return total

    return sum(extend(v, {v}, 1) for v in range(1, graph.n + 1))


# -- set-system problems -----------------------------------------------------


def _check_sets(sets, k: int) -> None:
    _guard(len(sets) <= MAX_SET_SYSTEM, f"{len(sets)} sets")
    _guard(k <= MAX_PARAM, f"k={k}")


def bf_exact_cover(sets, k: int) -> bool:
    """Is there a pairwise-disjoint sub-collection whose union has size k?"""
    _check_sets(sets, k)
    sets = [frozenset(s) for s in sets]
    m = len(sets)
    for pick in range(1 << m):
        union: set[int] = set()
        size = 0
        ok = True
        for i in range(m):
            if pick >> i & 1:
                if union & sets[i]:
                    ok = False
                    break
                union |= sets[i]
                size += len(sets[i])
        if ok and size == k:
            return True
    return False


def bf_exact_cover_rec(sets, k: int) -> bool:
    """Recursive take/skip variant of :func:`bf_exact_cover`."""
    _check_sets(sets, k)
    sets = [frozenset(s) for s in sets]

    def go(i: int, union: frozenset, size: int) -> bool:
        if size == k:
            return True
        if i == len(sets) or size > k:
            return False
        if not union & sets[i] and go(i + 1, union | sets[i], size + len(sets[i])):
            return True
        return go(i + 1, union, size)

    return go(0, frozenset(), 0)


def bf_partial_cover_min(sets, k: int):
    """Minimum number of sets whose union has size >= k, or None."""
    _check_sets(sets, k)
    sets = [frozenset(s) for s in sets]
    best = None
    for pick in range(1 << len(sets)):
        union: set[int] = set()
        count = 0
        for i in range(len(sets)):
            if pick >> i & 1:
                union |= sets[i]
                count += 1
        if len(union) >= k and (best is None or count < best):
            best = count
    return best


def bf_partial_cover_min_greedyfree(sets, k: int):
    """Second style: breadth-first over collection sizes."""
    _check_sets(sets, k)
    sets = [frozenset(s) for s in sets]
    for size in range(0, len(sets) + 1):
        for combo in combinations(range(len(sets)), size):
            union: set[int] = set()
            for i in combo:
                union |= sets[i]
            if len(union) >= k:
                return size
    return None


def bf_packing(sets, m: int, k: int) -> bool:
    """k pairwise-disjoint sets, each of size m?"""
    _check_sets(sets, k)
    if any(len(set(s)) != m for s in sets):
        raise ValueError("all sets must have the declared size")
    fsets = [frozenset(s) for s in sets]
    for combo in combinations(range(len(fsets)), k):
        union: set[int] = set()
        ok = True
        for i in combo:
            if union & fsets[i]:
                ok = False
                break
            union |= fsets[i]
        if ok:
            return True
    return False


def bf_packing_count(sets, m: int, k: int) -> int:
    _check_sets(sets, k)
    fsets = [frozenset(s) for s in sets]
    total = 0
    for combo in combinations(range(len(fsets)), k):
        union: set[int] = set()
        ok = True
        for i in combo:
            if union & fsets[i]:
                ok = False
                break
            union |= fsets[i]
        if ok:
            total += 1
    return total


def bf_tdom(graph: UndirectedGraph, t: int):
    """Minimum size of a vertex set whose closed neighborhood covers >= t."""
    _guard(graph.n <= MAX_SET_SYSTEM, f"n={graph.n}")
    _guard(t <= MAX_PARAM, f"t={t}")
    verts = list(range(1, graph.n + 1))
    nbrs = {v: graph.neighbors(v) | {v} for v in verts}
    for size in range(0, graph.n + 1):
        for combo in combinations(verts, size):
            covered: set[int] = set()
            for v in combo:
                covered |= nbrs[v]
            if len(covered) >= t:
                return size
    return None


def bf_ddim(tuples, d: int, k: int) -> bool:
    """k pairwise-disjoint d-tuples (disjoint in every coordinate)?"""
    _guard(len(tuples) <= MAX_SET_SYSTEM, f"{len(tuples)} tuples")
    _guard(k <= MAX_PARAM, f"k={k}")
    tl = [tuple(t) for t in tuples]
    if any(len(t) != d for t in tl):
        raise ValueError("tuple arity mismatch")
    for combo in combinations(range(len(tl)), k):
        ok = True
        for c in range(d):
            vals = [tl[i][c] for i in combo]
            if len(set(vals)) != len(vals):
                ok = False
                break
        if ok:
            return True
    return False


# -- constrained walks -------------------------------------------------------


def bf_kwalk_one_repeat(graph: DirectedGraph, k: int) -> bool:
    """Is there a k-vertex walk visiting at least k-1 distinct vertices?"""
    _guard(graph.n <= MAX_PATH_VERTS - 6, f"n={graph.n}")
    _guard(k <= MAX_PARAM - 2, f"k={k}")
    succ = _succ(graph)

    def extend(v: int, counts: dict[int, int], depth: int) -> bool:
        if depth == k:
            return k - len(counts) <= 1
        if depth - len(counts) > 1:
            return False
        for w in succ[v]:
            counts[w] = counts.get(w, 0) + 1
            if extend(w, counts, depth + 1):
                return True
            counts[w] -= 1
            if not counts[w]:
                del counts[w]
        return False

    return any(extend(v, {v: 1}, 1) for v in range(1, graph.n + 1))


def bf_kwalk_one_repeat_iter(graph: DirectedGraph, k: int) -> bool:
    """Iterative variant tracking (current, visited-set, repeated?)."""
    _guard(graph.n <= MAX_PATH_VERTS - 6, f"n={graph.n}")
    _guard(k <= MAX_PARAM - 2, f"k={k}")
    succ = _succ(graph)
    states = {(v, 1 << (v - 1), False) for v in range(1, graph.n + 1)}
    for _ in range(k - 1):
        nxt = set()
        for v, mask, used in states:
            for w in succ[v]:
                bit = 1 << (w - 1)
                if not mask & bit:
                    nxt.add((w, mask | bit, used))
                elif not used:
                    nxt.add((w, mask, True))
        states = nxt
        if not states:
            return False
    return bool(states)


def bf_constrained_kpath(graph: DirectedGraph, k: int, v1, v2, mu1: int, mu2: int) -> bool:
    """k-path using at most mu1 vertices of v1 and mu2 of v2."""
    _guard(graph.n <= MAX_PATH_VERTS - 6, f"n={graph.n}")
    _guard(k <= MAX_PARAM - 2, f"k={k}")
    succ = _succ(graph)
    v1, v2 = set(v1), set(v2)

    def extend(v: int, seen: set[int], c1: int, c2: int, depth: int) -> bool:
        if c1 > mu1 or c2 > mu2:
            return False
        if depth == k:
            return True
        for w in succ[v]:
            if w not in seen and extend(
                w, seen | {w}, c1 + (w in v1), c2 + (w in v2), depth + 1
            ):
                return True
        return False

    return any(
        extend(v, {v}, int(v in v1), int(v in v2), 1) for v in range(1, graph.n + 1)
    )


def bf_admissible_walks(graph: UndirectedGraph, side: dict[int, int], length: int):
    """All admissible walks of the given vertex count, literally enumerated.

    A walk is admissible when it never moves from a side-2 vertex to a
    side-1 vertex and straight back to the same side-2 vertex.
    """
    _guard(graph.n <= 8, f"n={graph.n}")
    _guard(length <= 6, f"length={length}")
    succ = _succ(graph)
    walks = []

    def extend(walk: list[int]) -> None:
        if len(walk) == length:
            walks.append(tuple(walk))
            return
        for w in succ[walk[-1]]:
            if (
                len(walk) >= 2
                and walk[-2] == w
                and side[w] == 2
                and side[walk[-1]] == 1
            ):
                continue
            walk.append(w)
            extend(walk)
            walk.pop()

    for v in range(1, graph.n + 1):
        extend([v])
    return walks

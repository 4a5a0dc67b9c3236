"""Randomized sensitivity oracle for k-path detection in undirected graphs.

Each of T independent trials randomly splits the vertex set into side 1
and side 2, then sums walk extensors over *admissible* walks: walks that
never step from a side-2 vertex to a side-1 vertex and straight back to
the same side-2 vertex.  Side-1 vertices carry Vandermonde codes in a
k1-coordinate block, side-2/side-2 edges carry Vandermonde codes in a
k2-coordinate block, and every vertex contributes one power of a length
variable z; all arithmetic lives in the commutative ring
Lambda(GF(2^d)^(k1+k2))[z] mod z^(k+1).  A k-path whose side profile
matches (k1 coded vertices, k2 coded edges) shows up as a nonzero
coefficient of z^k times the full basis element.

Queries stitch precomputed walk sums around the updated edges.  Because
stitching can create the one forbidden bounce pattern at a junction,
every stitched boundary gets an inclusion-exclusion correction; the
correction terms only exist when the bounce edge is present in the
initial graph, so inserted and deleted edges are handled uniformly with
membership-aware corrections.  Chains of placed edges are resolved by a
fixed-point iteration whose depth is capped by the z-truncation.

All trials are processed in lockstep as one batched numpy computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _bits, serial
from .errors import CapabilityError, InvalidUpdateError
from .fields import GF2m, field_new, prf_tag, sample_bit
from .graphs import UndirectedGraph, UpdateBatch, canon

TRIAL_CHUNK = 64
DEFAULT_FAILURE_BOUND = 0.01


def split_budgets(k: int) -> tuple[int, int]:
    """Coded-vertex and coded-edge budgets for the two-sided walk scheme."""
    if k < 1:
        raise CapabilityError("k must be at least 1")
    k1 = (k + 1) // 2
    k2 = int((math.sqrt(2) - 1) / 2 * k)
    return k1, k2


def default_trials(k: int, failure_bound: float = DEFAULT_FAILURE_BOUND) -> int:
    """Trial count giving detection failure probability about the bound."""
    return max(1, math.ceil(8 * (1.015**k) * math.log(1 / failure_bound)))


@dataclass
class _UContext:
    """Shared (trial-independent) coding data for one oracle."""

    ring: GF2m
    graph: UndirectedGraph
    k: int
    k1: int
    k2: int
    seed: int

    @property
    def dims(self) -> int:
        return self.k1 + self.k2

    @property
    def zslots(self) -> int:
        return self.k + 1

    @property
    def nlanes(self) -> int:
        return 1 << self.dims

    def vertex_prefix(self, v: int) -> tuple[int, ...]:
        """Vandermonde code of a side-1 vertex, in the low coordinate block."""
        j = self.ring.embed(v)
        out, acc = [], 1
        for _ in range(self.k1):
            out.append(acc)
            acc = self.ring.mul(acc, j)
        return tuple(out) + (0,) * self.k2

    def edge_suffix(self, u: int, v: int) -> tuple[int, ...]:
        """Vandermonde code of a side-2/side-2 edge, in the high block."""
        a, b = canon(u, v)
        j = self.ring.embed((a - 1) * self.graph.n + b)
        out, acc = [], 1
        for _ in range(self.k2):
            out.append(acc)
            acc = self.ring.mul(acc, j)
        return (0,) * self.k1 + tuple(out)


class _Trials:
    """A chunk of trials advanced in lockstep (leading axis = trial)."""

    def __init__(self, ctx: _UContext, sides: np.ndarray, yv: np.ndarray, tindex=None):
        self.ctx = ctx
        self.sides = sides  # (C, n+1) uint8, entry 0 unused
        self.yv = yv  # (C, n+1) uint32 vertex variables
        self.count = sides.shape[0]
        self.tindex = tindex if tindex is not None else np.arange(self.count)
        self._ye: dict[tuple[int, int], np.ndarray] = {}
        self.q: Optional[np.ndarray] = None  # (C, n, n, zslots, L)
        self.s: Optional[np.ndarray] = None  # (C, n, zslots, L)
        self.sb: Optional[np.ndarray] = None
        self.z: Optional[np.ndarray] = None  # (C, zslots, L)

    def single(self, ci: int) -> "_Trials":
        """One-trial view (fresh caches, no walk sums); used by tests."""
        return _Trials(
            self.ctx, self.sides[ci : ci + 1], self.yv[ci : ci + 1],
            self.tindex[ci : ci + 1],
        )

    def walk_value(self, ci: int, walk) -> np.ndarray:
        """Literal product of factors along one walk, for one trial."""
        sub = self.single(ci)
        val = np.zeros((1, self.ctx.zslots, self.ctx.nlanes), dtype=np.uint32)
        val[0, 0, 0] = 1
        for i, v in enumerate(walk):
            if i > 0:
                val = sub.edge_factor(val, walk[i - 1], v)
            val = sub.vertex_factor(val, v)
        return val[0]

    # -- per-trial randomness -------------------------------------------------

    def edge_vars(self, u: int, v: int) -> np.ndarray:
        key = canon(u, v)
        got = self._ye.get(key)
        if got is None:
            ring, seed = self.ctx.ring, self.ctx.seed
            got = np.array(
                [
                    ring.sample(seed, prf_tag("ue", int(t), *key))
                    for t in self.tindex
                ],
                dtype=np.uint32,
            )
            self._ye[key] = got
        return got

    # -- elementary transforms -------------------------------------------------

    def _skew(self, x: np.ndarray, vec) -> np.ndarray:
        """Wedge the lane axis with a fixed vector (same for all trials)."""
        ring, dims = self.ctx.ring, self.ctx.dims
        out = np.zeros_like(x)
        for g, c in enumerate(vec):
            if c:
                w0, w1 = _bits.generator_split(dims, g)
                out[..., w1] ^= ring.mul_scalar(x[..., w0], c)
        return out

    def _zshift(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        out[..., 1:, :] = x[..., :-1, :]
        return out

    def _scale_trials(self, x: np.ndarray, scalars: np.ndarray) -> np.ndarray:
        """Multiply per-trial by a scalar array of shape (C,)."""
        ring = self.ctx.ring
        shape = (self.count,) + (1,) * (x.ndim - 1)
        return ring.mul_arrays(x, scalars.reshape(shape))

    def _where_trials(self, cond: np.ndarray, a: np.ndarray, b) -> np.ndarray:
        shape = (self.count,) + (1,) * (a.ndim - 1)
        return np.where(cond.reshape(shape), a, b)

    def vertex_factor(self, x: np.ndarray, v: int) -> np.ndarray:
        """Multiply by the vertex factor: z, and the side-1 code if coded."""
        shifted = self._zshift(x)
        coded = self._skew(shifted, self.ctx.vertex_prefix(v))
        return self._where_trials(self.sides[:, v] == 1, coded, shifted)

    def edge_factor(self, x: np.ndarray, u: int, v: int) -> np.ndarray:
        """Multiply by the edge factor: y_uv, and the pair code if side-2/2."""
        out = self._scale_trials(x, self.edge_vars(u, v))
        both2 = (self.sides[:, u] == 2) & (self.sides[:, v] == 2)
        if self.ctx.k2 == 0:
            # no coded-edge budget: walks through side-2 pairs are blocked
            return self._where_trials(both2, np.zeros_like(out), out)
        coded = self._skew(out, self.ctx.edge_suffix(u, v))
        return self._where_trials(both2, coded, out)

    def step_factor(self, x: np.ndarray, w: int, v: int) -> np.ndarray:
        return self.vertex_factor(self.edge_factor(x, w, v), v)

    def initial_vertex(self, v: int) -> np.ndarray:
        """chi(v) itself: z times the side-1 code or the scalar 1."""
        ctx = self.ctx
        lanes1 = np.zeros((self.count, ctx.zslots, ctx.nlanes), dtype=np.uint32)
        coded = np.zeros(ctx.nlanes, dtype=np.uint32)
        for g, c in enumerate(ctx.vertex_prefix(v)):
            if c:
                coded[1 << g] = c
        side1 = (self.sides[:, v] == 1)[:, None]
        lanes1[:, 1, :] = np.where(side1, coded[None, :], 0)
        lanes1[:, 1, 0] ^= np.where(self.sides[:, v] == 2, 1, 0).astype(np.uint32)
        return lanes1

    # -- preprocessing ---------------------------------------------------------

    def run_walk_sums(self, edges) -> None:
        """Fill the admissible pairwise walk sums for this trial chunk."""
        ctx = self.ctx
        n, zs, L = ctx.graph.n, ctx.zslots, ctx.nlanes
        C = self.count
        steps = []
        for a, b in sorted(edges):
            steps.append((a, b))
            steps.append((b, a))
        rev = {i: steps.index((b, a)) for i, (a, b) in enumerate(steps)}
        cur_q = np.zeros((C, n, n, zs, L), dtype=np.uint32)
        for v in range(1, n + 1):
            cur_q[:, v - 1, v - 1] = self.initial_vertex(v)
        q_tot = cur_q.copy()
        cur_b = np.zeros((C, n, len(steps), zs, L), dtype=np.uint32)
        for _ in range(self.ctx.k - 1):
            nxt_b = np.zeros_like(cur_b)
            for ei, (w, v) in enumerate(steps):
                base = cur_q[:, :, w - 1].copy()
                bounce = (self.sides[:, w] == 1) & (self.sides[:, v] == 2)
                if bounce.any():
                    corr = self._where_trials(
                        bounce, cur_b[:, :, rev[ei]], np.zeros_like(base)
                    )
                    base ^= corr
                nxt_b[:, :, ei] = self.step_factor(base, w, v)
            nxt_q = np.zeros_like(cur_q)
            for ei, (w, v) in enumerate(steps):
                nxt_q[:, :, v - 1] ^= nxt_b[:, :, ei]
            cur_q, cur_b = nxt_q, nxt_b
            q_tot ^= cur_q
            if not cur_q.any():
                break
        self.q = q_tot
        self.s = np.bitwise_xor.reduce(q_tot, axis=2)
        sb = np.zeros_like(self.s)
        for v in range(1, n + 1):
            sb ^= self._scale_trials(q_tot[:, :, v - 1], self.yv[:, v])
        self.sb = sb
        z = np.zeros((C, zs, L), dtype=np.uint32)
        for u in range(1, n + 1):
            z ^= self._scale_trials(self.s[:, u - 1], self.yv[:, u])
        self.z = z

    # -- query-time ring products (hat domain over lanes, explicit z conv) ----

    def _hatz(self, x: np.ndarray) -> np.ndarray:
        """Ranked zeta transform per z-slot: (..., zs, L) -> (..., zs, R, L)."""
        ctx = self.ctx
        dims = ctx.dims
        pc = _bits.popcounts(dims)
        lanes = np.arange(ctx.nlanes)
        ranked = np.zeros(x.shape[:-1] + (dims + 1, ctx.nlanes), dtype=np.uint32)
        ranked[..., pc, lanes] = x[..., lanes]
        for g in range(dims):
            w0, w1 = _bits.generator_split(dims, g)
            ranked[..., w1] ^= ranked[..., w0]
        return ranked

    def _unhatz(self, h: np.ndarray) -> np.ndarray:
        ctx = self.ctx
        out = h.copy()
        for g in range(ctx.dims):
            w0, w1 = _bits.generator_split(ctx.dims, g)
            out[..., w1] ^= out[..., w0]
        pc = _bits.popcounts(ctx.dims)
        lanes = np.arange(ctx.nlanes)
        return out[..., pc, lanes]

    def _hatz_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product in the truncated polynomial ring, operands in hat form."""
        ring, dims, zs = self.ctx.ring, self.ctx.dims, self.ctx.zslots
        out = np.zeros_like(a)
        for z1 in range(zs):
            if not a[:, z1].any():
                continue
            for z2 in range(zs - z1):
                if not b[:, z2].any():
                    continue
                pair = ring.mul_arrays(a[:, z1, :, None, :], b[:, z2, None, :, :])
                tgt = out[:, z1 + z2]
                for r in range(dims + 1):
                    for r1 in range(r + 1):
                        tgt[:, r] ^= pair[:, r1, r - r1]
        return out

    # -- query ----------------------------------------------------------------

    def _corrected_sum(self, vec: np.ndarray, x: int, y: int) -> np.ndarray:
        """S-style boundary sum at x, safe against bouncing back along (x,y).

        vec is the per-vertex sum table (s or sb).  The correction strips
        walks that reach x over the edge (y,x); it only applies when that
        edge exists initially and the sides make the bounce forbidden.
        """
        base = vec[:, x - 1]
        if not self.ctx.graph.has_edge(x, y):
            return base
        mask = (self.sides[:, x] == 1) & (self.sides[:, y] == 2)
        if not mask.any():
            return base
        corr = self.vertex_factor(
            self._scale_trials(vec[:, y - 1], self.edge_vars(x, y)), x
        )
        return base ^ self._where_trials(mask, corr, np.zeros_like(base))

    def _middle(self, e1: tuple[int, int], e2: tuple[int, int]) -> np.ndarray:
        """Admissible original-graph walks usable between two placed edges."""
        (s1, t1), (s2, t2) = e1, e2
        graph, sides = self.ctx.graph, self.sides
        out = self.q[:, t1 - 1, s2 - 1].copy()
        alpha = (sides[:, t1] == 1) & (sides[:, s1] == 2)
        if not graph.has_edge(s1, t1):
            alpha = np.zeros_like(alpha)
        beta = (sides[:, s2] == 1) & (sides[:, t2] == 2)
        if not graph.has_edge(s2, t2):
            beta = np.zeros_like(beta)
        if alpha.any():
            corr = self.vertex_factor(
                self._scale_trials(self.q[:, s1 - 1, s2 - 1], self.edge_vars(t1, s1)),
                t1,
            )
            out ^= self._where_trials(alpha, corr, np.zeros_like(out))
        if beta.any():
            corr = self.vertex_factor(
                self._scale_trials(self.q[:, t1 - 1, t2 - 1], self.edge_vars(t2, s2)),
                s2,
            )
            out ^= self._where_trials(beta, corr, np.zeros_like(out))
        both = alpha & beta
        if both.any():
            corr = self.vertex_factor(
                self._scale_trials(self.q[:, s1 - 1, t2 - 1], self.edge_vars(t2, s2)),
                s2,
            )
            corr = self.vertex_factor(
                self._scale_trials(corr, self.edge_vars(t1, s1)), t1
            )
            out ^= self._where_trials(both, corr, np.zeros_like(out))
        if t1 == s2 and s1 == t2:
            gamma = (sides[:, t1] == 1) & (sides[:, s1] == 2)
            if gamma.any():
                out ^= self._where_trials(
                    gamma, self.initial_vertex(t1), np.zeros_like(out)
                )
        return out

    def updated_total(self, batch: UpdateBatch) -> np.ndarray:
        """Walk total of the updated graph via boundary stitching.

        Each undirected update is placed as both directed orientations.
        Removed-edge placements carry sign -1; over characteristic 2 the
        sign is the identity, but it is threaded through so the structure
        of the inclusion-exclusion stays auditable.
        """
        placed = []
        for u, v in batch.inserts:
            placed += [(u, v, 1), (v, u, 1)]
        for u, v in batch.deletes:
            placed += [(u, v, -1), (v, u, -1)]
        if not placed:
            return self.z.copy()
        ne = len(placed)
        suffix_h = []
        middle_h = [[None] * ne for _ in range(ne)]
        for s2, t2, _ in placed:
            suffix_h.append(self._hatz(self._corrected_sum(self.s, t2, s2)))
        for i, (s1, t1, _) in enumerate(placed):
            for j, (s2, t2, sg2) in enumerate(placed):
                mid = self.edge_factor(self._middle((s1, t1), (s2, t2)), s2, t2)
                middle_h[i][j] = self._hatz(self._signed(mid, sg2))
        g_vec = list(suffix_h)
        for _ in range(self.ctx.k):
            nxt = []
            for i in range(ne):
                acc = suffix_h[i].copy()
                for j in range(ne):
                    acc ^= self._hatz_mul(middle_h[i][j], g_vec[j])
                nxt.append(acc)
            g_vec = nxt
        delta = np.zeros_like(self.z)
        for i, (s1, t1, sg1) in enumerate(placed):
            prefix = self.edge_factor(self._corrected_sum(self.sb, s1, t1), s1, t1)
            prefix = self._signed(prefix, sg1)
            delta ^= self._unhatz(self._hatz_mul(self._hatz(prefix), g_vec[i]))
        return self.z ^ delta

    @staticmethod
    def _signed(x: np.ndarray, sign: int) -> np.ndarray:
        # negation is the identity in characteristic 2
        return x

    def hits(self, total: np.ndarray) -> np.ndarray:
        """Per-trial boolean: full-budget coefficient of z^k is nonzero."""
        return total[:, self.ctx.k, self.ctx.nlanes - 1] != 0


class UndirectedOracle:
    """T-trial sensitivity oracle; answers are one-sided per trial."""

    def __init__(self, graph, k, trials, seed, ctx, chunks, skip, bipartite=None):
        self.graph = graph
        self.k = k
        self.trials = trials
        self.seed = seed
        self.ctx = ctx
        self.chunks: list[_Trials] = chunks
        self.skip = skip  # dense graphs always contain a k-path
        self.bipartite = bipartite  # (side_s, side_t) when fixed

    @property
    def k1(self) -> int:
        return self.ctx.k1

    @property
    def k2(self) -> int:
        return self.ctx.k2

    def _normalize(self, batch: UpdateBatch, strict: bool) -> UpdateBatch:
        if batch.vertex_failures:
            raise CapabilityError("the undirected oracle does not take vertex failures")
        batch = batch.normalized(self.graph, strict=strict, undirected=True)
        if self.bipartite is not None:
            s, t = self.bipartite
            for u, v in batch.inserts + batch.deletes:
                if (u in s) == (v in s):
                    raise InvalidUpdateError(
                        "bipartite oracle: update must cross the declared sides"
                    )
        return batch

    def query(self, batch: UpdateBatch, *, strict: bool = True) -> bool:
        batch = self._normalize(batch, strict)
        if self.skip:
            return True
        for chunk in self.chunks:
            if chunk.hits(chunk.updated_total(batch)).any():
                return True
        return False

    @property
    def static_answer(self) -> bool:
        return self.query(UpdateBatch())

    def trial_totals(self, batch: UpdateBatch, *, strict: bool = True) -> np.ndarray:
        """Updated totals for every trial, stacked (T, k+1, lanes)."""
        batch = self._normalize(batch, strict)
        return np.concatenate([c.updated_total(batch) for c in self.chunks], axis=0)

    def recompute_totals(self, batch: UpdateBatch, *, strict: bool = True) -> np.ndarray:
        """From-scratch totals on the updated graph, same partitions/codes."""
        batch = self._normalize(batch, strict)
        new_edges = self.graph.apply(batch).edges
        outs = []
        for chunk in self.chunks:
            fresh = _Trials(self.ctx, chunk.sides, chunk.yv)
            fresh.tindex = chunk.tindex
            fresh._ye = chunk._ye
            fresh.run_walk_sums(new_edges)
            outs.append(fresh.z)
        return np.concatenate(outs, axis=0)

    def serialize(self) -> bytes:
        return _dump_undirected(self)


def _build_chunks(ctx: _UContext, trials: int, sides_fixed=None) -> list[_Trials]:
    n = ctx.graph.n
    chunks = []
    for lo in range(0, trials, TRIAL_CHUNK):
        hi = min(lo + TRIAL_CHUNK, trials)
        count = hi - lo
        sides = np.zeros((count, n + 1), dtype=np.uint8)
        yv = np.zeros((count, n + 1), dtype=np.uint32)
        for ci, t in enumerate(range(lo, hi)):
            for v in range(1, n + 1):
                if sides_fixed is None:
                    sides[ci, v] = 1 if sample_bit(ctx.seed, prf_tag("part", t, v)) else 2
                else:
                    sides[ci, v] = sides_fixed[v]
                yv[ci, v] = ctx.ring.sample(ctx.seed, prf_tag("uv", t, v))
        block = _Trials(ctx, sides, yv)
        block.tindex = np.arange(lo, hi)
        chunks.append(block)
    return chunks


def u_preprocess(
    graph: UndirectedGraph,
    k: int,
    trials: Optional[int] = None,
    seed: int = 0,
    field_degree: int = 16,
) -> UndirectedOracle:
    """Build the undirected oracle (or record always-yes on dense inputs)."""
    if k < 1:
        raise CapabilityError("k must be at least 1")
    k1, k2 = split_budgets(k)
    ring = field_new(field_degree)
    if ring.order <= graph.n * graph.n:
        raise CapabilityError("field too small for injective edge codes")
    if trials is None:
        trials = default_trials(k)
    ctx = _UContext(ring, graph, k, k1, k2, seed)
    if graph.m > (k + 1) * graph.n:
        return UndirectedOracle(graph, k, trials, seed, ctx, [], skip=True)
    chunks = _build_chunks(ctx, trials)
    for chunk in chunks:
        chunk.run_walk_sums(graph.edges)
    return UndirectedOracle(graph, k, trials, seed, ctx, chunks, skip=False)


def u_query(oracle: UndirectedOracle, batch: UpdateBatch, *, strict: bool = True) -> bool:
    return oracle.query(batch, strict=strict)


def u_bipartite_preprocess(
    graph: UndirectedGraph,
    side_s,
    side_t,
    k: int,
    seed: int = 0,
    field_degree: int = 16,
) -> UndirectedOracle:
    """Fixed-partition oracle for bipartite graphs (k even, k2 = 0)."""
    if k < 1:
        raise CapabilityError("k must be at least 1")
    if k % 2:
        raise CapabilityError("bipartite variant requires even k")
    side_s, side_t = frozenset(side_s), frozenset(side_t)
    if side_s & side_t or side_s | side_t != frozenset(range(1, graph.n + 1)):
        raise InvalidUpdateError("sides must partition the vertex set")
    for u, v in graph.edges:
        if (u in side_s) == (v in side_s):
            raise InvalidUpdateError("graph edge does not cross the declared sides")
    ring = field_new(field_degree)
    if ring.order <= graph.n * graph.n:
        raise CapabilityError("field too small for injective edge codes")
    ctx = _UContext(ring, graph, k, k // 2, 0, seed)
    if graph.m > (k + 1) * graph.n:
        return UndirectedOracle(
            graph, k, 1, seed, ctx, [], skip=True, bipartite=(side_s, side_t)
        )
    fixed = {v: (1 if v in side_s else 2) for v in range(1, graph.n + 1)}
    chunks = _build_chunks(ctx, 1, sides_fixed=fixed)
    for chunk in chunks:
        chunk.run_walk_sums(graph.edges)
    return UndirectedOracle(
        graph, k, 1, seed, ctx, chunks, skip=False, bipartite=(side_s, side_t)
    )


def u_bipartite_query(oracle, batch: UpdateBatch, *, strict: bool = True) -> bool:
    return oracle.query(batch, strict=strict)


# -- serialization ------------------------------------------------------------


def _dump_undirected(oracle: UndirectedOracle) -> bytes:
    w = serial.Writer()
    mode = serial.MODE_BIPARTITE if oracle.bipartite else serial.MODE_UNDIRECTED
    ctx = oracle.ctx
    write_n = oracle.graph.n
    serial.write_header(
        w, mode, 1 if oracle.skip else 0, oracle.k, ctx.dims, oracle.k,
        write_n, oracle.seed, oracle.trials,
    )
    serial.write_graph(w, oracle.graph.edges)
    w.u16(ctx.k1)
    w.u16(ctx.k2)
    w.u16(ctx.ring.degree)
    w.u64(ctx.ring.modulus)
    if oracle.bipartite:
        side_s = oracle.bipartite[0]
        for v in range(1, write_n + 1):
            w.u8(1 if v in side_s else 0)
    if not oracle.skip:
        for chunk in oracle.chunks:
            w.raw(chunk.sides.astype(np.uint8).tobytes())
            w.words(chunk.yv, 2)
            w.words(chunk.q, 2)
            w.words(chunk.s, 2)
            w.words(chunk.sb, 2)
            w.words(chunk.z, 2)
    return w.bytes_out()


def load_undirected(head: dict, r: serial.Reader) -> UndirectedOracle:
    n = head["n"]
    graph = UndirectedGraph.from_edges(n, serial.read_graph(r))
    k, seed, trials = head["k"], head["seed"], head["r"]
    k1 = r.u16()
    k2 = r.u16()
    degree = r.u16()
    modulus = r.u64()
    ring = field_new(degree, modulus)
    ctx = _UContext(ring, graph, k, k1, k2, seed)
    bipartite = None
    if head["mode"] == serial.MODE_BIPARTITE:
        flags = [r.u8() for _ in range(n)]
        side_s = frozenset(v for v in range(1, n + 1) if flags[v - 1])
        bipartite = (side_s, frozenset(range(1, n + 1)) - side_s)
    skip = bool(head["flags"] & 1)
    chunks = []
    if not skip:
        zs, L = ctx.zslots, ctx.nlanes
        for lo in range(0, trials, TRIAL_CHUNK):
            count = min(lo + TRIAL_CHUNK, trials) - lo
            sides = np.frombuffer(r._take(count * (n + 1)), dtype=np.uint8)
            sides = sides.reshape(count, n + 1).copy()
            yv = r.words(count * (n + 1), 2).reshape(count, n + 1)
            chunk = _Trials(ctx, sides, yv)
            chunk.tindex = np.arange(lo, lo + count)
            chunk.q = r.words(count * n * n * zs * L, 2).reshape(count, n, n, zs, L)
            chunk.s = r.words(count * n * zs * L, 2).reshape(count, n, zs, L)
            chunk.sb = r.words(count * n * zs * L, 2).reshape(count, n, zs, L)
            chunk.z = r.words(count * zs * L, 2).reshape(count, zs, L)
            chunks.append(chunk)
    return UndirectedOracle(graph, k, trials, seed, ctx, chunks, skip, bipartite)

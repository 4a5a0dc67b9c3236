"""Sensitivity oracle for k-path detection in directed graphs.

Preprocessing computes, for every ordered vertex pair, the sum of walk
extensors over all walks between them (lengths 1..L_max), plus the row
sums, column sums, and grand total.  A query with edge insertions, edge
deletions, and vertex failures then evaluates an update formula that
touches only the O(l^2) precomputed values at the updated endpoints,
never the whole matrix; the state itself is immutable and every query
is answered against the initial input.

Two variants share the machinery:

* randomized - coefficients in GF(2^d), vertex codes and edge variables
  drawn from a keyed PRF; one-sided error (a nonzero witness always
  certifies a path).
* deterministic - coefficients are exact integers, vertex codes are
  lifted Vandermonde codes, and every edge variable is 1; distinct paths
  contribute squared determinants of one sign and never cancel.

Vertex failures are supported by building the oracle over a split graph
(each vertex becomes an in-node and an out-node joined by an internal
edge; failing the vertex deletes that internal edge).  Only the in-node
carries the trivial code, and the maintained totals are restricted to
walks that start at in-nodes and end at out-nodes, so that a top-degree
witness always traverses all k internal edges of its path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import _bits
from ._intops import dense_wedge, vec_add, vec_scale
from ._packed import PackedSpace, code_l1
from .algebra import MAX_DIMS, Extensor, lift_vectors, vandermonde
from .errors import CapabilityError
from .fields import GF2m, INTEGERS, field_new, prf_tag, sample_bit
from .graphs import DirectedGraph, UpdateBatch

RANDOMIZED = "randomized"
DETERMINISTIC = "deterministic"

# code: (scalar, tuple-of-vectors); the vertex contributes scalar * (v1 ^ v2 ^ ...)
Code = tuple[int, tuple[tuple[int, ...], ...]]


@dataclass(frozen=True)
class QueryResult:
    """Outcome of one sensitivity query."""

    answer: bool
    witness: int  # coefficient of the full basis element in the updated total


@dataclass
class _Internal:
    """The concrete walk universe an oracle core runs on."""

    nv: int
    edges: list[tuple[int, int]]
    starts: list[int]
    ends: list[int]
    split: bool

    def preds(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for a, b in self.edges:
            out.setdefault(b, []).append(a)
        return out


def _derive_seed(seed: int, label: str, index: int) -> int:
    import hashlib

    digest = hashlib.blake2b(
        prf_tag(label, index), key=(seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"),
        digest_size=8,
    ).digest()
    return int.from_bytes(digest, "little")


@dataclass
class _Core:
    """One independent coding of the input graph with its walk sums."""

    ring: object
    dims: int
    cap: int
    seed: int
    internal: _Internal
    codes: list[Optional[Code]]
    yfn: Callable[[int, int], int]  # internal edge -> ring scalar
    # randomized storage
    q_gf: Optional[np.ndarray] = None  # (nv, nv, 2^dims) uint32
    s_gf: Optional[np.ndarray] = None
    f_gf: Optional[np.ndarray] = None
    z_gf: Optional[np.ndarray] = None
    # deterministic storage
    space: Optional[PackedSpace] = None
    q_packed: Optional[list] = None
    s_int: Optional[list] = None  # per-vertex dense lane lists
    f_int: Optional[list] = None
    z_int: Optional[list] = None
    _q_cache: dict = field(default_factory=dict)

    # -- coefficient access -------------------------------------------------

    def total_lanes(self) -> list[int]:
        if self.z_gf is not None:
            return [int(c) for c in self.z_gf]
        return list(self.z_int)

    def q_entry_int(self, a: int, b: int) -> list[int]:
        got = self._q_cache.get((a, b))
        if got is None:
            got = self.space.decode(self.q_packed[a][b])
            self._q_cache[(a, b)] = got
        return got

    # -- query chains ---------------------------------------------------------

    def z_new_lanes(self, deltas) -> list[int]:
        """Coefficient vector of the updated walk total."""
        if not deltas:
            return self.total_lanes()
        if self.ring.char == 2:
            return _gf_z_new(self, deltas)
        return _int_z_new(self, deltas)

    def updated_pair_lanes(self, deltas, touched: list[int]) -> dict:
        if self.ring.char == 2:
            return _gf_updated_pairs(self, deltas, touched)
        return _int_updated_pairs(self, deltas, touched)

    def recompute_lanes(self, new_edges) -> list[int]:
        """Walk total of an explicitly updated internal graph, from scratch."""
        itn = _Internal(
            self.internal.nv,
            sorted(new_edges),
            self.internal.starts,
            self.internal.ends,
            self.internal.split,
        )
        if self.ring.char == 2:
            return _gf_total_only(itn, self.ring, self.dims, self.cap, self.codes, self.yfn)
        return _int_total_only(itn, self.dims, self.cap, self.codes)


# --------------------------------------------------------------------------
# engines: full walk sums
# --------------------------------------------------------------------------


def _gf_apply_code(ring: GF2m, dims: int, slab: np.ndarray, code: Code) -> np.ndarray:
    scalar, vectors = code
    out = slab
    for vec in vectors:
        nxt = np.zeros_like(out)
        for g, c in enumerate(vec):
            if c:
                w0, w1 = _bits.generator_split(dims, g)
                nxt[..., w1] ^= ring.mul_scalar(out[..., w0], c)
        out = nxt
    if scalar != 1:
        out = ring.mul_scalar(out, scalar)
    return out


def _gf_walk_sums(core: _Core) -> None:
    ring, dims, itn = core.ring, core.dims, core.internal
    nv, nlanes = itn.nv, 1 << dims
    pairs = np.zeros((nv, nv, nlanes), dtype=np.uint32)
    cur = np.zeros_like(pairs)
    for i in range(nv):
        cell = np.zeros(nlanes, dtype=np.uint32)
        cell[0] = 1
        code = core.codes[i]
        cur[i, i] = cell if code is None else _gf_apply_code(ring, dims, cell, code)
    pairs ^= cur
    yvals = [(a, b, core.yfn(a, b)) for a, b in itn.edges]
    for _ in range(2, core.cap + 1):
        pre = np.zeros_like(cur)
        for a, b, y in yvals:
            pre[:, b] ^= ring.mul_scalar(cur[:, a], y)
        for b in range(nv):
            code = core.codes[b]
            if code is not None:
                pre[:, b] = _gf_apply_code(ring, dims, pre[:, b], code)
        cur = pre
        pairs ^= cur
        if not cur.any():
            break
    ends = np.asarray(itn.ends, dtype=np.int64)
    starts = np.asarray(itn.starts, dtype=np.int64)
    core.q_gf = pairs
    core.s_gf = np.bitwise_xor.reduce(pairs[:, ends], axis=1)
    core.f_gf = np.bitwise_xor.reduce(pairs[starts], axis=0)
    core.z_gf = np.bitwise_xor.reduce(core.s_gf[starts], axis=0)


def _packed_bound(itn: _Internal, codes, cap: int) -> int:
    l1 = max((code_l1(c) for c in codes if c is not None), default=1)
    indeg = max((len(v) for v in itn.preds().values()), default=1)
    step = l1
    total = step
    for _ in range(2, cap + 1):
        step = step * indeg * l1
        total += step
    return total * max(itn.nv, 1) ** 2


def _packed_walk_sums(core: _Core) -> None:
    itn, dims = core.internal, core.dims
    nv = itn.nv
    space = PackedSpace(dims, _packed_bound(itn, core.codes, core.cap).bit_length() + 8)
    core.space = space
    zero = space.zero
    unit = space.encode([1] + [0] * ((1 << dims) - 1))
    cur = [[zero] * nv for _ in range(nv)]
    pairs = [[zero] * nv for _ in range(nv)]
    for i in range(nv):
        code = core.codes[i]
        cur[i][i] = unit if code is None else space.apply_code(unit, code)
        pairs[i][i] = cur[i][i]
    preds = itn.preds()
    for _ in range(2, core.cap + 1):
        nxt = [[zero] * nv for _ in range(nv)]
        alive = False
        for b in range(nv):
            srcs = preds.get(b)
            if not srcs:
                continue
            code = core.codes[b]
            for i in range(nv):
                acc_p = 0
                acc_n = 0
                for a in srcs:
                    cp, cn = cur[i][a]
                    acc_p += cp
                    acc_n += cn
                cell = (acc_p, acc_n)
                if code is not None:
                    cell = space.apply_code(cell, code)
                if cell[0] or cell[1]:
                    alive = True
                    nxt[i][b] = cell
                    row = pairs[i]
                    row[b] = space.add(row[b], cell)
        cur = nxt
        if not alive:
            break
    core.q_packed = pairs
    s_packed = []
    for i in range(nv):
        acc = zero
        for j in itn.ends:
            acc = space.add(acc, pairs[i][j])
        s_packed.append(acc)
    f_packed = []
    for j in range(nv):
        acc = zero
        for i in itn.starts:
            acc = space.add(acc, pairs[i][j])
        f_packed.append(acc)
    z_acc = zero
    for i in itn.starts:
        z_acc = space.add(z_acc, s_packed[i])
    core.s_int = [space.decode(v) for v in s_packed]
    core.f_int = [space.decode(v) for v in f_packed]
    core.z_int = space.decode(z_acc)


# --------------------------------------------------------------------------
# engines: walk total only (cheap recompute-from-scratch for one query)
# --------------------------------------------------------------------------


def _gf_total_only(itn, ring, dims, cap, codes, yfn) -> list[int]:
    nv, nlanes = itn.nv, 1 << dims
    cur = np.zeros((nv, nlanes), dtype=np.uint32)
    for i in itn.starts:
        cell = np.zeros(nlanes, dtype=np.uint32)
        cell[0] = 1
        code = codes[i]
        cur[i] = cell if code is None else _gf_apply_code(ring, dims, cell, code)
    ends = set(itn.ends)
    total = np.zeros(nlanes, dtype=np.uint32)
    for j in itn.ends:
        total ^= cur[j]
    yvals = [(a, b, yfn(a, b)) for a, b in itn.edges]
    for _ in range(2, cap + 1):
        pre = np.zeros_like(cur)
        for a, b, y in yvals:
            pre[b] ^= ring.mul_scalar(cur[a], y)
        for b in range(nv):
            code = codes[b]
            if code is not None:
                pre[b] = _gf_apply_code(ring, dims, pre[b], code)
        cur = pre
        if not cur.any():
            break
        for j in ends:
            total ^= cur[j]
    return [int(c) for c in total]


def _int_total_only(itn, dims, cap, codes) -> list[int]:
    nv = itn.nv
    space = PackedSpace(dims, _packed_bound(itn, codes, cap).bit_length() + 8)
    zero = space.zero
    unit = space.encode([1] + [0] * ((1 << dims) - 1))
    cur = [zero] * nv
    for i in itn.starts:
        code = codes[i]
        cur[i] = unit if code is None else space.apply_code(unit, code)
    total = zero
    for j in itn.ends:
        total = space.add(total, cur[j])
    preds = itn.preds()
    ends = set(itn.ends)
    for _ in range(2, cap + 1):
        nxt = [zero] * nv
        alive = False
        for b in range(nv):
            srcs = preds.get(b)
            if not srcs:
                continue
            acc_p = 0
            acc_n = 0
            for a in srcs:
                cp, cn = cur[a]
                acc_p += cp
                acc_n += cn
            cell = (acc_p, acc_n)
            code = codes[b]
            if code is not None:
                cell = space.apply_code(cell, code)
            if cell[0] or cell[1]:
                nxt[b] = cell
                alive = True
                if b in ends:
                    total = space.add(total, cell)
        cur = nxt
        if not alive:
            break
    return space.decode(total)


# --------------------------------------------------------------------------
# query chains
# --------------------------------------------------------------------------


from ._gfconv import hat as _hat, hat_mul as _hat_mul_conv, unhat as _unhat


def _hat_mul(ring: GF2m, a: np.ndarray, b: np.ndarray, dims: int) -> np.ndarray:
    return _hat_mul_conv(ring, a, b, dims)


def _gf_z_new(core: _Core, deltas) -> list[int]:
    ring, dims = core.ring, core.dims
    touched = sorted({a for a, _, _, _ in deltas} | {b for _, b, _, _ in deltas})
    pos = {v: i for i, v in enumerate(touched)}
    t = len(touched)
    qh = [[None] * t for _ in range(t)]
    for i, a in enumerate(touched):
        for j, b in enumerate(touched):
            qh[i][j] = _hat(core.q_gf[a, b], dims)
    fh = [_hat(core.f_gf[v], dims) for v in touched]
    vec = [_hat(core.s_gf[v], dims) for v in touched]
    acc = np.zeros((dims + 1, 1 << dims), dtype=np.uint32)
    dl = [(pos[a], pos[b], y) for a, b, _, y in deltas]
    heads = sorted({ib for _, ib, _ in dl})
    for _ in range(core.cap):
        w = [None] * t
        for ia, ib, y in dl:
            if vec[ib] is None:
                continue
            term = ring.mul_scalar(vec[ib], y)
            w[ia] = term if w[ia] is None else w[ia] ^ term
        live = [i for i in range(t) if w[i] is not None and w[i].any()]
        if not live:
            break
        for i in live:
            acc ^= _hat_mul(ring, fh[i], w[i], dims)
        # the delta only ever reads the head columns, so only those advance
        nxt = [None] * t
        for p in heads:
            cell = None
            for q in live:
                term = _hat_mul(ring, qh[p][q], w[q], dims)
                cell = term if cell is None else cell ^ term
            nxt[p] = cell if cell is not None else np.zeros_like(acc)
        vec = nxt
    delta_lanes = _unhat(acc, dims)
    return [int(a ^ b) for a, b in zip(core.z_gf, delta_lanes)]


def _int_z_new(core: _Core, deltas) -> list[int]:
    dims = core.dims
    nlanes = 1 << dims
    touched = sorted({a for a, _, _, _ in deltas} | {b for _, b, _, _ in deltas})
    pos = {v: i for i, v in enumerate(touched)}
    t = len(touched)
    qd = [[core.q_entry_int(a, b) for b in touched] for a in touched]
    fd = [core.f_int[v] for v in touched]
    vec = [list(core.s_int[v]) for v in touched]
    acc = [0] * nlanes
    dl = [(pos[a], pos[b], sign * y) for a, b, sign, y in deltas]
    for _ in range(core.cap):
        w = [None] * t
        for ia, ib, c in dl:
            term = vec_scale(vec[ib], c)
            w[ia] = term if w[ia] is None else vec_add(w[ia], term)
        live = [i for i in range(t) if w[i] is not None and any(w[i])]
        if not live:
            break
        for i in live:
            acc = vec_add(acc, dense_wedge(fd[i], w[i], dims))
        nxt = []
        for p in range(t):
            cell = [0] * nlanes
            for q in live:
                cell = vec_add(cell, dense_wedge(qd[p][q], w[q], dims))
            nxt.append(cell)
        vec = nxt
    return vec_add(core.z_int, acc)


def _gf_updated_pairs(core: _Core, deltas, touched: list[int]) -> dict:
    ring, dims = core.ring, core.dims
    pos = {v: i for i, v in enumerate(touched)}
    t = len(touched)
    qh = [[_hat(core.q_gf[a, b], dims) for b in touched] for a in touched]
    acc = [[qh[i][j].copy() for j in range(t)] for i in range(t)]
    cur = qh
    dl = [(pos[a], pos[b], y) for a, b, _, y in deltas]
    for _ in range(core.cap):
        mid = [[None] * t for _ in range(t)]
        for ia, ib, y in dl:
            for p in range(t):
                term = ring.mul_scalar(cur[p][ia], y)
                mid[p][ib] = term if mid[p][ib] is None else mid[p][ib] ^ term
        nxt = [[np.zeros_like(qh[0][0]) for _ in range(t)] for _ in range(t)]
        alive = False
        for p in range(t):
            for jj in range(t):
                cell = None
                for q in range(t):
                    if mid[p][q] is None:
                        continue
                    term = _hat_mul(ring, mid[p][q], qh[q][jj], dims)
                    cell = term if cell is None else cell ^ term
                if cell is not None and cell.any():
                    nxt[p][jj] = cell
                    acc[p][jj] = acc[p][jj] ^ cell
                    alive = True
        cur = nxt
        if not alive:
            break
    out = {}
    for i, a in enumerate(touched):
        for j, b in enumerate(touched):
            out[(a, b)] = [int(c) for c in _unhat(acc[i][j], dims)]
    return out


def _int_updated_pairs(core: _Core, deltas, touched: list[int]) -> dict:
    dims = core.dims
    nlanes = 1 << dims
    pos = {v: i for i, v in enumerate(touched)}
    t = len(touched)
    qd = [[core.q_entry_int(a, b) for b in touched] for a in touched]
    acc = [[list(qd[i][j]) for j in range(t)] for i in range(t)]
    cur = qd
    dl = [(pos[a], pos[b], sign * y) for a, b, sign, y in deltas]
    for _ in range(core.cap):
        mid = [[None] * t for _ in range(t)]
        for ia, ib, c in dl:
            for p in range(t):
                term = vec_scale(cur[p][ia], c)
                mid[p][ib] = term if mid[p][ib] is None else vec_add(mid[p][ib], term)
        nxt = [[[0] * nlanes for _ in range(t)] for _ in range(t)]
        alive = False
        for p in range(t):
            for jj in range(t):
                cell = [0] * nlanes
                for q in range(t):
                    if mid[p][q] is None or not any(mid[p][q]):
                        continue
                    cell = vec_add(cell, dense_wedge(mid[p][q], qd[q][jj], dims))
                if any(cell):
                    nxt[p][jj] = cell
                    acc[p][jj] = vec_add(acc[p][jj], cell)
                    alive = True
        cur = nxt
        if not alive:
            break
    out = {}
    for i, a in enumerate(touched):
        for j, b in enumerate(touched):
            out[(a, b)] = acc[i][j]
    return out


# --------------------------------------------------------------------------
# public oracle
# --------------------------------------------------------------------------


class KPathOracle:
    """Frozen preprocessing output answering k-path sensitivity queries."""

    def __init__(self, graph, k, mode, seed, split, amplification, cores):
        self.graph = graph
        self.k = k
        self.mode = mode
        self.seed = seed
        self.split = split
        self.amplification = amplification
        self.cores: list[_Core] = cores
        self.dims = cores[0].dims
        self.walk_cap = cores[0].cap
        self.custom_codes = False

    # -- vertex mapping ------------------------------------------------------

    def _in(self, v: int) -> int:
        return 2 * (v - 1) if self.split else v - 1

    def _out(self, v: int) -> int:
        return 2 * (v - 1) + 1 if self.split else v - 1

    def _deltas(self, core: _Core, batch: UpdateBatch):
        out = []
        for u, v in batch.inserts:
            out.append((self._out(u), self._in(v), 1, core.yfn(self._out(u), self._in(v))))
        for u, v in batch.deletes:
            out.append((self._out(u), self._in(v), -1, core.yfn(self._out(u), self._in(v))))
        for v in batch.vertex_failures:
            out.append((self._in(v), self._out(v), -1, core.yfn(self._in(v), self._out(v))))
        return out

    def _check_batch(self, batch: UpdateBatch, strict: bool) -> UpdateBatch:
        batch = batch.normalized(self.graph, strict=strict)
        if batch.vertex_failures and not self.split:
            raise CapabilityError(
                "vertex failures require preprocessing with allow_vertex_failures"
            )
        touched = (
            {u for u, _ in batch.inserts + batch.deletes}
            | {v for _, v in batch.inserts + batch.deletes}
            | set(batch.vertex_failures)
        )
        if len(touched) > self.graph.n:
            raise CapabilityError("batch touches more vertices than the graph has")
        return batch

    # -- queries -------------------------------------------------------------

    @property
    def static_answer(self) -> bool:
        return any(core.total_lanes()[-1] != 0 for core in self.cores)

    def query(self, batch: UpdateBatch, *, strict: bool = True) -> QueryResult:
        batch = self._check_batch(batch, strict)
        witness = 0
        answer = False
        for core in self.cores:
            top = core.z_new_lanes(self._deltas(core, batch))[-1]
            if not answer:
                witness = top
            if top != 0:
                witness = top
                answer = True
        return QueryResult(answer, witness)

    def query_updated_pairs(
        self, batch: UpdateBatch, *, vertices=None, strict: bool = True
    ) -> dict:
        """Updated pairwise walk sums over the touched vertices.

        Returns {(u, v): Extensor} on original vertex ids; a nonzero
        popcount-stratum certifies a path with that many coded vertices.
        ``vertices`` widens the index set beyond the batch endpoints.
        """
        batch = self._check_batch(batch, strict)
        core = self.cores[0]
        orig_touched = sorted(
            {u for u, _ in batch.inserts}
            | {v for _, v in batch.inserts}
            | {u for u, _ in batch.deletes}
            | {v for _, v in batch.deletes}
            | set(batch.vertex_failures)
            | set(vertices or ())
        )
        internal = sorted(
            {self._in(v) for v in orig_touched} | {self._out(v) for v in orig_touched}
        )
        table = core.updated_pair_lanes(self._deltas(core, batch), internal)
        ring = core.ring
        out = {}
        for u in orig_touched:
            for v in orig_touched:
                lanes = table[(self._in(u), self._out(v))]
                out[(u, v)] = Extensor(ring, core.dims, tuple(lanes))
        return out

    def updated_total_lanes(self, batch: UpdateBatch, *, strict: bool = True) -> list[int]:
        """Full coefficient vector of the updated walk total (first core)."""
        batch = self._check_batch(batch, strict)
        core = self.cores[0]
        return core.z_new_lanes(self._deltas(core, batch))

    def recompute_total(self, batch: UpdateBatch, *, strict: bool = True) -> list[int]:
        """From-scratch walk total of the updated graph, same codes.

        This is the independent check for the query formula: its result
        must equal the incrementally computed updated total exactly.
        """
        batch = self._check_batch(batch, strict)
        out = None
        for core in self.cores:
            edges = set(core.internal.edges)
            for a, b, sign, _ in self._deltas(core, batch):
                if sign > 0:
                    edges.add((a, b))
                else:
                    edges.discard((a, b))
            lanes = core.recompute_lanes(edges)
            if out is None:
                out = lanes
        return out

    def recompute_all_totals(self, batch: UpdateBatch, *, strict: bool = True):
        batch = self._check_batch(batch, strict)
        outs = []
        for core in self.cores:
            edges = set(core.internal.edges)
            for a, b, sign, _ in self._deltas(core, batch):
                if sign > 0:
                    edges.add((a, b))
                else:
                    edges.discard((a, b))
            outs.append(core.recompute_lanes(edges))
        return outs

    def serialize(self) -> bytes:
        from . import serial

        return serial.dump_directed(self)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def _build_internal(graph: DirectedGraph, split: bool) -> _Internal:
    if not split:
        nv = graph.n
        edges = sorted((u - 1, v - 1) for u, v in graph.edges)
        verts = list(range(nv))
        return _Internal(nv, edges, verts, verts, False)
    nv = 2 * graph.n
    edges = [(2 * (u - 1) + 1, 2 * (v - 1)) for u, v in graph.edges]
    edges += [(2 * (v - 1), 2 * (v - 1) + 1) for v in range(1, graph.n + 1)]
    ins = [2 * (v - 1) for v in range(1, graph.n + 1)]
    outs = [2 * (v - 1) + 1 for v in range(1, graph.n + 1)]
    return _Internal(nv, sorted(edges), ins, outs, True)


def _gf_code_for(ring: GF2m, seed: int, v: int, k: int) -> Code:
    vec = tuple(ring.sample(seed, prf_tag("chi", v, t)) for t in range(k))
    return (1, (vec,))


def _det_code_for(v: int, k: int) -> Code:
    lo, hi = lift_vectors(vandermonde(v, k))
    return (1, (lo.entries, hi.entries))


def _sign_code_for(seed: int, trial: int, v: int, k: int) -> Code:
    vec = tuple(
        1 if sample_bit(seed, prf_tag("cnt", trial, v, t)) else -1 for t in range(k)
    )
    lo = tuple(vec) + (0,) * k
    hi = (0,) * k + tuple(vec)
    return (1, (lo, hi))


def _gf_yfn(ring: GF2m, seed: int, split: bool):
    if split:
        def yfn(a: int, b: int) -> int:
            if b == a + 1 and a % 2 == 0:  # internal in->out edge
                return ring.sample(seed, prf_tag("w", a // 2 + 1))
            return ring.sample(seed, prf_tag("y", a // 2 + 1, b // 2 + 1))
    else:
        def yfn(a: int, b: int) -> int:
            return ring.sample(seed, prf_tag("y", a + 1, b + 1))
    return yfn


def _one_yfn(a: int, b: int) -> int:
    return 1


def _make_core(internal, ring, dims, cap, seed, codes, yfn) -> _Core:
    core = _Core(ring, dims, cap, seed, internal, codes, yfn)
    if ring.char == 2:
        _gf_walk_sums(core)
    else:
        _packed_walk_sums(core)
    return core


def preprocess(
    graph: DirectedGraph,
    k: int,
    mode: str = RANDOMIZED,
    seed: int = 0,
    allow_vertex_failures: bool = False,
    amplification: int = 1,
    field_degree: int = 16,
) -> KPathOracle:
    """Build the sensitivity oracle state for k-path detection."""
    if k < 1:
        raise CapabilityError("k must be at least 1")
    if mode not in (RANDOMIZED, DETERMINISTIC):
        raise CapabilityError(f"unknown mode {mode!r}")
    dims = k if mode == RANDOMIZED else 2 * k
    if dims > MAX_DIMS:
        raise CapabilityError(f"k={k} needs {dims} generators, above the cap {MAX_DIMS}")
    split = bool(allow_vertex_failures)
    cap = 2 * k + 1 if split else k
    internal = _build_internal(graph, split)
    cores = []
    if mode == RANDOMIZED:
        ring = field_new(field_degree)
        if ring.order < 100 * k:
            raise CapabilityError(
                f"field GF(2^{field_degree}) too small; need at least {100 * k} elements"
            )
        for r in range(max(1, amplification)):
            sub = seed if r == 0 else _derive_seed(seed, "amp", r)
            codes: list[Optional[Code]] = []
            for v in range(1, graph.n + 1):
                code = _gf_code_for(ring, sub, v, k)
                if split:
                    codes.extend([None, code])
                else:
                    codes.append(code)
            cores.append(
                _make_core(internal, ring, dims, cap, sub, codes, _gf_yfn(ring, sub, split))
            )
    else:
        codes = []
        for v in range(1, graph.n + 1):
            code = _det_code_for(v, k)
            if split:
                codes.extend([None, code])
            else:
                codes.append(code)
        cores.append(_make_core(internal, INTEGERS, dims, cap, seed, codes, _one_yfn))
    return KPathOracle(graph, k, mode, seed, split, max(1, amplification), cores)


def build_custom_oracle(
    graph: DirectedGraph,
    k: int,
    dims: int,
    codes: list[Optional[Code]],
    *,
    seed: int = 0,
    cap: Optional[int] = None,
    mode: str = DETERMINISTIC,
) -> KPathOracle:
    """Deterministic oracle over an explicit graph with caller-chosen codes.

    Used by the constrained-detection constructions, which reuse the whole
    sensitivity machinery but substitute their own vertex codes.
    """
    if dims > MAX_DIMS:
        raise CapabilityError(f"dimension {dims} above the cap {MAX_DIMS}")
    internal = _build_internal(graph, False)
    cap = k if cap is None else cap
    core = _make_core(internal, INTEGERS, dims, cap, seed, codes, _one_yfn)
    oracle = KPathOracle(graph, k, mode, seed, False, 1, [core])
    oracle.custom_codes = True
    return oracle


# --------------------------------------------------------------------------
# approximate counting
# --------------------------------------------------------------------------

COUNT_TRIALS_CONSTANT = 60


class KPathCounter:
    """Sensitivity oracle estimating the number of k-paths."""

    def __init__(self, graph, k, epsilon, seed, split, trials, cores):
        self.graph = graph
        self.k = k
        self.epsilon = epsilon
        self.seed = seed
        self.split = split
        self.trials = trials
        self._oracle = KPathOracle(graph, k, DETERMINISTIC, seed, split, trials, cores)

    def query(self, batch: UpdateBatch, *, strict: bool = True) -> Fraction:
        batch = self._oracle._check_batch(batch, strict)
        sign = -1 if (self.k * (self.k - 1) // 2) % 2 else 1
        fact = math.factorial(self.k)
        total = Fraction(0)
        for core in self._oracle.cores:
            top = core.z_new_lanes(self._oracle._deltas(core, batch))[-1]
            total += Fraction(sign * top, fact)
        return total / self.trials

    @property
    def static_estimate(self) -> Fraction:
        return self.query(UpdateBatch())


def approx_count_preprocess(
    graph: DirectedGraph,
    k: int,
    epsilon: float,
    seed: int = 0,
    allow_vertex_failures: bool = False,
    trials: Optional[int] = None,
) -> KPathCounter:
    """Counting oracle: mean of independent squared-determinant codings."""
    if not 0 < epsilon <= 1:
        raise CapabilityError("epsilon must be in (0, 1]")
    if k < 1:
        raise CapabilityError("k must be at least 1")
    dims = 2 * k
    if dims > MAX_DIMS:
        raise CapabilityError(f"k={k} needs {dims} generators, above the cap {MAX_DIMS}")
    if trials is None:
        trials = math.ceil(COUNT_TRIALS_CONSTANT / (epsilon * epsilon))
    split = bool(allow_vertex_failures)
    cap = 2 * k + 1 if split else k
    internal = _build_internal(graph, split)
    cores = []
    for t in range(trials):
        sub = _derive_seed(seed, "trial", t)
        codes: list[Optional[Code]] = []
        for v in range(1, graph.n + 1):
            code = _sign_code_for(seed, t, v, k)
            if split:
                codes.extend([None, code])
            else:
                codes.append(code)
        cores.append(_make_core(internal, INTEGERS, dims, cap, sub, codes, _one_yfn))
    return KPathCounter(graph, k, epsilon, seed, split, trials, cores)

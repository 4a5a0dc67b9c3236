"""Versioned binary container for oracle states.

Layout: magic ``XTNO``, format version (u16), mode byte, flags, the
scalar parameters, the graph snapshot, then the raw coefficient arrays
in little-endian mask order.  Field elements are fixed-width words;
integers are length-prefixed two's-complement.  Serialization is a pure
function of the state, so identical states produce identical bytes.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import CapabilityError, StateFormatError

MAGIC = b"XTNO"
VERSION = 1

MODE_RANDOMIZED = 0
MODE_DETERMINISTIC = 1
MODE_UNDIRECTED = 2
MODE_BIPARTITE = 3


class Writer:
    def __init__(self):
        self.parts: list[bytes] = []

    def raw(self, b: bytes):
        self.parts.append(b)

    def u8(self, v: int):
        self.parts.append(struct.pack("<B", v))

    def u16(self, v: int):
        self.parts.append(struct.pack("<H", v))

    def u32(self, v: int):
        self.parts.append(struct.pack("<I", v))

    def u64(self, v: int):
        self.parts.append(struct.pack("<Q", v))

    def bigint(self, v: int):
        nbytes = (v.bit_length() + 8) // 8 or 1
        self.u32(nbytes)
        self.raw(v.to_bytes(nbytes, "little", signed=True))

    def words(self, arr: np.ndarray, width: int):
        dtype = np.uint16 if width == 2 else np.uint64
        self.raw(np.ascontiguousarray(arr, dtype=dtype).tobytes())

    def bytes_out(self) -> bytes:
        return b"".join(self.parts)


class Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.off = 0

    def _take(self, n: int) -> bytes:
        if self.off + n > len(self.data):
            raise StateFormatError("truncated state data")
        out = self.data[self.off : self.off + n]
        self.off += n
        return out

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1))[0]

    def u16(self) -> int:
        return struct.unpack("<H", self._take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def bigint(self) -> int:
        nbytes = self.u32()
        return int.from_bytes(self._take(nbytes), "little", signed=True)

    def words(self, count: int, width: int) -> np.ndarray:
        dtype = np.uint16 if width == 2 else np.uint64
        raw = self._take(count * width)
        return np.frombuffer(raw, dtype=dtype).astype(np.uint32)

    def done(self) -> bool:
        return self.off == len(self.data)


def write_header(w: Writer, mode: int, flags: int, k: int, dims: int, cap: int,
                 n: int, seed: int, r: int) -> None:
    w.raw(MAGIC)
    w.u16(VERSION)
    w.u8(mode)
    w.u8(flags)
    w.u16(k)
    w.u16(dims)
    w.u16(cap)
    w.u32(n)
    w.u64(seed)
    w.u16(r)


def read_header(r: Reader) -> dict:
    if r._take(4) != MAGIC:
        raise StateFormatError("bad magic; not an oracle state file")
    version = r.u16()
    if version != VERSION:
        raise StateFormatError(f"unsupported state version {version}")
    return dict(
        mode=r.u8(), flags=r.u8(), k=r.u16(), dims=r.u16(), cap=r.u16(),
        n=r.u32(), seed=r.u64(), r=r.u16(),
    )


def write_graph(w: Writer, edges) -> None:
    edges = sorted(edges)
    w.u32(len(edges))
    for u, v in edges:
        w.u32(u)
        w.u32(v)


def read_graph(r: Reader) -> list[tuple[int, int]]:
    m = r.u32()
    return [(r.u32(), r.u32()) for _ in range(m)]


# -- directed oracle ---------------------------------------------------------


def dump_directed(oracle) -> bytes:
    from .kpath_directed import RANDOMIZED

    w = Writer()
    mode = MODE_RANDOMIZED if oracle.mode == RANDOMIZED else MODE_DETERMINISTIC
    flags = 1 if oracle.split else 0
    write_header(w, mode, flags, oracle.k, oracle.dims, oracle.walk_cap,
                 oracle.graph.n, oracle.seed, len(oracle.cores))
    write_graph(w, oracle.graph.edges)
    nlanes = 1 << oracle.dims
    if oracle.mode == RANDOMIZED:
        ring = oracle.cores[0].ring
        width = 2 if ring.degree <= 16 else 8
        w.u16(ring.degree)
        w.u64(ring.modulus)
        w.u8(width)
        for core in oracle.cores:
            w.u64(core.seed)
            w.words(core.q_gf, width)
            w.words(core.s_gf, width)
            w.words(core.f_gf, width)
            w.words(core.z_gf, width)
    else:
        if getattr(oracle, "custom_codes", False):
            raise CapabilityError("custom-coded oracle states are not serializable")
        for core in oracle.cores:
            nv = core.internal.nv
            for i in range(nv):
                for j in range(nv):
                    for c in core.q_entry_int(i, j):
                        w.bigint(c)
            for vecs in (core.s_int, core.f_int):
                for lanes in vecs:
                    for c in lanes:
                        w.bigint(c)
            for c in core.z_int:
                w.bigint(c)
    return w.bytes_out()


def load_directed(head: dict, r: Reader):
    from . import kpath_directed as kd
    from .fields import INTEGERS, field_new
    from .graphs import DirectedGraph

    n = head["n"]
    graph = DirectedGraph.from_edges(n, read_graph(r))
    split = bool(head["flags"] & 1)
    k, dims, cap, seed = head["k"], head["dims"], head["cap"], head["seed"]
    internal = kd._build_internal(graph, split)
    nlanes = 1 << dims
    nv = internal.nv
    cores = []
    if head["mode"] == MODE_RANDOMIZED:
        degree = r.u16()
        modulus = r.u64()
        width = r.u8()
        ring = field_new(degree, modulus)
        for idx in range(head["r"]):
            core_seed = r.u64()
            q = r.words(nv * nv * nlanes, width).reshape(nv, nv, nlanes)
            s = r.words(nv * nlanes, width).reshape(nv, nlanes)
            f = r.words(nv * nlanes, width).reshape(nv, nlanes)
            z = r.words(nlanes, width)
            codes = []
            for v in range(1, n + 1):
                code = kd._gf_code_for(ring, core_seed, v, k)
                codes.extend([None, code] if split else [code])
            core = kd._Core(ring, dims, cap, core_seed, internal, codes,
                            kd._gf_yfn(ring, core_seed, split))
            core.q_gf, core.s_gf, core.f_gf, core.z_gf = q, s, f, z
            cores.append(core)
        mode = kd.RANDOMIZED
    else:
        for idx in range(head["r"]):
            codes = []
            for v in range(1, n + 1):
                code = kd._det_code_for(v, k)
                codes.extend([None, code] if split else [code])
            core = kd._Core(INTEGERS, dims, cap, seed, internal, codes, kd._one_yfn)
            q_cache = {}
            for i in range(nv):
                for j in range(nv):
                    q_cache[(i, j)] = [r.bigint() for _ in range(nlanes)]
            core._q_cache = q_cache
            core.s_int = [[r.bigint() for _ in range(nlanes)] for _ in range(nv)]
            core.f_int = [[r.bigint() for _ in range(nlanes)] for _ in range(nv)]
            core.z_int = [r.bigint() for _ in range(nlanes)]
            cores.append(core)
        mode = kd.DETERMINISTIC
    oracle = kd.KPathOracle(graph, k, mode, seed, split, head["r"], cores)
    return oracle


def load_state(data: bytes):
    """Dispatch on the mode byte and rebuild the matching oracle type."""
    r = Reader(data)
    head = read_header(r)
    if head["mode"] in (MODE_RANDOMIZED, MODE_DETERMINISTIC):
        out = load_directed(head, r)
    elif head["mode"] in (MODE_UNDIRECTED, MODE_BIPARTITE):
        from .kpath_undirected import load_undirected

        out = load_undirected(head, r)
    else:
        raise StateFormatError(f"unknown mode byte {head['mode']}")
    if not r.done():
        raise StateFormatError("trailing bytes after state payload")
    return out

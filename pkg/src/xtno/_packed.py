"""Lane-packed exact integer arithmetic for dense extensor pipelines.

The deterministic algorithms do millions of coefficient-wise signed
integer operations on vectors of length 2^D.  Representing such a vector
as a pair of nonnegative Python integers (one carrying the positive
parts, one the negative parts), with each coefficient in its own
fixed-width bit lane, turns whole-vector additions, scalings and
skew-multiplication steps into a handful of bignum operations that run
at C speed.

Lane isolation requires that no individual positive or negative part
ever reaches 2^W.  Callers must size W from an upper bound on the sum of
absolute contributions per coefficient (an L1-norm style bound); the
oracle engines compute that bound with a cheap scalar pre-pass before
packing anything.
"""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=64)
def _lane_masks(dims: int, lane_bytes: int, gen: int) -> tuple[int, int, int]:
    """(even-parity mask, odd-parity mask, bit shift) for one generator.

    The masks select the lanes of subsets not containing ``gen``, split
    by the parity of the generators above ``gen`` (the skew sign).
    """
    nlanes = 1 << dims
    even = bytearray(nlanes * lane_bytes)
    odd = bytearray(nlanes * lane_bytes)
    for mask in range(nlanes):
        if mask >> gen & 1:
            continue
        tgt = odd if (mask >> (gen + 1)).bit_count() & 1 else even
        start = mask * lane_bytes
        tgt[start : start + lane_bytes] = b"\xff" * lane_bytes
    shift = (1 << gen) * lane_bytes * 8
    return (
        int.from_bytes(bytes(even), "little"),
        int.from_bytes(bytes(odd), "little"),
        shift,
    )


class PackedSpace:
    """Arithmetic context for (positive, negative) packed lane pairs."""

    def __init__(self, dims: int, lane_bits: int):
        if lane_bits % 8:
            lane_bits += 8 - lane_bits % 8
        self.dims = dims
        self.lane_bits = lane_bits
        self.lane_bytes = lane_bits // 8
        self.nlanes = 1 << dims

    zero = (0, 0)

    @staticmethod
    def add(a, b):
        return (a[0] + b[0], a[1] + b[1])

    @staticmethod
    def sub(a, b):
        return (a[0] + b[1], a[1] + b[0])

    @staticmethod
    def scale(v, c: int):
        if c >= 0:
            return (v[0] * c, v[1] * c)
        return (v[1] * -c, v[0] * -c)

    def skew(self, v, entries) -> tuple[int, int]:
        """Wedge with the vector whose coordinates are ``entries``."""
        pos, neg = v
        out_p = 0
        out_n = 0
        for g, c in enumerate(entries):
            if not c:
                continue
            m_even, m_odd, shift = _lane_masks(self.dims, self.lane_bytes, g)
            pe = (pos & m_even) << shift
            po = (pos & m_odd) << shift
            ne = (neg & m_even) << shift
            no = (neg & m_odd) << shift
            if c >= 0:
                out_p += (pe + no) * c
                out_n += (po + ne) * c
            else:
                out_p += (po + ne) * -c
                out_n += (pe + no) * -c
        return (out_p, out_n)

    def apply_code(self, v, code) -> tuple[int, int]:
        """Multiply by scalar * (v1 wedge v2 wedge ...)."""
        scalar, vectors = code
        for vec in vectors:
            v = self.skew(v, vec)
        if scalar != 1:
            v = self.scale(v, scalar)
        return v

    def encode(self, coeffs) -> tuple[int, int]:
        buf_p = bytearray(self.nlanes * self.lane_bytes)
        buf_n = bytearray(self.nlanes * self.lane_bytes)
        for i, c in enumerate(coeffs):
            if not c:
                continue
            start = i * self.lane_bytes
            if c > 0:
                buf_p[start : start + self.lane_bytes] = c.to_bytes(
                    self.lane_bytes, "little"
                )
            else:
                buf_n[start : start + self.lane_bytes] = (-c).to_bytes(
                    self.lane_bytes, "little"
                )
        return (int.from_bytes(bytes(buf_p), "little"), int.from_bytes(bytes(buf_n), "little"))

    def decode(self, v) -> list[int]:
        total = self.nlanes * self.lane_bytes
        bp = v[0].to_bytes(total, "little")
        bn = v[1].to_bytes(total, "little")
        lb = self.lane_bytes
        out = []
        for i in range(self.nlanes):
            s = i * lb
            out.append(
                int.from_bytes(bp[s : s + lb], "little")
                - int.from_bytes(bn[s : s + lb], "little")
            )
        return out


def code_l1(code) -> int:
    """Upper bound on the L1 norm of a (scalar, vectors) vertex code."""
    scalar, vectors = code
    bound = abs(scalar)
    for vec in vectors:
        bound *= sum(abs(c) for c in vec)
    return max(bound, 1)

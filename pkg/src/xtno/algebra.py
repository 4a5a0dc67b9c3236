"""Exterior algebra values over GF(2^d) or the integers.

An :class:`Extensor` is a dense vector of 2^D ring coefficients indexed
by subsets of the D generators (bitmasks).  The basis representation is
canonical, so equality is coefficient-wise.  Generators anticommute and
square to zero; the global sign convention is ascending generator order,
i.e. e_I for I = {i1 < i2 < ...} means e_{i1} wedge e_{i2} wedge ...

Products come in three flavours, mirroring how the algorithms use them:

* ``skew_mul`` - product with a degree-1 vector, the workhorse of every
  preprocessing loop (linear passes over the coefficient vector).
* ``wedge_char2`` - general product over characteristic 2, computed as a
  disjoint-subset convolution via the ranked zeta/Moebius transforms.
* ``wedge_naive`` - sign-carrying general product over either ring,
  iterating only the nonzero coefficients of its left operand.

Dimension is capped at 26 generators (a 2^26-entry coefficient vector);
beyond that this desk-scale build refuses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _bits
from .errors import CapabilityError
from .fields import GF2m, INTEGERS, IntegerRing

MAX_DIMS = 26

Ring = GF2m | IntegerRing


def _check_dims(dims: int) -> None:
    if not 0 <= dims <= MAX_DIMS:
        raise CapabilityError(f"extensor dimension {dims} exceeds cap {MAX_DIMS}")


@dataclass(frozen=True)
class CodeVector:
    """A degree-1 extensor given by its D ring coordinates."""

    ring: Ring
    dims: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.dims:
            raise ValueError("entry count must equal dims")

    def as_extensor(self) -> "Extensor":
        coeffs = [0] * (1 << self.dims)
        for j, c in enumerate(self.entries):
            coeffs[1 << j] = c
        return Extensor(self.ring, self.dims, tuple(coeffs))

    def padded(self, total_dims: int, offset: int) -> "CodeVector":
        """Re-embed into a larger space with the coordinates shifted up."""
        ent = [0] * total_dims
        for j, c in enumerate(self.entries):
            ent[offset + j] = c
        return CodeVector(self.ring, total_dims, tuple(ent))


@dataclass(frozen=True)
class Extensor:
    """Element of the exterior algebra over ``ring`` with ``dims`` generators."""

    ring: Ring
    dims: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_dims(self.dims)
        if len(self.coeffs) != 1 << self.dims:
            raise ValueError("coefficient vector must have length 2^dims")

    @staticmethod
    def zero(ring: Ring, dims: int) -> "Extensor":
        _check_dims(dims)
        return Extensor(ring, dims, (0,) * (1 << dims))

    @staticmethod
    def scalar(ring: Ring, dims: int, value: int) -> "Extensor":
        _check_dims(dims)
        coeffs = [0] * (1 << dims)
        coeffs[0] = value
        return Extensor(ring, dims, tuple(coeffs))

    @staticmethod
    def basis(ring: Ring, dims: int, mask: int, value: int = 1) -> "Extensor":
        _check_dims(dims)
        coeffs = [0] * (1 << dims)
        coeffs[mask] = value
        return Extensor(ring, dims, tuple(coeffs))

    def coefficient(self, mask: int) -> int:
        return self.coeffs[mask]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[int]:
        return [m for m, c in enumerate(self.coeffs) if c]

    def degrees(self) -> set[int]:
        """Popcounts of the masks carrying nonzero coefficients."""
        return {m.bit_count() for m, c in enumerate(self.coeffs) if c}

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.degrees())

    def top(self) -> int:
        """Coefficient of the full generator set e_[D]."""
        return self.coeffs[-1]

    def scale(self, c: int) -> "Extensor":
        ring = self.ring
        return Extensor(
            self.ring, self.dims, tuple(ring.mul(x, c) for x in self.coeffs)
        )


def ext_add(x: Extensor, y: Extensor) -> Extensor:
    """Coordinate-wise sum."""
    if x.dims != y.dims or x.ring != y.ring:
        raise ValueError("extensor dimension/ring mismatch in addition")
    add = x.ring.add
    return Extensor(
        x.ring, x.dims, tuple(add(a, b) for a, b in zip(x.coeffs, y.coeffs))
    )


def ext_sub(x: Extensor, y: Extensor) -> Extensor:
    if x.dims != y.dims or x.ring != y.ring:
        raise ValueError("extensor dimension/ring mismatch in subtraction")
    sub = x.ring.sub
    return Extensor(
        x.ring, x.dims, tuple(sub(a, b) for a, b in zip(x.coeffs, y.coeffs))
    )


def skew_mul(x: Extensor, v: CodeVector) -> Extensor:
    """Product x wedge v with a vector; O(2^D * D) ring operations.

    Over the integers the term [e_I]x * v[j] lands on I | {j} with sign
    (-1)^|{i in I : i > j}|; over characteristic 2 signs are dropped.
    """
    if x.dims != v.dims or x.ring != v.ring:
        raise ValueError("extensor dimension/ring mismatch in skew product")
    ring = x.ring
    out = [0] * len(x.coeffs)
    signed = ring.char != 2
    for j, c in enumerate(v.entries):
        if not c:
            continue
        bit = 1 << j
        for mask, xc in enumerate(x.coeffs):
            if not xc or mask & bit:
                continue
            term = ring.mul(xc, c)
            if signed and (mask >> (j + 1)).bit_count() & 1:
                term = ring.neg(term)
            out[mask | bit] = ring.add(out[mask | bit], term)
    return Extensor(ring, x.dims, tuple(out))


def _ranked_zeta(coeffs: np.ndarray, dims: int) -> np.ndarray:
    """Ranked zeta transform: R[r][m] = sum of x[T] over T subseteq m, |T| = r."""
    ranked = np.zeros((dims + 1, 1 << dims), dtype=coeffs.dtype)
    pc = _bits.popcounts(dims)
    ranked[pc, np.arange(1 << dims)] = coeffs
    for g in range(dims):
        without, with_g = _bits.generator_split(dims, g)
        ranked[:, with_g] ^= ranked[:, without]
    return ranked


def _ranked_moebius(ranked: np.ndarray, dims: int) -> np.ndarray:
    """Invert the ranked zeta transform and read off the diagonal."""
    out = ranked.copy()
    for g in range(dims):
        without, with_g = _bits.generator_split(dims, g)
        out[:, with_g] ^= out[:, without]
    pc = _bits.popcounts(dims)
    return out[pc, np.arange(1 << dims)]


def wedge_char2(x: Extensor, y: Extensor) -> Extensor:
    """General product over characteristic 2 via fast subset convolution.

    [e_I](x wedge y) = sum over T subseteq I of [e_T]x * [e_{I\\T}]y,
    computed with ranked zeta/Moebius transforms in O(2^D * D^2) ring ops.
    """
    if x.ring.char != 2:
        raise CapabilityError("wedge_char2 requires a characteristic-2 ring")
    if x.dims != y.dims or x.ring != y.ring:
        raise ValueError("extensor dimension/ring mismatch in product")
    ring: GF2m = x.ring  # type: ignore[assignment]
    dims = x.dims
    xa = np.asarray(x.coeffs, dtype=np.uint32)
    ya = np.asarray(y.coeffs, dtype=np.uint32)
    fx = _ranked_zeta(xa, dims)
    fy = _ranked_zeta(ya, dims)
    conv = np.zeros_like(fx)
    for r in range(dims + 1):
        for a in range(r + 1):
            conv[r] ^= ring.mul_arrays(fx[a], fy[r - a])
    res = _ranked_moebius(conv, dims)
    return Extensor(ring, dims, tuple(int(c) for c in res))


def wedge_naive(x: Extensor, y: Extensor) -> Extensor:
    """Signed general product, iterating nonzero coefficients of x.

    Works over both rings; this is the replacement for the fast general
    product over arbitrary characteristic, adequate at desk scale and
    cheap when one operand has few nonzero terms.
    """
    if x.dims != y.dims or x.ring != y.ring:
        raise ValueError("extensor dimension/ring mismatch in product")
    ring = x.ring
    dims = x.dims
    full = (1 << dims) - 1
    if ring.char == 2:
        xa = np.asarray(x.coeffs, dtype=np.uint32)
        ya = np.asarray(y.coeffs, dtype=np.uint32)
        out = np.zeros(1 << dims, dtype=np.uint32)
        gf: GF2m = ring  # type: ignore[assignment]
        for mask in np.flatnonzero(xa):
            mask = int(mask)
            subs = _bits.submask_array(full ^ mask)
            vals = gf.mul_scalar(ya[subs], int(xa[mask]))
            out[mask + subs] ^= vals
        return Extensor(ring, dims, tuple(int(c) for c in out))
    inv = _bits.inversion_masks(dims)
    out_i = [0] * (1 << dims)
    for mask, xc in enumerate(x.coeffs):
        if not xc:
            continue
        w = int(inv[mask])
        for sub in _bits.iter_submasks(full ^ mask):
            yc = y.coeffs[sub]
            if not yc:
                continue
            term = xc * yc
            if (sub & w).bit_count() & 1:
                term = -term
            out_i[mask | sub] += term
    return Extensor(ring, dims, tuple(out_i))


def wedge_vectors(vs: Sequence[CodeVector]) -> Extensor:
    """Iterated wedge of vectors; for D vectors in dimension D this is the
    determinant times the top basis element."""
    if not vs:
        raise ValueError("need at least one vector")
    ring, dims = vs[0].ring, vs[0].dims
    acc = Extensor.scalar(ring, dims, 1)
    for v in vs:
        acc = skew_mul(acc, v)
    return acc


def vandermonde(i: int, dims: int, ring: Ring = INTEGERS) -> CodeVector:
    """Geometric-progression code (1, j, j^2, ...) with j the image of i.

    Over the integers j = i; over a field, i is embedded injectively,
    which requires the field order to exceed the index range.
    """
    if isinstance(ring, GF2m):
        j = ring.embed(i)
        ent, acc = [], 1
        for _ in range(dims):
            ent.append(acc)
            acc = ring.mul(acc, j)
        return CodeVector(ring, dims, tuple(ent))
    return CodeVector(ring, dims, tuple(i**t for t in range(dims)))


def lift(v: CodeVector) -> Extensor:
    """Degree-2 code in dimension 2k: (v padded low) wedge (v padded high).

    Any k distinct lifted Vandermonde codes wedge to the square of the
    underlying determinant (up to a global sign), so contributions of
    distinct paths never cancel over the integers.
    """
    k = v.dims
    low = v.padded(2 * k, 0)
    high = v.padded(2 * k, k)
    return skew_mul(low.as_extensor(), high)


def lift_vectors(v: CodeVector) -> tuple[CodeVector, CodeVector]:
    """The two padded halves whose wedge is ``lift(v)``."""
    k = v.dims
    return v.padded(2 * k, 0), v.padded(2 * k, k)


@dataclass(frozen=True)
class TruncatedPoly:
    """Polynomial in one variable with extensor coefficients, mod z^(k+1)."""

    coeffs: tuple[Extensor, ...]

    @staticmethod
    def zero(ring: Ring, dims: int, zslots: int) -> "TruncatedPoly":
        return TruncatedPoly(tuple(Extensor.zero(ring, dims) for _ in range(zslots)))

    @staticmethod
    def one(ring: Ring, dims: int, zslots: int) -> "TruncatedPoly":
        first = Extensor.scalar(ring, dims, 1)
        rest = tuple(Extensor.zero(ring, dims) for _ in range(zslots - 1))
        return TruncatedPoly((first,) + rest)

    @property
    def zslots(self) -> int:
        return len(self.coeffs)

    def add(self, other: "TruncatedPoly") -> "TruncatedPoly":
        return TruncatedPoly(
            tuple(ext_add(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def sub(self, other: "TruncatedPoly") -> "TruncatedPoly":
        return TruncatedPoly(
            tuple(ext_sub(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def shift_z(self) -> "TruncatedPoly":
        """Multiply by z, discarding the power that overflows the cap."""
        ring = self.coeffs[0].ring
        dims = self.coeffs[0].dims
        return TruncatedPoly(
            (Extensor.zero(ring, dims),) + self.coeffs[:-1]
        )

    def top_overflow(self) -> Extensor:
        """The coefficient a z-shift would push past the cap."""
        return self.coeffs[-1]

    def map_coeffs(self, fn) -> "TruncatedPoly":
        return TruncatedPoly(tuple(fn(c) for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def coefficient(self, zpow: int, mask: int) -> int:
        return self.coeffs[zpow].coefficient(mask)


def poly_wedge_extensor(p: TruncatedPoly, x: Extensor, char2_fast: bool = True):
    """Multiply every z-slot of ``p`` by the extensor ``x``."""
    ring = x.ring
    if ring.char == 2 and char2_fast:
        return p.map_coeffs(lambda c: wedge_char2(c, x))
    return p.map_coeffs(lambda c: wedge_naive(c, x))

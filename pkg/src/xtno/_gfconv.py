"""Ranked zeta/Moebius machinery over characteristic-2 coefficient vectors.

The disjoint-subset convolution (the general wedge product over a
characteristic-2 field) is computed by transforming both operands into
per-rank zeta form, convolving ranks pointwise, and inverting.  Chains
of products can stay in the transformed domain, which is what the query
formulas do.  All helpers take dense 1-D coefficient vectors.
"""

from __future__ import annotations

import numpy as np

from . import _bits
from .fields import GF2m


def hat(arr: np.ndarray, dims: int) -> np.ndarray:
    """Ranked zeta transform: out[r][m] = sum of arr[T], T subseteq m, |T| = r."""
    ranked = np.zeros((dims + 1, 1 << dims), dtype=np.uint32)
    pc = _bits.popcounts(dims)
    ranked[pc, np.arange(1 << dims)] = arr
    for g in range(dims):
        w0, w1 = _bits.generator_split(dims, g)
        ranked[:, w1] ^= ranked[:, w0]
    return ranked


def unhat(ranked: np.ndarray, dims: int) -> np.ndarray:
    out = ranked.copy()
    for g in range(dims):
        w0, w1 = _bits.generator_split(dims, g)
        out[:, w1] ^= out[:, w0]
    pc = _bits.popcounts(dims)
    return out[pc, np.arange(1 << dims)]


def hat_mul(ring: GF2m, a: np.ndarray, b: np.ndarray, dims: int) -> np.ndarray:
    # one batched pairwise product, then fold the rank diagonals
    pair = ring.mul_arrays(a[:, None, :], b[None, :, :])
    out = np.zeros_like(a)
    for r in range(dims + 1):
        for i in range(r + 1):
            out[r] ^= pair[i, r - i]
    return out


def subset_convolve(ring: GF2m, a: np.ndarray, b: np.ndarray, dims: int) -> np.ndarray:
    """One-shot general product of two coefficient vectors."""
    return unhat(hat_mul(ring, hat(a, dims), hat(b, dims), dims), dims)


def gf_skew(ring: GF2m, arr: np.ndarray, vec, dims: int) -> np.ndarray:
    """Wedge a coefficient vector with a degree-1 code (no signs, char 2)."""
    out = np.zeros_like(arr)
    for g, c in enumerate(vec):
        if c:
            w0, w1 = _bits.generator_split(dims, g)
            out[..., w1] ^= ring.mul_scalar(arr[..., w0], c)
    return out

"""Bitmask utilities for subset-indexed coefficient vectors.

Every extensor in this package is a dense vector indexed by subsets of
generators, encoded as bitmasks.  The helpers here are shared by the
algebra layer and the oracle engines: popcount tables, submask
enumeration, per-generator index splits, and the parity masks used to
compute wedge-product signs on the fly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def iter_submasks(mask: int):
    """Yield every submask of ``mask`` (including 0 and mask), descending."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@lru_cache(maxsize=None)
def submask_array(mask: int) -> np.ndarray:
    """All submasks of ``mask`` as an int64 array."""
    return np.fromiter(iter_submasks(mask), dtype=np.int64)


@lru_cache(maxsize=None)
def all_masks(dims: int) -> np.ndarray:
    return np.arange(1 << dims, dtype=np.int64)


@lru_cache(maxsize=None)
def popcounts(dims: int) -> np.ndarray:
    """Popcount of every mask below 2**dims."""
    return np.bitwise_count(all_masks(dims)).astype(np.int64)


@lru_cache(maxsize=None)
def masks_of_popcount(dims: int, r: int) -> np.ndarray:
    return np.flatnonzero(popcounts(dims) == r).astype(np.int64)


@lru_cache(maxsize=None)
def even_masks(dims: int) -> np.ndarray:
    return np.flatnonzero(popcounts(dims) % 2 == 0).astype(np.int64)


@lru_cache(maxsize=None)
def generator_split(dims: int, gen: int) -> tuple[np.ndarray, np.ndarray]:
    """Masks without generator ``gen``, paired with the same masks plus it.

    The two arrays align elementwise, so a skew-multiplication step is a
    gather from the first, a scale, and a scatter into the second.
    """
    masks = all_masks(dims)
    without = masks[(masks >> gen) & 1 == 0]
    return without, without | (1 << gen)


@lru_cache(maxsize=None)
def skew_sign_parity(dims: int, gen: int) -> np.ndarray:
    """Parity of |{i in I : i > gen}| for every mask I without ``gen``.

    This is the sign exponent picked up when wedging e_I with e_gen under
    the ascending-order basis convention.
    """
    without, _ = generator_split(dims, gen)
    return (np.bitwise_count(without >> (gen + 1)) & 1).astype(np.int8)


@lru_cache(maxsize=None)
def inversion_masks(dims: int) -> np.ndarray:
    """For each mask I, a mask W with bit j set iff |{i in I : i > j}| is odd.

    The sign of e_I wedge e_J for disjoint I, J is then
    (-1) ** popcount(J & W[I]).
    """
    masks = all_masks(dims)
    out = np.zeros(1 << dims, dtype=np.int64)
    for j in range(dims):
        parity = (np.bitwise_count(masks >> (j + 1)) & 1).astype(np.int64)
        out |= parity << j
    return out


def wedge_sign(i_mask: int, j_mask: int) -> int:
    """Sign (+1/-1) of e_I wedge e_J for disjoint masks, ascending convention."""
    parity = 0
    m = j_mask
    while m:
        j = (m & -m).bit_length() - 1
        parity ^= (i_mask >> (j + 1)).bit_count() & 1
        m &= m - 1
    return -1 if parity else 1

"""Dense signed wedge products on plain coefficient lists.

Query-time update formulas need general products of walk-sum extensors
over the integers.  Those operands live in the even-degree subalgebra,
so the pair loop below visits only nonzero coefficients of the left
operand and the disjoint submasks of each complement, applying the
ascending-order sign computed from precomputed inversion masks.
"""

from __future__ import annotations

import numpy as np

from . import _bits


def int_zeros(dims: int) -> np.ndarray:
    """Dense integer coefficient vector as an object array (exact ints)."""
    out = np.empty(1 << dims, dtype=object)
    out[:] = 0
    return out


def int_unit(dims: int) -> np.ndarray:
    out = int_zeros(dims)
    out[0] = 1
    return out


def int_skew(arr: np.ndarray, vec, dims: int) -> np.ndarray:
    """Signed wedge of an object coefficient vector with a degree-1 code."""
    out = int_zeros(dims)
    for g, c in enumerate(vec):
        if not c:
            continue
        w0, w1 = _bits.generator_split(dims, g)
        signs = np.where(_bits.skew_sign_parity(dims, g) == 1, -c, c).astype(object)
        out[w1] += arr[w0] * signs
    return out


def int_wedge_sparse(sparse: np.ndarray, dense: np.ndarray, dims: int) -> np.ndarray:
    """sparse wedge dense, iterating only nonzero masks of the left operand.

    The left operand must be even-degree (so the product order is
    immaterial); this is the cheap path for accumulator extensors that
    live on a few popcount strata.
    """
    out = int_zeros(dims)
    full = (1 << dims) - 1
    inv = _bits.inversion_masks(dims)
    for mask in np.flatnonzero(sparse != 0):
        mask = int(mask)
        c = sparse[mask]
        subs = _bits.submask_array(full ^ mask)
        vals = dense[subs]
        if not vals.any():
            continue
        signs = np.where(
            (np.bitwise_count(subs & int(inv[mask])) & 1) == 1, -c, c
        ).astype(object)
        out[mask + subs] += vals * signs
    return out


def dense_wedge(x: list[int], y: list[int], dims: int) -> list[int]:
    """Signed product of two dense coefficient lists."""
    out = [0] * (1 << dims)
    if not any(x) or not any(y):
        return out
    full = (1 << dims) - 1
    inv = _bits.inversion_masks(dims)
    for mask in range(1 << dims):
        xc = x[mask]
        if not xc:
            continue
        w = int(inv[mask])
        comp = full ^ mask
        sub = comp
        while True:
            yc = y[sub]
            if yc:
                if (sub & w).bit_count() & 1:
                    out[mask | sub] -= xc * yc
                else:
                    out[mask | sub] += xc * yc
            if sub == 0:
                break
            sub = (sub - 1) & comp
    return out


def vec_add(x: list[int], y: list[int]) -> list[int]:
    return [a + b for a, b in zip(x, y)]


def vec_sub(x: list[int], y: list[int]) -> list[int]:
    return [a - b for a, b in zip(x, y)]


def vec_scale(x: list[int], c: int) -> list[int]:
    if c == 1:
        return list(x)
    return [a * c for a in x]

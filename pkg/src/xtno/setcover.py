"""Fully dynamic algorithms over maintained extensor products.

Five problems share one pattern: keep an algebraic product (or a small
family of sums/products) whose top coefficient certifies a solution,
update it multiplicatively on insertion, and cancel the exact factor on
removal.  Removal works because over characteristic 2 a factor squares
to the identity, and over the integers each factor has an explicit
truncated inverse series.

Inserts return opaque handles; removal takes a handle.  That is the
contract that makes removal exact: the randomness attached to a live
factor must be replayed, and duplicate sets are legal.

Everything here is single-writer: queries are pure reads and may run
concurrently, but mutations must be externally serialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _bits, _gfconv
from ._intops import int_skew, int_unit, int_wedge_sparse, int_zeros
from .algebra import MAX_DIMS
from .errors import CapabilityError, UnknownHandleError
from .fields import GF2m, field_new, prf_tag, sample_bit
from .graphs import UndirectedGraph

RANDOMIZED = "randomized"
DETERMINISTIC = "deterministic"
COUNT_TRIALS_CONSTANT = 60


def _check_mode(mode: str) -> None:
    if mode not in (RANDOMIZED, DETERMINISTIC):
        raise CapabilityError(f"unknown mode {mode!r}")


def _check_dims(dims: int) -> None:
    if dims > MAX_DIMS:
        raise CapabilityError(f"needs {dims} generators, above the cap {MAX_DIMS}")


def _vand_field(ring: GF2m, idx: int, length: int):
    j = ring.embed(idx)
    out, acc = [], 1
    for _ in range(length):
        out.append(acc)
        acc = ring.mul(acc, j)
    return tuple(out)


def _vand_int(idx: int, length: int):
    return tuple(idx**t for t in range(length))


def _lift_halves(vec):
    k = len(vec)
    return tuple(vec) + (0,) * k, (0,) * k + tuple(vec)


def _pm_vector(seed: int, label, idx: int, length: int):
    return tuple(
        1 if sample_bit(seed, prf_tag(label, idx, t)) else -1 for t in range(length)
    )


def _assert_even(arr: np.ndarray, dims: int) -> None:
    odd = np.flatnonzero(_bits.popcounts(dims) % 2 == 1)
    if any(arr[m] for m in odd):
        raise AssertionError("maintained product left the even-degree subalgebra")


@dataclass
class _Handle:
    elements: tuple[int, ...]
    y: Optional[int]  # randomized factor variable, replayed on removal


class ExactCoverState:
    """Disjoint sub-collection covering exactly k elements.

    Maintains the product over live sets of (1 + y_S chi(S)) over GF(2^d)
    or of (1 + lifted chi(S)) over the integers; the top coefficient is
    nonzero exactly when a solution exists (one-sided in the random case).
    """

    def __init__(self, k: int, mode: str = RANDOMIZED, seed: int = 0,
                 field_degree: int = 16, code_fn=None):
        _check_mode(mode)
        if k < 1:
            raise CapabilityError("k must be at least 1")
        self.k = k
        self.mode = mode
        self.seed = seed
        self.dims = k if mode == RANDOMIZED else 2 * k
        _check_dims(self.dims)
        self.handles: dict[int, _Handle] = {}
        self._next = 1
        if mode == RANDOMIZED:
            self.ring = field_new(field_degree)
            self.product = np.zeros(1 << self.dims, dtype=np.uint32)
            self.product[0] = 1
        else:
            self.ring = None
            self.product = int_unit(self.dims)
        self._code_fn = code_fn  # element -> code vector (tests/counters override)

    # -- codes ---------------------------------------------------------------

    def _code(self, a: int):
        if self._code_fn is not None:
            return self._code_fn(a)
        if self.mode == RANDOMIZED:
            return _vand_field(self.ring, a, self.k)
        return _vand_int(a, self.k)

    def _validate(self, elements) -> tuple[int, ...]:
        elems = tuple(sorted(int(a) for a in elements))
        if not elems:
            raise CapabilityError("sets must be nonempty")
        if len(set(elems)) != len(elems):
            raise CapabilityError("sets may not repeat an element")
        if elems[0] < 1:
            raise CapabilityError("elements are positive integers")
        if self.mode == RANDOMIZED and elems[-1] >= self.ring.order:
            raise CapabilityError("element out of range for the field")
        return elems

    # -- the multiplicative update --------------------------------------------

    def _wedge_set_gf(self, base: np.ndarray, elems) -> np.ndarray:
        out = base
        for a in elems:
            out = _gfconv.gf_skew(self.ring, out, self._code(a), self.dims)
        return out

    def _wedge_set_int(self, base: np.ndarray, elems) -> np.ndarray:
        out = base
        for a in elems:
            lo, hi = _lift_halves(self._code(a))
            out = int_skew(out, lo, self.dims)
            out = int_skew(out, hi, self.dims)
        return out

    def _apply_factor(self, elems, y: Optional[int], remove: bool) -> None:
        if len(elems) > self.k:
            return  # the factor is exactly the identity
        if self.mode == RANDOMIZED:
            term = self._wedge_set_gf(self.product, elems)
            self.product = self.product ^ self.ring.mul_scalar(term, y)
        else:
            term = self._wedge_set_int(self.product, elems)
            self.product = self.product - term if remove else self.product + term
            _assert_even(self.product, self.dims)

    # -- operations -----------------------------------------------------------

    def insert(self, elements) -> int:
        elems = self._validate(elements)
        handle = self._next
        self._next += 1
        y = None
        if self.mode == RANDOMIZED:
            y = self.ring.sample(self.seed, prf_tag("xc", handle))
        self._apply_factor(elems, y, remove=False)
        self.handles[handle] = _Handle(elems, y)
        return handle

    def remove(self, handle: int) -> None:
        rec = self.handles.pop(handle, None)
        if rec is None:
            raise UnknownHandleError(f"handle {handle} is not live")
        self._apply_factor(rec.elements, rec.y, remove=True)

    def query(self) -> bool:
        return bool(self.product[-1])


class CoverAtLeastState:
    """Disjoint sub-collection covering at least k elements.

    Convenience wrapper running exact covers for every target in k..2k;
    any live set of size >= k is an immediate solution.
    """

    def __init__(self, k: int, mode: str = RANDOMIZED, seed: int = 0):
        _check_dims(2 * 2 * k if mode == DETERMINISTIC else 2 * k)
        self.k = k
        self.states = [
            ExactCoverState(kk, mode, seed + kk) for kk in range(k, 2 * k + 1)
        ]
        self.large: dict[int, tuple[int, ...]] = {}
        self._next = 1
        self.handles: dict[int, list[int]] = {}

    def insert(self, elements) -> int:
        handle = self._next
        self._next += 1
        elems = tuple(sorted(set(elements)))
        if len(elems) >= self.k:
            self.large[handle] = elems
            self.handles[handle] = []
        else:
            self.handles[handle] = [st.insert(elems) for st in self.states]
        return handle

    def remove(self, handle: int) -> None:
        if handle not in self.handles:
            raise UnknownHandleError(f"handle {handle} is not live")
        subs = self.handles.pop(handle)
        if handle in self.large:
            del self.large[handle]
            return
        for st, h in zip(self.states, subs):
            st.remove(h)

    def query(self) -> bool:
        return bool(self.large) or any(st.query() for st in self.states)


class PartialCoverState:
    """Minimum number of sets whose union reaches k elements.

    Randomized: per-slot sums P_j with slot-specific element variables;
    the least t with a nonzero top coefficient of P_1 ^ ... ^ P_t is the
    answer.  Deterministic: one maintained polynomial with a z marker per
    chosen set, queried by its lowest nonzero z power.  Sets of size >= k
    bypass the algebra through an explicit counter.
    """

    def __init__(self, k: int, mode: str = RANDOMIZED, seed: int = 0,
                 field_degree: int = 16):
        _check_mode(mode)
        if k < 1:
            raise CapabilityError("k must be at least 1")
        self.k = k
        self.mode = mode
        self.seed = seed
        self.dims = k if mode == RANDOMIZED else 2 * k
        _check_dims(self.dims)
        self.large_live = 0
        self.handles: dict[int, _Handle] = {}
        self._next = 1
        if mode == RANDOMIZED:
            self.ring = field_new(field_degree)
            self.slot_sums = [
                np.zeros(1 << self.dims, dtype=np.uint32) for _ in range(k)
            ]
        else:
            self.ring = None
            # poly[t] is the extensor coefficient of z^t
            self.poly = [int_unit(self.dims)] + [
                int_zeros(self.dims) for _ in range(k)
            ]

    def _code(self, a: int):
        if self.mode == RANDOMIZED:
            return _vand_field(self.ring, a, self.k)
        return _vand_int(a, self.k)

    def _validate(self, elements) -> tuple[int, ...]:
        elems = tuple(sorted(int(a) for a in elements))
        if not elems or len(set(elems)) != len(elems) or elems[0] < 1:
            raise CapabilityError("sets are nonempty collections of distinct positives")
        if self.mode == RANDOMIZED and elems[-1] >= self.ring.order:
            raise CapabilityError("element out of range for the field")
        return elems

    # randomized: the per-slot sum term of one set.  The variables carry the
    # handle as well as (element, slot): with element-only keys, two live
    # copies of the same set would contribute identical terms and cancel
    # over characteristic 2.
    def _slot_term(self, handle: int, elems, j: int) -> np.ndarray:
        term = np.zeros(1 << self.dims, dtype=np.uint32)
        term[0] = 1
        for a in elems:
            y = self.ring.sample(self.seed, prf_tag("pc", handle, a, j))
            term = term ^ self.ring.mul_scalar(
                _gfconv.gf_skew(self.ring, term, self._code(a), self.dims), y
            )
        return term

    # deterministic: multiply the maintained polynomial by the set product
    def _poly_times_setprod(self, poly, elems):
        out = []
        for coeff in poly:
            cur = coeff
            for a in elems:
                lo, hi = _lift_halves(self._code(a))
                cur = cur + int_skew(int_skew(cur, lo, self.dims), hi, self.dims)
            out.append(cur)
        return out

    def _mul_factor(self, elems) -> None:
        """poly *= 1 + z*(setprod - 1), with the degree-cap assertion."""
        wide = self._poly_times_setprod(self.poly, elems)
        overflow = wide[self.k] - self.poly[self.k]
        if overflow.any():
            raise AssertionError("maintained polynomial exceeded degree k")
        new = [self.poly[0]]
        for t in range(1, self.k + 1):
            new.append(self.poly[t] + wide[t - 1] - self.poly[t - 1])
        self.poly = new

    def _mul_inverse_factor(self, elems) -> None:
        """poly *= inverse of (1 + X), X = z*(setprod - 1), via the series."""
        total = [c.copy() for c in self.poly]
        term = self.poly
        for _ in range(self.k):
            wide = self._poly_times_setprod(term, elems)
            nxt = [int_zeros(self.dims)]
            for t in range(1, self.k + 1):
                nxt.append(-(wide[t - 1] - term[t - 1]))
            term = nxt
            if not any(c.any() for c in term):
                break
            total = [a + b for a, b in zip(total, term)]
        self.poly = total

    def insert(self, elements) -> int:
        elems = self._validate(elements)
        handle = self._next
        self._next += 1
        self.handles[handle] = _Handle(elems, None)
        if len(elems) >= self.k:
            self.large_live += 1
            return handle
        if self.mode == RANDOMIZED:
            for j in range(self.k):
                self.slot_sums[j] = self.slot_sums[j] ^ self._slot_term(handle, elems, j)
        else:
            self._mul_factor(elems)
        return handle

    def remove(self, handle: int) -> None:
        rec = self.handles.pop(handle, None)
        if rec is None:
            raise UnknownHandleError(f"handle {handle} is not live")
        elems = rec.elements
        if len(elems) >= self.k:
            self.large_live -= 1
            return
        if self.mode == RANDOMIZED:
            for j in range(self.k):
                self.slot_sums[j] = self.slot_sums[j] ^ self._slot_term(handle, elems, j)
        else:
            self._mul_inverse_factor(elems)

    def query(self) -> Optional[int]:
        """Minimum number of sets, or None when unreachable."""
        if self.large_live:
            return 1
        if self.mode == RANDOMIZED:
            prefix = None
            for t in range(1, self.k + 1):
                prefix = (
                    self.slot_sums[0]
                    if prefix is None
                    else _gfconv.subset_convolve(
                        self.ring, prefix, self.slot_sums[t - 1], self.dims
                    )
                )
                if prefix[-1]:
                    return t
            return None
        for t in range(1, self.k + 1):
            if self.poly[t][-1]:
                return t
        return None


class PackingState:
    """k pairwise-disjoint m-element sets, via exact cover of m*k elements."""

    def __init__(self, m: int, k: int, mode: str = RANDOMIZED, seed: int = 0):
        if m < 1 or k < 1:
            raise CapabilityError("m and k must be at least 1")
        self.m = m
        self.k = k
        self.inner = ExactCoverState(m * k, mode, seed)

    def _check(self, elements) -> tuple[int, ...]:
        elems = tuple(sorted(set(int(a) for a in elements)))
        if len(elems) != self.m:
            raise CapabilityError(f"packing sets must have exactly {self.m} elements")
        return elems

    def insert(self, elements) -> int:
        return self.inner.insert(self._check(elements))

    def remove(self, handle: int) -> None:
        self.inner.remove(handle)

    def query(self) -> bool:
        return self.inner.query()


class PackingCounter:
    """Approximate count of m-set k-packings from random sign codings."""

    def __init__(self, m: int, k: int, epsilon: float, seed: int = 0,
                 trials: Optional[int] = None):
        if not 0 < epsilon <= 1:
            raise CapabilityError("epsilon must be in (0, 1]")
        self.m = m
        self.k = k
        self.epsilon = epsilon
        if trials is None:
            trials = math.ceil(COUNT_TRIALS_CONSTANT / (epsilon * epsilon))
        self.trials = trials
        kk = m * k
        self.states = [
            ExactCoverState(
                kk, DETERMINISTIC, seed,
                code_fn=(lambda a, t=t: _pm_vector(seed, ("pmc", t), a, kk)),
            )
            for t in range(trials)
        ]
        self._next = 1
        self.handles: dict[int, list[int]] = {}

    def insert(self, elements) -> int:
        elems = tuple(sorted(set(int(a) for a in elements)))
        if len(elems) != self.m:
            raise CapabilityError(f"packing sets must have exactly {self.m} elements")
        handle = self._next
        self._next += 1
        self.handles[handle] = [st.insert(elems) for st in self.states]
        return handle

    def remove(self, handle: int) -> None:
        subs = self.handles.pop(handle, None)
        if subs is None:
            raise UnknownHandleError(f"handle {handle} is not live")
        for st, h in zip(self.states, subs):
            st.remove(h)

    def estimate(self) -> Fraction:
        kk = self.m * self.k
        sign = -1 if (kk * (kk - 1) // 2) % 2 else 1
        fact = math.factorial(kk)
        total = Fraction(0)
        for st in self.states:
            total += Fraction(sign * int(st.product[-1]), fact)
        return total / self.trials


class DominatingState:
    """Minimum vertex set whose closed neighborhood covers t vertices.

    A partial-cover instance whose sets mirror the closed neighborhoods;
    each edge update replaces the two affected sets.
    """

    def __init__(self, graph: UndirectedGraph, t: int, mode: str = RANDOMIZED,
                 seed: int = 0):
        self.t = t
        self.cover = PartialCoverState(t, mode, seed)
        self.adj: dict[int, set[int]] = {
            v: set(graph.neighbors(v)) for v in range(1, graph.n + 1)
        }
        self.handle_of: dict[int, int] = {}
        for v in sorted(self.adj):
            self.handle_of[v] = self.cover.insert(self._closed(v))

    def _closed(self, v: int):
        return sorted(self.adj[v] | {v})

    def _reinsert(self, v: int) -> None:
        self.cover.remove(self.handle_of[v])
        self.handle_of[v] = self.cover.insert(self._closed(v))

    def update_edge(self, u: int, v: int, insert: bool) -> None:
        if u == v or u not in self.adj or v not in self.adj:
            raise CapabilityError("edge endpoints must be distinct live vertices")
        present = v in self.adj[u]
        if insert and present:
            raise CapabilityError(f"edge ({u},{v}) already present")
        if not insert and not present:
            raise CapabilityError(f"edge ({u},{v}) not present")
        if insert:
            self.adj[u].add(v)
            self.adj[v].add(u)
        else:
            self.adj[u].discard(v)
            self.adj[v].discard(u)
        self._reinsert(u)
        self._reinsert(v)

    def add_vertex(self) -> int:
        v = max(self.adj, default=0) + 1
        self.adj[v] = set()
        self.handle_of[v] = self.cover.insert([v])
        return v

    def remove_vertex(self, v: int) -> None:
        if v not in self.adj:
            raise CapabilityError(f"vertex {v} is not live")
        nbrs = sorted(self.adj[v])
        self.cover.remove(self.handle_of.pop(v))
        del self.adj[v]
        for u in nbrs:
            self.adj[u].discard(v)
            self._reinsert(u)

    def query(self) -> Optional[int]:
        return self.cover.query()


class MatchingState:
    """k pairwise-disjoint d-tuples over disjoint universes.

    Coordinates 2..d carry codes; the per-first-coordinate accumulators
    are combined in a maintained polynomial whose z^k top coefficient
    certifies a matching.  Tuple removal re-derives the stored factor.
    """

    def __init__(self, d: int, k: int, mode: str = RANDOMIZED, seed: int = 0,
                 field_degree: int = 16):
        _check_mode(mode)
        if d < 2 or k < 1:
            raise CapabilityError("need d >= 2 and k >= 1")
        self.d = d
        self.k = k
        self.mode = mode
        self.seed = seed
        base = (d - 1) * k
        self.dims = base if mode == RANDOMIZED else 2 * base
        _check_dims(self.dims)
        self.ring = field_new(field_degree) if mode == RANDOMIZED else None
        self.acc: dict[int, np.ndarray] = {}  # first coordinate -> accumulator
        if mode == RANDOMIZED:
            self.poly = [np.zeros(1 << self.dims, dtype=np.uint32)
                         for _ in range(k + 1)]
            self.poly[0][0] = 1
        else:
            self.poly = [int_unit(self.dims)] + [
                int_zeros(self.dims) for _ in range(k)
            ]
        self.handles: dict[int, tuple[tuple[int, ...], Optional[int]]] = {}
        self._next = 1

    def _coord_code(self, coord: int, value: int):
        idx = (value - 1) * (self.d - 1) + (coord - 1)
        base = (self.d - 1) * self.k
        if self.mode == RANDOMIZED:
            return _vand_field(self.ring, idx, base)
        return _vand_int(idx, base)

    def _tuple_monomial(self, tup) -> np.ndarray:
        if self.mode == RANDOMIZED:
            out = np.zeros(1 << self.dims, dtype=np.uint32)
            out[0] = 1
            for c in range(2, self.d + 1):
                out = _gfconv.gf_skew(
                    self.ring, out, self._coord_code(c, tup[c - 1]), self.dims
                )
            return out
        out = int_unit(self.dims)
        for c in range(2, self.d + 1):
            lo, hi = _lift_halves(self._coord_code(c, tup[c - 1]))
            out = int_skew(int_skew(out, lo, self.dims), hi, self.dims)
        return out

    def _poly_mul_accfactor(self, poly, acc, invert: bool):
        """poly *= (1 + z*acc), or its truncated inverse series."""
        if self.mode == RANDOMIZED:
            acc_hat = _gfconv.hat(acc, self.dims)
            shifted = [
                _gfconv.unhat(
                    _gfconv.hat_mul(
                        self.ring, _gfconv.hat(poly[t - 1], self.dims), acc_hat,
                        self.dims,
                    ),
                    self.dims,
                )
                for t in range(1, self.k + 1)
            ]
            # over characteristic 2 the factor is its own inverse
            return [poly[0]] + [poly[t] ^ shifted[t - 1] for t in range(1, self.k + 1)]
        if not invert:
            return [poly[0]] + [
                poly[t] + int_wedge_sparse(acc, poly[t - 1], self.dims)
                for t in range(1, self.k + 1)
            ]
        total = [c.copy() for c in poly]
        term = poly
        for _ in range(self.k):
            term = [int_zeros(self.dims)] + [
                -int_wedge_sparse(acc, term[t - 1], self.dims)
                for t in range(1, self.k + 1)
            ]
            if not any(c.any() for c in term):
                break
            total = [a + b for a, b in zip(total, term)]
        return total

    def _swap_acc_factor(self, a: int, new_acc: np.ndarray) -> None:
        old = self.acc.get(a)
        if old is not None and old.any():
            self.poly = self._poly_mul_accfactor(self.poly, old, invert=True)
        if new_acc.any():
            self.poly = self._poly_mul_accfactor(self.poly, new_acc, invert=False)
            self.acc[a] = new_acc
        else:
            self.acc.pop(a, None)

    def _validate(self, tup) -> tuple[int, ...]:
        t = tuple(int(x) for x in tup)
        if len(t) != self.d:
            raise CapabilityError(f"tuples must have arity {self.d}")
        if any(x < 1 for x in t):
            raise CapabilityError("coordinate values are positive integers")
        if self.mode == RANDOMIZED:
            idx = (max(t) - 1) * (self.d - 1) + self.d - 1
            if idx >= self.ring.order:
                raise CapabilityError("coordinate value out of range for the field")
        return t

    def insert(self, tup) -> int:
        t = self._validate(tup)
        handle = self._next
        self._next += 1
        y = None
        if self.mode == RANDOMIZED:
            y = self.ring.sample(self.seed, prf_tag("mt", handle))
        self.handles[handle] = (t, y)
        self._apply(t, y, remove=False)
        return handle

    def remove(self, handle: int) -> None:
        rec = self.handles.pop(handle, None)
        if rec is None:
            raise UnknownHandleError(f"handle {handle} is not live")
        self._apply(rec[0], rec[1], remove=True)

    def _apply(self, t, y, remove: bool) -> None:
        a = t[0]
        mono = self._tuple_monomial(t)
        old = self.acc.get(a)
        if self.mode == RANDOMIZED:
            term = self.ring.mul_scalar(mono, y)
            new = term.copy() if old is None else old ^ term
        else:
            signed = -mono if remove else mono
            new = signed if old is None else old + signed
        self._swap_acc_factor(a, new)

    def query(self) -> bool:
        return bool(self.poly[self.k][-1])

"""Colored-subspace constraints on top of the directed oracle.

Constraining which vertices may appear in a detected walk amounts to
drawing vertex codes from low-dimensional subspaces: any mu+1 codes out
of a mu-dimensional subspace wedge to zero, so over-quota walks vanish
from every coefficient.  Two concrete constructions are provided:

* a k-vertex walk allowed to repeat at most one vertex, via a two-copy
  graph whose second copy shares a single code; and
* a k-path with per-subset occupancy quotas, via codes combined from
  Vandermonde bases, run at several evaluations of a length-marking
  variable and recombined by interpolation (walk degrees vary when
  quota subsets intersect, so plain degree grading cannot read off the
  walk length).

Both reuse the directed sensitivity machinery wholesale, so update
batches keep working; the two-copy reduction maps each original edge
update to its three live images.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import MAX_DIMS, CodeVector, Extensor, lift_vectors, skew_mul, vandermonde, wedge_vectors
from .errors import CapabilityError, ParseError
from .fields import GF2m, INTEGERS, prf_tag
from .graphs import DirectedGraph, UpdateBatch
from .kpath_directed import Code, KPathOracle, _int_total_only, _Internal, build_custom_oracle


@dataclass(frozen=True)
class SubspaceCode:
    """Member codes drawn from a fixed low-dimensional subspace.

    Any ``mu`` member codes are linearly independent; any ``mu+1`` wedge
    to zero.  Deterministic members are Vandermonde combinations of the
    basis; over a field, random combinations work with high probability.
    """

    basis: tuple[CodeVector, ...]

    @property
    def mu(self) -> int:
        return len(self.basis)

    @property
    def dims(self) -> int:
        return self.basis[0].dims

    def member(self, i: int) -> CodeVector:
        """The i-th deterministic member, sum of i^t times the t-th basis vector."""
        ring = self.basis[0].ring
        if self.mu == 0:
            raise CapabilityError("subspace of dimension 0 has no members")
        ent = [0] * self.dims
        for t, vec in enumerate(self.basis, start=1):
            w = i**t if ring.char == 0 else ring.pow(ring.embed(i), t)
            for g, c in enumerate(vec.entries):
                term = ring.mul(w, c)
                ent[g] = ring.add(ent[g], term)
        return CodeVector(ring, self.dims, tuple(ent))

    @staticmethod
    def deterministic(mu: int, dims: int, first_index: int = 1) -> "SubspaceCode":
        return SubspaceCode(
            tuple(vandermonde(first_index + t, dims) for t in range(mu))
        )

    @staticmethod
    def random(ring: GF2m, mu: int, dims: int, seed: int, tag: str) -> "SubspaceCode":
        """Sample basis vectors until they are independent (checked by wedge)."""
        basis: list[CodeVector] = []
        attempt = 0
        while len(basis) < mu:
            vec = CodeVector(
                ring, dims,
                tuple(ring.sample(seed, prf_tag("sub", tag, attempt, g)) for g in range(dims)),
            )
            attempt += 1
            if not wedge_vectors(basis + [vec]).is_zero():
                basis.append(vec)
            if attempt > 64 * (mu + 1):
                raise CapabilityError("could not sample an independent subspace basis")
        return SubspaceCode(tuple(basis))


def even_degree_pad(x: Extensor, extra: CodeVector) -> Extensor:
    """Wedge in one extra vector when the degrees are odd.

    Commutation arguments need even-degree operands; padding an odd-degree
    code with a reserved vector restores that at the cost of a generator.
    """
    degs = x.degrees()
    if all(d % 2 == 0 for d in degs):
        return x
    if any(d % 2 == 0 for d in degs if d):
        raise CapabilityError("cannot pad an extensor of mixed parity")
    return skew_mul(x, extra)


def z_weighted(code: Code, z: int) -> Code:
    """Scale a vertex code by an evaluation of the length-marking variable."""
    scalar, vectors = code
    return (scalar * z, vectors)


@dataclass(frozen=True)
class ConstraintSpec:
    """Occupancy quotas: at most mu1 vertices of v1 and mu2 of v2."""

    v1: frozenset[int]
    v2: frozenset[int]
    mu1: int
    mu2: int

    @staticmethod
    def build(v1, v2, mu1: int, mu2: int) -> "ConstraintSpec":
        if mu1 < 0 or mu2 < 0:
            raise ParseError("occupancy bounds must be nonnegative")
        return ConstraintSpec(frozenset(v1), frozenset(v2), mu1, mu2)

    def clamped(self, k: int) -> "ConstraintSpec":
        return ConstraintSpec(self.v1, self.v2, min(self.mu1, k), min(self.mu2, k))


# -- k-walk with at most one repeated vertex ----------------------------------


class KWalkOneRepeatOracle:
    """Sensitivity oracle for k-walks visiting at least k-1 distinct vertices."""

    def __init__(self, graph: DirectedGraph, k: int, inner: KPathOracle):
        self.graph = graph
        self.k = k
        self.inner = inner

    def _expand(self, batch: UpdateBatch, strict: bool) -> UpdateBatch:
        batch = batch.normalized(self.graph, strict=strict)
        if batch.vertex_failures:
            raise CapabilityError("the two-copy construction takes edge updates only")
        n = self.graph.n

        def images(u, v):
            return [(u, v), (u, n + v), (n + u, v)]

        ins = [e for u, v in batch.inserts for e in images(u, v)]
        dels = [e for u, v in batch.deletes for e in images(u, v)]
        return UpdateBatch.build(ins, dels)

    def query(self, batch: UpdateBatch, *, strict: bool = True) -> bool:
        return self.inner.query(self._expand(batch, strict), strict=False).answer

    @property
    def static_answer(self) -> bool:
        return self.inner.static_answer


def kwalk_one_repeat_build(graph: DirectedGraph, k: int, seed: int = 0) -> KWalkOneRepeatOracle:
    """Two copies of the graph with cross edges; the second copy shares one code.

    A walk may visit the shared-code copy at most once without vanishing,
    which is exactly one allowed repeat.  Copy-2 to copy-2 edges are
    omitted: any walk using one visits the shared code twice and vanishes.
    """
    if k < 1:
        raise CapabilityError("k must be at least 1")
    if 2 * k > MAX_DIMS:
        raise CapabilityError(f"k={k} needs {2 * k} generators, above the cap {MAX_DIMS}")
    n = graph.n
    edges = []
    for u, v in graph.edges:
        edges += [(u, v), (u, n + v), (n + u, v)]
    big = DirectedGraph.from_edges(2 * n, edges)
    shared = lift_vectors(vandermonde(n + 1, k))
    codes: list[Optional[Code]] = []
    for v in range(1, n + 1):
        lo, hi = lift_vectors(vandermonde(v, k))
        codes.append((1, (lo.entries, hi.entries)))
    codes += [(1, (shared[0].entries, shared[1].entries))] * n
    inner = build_custom_oracle(big, k, 2 * k, codes, seed=seed)
    return KWalkOneRepeatOracle(graph, k, inner)


# -- constrained k-path --------------------------------------------------------


def _occupancy_codes(graph: DirectedGraph, k: int, spec: ConstraintSpec):
    """Per-vertex stacks of degree-1 vectors realizing the quotas."""
    spec = spec.clamped(k)
    d = k + min(k, len(spec.v1 & spec.v2))
    sub1 = SubspaceCode.deterministic(spec.mu1, d, 1) if spec.mu1 else None
    sub2 = SubspaceCode.deterministic(spec.mu2, d, spec.mu1 + 1) if spec.mu2 else None
    rank1 = {v: i for i, v in enumerate(sorted(spec.v1), start=1)}
    rank2 = {v: i for i, v in enumerate(sorted(spec.v2), start=1)}
    zero = CodeVector(INTEGERS, d, (0,) * d)
    plain_base = spec.mu1 + spec.mu2
    stacks: list[list[CodeVector]] = []
    for v in range(1, graph.n + 1):
        stack = []
        if v in spec.v1:
            stack.append(sub1.member(rank1[v]) if sub1 else zero)
        if v in spec.v2:
            stack.append(sub2.member(rank2[v]) if sub2 else zero)
        if not stack:
            stack.append(vandermonde(plain_base + v, d))
        stacks.append(stack)
    return d, stacks


def _stack_code(stack: Sequence[CodeVector], z: int) -> Code:
    vectors = []
    for vec in stack:
        lo, hi = lift_vectors(vec)
        vectors += [lo.entries, hi.entries]
    return (z, tuple(vectors))


class ConstrainedKPathOracle:
    """Occupancy-constrained k-path detection with sensitivity queries.

    Holds one directed-oracle state per evaluation point of the length
    marker; answers are read from the interpolated coefficient that
    isolates walks on exactly k vertices.
    """

    def __init__(self, graph, k, spec, dims, oracles, zpoints):
        self.graph = graph
        self.k = k
        self.spec = spec
        self.dims = dims
        self.oracles: list[KPathOracle] = oracles
        self.zpoints = zpoints

    def _interp_topdeg(self, values: list[list[int]]) -> list[int]:
        """Leading (z^k) coefficient per lane from the point evaluations."""
        lam = []
        for j, xj in enumerate(self.zpoints):
            den = 1
            for i, xi in enumerate(self.zpoints):
                if i != j:
                    den *= xj - xi
            lam.append(Fraction(1, den))
        out = []
        for lane in range(len(values[0])):
            acc = Fraction(0)
            for j in range(len(self.zpoints)):
                acc += lam[j] * values[j][lane]
            if acc.denominator != 1:
                raise AssertionError("interpolated coefficient is not integral")
            out.append(int(acc))
        return out

    def query(self, batch: UpdateBatch, *, strict: bool = True) -> bool:
        batch = batch.normalized(self.graph, strict=strict)
        if batch.vertex_failures:
            raise CapabilityError("occupancy oracle takes edge updates only")
        values = [o.updated_total_lanes(batch) for o in self.oracles]
        return any(self._interp_topdeg(values))

    @property
    def static_answer(self) -> bool:
        values = [o.cores[0].total_lanes() for o in self.oracles]
        return any(self._interp_topdeg(values))


def constrained_kpath_build(
    graph: DirectedGraph, k: int, spec: ConstraintSpec, seed: int = 0
) -> ConstrainedKPathOracle:
    """Full oracle with one state per length-marker evaluation point."""
    if k < 1:
        raise CapabilityError("k must be at least 1")
    d, stacks = _occupancy_codes(graph, k, spec)
    if 2 * d > MAX_DIMS:
        raise CapabilityError(f"needs {2 * d} generators, above the cap {MAX_DIMS}")
    zpoints = list(range(1, k + 2))
    oracles = []
    for z in zpoints:
        codes = [_stack_code(st, z) for st in stacks]
        oracles.append(build_custom_oracle(graph, k, 2 * d, codes, seed=seed))
    return ConstrainedKPathOracle(graph, k, spec.clamped(k), 2 * d, oracles, zpoints)


def constrained_kpath_static(graph: DirectedGraph, k: int, spec: ConstraintSpec) -> bool:
    """Detection without query support (walk totals only, much cheaper)."""
    if k < 1:
        raise CapabilityError("k must be at least 1")
    d, stacks = _occupancy_codes(graph, k, spec)
    if 2 * d > MAX_DIMS:
        raise CapabilityError(f"needs {2 * d} generators, above the cap {MAX_DIMS}")
    zpoints = list(range(1, k + 2))
    internal = _Internal(
        graph.n,
        sorted((u - 1, v - 1) for u, v in graph.edges),
        list(range(graph.n)),
        list(range(graph.n)),
        False,
    )
    values = []
    for z in zpoints:
        codes = [_stack_code(st, z) for st in stacks]
        values.append(_int_total_only(internal, 2 * d, k, codes))
    shell = ConstrainedKPathOracle(graph, k, spec.clamped(k), 2 * d, [], zpoints)
    return any(shell._interp_topdeg(values))


# -- constraint file format ----------------------------------------------------


def parse_constrained_graph(text: str):
    """Graph file with "V1:", "V2:" and "mu1 mu2" lines appended.

    The graph header fixes the edge count, so the first m+1 content lines
    are the plain graph and everything after belongs to the constraints.
    """
    from .graphs import parse_graph

    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty constraint file")
    head = lines[0].split()
    try:
        m = int(head[1])
    except (IndexError, ValueError) as exc:
        raise ParseError(f"malformed graph header: {lines[0]!r}") from exc
    graph = parse_graph("\n".join(lines[: m + 1]))
    if not isinstance(graph, DirectedGraph):
        raise ParseError("occupancy constraints apply to directed graphs")
    v1: list[int] = []
    v2: list[int] = []
    mus: Optional[tuple[int, int]] = None
    try:
        for ln in lines[m + 1 :]:
            if ln.startswith("V1:"):
                v1 = [int(t) for t in ln[3:].split()]
            elif ln.startswith("V2:"):
                v2 = [int(t) for t in ln[3:].split()]
            else:
                parts = ln.split()
                if len(parts) != 2 or mus is not None:
                    raise ParseError(f"unexpected constraint line: {ln!r}")
                mus = (int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise ParseError("malformed constraint line") from exc
    if mus is None:
        raise ParseError("constraint file must end with a 'mu1 mu2' line")
    spec = ConstraintSpec.build(v1, v2, *mus)
    for v in spec.v1 | spec.v2:
        if not 1 <= v <= graph.n:
            raise ParseError(f"constraint vertex {v} out of range")
    return graph, spec

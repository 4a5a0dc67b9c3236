"""Graph types, update batches, and the line-oriented file formats.

Vertices are 1-indexed everywhere (matching the text formats).  An
update batch is always interpreted against the *initial* input: queries
never mutate oracle state, and one update file describes one query.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidUpdateError, ParseError


@dataclass(frozen=True)
class DirectedGraph:
    """Simple directed graph on vertices 1..n (self-loops permitted)."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ParseError(f"edge ({u},{v}) out of range for n={self.n}")

    @staticmethod
    def from_edges(n: int, edges) -> "DirectedGraph":
        return DirectedGraph(n, frozenset((int(u), int(v)) for u, v in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def apply(self, batch: "UpdateBatch") -> "DirectedGraph":
        """The updated graph: edge changes, then failed vertices dropped."""
        edges = set(self.edges)
        edges -= set(batch.deletes)
        edges |= set(batch.inserts)
        failed = set(batch.vertex_failures)
        if failed:
            edges = {(u, v) for u, v in edges if u not in failed and v not in failed}
        return DirectedGraph(self.n, frozenset(edges))

    def alive(self, batch: "UpdateBatch") -> list[int]:
        failed = set(batch.vertex_failures)
        return [v for v in range(1, self.n + 1) if v not in failed]


def canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph on vertices 1..n, edges stored as (min,max)."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ParseError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise ParseError(f"self-loop ({u},{v}) not allowed in undirected graph")
            if u > v:
                raise ParseError("undirected edges must be canonical (min,max)")

    @staticmethod
    def from_edges(n: int, edges) -> "UndirectedGraph":
        return UndirectedGraph(n, frozenset(canon(int(u), int(v)) for u, v in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edges

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def apply(self, batch: "UpdateBatch") -> "UndirectedGraph":
        edges = set(self.edges)
        edges -= {canon(*e) for e in batch.deletes}
        edges |= {canon(*e) for e in batch.inserts}
        return UndirectedGraph(self.n, frozenset(edges))


@dataclass(frozen=True)
class UpdateBatch:
    """Normalized list of edge inserts, edge deletes, and vertex failures."""

    inserts: tuple[tuple[int, int], ...] = ()
    deletes: tuple[tuple[int, int], ...] = ()
    vertex_failures: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.inserts) + len(self.deletes) + len(self.vertex_failures)

    def is_empty(self) -> bool:
        return self.size == 0

    @staticmethod
    def build(inserts=(), deletes=(), vertex_failures=()) -> "UpdateBatch":
        return UpdateBatch(
            tuple((int(u), int(v)) for u, v in inserts),
            tuple((int(u), int(v)) for u, v in deletes),
            tuple(int(v) for v in vertex_failures),
        )

    def normalized(
        self, graph, *, strict: bool = True, undirected: bool = False
    ) -> "UpdateBatch":
        """Apply the batch-validity rules against the initial graph.

        Insert+delete of the same edge cancel.  Duplicates within a list,
        inserting a present edge, or deleting an absent edge are errors in
        strict mode and silently dropped otherwise.
        """
        key = canon if undirected else (lambda u, v: (u, v))
        ins = [key(*e) for e in self.inserts]
        dels = [key(*e) for e in self.deletes]
        if strict:
            if len(set(ins)) != len(ins):
                raise InvalidUpdateError("duplicate edge in insert list")
            if len(set(dels)) != len(dels):
                raise InvalidUpdateError("duplicate edge in delete list")
        ins_set, del_set = set(ins), set(dels)
        cancelled = ins_set & del_set
        ins_set -= cancelled
        del_set -= cancelled
        for u, v in sorted(ins_set | del_set) + [(v, v) for v in self.vertex_failures]:
            if not (1 <= u <= graph.n and 1 <= v <= graph.n):
                raise InvalidUpdateError(f"update references vertex out of range (n={graph.n})")
        bad_ins = {e for e in ins_set if graph.has_edge(*e)}
        bad_del = {e for e in del_set if not graph.has_edge(*e)}
        if strict and (bad_ins or bad_del):
            raise InvalidUpdateError(
                "insert of present edge or delete of absent edge in strict mode"
            )
        ins_set -= bad_ins
        del_set -= bad_del
        failures = tuple(sorted(set(self.vertex_failures)))
        if strict and len(failures) != len(self.vertex_failures):
            raise InvalidUpdateError("duplicate vertex failure")
        return UpdateBatch(tuple(sorted(ins_set)), tuple(sorted(del_set)), failures)


# -- text formats ------------------------------------------------------------


def parse_graph(text: str):
    """Parse the graph file format: header "n m directed|undirected", then edges."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty graph file")
    head = lines[0].split()
    if len(head) != 3 or head[2] not in ("directed", "undirected"):
        raise ParseError(f"malformed graph header: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"malformed graph header: {lines[0]!r}") from exc
    if n < 1 or m < 0:
        raise ParseError("graph header values out of range")
    body = lines[1:]
    if len(body) < m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for ln in body[:m]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"malformed edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"malformed edge line: {ln!r}") from exc
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge ({u},{v}) out of range")
        edges.append((u, v))
    directed = head[2] == "directed"
    if directed:
        if len(set(edges)) != len(edges):
            raise ParseError("duplicate edge in graph file")
        return DirectedGraph.from_edges(n, edges)
    cedges = [canon(u, v) for u, v in edges]
    if len(set(cedges)) != len(cedges):
        raise ParseError("duplicate edge in graph file")
    return UndirectedGraph.from_edges(n, edges)


def format_graph(graph) -> str:
    kind = "directed" if isinstance(graph, DirectedGraph) else "undirected"
    lines = [f"{graph.n} {graph.m} {kind}"]
    lines += [f"{u} {v}" for u, v in sorted(graph.edges)]
    return "\n".join(lines) + "\n"


def parse_update_script(text: str) -> UpdateBatch:
    """Parse one query batch: "+ u v", "- u v", and "x u" lines."""
    ins, dels, fails = [], [], []
    for raw in text.splitlines():
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        try:
            if parts[0] == "+" and len(parts) == 3:
                ins.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "-" and len(parts) == 3:
                dels.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "x" and len(parts) == 2:
                fails.append(int(parts[1]))
            else:
                raise ParseError(f"malformed update line: {raw!r}")
        except ValueError as exc:
            raise ParseError(f"malformed update line: {raw!r}") from exc
    for u, v in ins + dels:
        if u < 1 or v < 1:
            raise ParseError("vertex ids are 1-indexed")
    for v in fails:
        if v < 1:
            raise ParseError("vertex ids are 1-indexed")
    return UpdateBatch.build(ins, dels, fails)


def parse_sides(text: str, n: int) -> tuple[frozenset[int], frozenset[int]]:
    """Parse a bipartition file: two lines of vertex ids."""
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if len(lines) != 2:
        raise ParseError("sides file must have exactly two non-empty lines")
    try:
        s = frozenset(int(t) for t in lines[0].split())
        t = frozenset(int(t) for t in lines[1].split())
    except ValueError as exc:
        raise ParseError("malformed sides file") from exc
    if s & t or (s | t) != frozenset(range(1, n + 1)):
        raise ParseError("sides must partition the vertex set")
    return s, t

"""Line-oriented driver for the dynamic problems.

A session is created for one problem and then fed operation lines:

* set problems (exact-cover, partial-cover, packing): header "N k",
  then "+ e1 e2 ..." (insert, echoes the handle), "- h" (remove), "?".
* matching: header "N k", then "+ a b c" with one value per coordinate
  (values are namespaced per universe internally).
* t-dominating: header "n t", then "+e u v" / "-e u v" (edge updates),
  "+v" (new vertex, echoes its id), "-v u", and "?".

Query outputs are "YES"/"NO", "MIN t"/"NONE", or "COUNT x" for the
counting variant.  A bad handle produces a diagnostic line and the
session continues.
"""

from __future__ import annotations

from typing import Optional

from .errors import CapabilityError, ParseError, UnknownHandleError
from .graphs import UndirectedGraph
from .setcover import (
    DominatingState,
    ExactCoverState,
    MatchingState,
    PackingCounter,
    PackingState,
    PartialCoverState,
)

PROBLEMS = ("exact-cover", "partial-cover", "packing", "tdom", "matching")


class DynamicSession:
    """One dynamic-problem state driven by text commands."""

    def __init__(
        self,
        problem: str,
        mode: str = "randomized",
        seed: int = 0,
        k: Optional[int] = None,
        m: Optional[int] = None,
        d: Optional[int] = None,
        count: bool = False,
        epsilon: float = 0.5,
    ):
        if problem not in PROBLEMS:
            raise ParseError(f"unknown problem {problem!r}")
        self.problem = problem
        self.mode = mode
        self.seed = seed
        self.k = k
        self.m = m
        self.d = d
        self.count = count
        self.epsilon = epsilon
        self.state = None
        self.universe: Optional[int] = None
        if count and problem != "packing":
            raise CapabilityError("only packing has a counting variant")

    # -- setup ---------------------------------------------------------------

    def _start(self, bound: int, param: int) -> None:
        if self.k is not None and self.k != param:
            raise ParseError(
                f"session header parameter {param} conflicts with --k {self.k}"
            )
        self.universe = bound
        k = param
        if self.problem == "exact-cover":
            self.state = ExactCoverState(k, self.mode, self.seed)
        elif self.problem == "partial-cover":
            self.state = PartialCoverState(k, self.mode, self.seed)
        elif self.problem == "packing":
            if not self.m:
                raise ParseError("packing needs --m")
            if self.count:
                self.state = PackingCounter(self.m, k, self.epsilon, self.seed)
            else:
                self.state = PackingState(self.m, k, self.mode, self.seed)
        elif self.problem == "matching":
            if not self.d:
                raise ParseError("matching needs --d")
            self.state = MatchingState(self.d, k, self.mode, self.seed)
        elif self.problem == "tdom":
            self.state = DominatingState(
                UndirectedGraph.from_edges(bound, []), k, self.mode, self.seed
            )

    # -- one line -> zero or one output line ----------------------------------

    def feed(self, line: str) -> Optional[str]:
        text = line.strip()
        if not text or text.startswith("#"):
            return None
        parts = text.split()
        if self.state is None:
            if len(parts) != 2:
                raise ParseError(f"expected session header 'N k', got {text!r}")
            try:
                bound, param = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ParseError(f"malformed session header {text!r}") from exc
            self._start(bound, param)
            return None
        try:
            return self._op(parts, text)
        except UnknownHandleError as exc:
            return f"ERR {exc}"

    def _op(self, parts, text: str) -> Optional[str]:
        if self.problem == "tdom":
            return self._op_tdom(parts, text)
        op = parts[0]
        if op == "+":
            elems = [int(t) for t in parts[1:]]
            if self.universe and any(e > self.universe for e in elems):
                raise ParseError(f"element above the declared universe in {text!r}")
            if self.problem == "matching":
                return str(self.state.insert(tuple(elems)))
            return str(self.state.insert(elems))
        if op == "-" and len(parts) == 2:
            self.state.remove(int(parts[1]))
            return None
        if op == "?" and len(parts) == 1:
            return self._answer()
        raise ParseError(f"malformed session line: {text!r}")

    def _op_tdom(self, parts, text: str) -> Optional[str]:
        op = parts[0]
        if op == "+e" and len(parts) == 3:
            self.state.update_edge(int(parts[1]), int(parts[2]), insert=True)
            return None
        if op == "-e" and len(parts) == 3:
            self.state.update_edge(int(parts[1]), int(parts[2]), insert=False)
            return None
        if op == "+v" and len(parts) == 1:
            return str(self.state.add_vertex())
        if op == "-v" and len(parts) == 2:
            self.state.remove_vertex(int(parts[1]))
            return None
        if op == "?" and len(parts) == 1:
            return self._answer()
        raise ParseError(f"malformed session line: {text!r}")

    def _answer(self) -> str:
        if self.count:
            return f"COUNT {float(self.state.estimate()):g}"
        got = self.state.query()
        if isinstance(got, bool):
            return "YES" if got else "NO"
        return "NONE" if got is None else f"MIN {got}"

    def run(self, script: str) -> list[str]:
        out = []
        for line in script.splitlines():
            res = self.feed(line)
            if res is not None:
                out.append(res)
        return out

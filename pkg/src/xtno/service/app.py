"""FastAPI service wrapping the oracle library.

Oracles are expensive to build and cheap to query, so the service keeps
them in an in-memory registry and hands out ids; clients may also ship
or fetch the serialized state.  Detection queries are pure reads and may
run concurrently against one oracle; dynamic sessions are single-writer
and serialized with a per-session lock.
"""

from __future__ import annotations

import base64
import itertools
import threading
import time
from fractions import Fraction

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import JSONResponse

from .. import __version__
from ..constrained import (
    constrained_kpath_build,
    kwalk_one_repeat_build,
    parse_constrained_graph,
)
from ..errors import (
    CapabilityError,
    InstanceTooLargeError,
    ParseError,
    StateFormatError,
    XtnoError,
)
from ..graphs import DirectedGraph, UndirectedGraph, parse_graph, parse_sides, parse_update_script
from ..kpath_directed import KPathCounter, KPathOracle, approx_count_preprocess, preprocess
from ..kpath_undirected import UndirectedOracle, u_bipartite_preprocess, u_preprocess
from ..reference import bf_kpath
from ..serial import load_state
from ..sessions import DynamicSession
from . import schemas as sch

_ERROR_CODES = {
    ParseError: "parse",
    CapabilityError: "capability",
    StateFormatError: "state",
    InstanceTooLargeError: "capability",
}


def _error_payload(exc: XtnoError) -> dict:
    for cls, code in _ERROR_CODES.items():
        if isinstance(exc, cls):
            return {"code": code, "message": str(exc)}
    return {"code": "error", "message": str(exc)}


class Registry:
    def __init__(self):
        self._items: dict[str, object] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._counter = itertools.count(1)
        self._guard = threading.Lock()

    def put(self, obj) -> str:
        with self._guard:
            key = f"{next(self._counter):x}"
            self._items[key] = obj
            self._locks[key] = threading.Lock()
        return key

    def get(self, key: str):
        try:
            return self._items[key]
        except KeyError:
            raise HTTPException(404, {"code": "missing", "message": f"no object {key!r}"})

    def lock(self, key: str) -> threading.Lock:
        self.get(key)
        return self._locks[key]

    def drop(self, key: str) -> None:
        self._items.pop(key, None)
        self._locks.pop(key, None)


def create_app() -> FastAPI:
    app = FastAPI(title="extensor oracle service", version=__version__)
    oracles = Registry()
    sessions = Registry()

    @app.exception_handler(XtnoError)
    async def _xtno_error(request, exc: XtnoError):
        return JSONResponse(status_code=400, content={"detail": _error_payload(exc)})

    @app.get("/health", response_model=sch.HealthResponse)
    def health():
        return sch.HealthResponse(status="ok", version=__version__)

    # -- directed k-path ----------------------------------------------------

    def _directed_graph(text: str) -> DirectedGraph:
        graph = parse_graph(text)
        if not isinstance(graph, DirectedGraph):
            raise ParseError("expected a directed graph")
        return graph

    @app.post("/kpath/preprocess", response_model=sch.KPathPreprocessResponse)
    def kpath_preprocess(req: sch.KPathPreprocessRequest):
        graph = _directed_graph(req.graph)
        mode = {"rand": "randomized", "det": "deterministic"}.get(req.mode, req.mode)
        t0 = time.perf_counter()
        oracle = preprocess(
            graph, req.k, mode, req.seed,
            allow_vertex_failures=req.vertex_failures,
            amplification=req.amplification,
        )
        elapsed = time.perf_counter() - t0
        out = sch.KPathPreprocessResponse(
            answer=oracle.static_answer, elapsed_s=elapsed, n=graph.n, m=graph.m
        )
        if req.store:
            out.oracle_id = oracles.put(oracle)
        if req.include_state:
            out.state_b64 = base64.b64encode(oracle.serialize()).decode()
        return out

    def _resolve_oracle(oracle_id, state_b64, want):
        if oracle_id:
            obj = oracles.get(oracle_id)
        elif state_b64:
            obj = load_state(base64.b64decode(state_b64))
        else:
            raise ParseError("provide oracle_id or state_b64")
        if not isinstance(obj, want):
            raise ParseError(f"oracle is not a {want.__name__}")
        return obj

    @app.post("/kpath/query", response_model=sch.KPathQueryResponse)
    def kpath_query(req: sch.KPathQueryRequest):
        oracle = _resolve_oracle(req.oracle_id, req.state_b64, KPathOracle)
        batch = parse_update_script(req.updates)
        t0 = time.perf_counter()
        res = oracle.query(batch, strict=req.strict)
        elapsed = time.perf_counter() - t0
        out = sch.KPathQueryResponse(
            answer=res.answer, witness=str(res.witness), elapsed_s=elapsed
        )
        if req.brute_force:
            updated = oracle.graph.apply(batch.normalized(oracle.graph, strict=req.strict))
            out.brute_force_answer = bf_kpath(updated, oracle.k)
            out.match = out.brute_force_answer == res.answer
        return out

    @app.post("/kpath/updated-pairs", response_model=sch.UpdatedPairsResponse)
    def kpath_updated_pairs(req: sch.UpdatedPairsRequest):
        oracle = _resolve_oracle(req.oracle_id, None, KPathOracle)
        batch = parse_update_script(req.updates)
        table = oracle.query_updated_pairs(
            batch, vertices=req.vertices or None, strict=req.strict
        )
        per_vertex = 2 if oracle.mode == "deterministic" else 1
        pairs = []
        for (u, v), ext in sorted(table.items()):
            lengths = [
                s
                for s in range(1, oracle.k + 1)
                if any(
                    ext.coefficient(m)
                    for m in range(1 << ext.dims)
                    if bin(m).count("1") == per_vertex * s
                )
            ]
            pairs.append(sch.PairEntry(u=u, v=v, path_lengths=lengths))
        return sch.UpdatedPairsResponse(pairs=pairs)

    @app.post("/kpath/count/preprocess", response_model=sch.CountResponse)
    def count_preprocess(req: sch.CountPreprocessRequest):
        graph = _directed_graph(req.graph)
        counter = approx_count_preprocess(
            graph, req.k, req.epsilon, req.seed,
            allow_vertex_failures=req.vertex_failures, trials=req.trials,
        )
        est = counter.static_estimate
        return sch.CountResponse(
            oracle_id=oracles.put(counter), estimate=float(est),
            numerator=str(est.numerator), denominator=str(est.denominator),
        )

    @app.post("/kpath/count/query", response_model=sch.CountResponse)
    def count_query(req: sch.CountQueryRequest):
        counter = _resolve_oracle(req.oracle_id, None, KPathCounter)
        est: Fraction = counter.query(parse_update_script(req.updates), strict=req.strict)
        return sch.CountResponse(
            estimate=float(est), numerator=str(est.numerator),
            denominator=str(est.denominator),
        )

    # -- undirected k-path ----------------------------------------------------

    @app.post("/undirected/preprocess", response_model=sch.UndirectedPreprocessResponse)
    def undirected_preprocess(req: sch.UndirectedPreprocessRequest):
        graph = parse_graph(req.graph)
        if not isinstance(graph, UndirectedGraph):
            raise ParseError("expected an undirected graph")
        t0 = time.perf_counter()
        if req.sides is not None:
            side_s, side_t = parse_sides(req.sides, graph.n)
            oracle = u_bipartite_preprocess(graph, side_s, side_t, req.k, req.seed)
        else:
            oracle = u_preprocess(graph, req.k, trials=req.trials, seed=req.seed)
        elapsed = time.perf_counter() - t0
        out = sch.UndirectedPreprocessResponse(
            answer=oracle.static_answer, elapsed_s=elapsed, trials=oracle.trials
        )
        if req.store:
            out.oracle_id = oracles.put(oracle)
        if req.include_state:
            out.state_b64 = base64.b64encode(oracle.serialize()).decode()
        return out

    @app.post("/undirected/query", response_model=sch.UndirectedQueryResponse)
    def undirected_query(req: sch.UndirectedQueryRequest):
        oracle = _resolve_oracle(req.oracle_id, req.state_b64, UndirectedOracle)
        batch = parse_update_script(req.updates)
        t0 = time.perf_counter()
        answer = oracle.query(batch, strict=req.strict)
        elapsed = time.perf_counter() - t0
        out = sch.UndirectedQueryResponse(answer=answer, elapsed_s=elapsed)
        if req.brute_force:
            updated = oracle.graph.apply(batch.normalized(oracle.graph, strict=req.strict, undirected=True))
            out.brute_force_answer = bf_kpath(updated, oracle.k)
            out.match = out.brute_force_answer == answer
        return out

    # -- state transport --------------------------------------------------------

    @app.post("/oracles/load", response_model=sch.LoadStateResponse)
    def oracles_load(req: sch.LoadStateRequest):
        obj = load_state(base64.b64decode(req.state_b64))
        return sch.LoadStateResponse(
            oracle_id=oracles.put(obj), kind=type(obj).__name__
        )

    @app.get("/oracles/{oracle_id}/state")
    def oracles_state(oracle_id: str):
        obj = oracles.get(oracle_id)
        try:
            data = obj.serialize()
        except AttributeError:
            raise ParseError("this oracle kind is not serializable")
        return Response(content=data, media_type="application/octet-stream")

    @app.delete("/oracles/{oracle_id}")
    def oracles_drop(oracle_id: str):
        oracles.drop(oracle_id)
        return {"dropped": oracle_id}

    # -- dynamic sessions ---------------------------------------------------------

    @app.post("/dynamic/sessions", response_model=sch.SessionCreateResponse)
    def session_create(req: sch.SessionCreateRequest):
        sess = DynamicSession(
            req.problem, req.mode, req.seed, k=req.k, m=req.m, d=req.d,
            count=req.count, epsilon=req.epsilon,
        )
        return sch.SessionCreateResponse(session_id=sessions.put(sess))

    @app.post("/dynamic/sessions/{session_id}/lines", response_model=sch.SessionLinesResponse)
    def session_lines(session_id: str, req: sch.SessionLinesRequest):
        sess = sessions.get(session_id)
        outputs = []
        with sessions.lock(session_id):
            for line in req.lines:
                res = sess.feed(line)
                if res is not None:
                    outputs.append(res)
        return sch.SessionLinesResponse(outputs=outputs)

    @app.delete("/dynamic/sessions/{session_id}")
    def session_drop(session_id: str):
        sessions.drop(session_id)
        return {"dropped": session_id}

    @app.post("/dynamic/run", response_model=sch.SessionLinesResponse)
    def session_run(req: sch.SessionRunRequest):
        sess = DynamicSession(
            req.problem, req.mode, req.seed, k=req.k, m=req.m, d=req.d,
            count=req.count, epsilon=req.epsilon,
        )
        return sch.SessionLinesResponse(outputs=sess.run(req.script))

    # -- constrained variants --------------------------------------------------------

    @app.post("/constrained/kwalk-repeat", response_model=sch.AnswerResponse)
    def kwalk_repeat(req: sch.KWalkRequest):
        graph = _directed_graph(req.graph)
        t0 = time.perf_counter()
        oracle = kwalk_one_repeat_build(graph, req.k, req.seed)
        answer = oracle.query(parse_update_script(req.updates))
        return sch.AnswerResponse(answer=answer, elapsed_s=time.perf_counter() - t0)

    @app.post("/constrained/occupancy", response_model=sch.AnswerResponse)
    def occupancy(req: sch.OccupancyRequest):
        graph, spec = parse_constrained_graph(req.graph)
        t0 = time.perf_counter()
        oracle = constrained_kpath_build(graph, req.k, spec, req.seed)
        answer = oracle.query(parse_update_script(req.updates))
        return sch.AnswerResponse(answer=answer, elapsed_s=time.perf_counter() - t0)

    return app

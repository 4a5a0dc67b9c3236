"""Command-line front end.

The CLI is a thin client of the service: by default it spins the FastAPI
app up in-process (no daemon needed) and talks to it over an ASGI
transport; ``--server URL`` targets a running instance instead.  All
randomness is seed-injected and stdout is byte-deterministic for fixed
inputs; timings go to stderr.

Exit codes: 0 ok, 2 parse error, 3 capability limit, 4 bad state file.
"""

from __future__ import annotations

import base64
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import httpx

_EXIT_CODES = {"parse": 2, "capability": 3, "state": 4}


class ClientError(click.ClickException):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


class ServiceClient:
    """HTTP client bound to a remote server or an in-process app."""

    def __init__(self, server: str | None = None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app(), raise_server_exceptions=False)

    def request(self, method: str, path: str, **kwargs):
        try:
            resp = self._client.request(method, path, **kwargs)
        except httpx.HTTPError as exc:
            raise ClientError(f"service unreachable: {exc}", 1)
        if resp.status_code >= 400:
            try:
                detail = resp.json()["detail"]
                code = detail.get("code", "error")
                message = detail.get("message", str(detail))
            except Exception:
                code, message = "error", resp.text
            raise ClientError(message, _EXIT_CODES.get(code, 1))
        return resp

    def post(self, path: str, payload: dict) -> dict:
        return self.request("POST", path, json=payload).json()


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ClientError(f"cannot read {path}: {exc}", 2)


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ClientError(f"cannot read {path}: {exc}", 4)


def _note(msg: str) -> None:
    click.echo(msg, err=True)


@click.group()
def main():
    """Extensor-coded sensitivity oracles and dynamic solvers."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8642, show_default=True)
def serve(host: str, port: int):
    """Run the oracle service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


# -- directed k-path ------------------------------------------------------------


@main.group()
def kpath():
    """Directed k-path sensitivity oracle."""


@kpath.command("preprocess")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--k", required=True, type=int)
@click.option("--mode", type=click.Choice(["rand", "det"]), default="rand", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--vertex-failures", is_flag=True, help="support vertex failures in queries")
@click.option("--amplification", default=1, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--server", default=None, help="URL of a running service")
def kpath_preprocess(graph_path, k, mode, seed, vertex_failures, amplification, out_path, server):
    """Preprocess a directed graph; writes the oracle state file."""
    client = ServiceClient(server)
    res = client.post(
        "/kpath/preprocess",
        dict(
            graph=_read(graph_path), k=k, mode=mode, seed=seed,
            vertex_failures=vertex_failures, amplification=amplification,
            store=False, include_state=True,
        ),
    )
    with open(out_path, "wb") as fh:
        fh.write(base64.b64decode(res["state_b64"]))
    _note(f"preprocessed n={res['n']} m={res['m']} in {res['elapsed_s']:.3f}s")
    click.echo("YES" if res["answer"] else "NO")


def _run_queries(client, endpoint, state_path, update_paths, brute_force, parallel, permissive):
    state_b64 = base64.b64encode(_read_bytes(state_path)).decode()
    loaded = client.post("/oracles/load", dict(state_b64=state_b64))
    oid = loaded["oracle_id"]
    scripts = [(p, _read(p)) for p in update_paths]

    def one(script: str) -> dict:
        return client.post(
            endpoint,
            dict(oracle_id=oid, updates=script, brute_force=brute_force,
                 strict=not permissive),
        )

    try:
        if parallel and len(scripts) > 1:
            with ThreadPoolExecutor(max_workers=min(8, len(scripts))) as pool:
                results = list(pool.map(one, [s for _, s in scripts]))
        else:
            results = [one(s) for _, s in scripts]
    finally:
        client.request("DELETE", f"/oracles/{oid}")
    for (path, _), res in zip(scripts, results):
        prefix = f"{path}: " if len(scripts) > 1 else ""
        line = "YES" if res["answer"] else "NO"
        if brute_force:
            line += " MATCH" if res["match"] else " MISMATCH"
        click.echo(prefix + line)
        _note(f"{path}: query {res['elapsed_s']:.6f}s")


@kpath.command("query")
@click.option("--state", "state_path", required=True, type=click.Path())
@click.option("--updates", "update_paths", required=True, multiple=True, type=click.Path())
@click.option("--brute-force", is_flag=True, help="cross-check against exhaustive search")
@click.option("--parallel-queries", is_flag=True, help="fan update files across worker threads")
@click.option("--permissive", is_flag=True, help="drop invalid updates instead of failing")
@click.option("--server", default=None)
def kpath_query(state_path, update_paths, brute_force, parallel_queries, permissive, server):
    """Answer one sensitivity query per update file."""
    _run_queries(ServiceClient(server), "/kpath/query", state_path, update_paths,
                 brute_force, parallel_queries, permissive)


@kpath.command("count")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--k", required=True, type=int)
@click.option("--epsilon", default=0.5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--vertex-failures", is_flag=True)
@click.option("--updates", "updates_path", default=None, type=click.Path())
@click.option("--server", default=None)
def kpath_count(graph_path, k, epsilon, seed, vertex_failures, updates_path, server):
    """Estimate the number of k-paths, optionally after an update batch."""
    client = ServiceClient(server)
    res = client.post(
        "/kpath/count/preprocess",
        dict(graph=_read(graph_path), k=k, epsilon=epsilon, seed=seed,
             vertex_failures=vertex_failures),
    )
    if updates_path:
        res = client.post(
            "/kpath/count/query",
            dict(oracle_id=res["oracle_id"], updates=_read(updates_path)),
        )
    click.echo(f"COUNT {res['estimate']:g}")


# -- undirected k-path ------------------------------------------------------------


@main.group()
def undirected():
    """Undirected k-path sensitivity oracle."""


@undirected.command("preprocess")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--k", required=True, type=int)
@click.option("--trials", default=None, type=int, help="independent partitions")
@click.option("--seed", default=0, show_default=True)
@click.option("--bipartite", "sides_path", default=None, type=click.Path(),
              help="two-line sides file fixing the partition")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--server", default=None)
def undirected_preprocess(graph_path, k, trials, seed, sides_path, out_path, server):
    client = ServiceClient(server)
    res = client.post(
        "/undirected/preprocess",
        dict(graph=_read(graph_path), k=k, trials=trials, seed=seed,
             sides=_read(sides_path) if sides_path else None,
             store=False, include_state=True),
    )
    with open(out_path, "wb") as fh:
        fh.write(base64.b64decode(res["state_b64"]))
    _note(f"preprocessed {res['trials']} trials in {res['elapsed_s']:.3f}s")
    click.echo("YES" if res["answer"] else "NO")


@undirected.command("query")
@click.option("--state", "state_path", required=True, type=click.Path())
@click.option("--updates", "update_paths", required=True, multiple=True, type=click.Path())
@click.option("--brute-force", is_flag=True)
@click.option("--parallel-queries", is_flag=True)
@click.option("--permissive", is_flag=True)
@click.option("--server", default=None)
def undirected_query(state_path, update_paths, brute_force, parallel_queries, permissive, server):
    _run_queries(ServiceClient(server), "/undirected/query", state_path, update_paths,
                 brute_force, parallel_queries, permissive)


# -- dynamic problems ------------------------------------------------------------


@main.command()
@click.option("--problem", required=True,
              type=click.Choice(["exact-cover", "partial-cover", "packing", "tdom", "matching"]))
@click.option("--k", default=None, type=int, help="validated against the session header")
@click.option("--m", default=None, type=int)
@click.option("--d", default=None, type=int)
@click.option("--mode", type=click.Choice(["rand", "det"]), default="rand", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--count", is_flag=True, help="approximate-count variant (packing)")
@click.option("--epsilon", default=0.5, show_default=True)
@click.option("--session", "session_path", required=True,
              help="script file, or - for stdin")
@click.option("--server", default=None)
def dynamic(problem, k, m, d, mode, seed, count, epsilon, session_path, server):
    """Drive a dynamic session; one output line per insert and per query."""
    client = ServiceClient(server)
    script = sys.stdin.read() if session_path == "-" else _read(session_path)
    mode_full = {"rand": "randomized", "det": "deterministic"}[mode]
    created = client.post(
        "/dynamic/sessions",
        dict(problem=problem, mode=mode_full, seed=seed, k=k, m=m, d=d,
             count=count, epsilon=epsilon),
    )
    sid = created["session_id"]
    try:
        for line in script.splitlines():
            res = client.post(f"/dynamic/sessions/{sid}/lines", dict(lines=[line]))
            for out in res["outputs"]:
                click.echo(out)
    finally:
        client.request("DELETE", f"/dynamic/sessions/{sid}")


# -- constrained variants ------------------------------------------------------------


@main.group()
def constrained():
    """Constrained walk/path detection."""


@constrained.command("kwalk-repeat")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--k", required=True, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--updates", "updates_path", default=None, type=click.Path())
@click.option("--server", default=None)
def constrained_kwalk(graph_path, k, seed, updates_path, server):
    """k-walk visiting at least k-1 distinct vertices."""
    client = ServiceClient(server)
    res = client.post(
        "/constrained/kwalk-repeat",
        dict(graph=_read(graph_path), k=k, seed=seed,
             updates=_read(updates_path) if updates_path else ""),
    )
    click.echo("YES" if res["answer"] else "NO")


@constrained.command("occupancy")
@click.option("--graph", "graph_path", required=True, type=click.Path(),
              help="graph file with V1/V2/mu lines appended")
@click.option("--k", required=True, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--updates", "updates_path", default=None, type=click.Path())
@click.option("--server", default=None)
def constrained_occupancy(graph_path, k, seed, updates_path, server):
    """k-path with per-subset occupancy quotas."""
    client = ServiceClient(server)
    res = client.post(
        "/constrained/occupancy",
        dict(graph=_read(graph_path), k=k, seed=seed,
             updates=_read(updates_path) if updates_path else ""),
    )
    click.echo("YES" if res["answer"] else "NO")


if __name__ == "__main__":
    main()

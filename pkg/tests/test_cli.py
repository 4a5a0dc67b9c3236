"""CLI behavior: outputs, exit codes, determinism, state files."""

from __future__ import annotations

import pytest
from click.testing import CliRunner

from xtno.cli import main

PATH3 = "3 2 directed\n1 2\n2 3\n"
UPATH4 = "4 3 undirected\n1 2\n2 3\n3 4\n"


@pytest.fixture
def runner():
    return CliRunner()


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def test_preprocess_and_query_roundtrip(runner):
    with runner.isolated_filesystem():
        _write("g.txt", PATH3)
        _write("del.txt", "- 2 3\n")
        _write("empty.txt", "")
        res = runner.invoke(
            main,
            ["kpath", "preprocess", "--graph", "g.txt", "--k", "3", "--mode", "det",
             "--seed", "1", "--out", "st.bin"],
        )
        assert res.exit_code == 0
        assert res.stdout == "YES\n"
        q = runner.invoke(
            main, ["kpath", "query", "--state", "st.bin", "--updates", "empty.txt"]
        )
        assert q.exit_code == 0 and q.stdout == "YES\n"
        q2 = runner.invoke(
            main,
            ["kpath", "query", "--state", "st.bin", "--updates", "del.txt",
             "--brute-force"],
        )
        assert q2.exit_code == 0 and q2.stdout == "NO MATCH\n"


def test_small_k_prints_no(runner):
    with runner.isolated_filesystem():
        _write("g.txt", PATH3)
        res = runner.invoke(
            main,
            ["kpath", "preprocess", "--graph", "g.txt", "--k", "4", "--mode", "det",
             "--out", "st.bin"],
        )
        assert res.exit_code == 0 and res.stdout == "NO\n"


def test_exit_codes(runner):
    with runner.isolated_filesystem():
        _write("bad.txt", "not a graph\n")
        _write("g.txt", PATH3)
        res = runner.invoke(
            main, ["kpath", "preprocess", "--graph", "bad.txt", "--k", "3",
                   "--out", "x.bin"])
        assert res.exit_code == 2
        res = runner.invoke(
            main, ["kpath", "preprocess", "--graph", "g.txt", "--k", "99",
                   "--out", "x.bin"])
        assert res.exit_code == 3
        _write("st.bin", "XTNOgarbage")
        _write("empty.txt", "")
        res = runner.invoke(
            main, ["kpath", "query", "--state", "st.bin", "--updates", "empty.txt"])
        assert res.exit_code == 4
        _write("zero.txt", "+ 0 1\n")
        ok = runner.invoke(
            main, ["kpath", "preprocess", "--graph", "g.txt", "--k", "2",
                   "--out", "st2.bin"])
        assert ok.exit_code == 0
        res = runner.invoke(
            main, ["kpath", "query", "--state", "st2.bin", "--updates", "zero.txt"])
        assert res.exit_code == 2


def test_outputs_are_byte_deterministic(runner):
    outs = []
    for _ in range(2):
        with runner.isolated_filesystem():
            _write("g.txt", PATH3)
            _write("ins.txt", "+ 3 1\n")
            runner.invoke(
                main, ["kpath", "preprocess", "--graph", "g.txt", "--k", "3",
                       "--mode", "rand", "--seed", "42", "--out", "st.bin"])
            with open("st.bin", "rb") as fh:
                state = fh.read()
            q = runner.invoke(
                main, ["kpath", "query", "--state", "st.bin", "--updates", "ins.txt"])
            outs.append((state, q.stdout))
    assert outs[0] == outs[1]


def test_parallel_queries(runner):
    with runner.isolated_filesystem():
        _write("g.txt", PATH3)
        _write("a.txt", "")
        _write("b.txt", "- 2 3\n")
        runner.invoke(
            main, ["kpath", "preprocess", "--graph", "g.txt", "--k", "3",
                   "--mode", "det", "--out", "st.bin"])
        res = runner.invoke(
            main, ["kpath", "query", "--state", "st.bin", "--updates", "a.txt",
                   "--updates", "b.txt", "--parallel-queries"])
        assert res.exit_code == 0
        assert res.stdout == "a.txt: YES\nb.txt: NO\n"


def test_vertex_failures_flow(runner):
    with runner.isolated_filesystem():
        _write("g.txt", PATH3)
        _write("f.txt", "x 2\n")
        runner.invoke(
            main, ["kpath", "preprocess", "--graph", "g.txt", "--k", "2",
                   "--seed", "3", "--vertex-failures", "--out", "st.bin"])
        res = runner.invoke(
            main, ["kpath", "query", "--state", "st.bin", "--updates", "f.txt",
                   "--brute-force"])
        assert res.exit_code == 0 and res.stdout == "NO MATCH\n"


def test_undirected_commands(runner):
    with runner.isolated_filesystem():
        _write("g.txt", UPATH4)
        _write("del.txt", "- 2 3\n")
        res = runner.invoke(
            main, ["undirected", "preprocess", "--graph", "g.txt", "--k", "4",
                   "--trials", "100", "--seed", "2", "--out", "st.bin"])
        assert res.exit_code == 0 and res.stdout == "YES\n"
        q = runner.invoke(
            main, ["undirected", "query", "--state", "st.bin", "--updates", "del.txt",
                   "--brute-force"])
        assert q.stdout == "NO MATCH\n"
        _write("sides.txt", "1 3\n2 4\n")
        bip = runner.invoke(
            main, ["undirected", "preprocess", "--graph", "g.txt", "--k", "4",
                   "--bipartite", "sides.txt", "--out", "b.bin"])
        assert bip.exit_code == 0 and bip.stdout == "YES\n"
        odd = runner.invoke(
            main, ["undirected", "preprocess", "--graph", "g.txt", "--k", "3",
                   "--bipartite", "sides.txt", "--out", "c.bin"])
        assert odd.exit_code == 3


def test_dynamic_command(runner):
    with runner.isolated_filesystem():
        _write("sess.txt", "4 3\n+ 1 2\n+ 3\n?\n- 2\n?\n")
        res = runner.invoke(
            main, ["dynamic", "--problem", "exact-cover", "--mode", "det",
                   "--seed", "1", "--session", "sess.txt"])
        assert res.exit_code == 0
        assert res.stdout == "1\n2\nYES\nNO\n"
    res = runner.invoke(
        main, ["dynamic", "--problem", "matching", "--d", "2", "--mode", "det",
               "--session", "-"],
        input="9 1\n+ 1 1\n?\n",
    )
    assert res.exit_code == 0 and res.stdout == "1\nYES\n"


def test_constrained_commands(runner):
    with runner.isolated_filesystem():
        _write("cyc.txt", "3 3 directed\n1 2\n2 3\n3 1\n")
        res = runner.invoke(main, ["constrained", "kwalk-repeat", "--graph", "cyc.txt",
                                   "--k", "4"])
        assert res.exit_code == 0 and res.stdout == "YES\n"
        _write("occ.txt", "3 2 directed\n1 2\n2 3\nV1: 2\nV2:\n1 0\n")
        res = runner.invoke(main, ["constrained", "occupancy", "--graph", "occ.txt",
                                   "--k", "3"])
        assert res.exit_code == 0 and res.stdout == "YES\n"


def test_roundtrip_across_processes(tmp_path):
    """preprocess | serialize | fresh process | query reproduces the answer."""
    import subprocess
    import sys

    g = tmp_path / "g.txt"
    g.write_text(PATH3)
    st = tmp_path / "st.bin"
    empty = tmp_path / "empty.txt"
    empty.write_text("")

    def run(*args):
        return subprocess.run(
            [sys.executable, "-m", "xtno.cli", *args],
            capture_output=True, text=True, check=True,
        ).stdout

    first = run("kpath", "preprocess", "--graph", str(g), "--k", "3",
                "--mode", "rand", "--seed", "7", "--out", str(st))
    again = run("kpath", "query", "--state", str(st), "--updates", str(empty))
    assert first == again == "YES\n"


def test_count_command(runner):
    with runner.isolated_filesystem():
        _write("g.txt", "3 1 directed\n1 2\n")
        _write("ins.txt", "+ 2 3\n")
        res = runner.invoke(
            main, ["kpath", "count", "--graph", "g.txt", "--k", "3",
                   "--epsilon", "0.5", "--seed", "1", "--updates", "ins.txt"])
        assert res.exit_code == 0
        val = float(res.stdout.split()[1])
        assert 0.3 <= val <= 1.7

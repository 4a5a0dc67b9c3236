"""Session text-format driver tests."""

from __future__ import annotations

import pytest

from xtno.errors import ParseError
from xtno.sessions import DynamicSession


def run(problem, script, **kw):
    return DynamicSession(problem, **kw).run(script)


def test_exact_cover_session():
    out = run(
        "exact-cover",
        "4 3\n+ 1 2\n+ 3\n?\n- 2\n?\n",
        mode="deterministic",
        seed=1,
    )
    assert out == ["1", "2", "YES", "NO"]


def test_fresh_state_answers_negative():
    assert run("exact-cover", "4 2\n?\n", mode="deterministic") == ["NO"]
    assert run("partial-cover", "4 2\n?\n", mode="deterministic") == ["NONE"]


def test_handles_are_the_only_removal_keys():
    out = run("exact-cover", "4 2\n+ 1 2\n- 7\n?\n", mode="deterministic")
    assert out[0] == "1"
    assert out[1].startswith("ERR")
    assert out[2] == "YES"


def test_partial_cover_session():
    out = run(
        "partial-cover",
        "8 4\n+ 1 2\n+ 2 3\n+ 4\n?\n+ 5 6 7 8\n?\n",
        mode="deterministic",
        seed=2,
    )
    assert out == ["1", "2", "3", "MIN 3", "4", "MIN 1"]


def test_packing_session_and_count():
    out = run("packing", "8 2\n+ 1 2\n+ 3 4\n?\n", mode="deterministic", m=2)
    assert out[-1] == "YES"
    counted = run("packing", "8 2\n+ 1 2\n+ 3 4\n+ 5 6\n?\n", m=2, count=True, epsilon=0.5)
    val = float(counted[-1].split()[1])
    assert 1.5 <= val <= 4.5


def test_matching_session():
    out = run("matching", "9 2\n+ 1 1\n+ 2 2\n?\n- 2\n?\n", mode="deterministic", d=2)
    assert out == ["1", "2", "YES", "NO"]


def test_tdom_session():
    out = run(
        "tdom",
        "4 4\n+e 1 2\n+e 1 3\n+e 1 4\n?\n-e 1 4\n?\n",
        mode="deterministic",
    )
    assert out == ["MIN 1", "MIN 2"]


def test_header_conflicts_and_malformed_lines():
    with pytest.raises(ParseError):
        run("exact-cover", "4 3\n?\n", k=2)
    with pytest.raises(ParseError):
        run("exact-cover", "oops\n")
    with pytest.raises(ParseError):
        run("exact-cover", "4 2\n* 1\n")
    with pytest.raises(ParseError):
        run("exact-cover", "4 2\n+ 9\n")  # above the declared universe
    with pytest.raises(ParseError):
        run("packing", "4 2\n+ 1 2\n")  # missing --m
    with pytest.raises(ParseError):
        run("nonsense", "4 2\n")

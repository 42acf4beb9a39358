import os
from pathlib import Path

import pytest

import etopaq

FIXTURES = Path(os.environ.get("ETOPAQ_FIXTURES", Path(__file__).resolve().parents[2] / "fixtures"))


def load(name):
    return etopaq.Automaton.load(str(FIXTURES / f"{name}.ta"))


def test_round_trip():
    ta = load("ta1")
    assert etopaq.Automaton.parse(ta.text()).text() == ta.text()
    assert "lpriv" in ta.locations
    assert ta.validate() == []


def test_opaque_synthesis():
    res = etopaq.solve(load("ta_opaque"), "full")
    assert res["status"] == "SAT"
    phi = (FIXTURES / "phi_star.msf").read_text()
    assert res["strategy"] == phi
    assert etopaq.check(load("ta_opaque"), phi) is None


def test_verdicts():
    ta1 = load("ta1")
    assert etopaq.solve(ta1, "full")["status"] == "UNSAT"
    assert etopaq.solve(ta1, "weak")["status"] == "SAT"
    assert "[1,1]" in etopaq.exists(ta1)
    assert etopaq.solve(ta1, "full", state_cap=2)["status"] == "INDETERMINATE"


def test_counterexample():
    ta = load("ta_counterex")
    assert etopaq.check(ta, (FIXTURES / "counterex.msf").read_text()) == "(2,3)"


def test_simulate():
    rows = etopaq.simulate(load("ta1"), (FIXTURES / "ta1_all_enabled.msf").read_text(), 4)
    assert rows[1] == ("(0,1)", False, True)


def test_minsky():
    out = etopaq.minsky("HALT\n")
    assert out["ok"] and (out["locations"], out["edges"]) == (19, 96)


def test_errors():
    with pytest.raises(ValueError, match="line 1"):
        etopaq.Automaton.parse("frobnicate\n")
    with pytest.raises(ValueError):
        etopaq.solve(load("ta1"), "sideways")

import json

import pytest

import lie_sfunctions.darboux as darboux_mod
import lie_sfunctions.pipeline as pipeline_mod
from lie_sfunctions.errors import SolverBudgetExceeded
from lie_sfunctions.parser import parse_rational
from lie_sfunctions.poly import RationalFunction

from helpers import EX1, EX1_FLAGS, EX2, S1_EX2, cli, cli_report

SMALL = ["--deg-s", "1", "--deg-darboux", "1"]


def test_verify_supplied_s():
    code, rep, _, _ = cli_report("verify", EX2, "--s=" + S1_EX2)
    assert code == 0
    (s,) = rep["s_functions"]
    assert s["riccati_ok"] is True and s["residual"] == "0"


def test_verify_rejects_wrong_s():
    code, rep, _, _ = cli_report("verify", EX2, "--s", "(x+y*z)/y^2")
    assert code == 2
    assert rep["s_functions"][0]["riccati_ok"] is False


def test_verify_eta():
    code, rep, _, _ = cli_report("verify", "y'' = y", "--eta", "y")
    assert code == 0
    (e,) = rep["symmetries"]
    assert e["verified"] is True and e["residual"] == "0"


def test_verify_first_integral():
    code, rep, _, _ = cli_report("verify", "y'' = 0", "--I", "y - x*z", "--I", "z")
    assert code == 0
    assert [f["verified"] for f in rep["first_integrals"]] == [True, True]
    code, rep, _, _ = cli_report("verify", "y'' = 0", "--I", "y")
    assert code == 2 and rep["first_integrals"][0]["D_x"] == "z"


def test_darboux_example_two():
    code, rep, _, _ = cli_report("darboux", EX2, "--deg", "2", "--no-timings")
    assert code == 0
    ps = {parse_rational(d["p"]) for d in rep["darboux_D"]}
    assert ps == {parse_rational(t) for t in ("y", "y^2 - i*y*z - 1/2*i*x", "y^2 + i*y*z + 1/2*i*x")}


def test_report_schema():
    code, rep, _, _ = cli_report("analyze", EX1, *EX1_FLAGS)
    assert code == 0
    for key in ("schema", "version", "command", "ode", "darboux_D", "eigenpolys_scriptD", "s_functions",
                "symmetries", "first_integrals", "diagnostics", "search", "config_echo", "timings"):
        assert key in rep
    assert rep["config_echo"]["deg_s"] == 4 and rep["config_echo"]["deg_darboux"] == 1
    for y in rep["symmetries"]:
        assert {"S", "eta_bar", "rational_part", "exp_argument", "power_factors", "verified", "family"} <= set(y)
    for f in rep["first_integrals"]:
        assert f["status"] in ("ClosedForm", "GradientOnly")
        assert len(f["gradient"]) == 3


def test_no_timings_is_byte_stable():
    a = cli(["analyze", "y'' = y", "--format", "json", "--no-timings"])
    b = cli(["analyze", "y'' = y", "--format", "json", "--no-timings"])
    assert a == b and a[0] == 0
    assert "timings" not in json.loads(a[1])


def test_text_format():
    code, out, _ = cli(["analyze", "y'' = 0", "--no-timings"])
    assert code == 0
    assert out.startswith("ODE: y'' = 0")
    assert "S = 0   riccati_ok = True" in out
    assert "eta_bar = " in out and "I = " in out


def test_from_report(tmp_path):
    code, out, _ = cli(["sfunctions", "y'' = 0", "--format", "json"])
    assert code == 0
    path = tmp_path / "r.json"
    path.write_text(out)
    code, out, _ = cli(["first-integrals", "y'' = 0", "--from-report", str(path), "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["first_integrals"] and all(f["verified"] for f in rep["first_integrals"])


def test_exit_parse_error():
    code, out, err = cli(["analyze", "y'' = (x + ", "--no-timings"])
    assert code == 3 and out == ""
    assert "^" in err


def test_exit_nothing_found():
    code, _, _ = cli(["analyze", "y'' = x*y + z^2", *SMALL])
    assert code == 2


def test_exit_budget(monkeypatch):
    def exhausted(equations, n, budget):
        raise SolverBudgetExceeded("budget", [], 1)

    monkeypatch.setattr(darboux_mod, "solve_system", exhausted)
    code, out, _ = cli(["sfunctions", "y'' = y", *SMALL, "--format", "json"])
    assert code == 4
    rep = json.loads(out)
    assert rep["search"]["budget_hits"] == rep["search"]["systems"] > 0


def test_exit_internal_verification(monkeypatch):
    real = pipeline_mod.certify_s

    def broken(ode, S):
        return real(ode, S) + RationalFunction.const(1)

    monkeypatch.setattr(pipeline_mod, "certify_s", broken)
    code, out, err = cli(["analyze", "y'' = 0", "--no-timings"])
    assert code == 5
    assert "internal verification failure" in err


@pytest.mark.parametrize("bad", [["--deg-s", "x"], ["--format", "yaml"]])
def test_argument_errors(bad):
    with pytest.raises(SystemExit):
        cli(["analyze", "y'' = 0", *bad])

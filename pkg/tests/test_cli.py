import json
import shutil
import subprocess

import pytest

from qradial.cli import main
from qradial.coeff import Q, T, RatFunc
from qradial.report import VerificationReport
from qradial.suites import SUITES, plan


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("HC_CACHE_DIR", str(tmp_path / "cache"))


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_macdonald_trivial(capsys):
    code, out, _ = _run(capsys, "macdonald", "--n", "2", "--lambda", "1,0")
    assert code == 0
    assert out.strip() == "m[1,0]"


def test_macdonald_json_coefficient(capsys, tmp_path):
    code, out, _ = _run(capsys, "macdonald", "--n", "2", "--lambda", "2,0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    coeffs = {e["mu"]: RatFunc.parse(e["ratfunc"]) for e in data["coeffs"]}
    assert coeffs["1,1"] == (1 - T ** 2) * (1 + Q ** 2) / (1 - Q ** 2 * T ** 2)
    assert (tmp_path / "cache" / "macdonald-n2.json").exists()


def test_macdonald_t_power(capsys):
    code, out, _ = _run(capsys, "macdonald", "--n", "2", "--lambda", "2,0", "--t-power", "2")
    assert code == 0
    # t = q^2: (1 - q^4)(1 + q^2)/(1 - q^6) = (1 + q^2)^2/(1 + q^2 + q^4)
    assert "(1 + 2*q^2 + q^4)/(1 + q^2 + q^4)" in out


def test_macdonald_latex(capsys):
    code, out, _ = _run(capsys, "macdonald", "--n", "2", "--lambda", "2,0", "--format", "latex")
    assert code == 0
    assert out.startswith("m_{(2,0)} + ")
    assert r"\frac" in out


@pytest.mark.parametrize("lam", ["0,1", "1,x", "1,0,0"])
def test_macdonald_bad_weight_exit_2(capsys, lam):
    code, _, err = _run(capsys, "macdonald", "--n", "2", "--lambda", lam)
    assert code == 2
    assert "error" in err


def test_trace_a(capsys):
    code, out, _ = _run(capsys, "trace", "--n", "2", "--pattern", "A")
    assert code == 0
    assert out.splitlines() == ["q^-1*a[1,1] + q*a[2,2]", "q->1: tr(X)"]


def test_trace_ab_inverse_limit(capsys):
    code, out, _ = _run(capsys, "trace", "--n", "2", "--pattern", "A B^-1")
    assert code == 0
    assert out.splitlines()[-1] == "q->1: tr(X*Y)"


def test_trace_empty_is_quantum_dimension(capsys):
    code, out, _ = _run(capsys, "trace", "--n", "3", "--pattern", "")
    assert code == 0
    assert RatFunc.parse(out.splitlines()[0]) == Q ** -2 + 1 + Q ** 2
    assert out.splitlines()[1] == "q->1: 3"


def test_trace_parse_error_exit_2(capsys):
    code, _, err = _run(capsys, "trace", "--n", "2", "--pattern", "A^x")
    assert code == 2


def test_verify_pass_and_report_round_trip(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = _run(capsys, "verify", "--suite", "ek-ratio", "--n", "2", "--k", "2",
                        "--max-deg", "3", "--report", str(path))
    assert code == 0
    assert "PASS" in out
    rep = VerificationReport.from_json(path.read_text())
    assert rep.suite == "ek-ratio" and rep.passed
    assert rep.params == {"n": 2, "k": 2, "max_deg": 3}
    assert VerificationReport.from_json(rep.to_json()).to_dict()["checks"] == rep.to_dict()["checks"]


def test_verify_yang_baxter(capsys):
    code, _, _ = _run(capsys, "verify", "--suite", "yang-baxter", "--n", "3")
    assert code == 0


def test_verify_failure_exit_1(capsys):
    # the literal det prefactor fails (see the decision log)
    code, out, _ = _run(capsys, "verify", "--suite", "radial-dictionary", "--n", "2", "--k", "2",
                        "--max-deg", "0", "--json")
    assert code == 1
    data = json.loads(out)
    assert data["status"] == "fail"
    assert all(c["witness"] for c in data["checks"] if c["status"] == "fail")


def test_verify_unknown_suite_exit_2(capsys):
    code, _, _ = _run(capsys, "verify", "--suite", "nope")
    assert code == 2


def test_verify_parallel_matches_serial(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _run(capsys, "verify", "--suite", "degeneration", "--report", str(a))
    _run(capsys, "verify", "--suite", "degeneration", "--jobs", "2", "--report", str(b))
    ca = [(c["name"], c["status"]) for c in json.loads(a.read_text())["checks"]]
    cb = [(c["name"], c["status"]) for c in json.loads(b.read_text())["checks"]]
    assert ca == cb


def test_every_suite_has_a_plan():
    for s in SUITES:
        assert plan(s)


def test_size_caps_shrink_plans():
    full = plan("macdonald-eigen")
    small = plan("macdonald-eigen", n=2, max_deg=1)
    assert len(small) < len(full)
    assert all(args[-1] == 1 for _, _, args in small)


def test_cache_commands(capsys, tmp_path):
    _run(capsys, "macdonald", "--n", "2", "--lambda", "1,1")
    code, out, _ = _run(capsys, "cache", "path")
    assert code == 0 and out.strip() == str(tmp_path / "cache")
    code, _, _ = _run(capsys, "cache", "clear")
    assert code == 0
    assert not (tmp_path / "cache").exists()


def test_no_command_is_usage_error(capsys):
    assert main([]) == 2


@pytest.mark.skipif(shutil.which("hc") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["hc", "macdonald", "--n", "2", "--lambda", "1,0"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "m[1,0]"

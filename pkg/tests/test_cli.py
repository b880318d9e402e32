import io
import json
import subprocess
import sys

import pytest

from qmodel.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def test_list_suites():
    code, out = run("list-suites")
    assert code == 0 and len(out.strip().splitlines()) == 13


def test_homogeneous_identity_suite_passes():
    code, out = run("verify", "--suite", "appendix-c")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["suite"] == "appendix-c"
    assert all(c["residual"] == "exact-zero" for c in doc["checks"] if not c["expect_fail"])


def test_generating_matrix_suite_residuals():
    code, out = run("verify", "--suite", "theorem1", "--q", "1.3", "--ncap", "10")
    doc = json.loads(out)
    assert code == 0
    assert all(c["residual"] == "exact-zero" or c["residual"] <= 1e-10 for c in doc["checks"]
               if not c["expect_fail"])


def test_unknown_suite_is_usage_error():
    assert run("verify", "--suite", "nope")[0] == 2


@pytest.mark.parametrize("argv", [
    ["verify"],
    ["verify", "--suite", "dybe", "--q", "bogus"],
    ["verify", "--suite", "dybe", "--q", "circle:1.0"],
    ["verify", "--suite", "dybe", "--ncap", "x"],
    ["cgc", "--j", "7/3", "--q", "1"],
    ["cgc", "--j", "1/2", "--q", "circle:abc"],
    ["umatrix", "--jmax", "1", "--q", "1.3", "--variant", "nope"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_text_format_and_report_file(tmp_path):
    path = tmp_path / "r.json"
    code, out = run("verify", "--suite", "dybe", "--q", "0.7", "--report", str(path))
    assert code == 0 and "report written" in out
    assert json.loads(path.read_text())["pass"]
    code, out = run("verify", "--suite", "dybe", "--q", "0.7", "--format", "text")
    assert out.strip().splitlines()[-1].startswith("OVERALL PASS")


def test_unwritable_report(tmp_path):
    code, _ = run("verify", "--suite", "appendix-c", "--report", str(tmp_path / "no" / "x.json"))
    assert code == 2


def test_failure_exit_code():
    # a tolerance below float resolution makes numeric checks fail
    code, out = run("verify", "--suite", "dybe", "--q", "1.3", "--tol", "1e-30")
    assert code == 1 and json.loads(out)["pass"] is False


def test_grid_fans_out_and_orders():
    code, out = run("verify", "--suite", "qarith-identities", "--suite", "appendix-c", "--grid",
                    "--ncap", "8")
    doc = json.loads(out)
    assert code == 0
    assert doc["suite"] == ["qarith-identities", "appendix-c"]
    assert doc["params"]["ncap"] == [8, 10]
    seen = [(c["suite"], c["params"].get("q"), c["params"].get("ncap")) for c in doc["checks"]]
    firsts = list(dict.fromkeys(seen))
    assert len([s for s in firsts if s[0] == "qarith-identities"]) == 8
    assert len([s for s in firsts if s[0] == "appendix-c"]) == 1
    # ordering is stable across runs
    assert out == run("verify", "--suite", "qarith-identities", "--suite", "appendix-c",
                      "--grid", "--ncap", "8")[1]


def test_config_file(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# settings\nsuite = dybe\nq = 1.3, 0.7\nformat = text\nncap = 8\n")
    code, out = run("verify", "--config", str(cfg))
    assert code == 0 and out.startswith("PASS dybe")
    # command line wins over the file
    code, out = run("verify", "--config", str(cfg), "--format", "json", "--q", "circle:pi/40")
    doc = json.loads(out)
    assert doc["params"]["q"] == ["circle:0.0785398163397"]
    cfg.write_text("colour = blue\n")
    assert run("verify", "--config", str(cfg), "--suite", "dybe")[0] == 2


def test_cgc_command():
    code, out = run("cgc", "--j", "1/2", "--q", "1")
    rows = out.strip().splitlines()[1:]
    assert code == 0 and len(rows) == 6
    assert any("0.7071067811865476" in r for r in rows)
    code, out = run("cgc", "--j", "0", "--q", "1.3", "--format", "json", "--cross-check")
    doc = json.loads(out)
    assert code == 0 and [r[3] for r in doc["rows"]] == ["1/2", "1/2"]
    assert doc["cross_check_max_deviation"] < 1e-12


def test_umatrix_command():
    code, out = run("umatrix", "--jmax", "1", "--q", "1.3", "--variant", "family:0,0,0",
                    "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["variant"] == "family:0,0,0" and len(doc["rows"]) > 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qmodel", "list-suites"], capture_output=True,
                         text=True, check=False)
    assert res.returncode == 0 and "dybe" in res.stdout


def test_internal_failure_exit_code(monkeypatch):
    from qmodel import suites

    def boom(qp, ncap, tol):
        raise RuntimeError("boom")

    spec = suites.SUITES["dybe"]
    monkeypatch.setitem(suites.SUITES, "dybe", type(spec)(spec.name, spec.modules, boom))
    assert run("verify", "--suite", "dybe")[0] == 3

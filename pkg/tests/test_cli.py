import io
import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from degdyn.cli import commands, run
from degdyn.numerics import read_pgm
from degdyn.onedim import periodic_points

SCHEMA = json.loads(resources.files("degdyn").joinpath("schema/degdyn-1.json").read_text())
PHI = (1 + math.sqrt(5)) / 2


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    doc = json.loads(out.getvalue()) if out.getvalue().strip() else None
    if doc is not None:
        jsonschema.Draft202012Validator(SCHEMA).validate(doc)
    return code, doc, err.getvalue()


@pytest.fixture(autouse=True)
def _in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def test_degrees_fibonacci(tmp_path):
    code, doc, _ = invoke("degrees", "--map", "(z*w+1, z+2)", "--model", "biproj", "--n", "10")
    assert code == 0 and doc["status"] == "ok" and doc["command"] == "degrees"
    res = doc["result"]
    assert res["degrees"][-1] == [[89, 55], [55, 34]]
    assert res["lambda1"]["value"] == pytest.approx(PHI, abs=1e-6)
    assert doc["config"]["n"] == 10 and doc["config"]["model"] == "biproj"


def test_degrees_on_p2_reports_submultiplicativity():
    code, doc, _ = invoke("degrees", "--map", "(z*w+1, z+2)", "--model", "proj", "--n", "4", "--seed", "3")
    assert code == 0 and doc["result"]["degrees"][:2] == [2, 3] and doc["seed"] == 3


def test_lyapunov_routes():
    code, doc, _ = invoke("lyapunov", "--map", "z^2-2", "--samples", "20000", "--seed", "1")
    res = doc["result"]
    assert code == 0
    assert res["chi_critical"] == pytest.approx(math.log(2), abs=1e-9)
    assert abs(res["chi_birkhoff"] - math.log(2)) <= 0.02


def test_green_grid_writes_artifacts(tmp_path):
    code, doc, _ = invoke("green", "--map", "z^2-2", "--grid", "-3:3:-2:2:61")
    assert code == 0
    assert "green.pgm" in doc["artifacts"] and "green.csv" in doc["artifacts"]
    values, meta = read_pgm(tmp_path / "green.pgm")
    assert values.shape == (meta["height"], meta["width"])
    box = doc["result"]["zero_set_box"]
    assert box is not None


def test_green_point():
    code, doc, _ = invoke("green", "--map", "z^2-2", "--point", "3")
    assert code == 0
    assert json.dumps(doc["result"]).count("0.9624236501") >= 1


def test_measure_is_reproducible_from_recorded_seed():
    _, first, _ = invoke("measure", "--map", "z^2-2", "--samples", "500", "--depth", "20")
    seed = first["seed"]
    assert isinstance(seed, int)
    _, again, _ = invoke("measure", "--map", "z^2-2", "--samples", "500", "--depth", "20",
                         "--seed", str(seed))
    assert first["result"] == again["result"]


def test_thread_count_does_not_change_results():
    args = ["measure", "--map", "z^2-2", "--samples", "3000", "--depth", "25", "--seed", "9"]
    _, one, _ = invoke(*args, "--threads", "1")
    _, four, _ = invoke(*args, "--threads", "4")
    assert one["result"] == four["result"]


@pytest.mark.parametrize("argv", [
    ["topdeg", "--map", "(z^2+1-w, z)"],
    ["classify-quadratic", "--map", "(w+1, z*w+2)"],
    ["monomial", "--matrix", "1 1; 1 0", "--n", "5"],
    ["periodic", "--map", "z^2-1", "--n", "3", "--no-reference"],
    ["equidist", "--map", "z^2-2", "--start", "5", "--depths", "1-4"],
    ["mixing", "--map", "z^2-2", "--samples", "5000", "--n-max", "4", "--seed", "1"],
    ["sweep", "--grid", "-2:2:-2:2:5:5"],
    ["henon", "--map", "z^2", "--a", "0.3", "--period", "1"],
    ["regularity", "--henon", "z^2", "--a", "1"],
    ["fixcount", "--map", "(z^2, w^2)", "--period", "1", "--holomorphic"],
])
def test_every_command_emits_a_valid_document(argv):
    code, doc, err = invoke(*argv)
    assert code == 0, err
    assert doc["command"] == argv[0]


def test_monomial_command_values():
    _, doc, _ = invoke("monomial", "--matrix", "1 1; 1 0", "--n", "5")
    assert doc["result"]["lambda1"] == pytest.approx(PHI) and doc["result"]["lambdak"] == 1


def test_fixcount_values():
    _, doc, _ = invoke("fixcount", "--map", "(z^2, w^2)", "--period", "1", "--holomorphic")
    assert doc["result"]["affine_count"] == 4 and doc["result"]["lefschetz_total"] == 7


# ------------------------------------------------------------- exit codes


@pytest.mark.parametrize("argv", [
    ["degrees", "--map", "(z*w + )", "--n", "3"],
    ["degrees", "--map", "(z*w+1, z+2)", "--n", "3", "--bogus"],
    ["equidist", "--map", "z^2", "--start", "0", "--depths", "1-3"],
    ["fixcount", "--map", "(z^2, w^2)", "--period", "0"],
    ["nonsense"],
])
def test_input_errors_exit_2(argv):
    code, doc, err = invoke(*argv)
    assert code == 2 and doc is None and err


def test_degree_guard_exits_2(monkeypatch):
    from degdyn.degrees import DegreeGuardError

    def guarded(*a, **k):
        raise DegreeGuardError("degree bound exceeds cap", largest_safe_n=9)

    monkeypatch.setattr(commands, "degree_sequence", guarded)
    code, doc, err = invoke("degrees", "--map", "(z^2, w^2)", "--n", "30")
    assert code == 2 and "guard" in err


def test_numerical_failure_exits_3_with_document(monkeypatch):
    def unconverged(*a, **k):
        res = periodic_points(*a, **k)
        res.converged = False
        return res

    monkeypatch.setattr(commands, "periodic_points", unconverged)
    code, doc, err = invoke("periodic", "--map", "z^2-1", "--n", "2", "--no-reference")
    assert code == 3 and doc["status"] == "numerical-failure" and "numerical failure" in err


# ------------------------------------------------------------------ config


def test_config_supplies_values_and_flags_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# degree run\nmap = (z*w+1, z+2)\nmodel = biproj\nn = 6\n")
    code, doc, _ = invoke("degrees", "--config", str(cfg))
    assert code == 0 and len(doc["result"]["degrees"]) == 6
    code, doc, _ = invoke("degrees", "--config", str(cfg), "--n", "3")
    assert code == 0 and len(doc["result"]["degrees"]) == 3 and doc["config"]["n"] == 3


def test_config_boolean_spellings(tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("map = z^2-1\nn = 2\nno-reference = yes\n")
    code, doc, _ = invoke("periodic", "--config", str(cfg))
    assert code == 0 and doc["result"]["distance"] is None


def test_unknown_config_key_exits_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("map = z^2\ncolour = blue\n")
    code, _, err = invoke("green", "--config", str(cfg), "--point", "2")
    assert code == 2 and "colour" in err


def test_output_file(tmp_path):
    code, doc, _ = invoke("topdeg", "--map", "(w, z^2)", "--output", str(tmp_path / "o.json"))
    assert code == 0 and doc is None
    written = json.loads((tmp_path / "o.json").read_text())
    jsonschema.Draft202012Validator(SCHEMA).validate(written)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "degdyn", "topdeg", "--map", "(z^2, w^2)"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["topological_degree"] == 4


def test_sweep_csv_columns(tmp_path):
    invoke("sweep", "--grid", "-1:1:-1:1:3:3")
    header = (tmp_path / "sweep.csv").read_text().splitlines()[0]
    assert "chi" in header

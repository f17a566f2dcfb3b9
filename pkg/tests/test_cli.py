import json
import os
import subprocess
import sys

import pytest

from domdisc import cli
from domdisc.cli import EXIT_INDETERMINATE, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, RunConfig, main
from domdisc.domains import PointClass


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_classify_point(capsys):
    code, rep = run_json(capsys, "classify", "--point", "[1,0,-1,0]")
    assert code == EXIT_OK
    assert rep["tag"] == "Interior2" and rep["label"] == "Interior2(0, 1.5708, 4.7124)"
    code, rep = run_json(capsys, "classify", "--point", "[0,1,-1,0]")
    assert rep["tag"] == "Interior2"
    code, rep = run_json(capsys, "classify", "--point", "[1,0,0,0]")
    assert rep["label"] == "BoundaryFrenet(0)"


def test_classify_plane(capsys):
    code, rep = run_json(capsys, "classify", "--plane", "[0,0,0,1]")
    assert code == EXIT_OK and rep["label"] == "Tangent(0)"
    code, rep = run_json(capsys, "classify", "--plane", '{"dim": 3, "basis": [[1,0,0,0],[0,1,0,0],[0,0,1,0]]}')
    assert rep["label"] == "Tangent(0)"


def test_classify_indeterminate(capsys, monkeypatch):
    # genuine ambiguity needs a degenerate root scan, so the outcome is injected
    monkeypatch.setattr(cli, "classify_point", lambda *a: PointClass("Indeterminate", (), 0.0, []))
    code, rep = run_json(capsys, "classify", "--point", "[1,-3,3,-1]")
    assert code == EXIT_INDETERMINATE and rep["label"] == "Indeterminate"


@pytest.mark.parametrize("argv", [
    ["classify", "--point", "[0,0,0,0]"],
    ["classify", "--point", "[1,2"],
    ["classify"],
    ["classify", "--point", "[1,0,0,0]", "--plane", "[0,0,0,1]"],
    ["classify", "--point", "[1,0,0,0]", "--seed", "-1"],
    ["classify", "--point", "[1,0,0,0]", "--chart", "1,0,0"],
    ["classify", "--point", "[1,0,0,0]", "--curve", "sphere"],
    ["slice", "--plane", "[0,0,0,1]", "--resolution", "4"],
    ["mesh", "--grid", "1"],
    ["leaves", "--family", "G_xyz", "--params", "0,1"],
    ["leaves", "--family", "G_pcf", "--through", "[0,1,-1,0]"],
    ["verify", "--suite", "nope"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and err.startswith("domdisc: error:")


def test_slice_svg_and_json(capsys, tmp_path):
    out = tmp_path / "s.svg"
    code, _, _ = run(capsys, "slice", "--plane", "[0,0,1,0]", "--out", str(out), "--resolution", "512")
    assert code == EXIT_OK
    text = out.read_text()
    assert text.count('class="arc"') == 2 and text.count('class="cusp"') == 1
    code, rep = run_json(capsys, "slice", "--plane", "[0,0,1,0]", "--format", "json", "--resolution", "512")
    assert code == EXIT_OK and rep["config"]["resolution"] == 512


def test_mesh_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "mesh", "--grid", "4")
    assert code == EXIT_OK and out.count("\nf ") + out.startswith("f ") == 32
    ply = tmp_path / "m.ply"
    assert main(["mesh", "--grid", "4", "--format", "ply", "--out", str(ply)]) == EXIT_OK
    assert ply.read_bytes().startswith(b"ply\n")


def test_leaves(capsys):
    code, rep = run_json(capsys, "leaves", "--family", "g_tcf", "--params", "0,3.141592653589793")
    assert code == EXIT_OK and rep["family"] == "G_tcf"
    labels = [e["label"] for e in rep["leaves"][0]["endpoints"]]
    assert labels == ["BoundaryFrenet(0)", "BoundaryFrenet(3.1416)"]
    code, rep = run_json(capsys, "leaves", "--family", "G_ctaf", "--through", "[0,1,-1,0]")
    assert len(rep["leaves"]) == 3
    code, rep = run_json(capsys, "leaves", "--family", "G_pcf", "--through", "[1,0,1,0]")
    assert len(rep["leaves"]) == 1


def test_verify_exit_and_determinism(capsys):
    code, a = run(capsys, "verify", "--suite", "gp-lemma,tetrachotomy", "--n", "20", "--seed", "7")[:2]
    assert code == EXIT_OK
    assert a == run(capsys, "verify", "--suite", "gp-lemma,tetrachotomy", "--n", "20", "--seed", "7")[1]
    rep = json.loads(a)
    assert rep["passed"] and [s["suite"] for s in rep["suites"]] == ["gp-lemma", "tetrachotomy"]


def test_verify_failure_exit(capsys):
    code, rep = run_json(capsys, "verify", "--suite", "tetrachotomy", "--n", "5", "--tol-rank", "1e-30")
    assert code in (EXIT_OK, EXIT_VERIFY)
    assert (code == EXIT_OK) == rep["passed"]


def test_config_roundtrip():
    cfg = RunConfig("veronese", [1.0, 0.0, 0.0, 0.0], None, 3, 512, 1e-9, 1e-8, None, "json")
    assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    assert cfg.tolerances().rank == 1e-9 and cfg.tolerances().bnd == 1e-8


def test_console_script():
    env = dict(os.environ, DOMDISC_NO_NUMBA="1")
    exe = os.path.join(os.path.dirname(sys.executable), "domdisc")
    cmd = [exe] if os.path.exists(exe) else [sys.executable, "-m", "domdisc.cli"]
    out = subprocess.run(cmd + ["classify", "--plane", "[0,0,0,1]"], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["label"] == "Tangent(0)"

import json
import subprocess
import sys

import pytest

from levicartan import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--n", "6", "--lparts", "1,2,3", "--hparts", "3,3")
    assert code == 0
    assert json.loads(out)["case"] == "I"


def test_classify_not_surjective(capsys):
    code, out, _ = run(capsys, "classify", "--lparts", "2,2,2", "--hparts", "3,3")
    assert code == 0
    assert json.loads(out)["case"] == "NotSurjective"


def test_decompose_haar(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "4", "--lparts", "2,2", "--hparts", "2,2",
                       "--haar", "--seed", "42")
    assert code == 0
    doc = json.loads(out)
    assert doc["residual"] <= 1e-8 * 4
    assert doc["case"] == "0"


def test_decompose_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "d.json"
    code, _, _ = run(capsys, "decompose", "--lparts", "1,2,3", "--hparts", "3,3", "--haar",
                     "--seed", "7", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "verify", "--in", str(path))
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verify_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "d.json"
    run(capsys, "decompose", "--lparts", "2,2", "--hparts", "1,3", "--haar", "--out", str(path))
    doc = json.loads(path.read_text())
    doc["word"][0]["theta"] += 0.1
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--in", str(path))
    assert code == 2
    assert json.loads(out)["residual_ok"] is False


def test_decompose_from_sampled_matrix(capsys, tmp_path):
    path = tmp_path / "g.json"
    assert run(capsys, "sample", "--n", "5", "--seed", "3", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "decompose", "--in", str(path), "--lparts", "2,3",
                       "--hparts", "1,1,3")
    assert code == 0
    assert json.loads(out)["case"] == "I'"


def test_decompose_not_surjective(capsys):
    code, out, err = run(capsys, "decompose", "--lparts", "1,1,1", "--hparts", "1,1,1", "--haar")
    assert code == 3
    assert out == "" and "levicartan:" in err


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--n", "3", "--lparts", "1,1,1", "--hparts", "1,1,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["charpoly_exact"] == [{"re": "1", "im": "0"}, {"re": "0", "im": "2"}]


def test_certify_exact(capsys):
    code, out, _ = run(capsys, "certify", "--lparts", "2,2,2", "--hparts", "2,2,2", "--exact")
    doc = json.loads(out)
    assert code == 0 and doc["rechecked"] is True
    assert doc["loop_product_exact"]["re"][0][0] == {"num": 0, "den": 1}
    assert doc["loop_product_exact"]["im"][0][0] == {"num": -2, "den": 1}


@pytest.mark.parametrize("argv", [
    ["classify", "--lparts", "1,x", "--hparts", "2"],
    ["classify", "--lparts", "1,2"],
    ["classify", "--n", "4", "--lparts", "1,2", "--hparts", "3"],
    ["decompose", "--lparts", "2,2", "--hparts", "2,2"],
    ["verify", "--in", "/nonexistent/file.json"],
    ["frobnicate"],
    [],
])
def test_usage_and_io_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 4
    assert out == ""


def test_sample_many(capsys):
    code, out, _ = run(capsys, "sample", "--n", "3", "--samples", "2", "--seed", "5")
    doc = json.loads(out)
    assert code == 0 and len(doc["matrices"]) == 2 and doc["n"] == 3


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "4", "--samples", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["failures"] == 0
    assert doc["summary"]["specs"] == len(doc["rows"])
    assert {r["case"] for r in doc["rows"]} >= {"0", "NotSurjective"}


def test_output_is_deterministic(capsys):
    argv = ["decompose", "--lparts", "1,1,2", "--hparts", "2,2", "--haar", "--seed", "11"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "levicartan", "classify", "--lparts", "2,2",
                           "--hparts", "2,2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["case"] == "0"

import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from sullivan.cdga import parse_presentation, validate
from sullivan.cli import main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def schema(name):
    return json.loads(resources.files("sullivan").joinpath("schemas", f"{name}.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, command, *rest):
    code, out, err = run(capsys, command, *rest)
    data = json.loads(out) if out.strip() else None
    if data is not None:
        jsonschema.validate(data, schema(command))
    return code, data, err


def test_cohomology_heisenberg(capsys):
    code, data, _ = run_json(capsys, "cohomology", CORPUS / "heisenberg.cdga", "--max-degree", "3",
                             "--format", "json")
    assert code == 0 and data["dims"] == [1, 2, 2, 1]


def test_model_wedge(capsys):
    code, data, _ = run_json(capsys, "model", CORPUS / "wedge2.target", "--max-stage", "4")
    assert code == 0
    assert [e["cumulative_dim"] for e in data["stage_log"]] == [2, 3, 5, 8, 14]
    assert data["stabilized"] is False and data["kind"] == "degree1"
    model = parse_presentation(data["model"])
    assert validate(model).minimal and len(model.table) == 14


def test_model_sphere(capsys):
    code, data, _ = run_json(capsys, "model", CORPUS / "s2.target", "--max-degree", "7")
    assert code == 0 and data["kind"] == "sc" and data["checks"]["iso_through"] == 7
    assert [r["dim"] for r in data["finite_type"]] == [0, 1, 1, 0, 0, 0, 0]


def test_validate_bad(capsys):
    code, data, _ = run_json(capsys, "validate", CORPUS / "bad.cdga")
    assert code == 1 and data["d_squared_zero"] is False and data["violations"]


@pytest.mark.parametrize("name", ["heisenberg.cdga", "rel_z_w.cdga", "torus.target"])
def test_validate_good(capsys, name):
    code, data, _ = run_json(capsys, "validate", CORPUS / name)
    assert code == 0 and data["ok"]


def test_homotopy_and_lie(capsys):
    code, data, _ = run_json(capsys, "homotopy", CORPUS / "s2.cdga", "--max-degree", "6")
    assert code == 0 and data["pi"] == {"2": 1, "3": 1, "4": 0, "5": 0, "6": 0}
    code, data, _ = run_json(capsys, "lie", CORPUS / "heisenberg.cdga", "--depth", "3")
    assert data["lcs"] == [[1, 2], [2, 1], [3, 0]] and data["nilpotency_index"] == 2
    assert data["brackets"] == [[0, 1, ["0", "0", "-1"]]]
    code, data, _ = run_json(capsys, "lie", CORPUS / "wedge2.target", "--max-stage", "4", "--depth", "5")
    assert data["lcs"] == [[1, 2], [2, 1], [3, 2], [4, 3], [5, 6]]


def test_holonomy(capsys):
    code, data, _ = run_json(capsys, "holonomy", CORPUS / "rel_z_w.cdga", "--trials", "30")
    assert code == 0
    assert data["matrices"]["2"]["z"] == [["0", "0"], ["1", "0"]]
    assert data["nilpotency"]["2"]["z"] == 2 and data["nilpotent"]
    assert data["lemma31"] == {"trials": 30, "passed": 30}
    assert data["filtration"] == {"w1": 0, "w2": 1}


def test_lemma31(capsys):
    code, data, _ = run_json(capsys, "lemma31", CORPUS / "rel_tower.cdga", "--trials", "50", "--seed", "9")
    assert code == 0 and data["passed"] == 50


def test_apl_check(capsys):
    code, data, _ = run_json(capsys, "apl-check", CORPUS / "circle_dt.family.json")
    assert code == 0 and data["cochain"]["c1"] == "-1"
    code, data, _ = run_json(capsys, "apl-check", CORPUS / "delta2.sset.json", CORPUS / "delta2.family.json")
    assert code == 0 and data["cochain_map"]
    code, data, _ = run_json(capsys, "apl-check", CORPUS / "heisenberg.cdga", CORPUS / "heisenberg_sigma.json")
    assert code == 0 and data["valid"]
    code, data, _ = run_json(capsys, "apl-check", CORPUS / "heisenberg.cdga", CORPUS / "bad_sigma.json")
    assert code == 1 and not data["valid"]


def test_errors(capsys, tmp_path):
    bad = tmp_path / "x.cdga"
    bad.write_text("gen a 1\ngen b 1\ndiff a = b\n")
    code, out, err = run(capsys, "cohomology", bad)
    assert code == 1 and out == ""
    payload = json.loads(err)
    jsonschema.validate(payload, schema("error"))
    assert payload["error"] == "parse_error" and payload["line"] == 3
    code, out, err = run(capsys, "cohomology", tmp_path / "missing.cdga")
    assert code == 1 and json.loads(err)["error"] == "FileNotFound"
    code, _, err = run(capsys, "holonomy", CORPUS / "rel_self.cdga")
    assert code == 1 and json.loads(err)["error"] == "filtration_error"
    code, _, err = run(capsys, "holonomy", CORPUS / "heisenberg.cdga")
    assert code == 1


def test_cell_cap_exit(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("SULLIVAN_MAX_CELLS", "5")
    big = tmp_path / "big.cdga"
    big.write_text("".join(f"gen x{i} 1\n" for i in range(8)) + "maxdeg 5\n")
    code, _, err = run(capsys, "cohomology", big, "--max-degree", "3")
    assert code == 1 and json.loads(err)["error"] == "cap_exceeded"


def test_usage_errors(capsys):
    for argv in (["frobnicate", "x"], ["cohomology"], ["cohomology", "a", "--max-degree", "0"],
                 ["cohomology", "a", "--format", "xml"], ["lemma31", "a", "b"]):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2
    capsys.readouterr()


def test_tsv(capsys):
    code, out, _ = run(capsys, "cohomology", CORPUS / "heisenberg.cdga", "--max-degree", "3", "--format", "tsv")
    lines = out.strip().split("\n")
    assert lines[0] == "degree\tdim\trepresentatives" and lines[2].startswith("1\t2\t")
    code, out, _ = run(capsys, "model", CORPUS / "wedge2.target", "--max-stage", "2", "--format", "tsv")
    assert out.split("\n")[1:4] == ["0\t2\t2", "1\t1\t3", "2\t2\t5"]


def test_determinism_subprocess():
    argv = [sys.executable, "-m", "sullivan.cli", "holonomy", str(CORPUS / "rel_two_base.cdga"),
            "--trials", "40", "--seed", "4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["lemma31"]["passed"] == 40


@pytest.mark.parametrize("command, args", [
    ("cohomology", ["s2.cdga"]), ("cohomology", ["torus.target"]), ("cohomology", ["rel_tower.cdga"]),
    ("model", ["rp2.target"]), ("model", ["cp2.target"]), ("model", ["torus.target"]),
    ("homotopy", ["wedge2.target"]), ("lie", ["torus.cdga"]), ("validate", ["s2.target"]),
    ("holonomy", ["rel_odd.cdga"]), ("holonomy", ["rel_even_base.cdga"]),
    ("apl-check", ["delta3.family.json"]), ("apl-check", ["boundary2_exact.family.json"]),
])
def test_schemas(capsys, command, args):
    code, data, _ = run_json(capsys, command, *[CORPUS / a for a in args])
    assert code == 0 and data is not None

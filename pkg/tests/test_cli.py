import json
import subprocess
import sys

import pytest

from pfaffsurf.cli import run
from pfaffsurf.generators import tetrahedron


def call(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_3x3_torus(capsys):
    code, out, _ = call(capsys, "count", "--fixture", "torus_grid_3x3", "--puncture", "8")
    assert code == 0 and out.strip() == "1024"


def test_count_all_punctures(capsys):
    code, out, _ = call(capsys, "count", "--fixture", "cube", "--puncture", "all")
    assert code == 0 and out.split() == ["128"] * 6


def test_count_json(capsys):
    code, out, _ = call(capsys, "count", "--fixture", "tetrahedron", "--puncture", "2", "--format", "json")
    assert json.loads(out) == {"complex": "tetrahedron", "puncture": 2, "count": 8}


def test_brute_count_and_cap(capsys):
    code, out, _ = call(capsys, "brute-count", "--fixture", "prism_3", "--puncture", "0")
    assert code == 0 and out.strip() == "32"
    code, _, err = call(capsys, "brute-count", "--fixture", "cube", "--puncture", "0", "--cap", "8")
    assert code == 3
    assert json.loads(err)["error"] == "TooLarge"


def test_validate_and_euler(capsys):
    code, out, _ = call(capsys, "validate", "--fixture", "one_face_torus")
    assert code == 0
    assert out.startswith("ok one_face_torus")
    assert "warning zero-incidence" in out
    code, out, _ = call(capsys, "euler", "--fixture", "genus_2_polygon", "--format", "json")
    assert json.loads(out) == {"v": 1, "d": 4, "p": 1, "chi": -2, "genus": 2}


def test_invalid_input_file(capsys, tmp_path):
    t = tetrahedron()
    data = t.to_dict()
    data["faces"] = data["faces"][:3]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    code, out, _ = call(capsys, "validate", "--input", str(path), "--format", "json")
    assert code == 1
    report = json.loads(out)
    assert report["ok"] is False
    code, _, err = call(capsys, "count", "--input", str(path), "--puncture", "0")
    assert code == 1
    assert json.loads(err)["error"] == "InvalidComplex"


def test_io_and_parse_errors(capsys, tmp_path):
    code, _, err = call(capsys, "count", "--fixture", "klein_bottle", "--puncture", "0")
    assert code == 2 and json.loads(err)["error"] == "UnknownFixture"
    code, _, _ = call(capsys, "count", "--input", str(tmp_path / "missing.json"), "--puncture", "0")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call(capsys, "euler", "--input", str(bad))
    assert code == 2 and json.loads(err)["error"] == "ParseError"


def test_unknown_face(capsys):
    code, _, err = call(capsys, "count", "--fixture", "tetrahedron", "--puncture", "9")
    assert code == 1 and json.loads(err)["error"] == "UnknownFace"


def test_construct_then_check(capsys, tmp_path):
    code, out, _ = call(capsys, "construct", "--fixture", "labelled_torus", "--puncture", "8", "--format", "json")
    assert code == 0
    path = tmp_path / "o.json"
    path.write_text(out)
    code, out, _ = call(capsys, "check", "--fixture", "labelled_torus", "--puncture", "8", "--orientation", str(path))
    assert code == 0 and out.strip() == "puncture=8 pfaffian=true"


@pytest.mark.parametrize("bits,expected_code", [([0] * 6, 1), ([1] + [0] * 5, 0)])
def test_check_verdicts(capsys, tmp_path, bits, expected_code):
    path = tmp_path / "o.json"
    path.write_text(json.dumps({"complex": "tetrahedron", "bits": bits}))
    code, out, _ = call(capsys, "check", "--fixture", "tetrahedron", "--puncture", "all",
                        "--orientation", str(path), "--format", "json")
    verdicts = {json.loads(line)["pfaffian"] for line in out.splitlines()}
    assert verdicts == {expected_code == 0}
    assert code == expected_code


def test_check_rejects_bad_orientation_file(capsys, tmp_path):
    path = tmp_path / "o.json"
    path.write_text(json.dumps({"bits": [3]}))
    code, _, err = call(capsys, "check", "--fixture", "tetrahedron", "--puncture", "0", "--orientation", str(path))
    assert code == 2 and json.loads(err)["error"] == "ParseError"


def test_enumerate_with_limit(capsys, tmp_path):
    target = tmp_path / "all.jsonl"
    code, out, _ = call(capsys, "enumerate", "--fixture", "labelled_torus", "--puncture", "8",
                        "--limit", "3", "--out", str(target), "--format", "json")
    assert code == 0
    assert json.loads(out) == {"emitted": 3, "total": 1024, "truncated": True}
    lines = target.read_text().splitlines()
    assert len(lines) == 3
    assert all(len(json.loads(line)["bits"]) == 18 for line in lines)


def test_enumerate_rejects_all(capsys):
    code, _, _ = call(capsys, "enumerate", "--fixture", "tetrahedron", "--puncture", "all")
    assert code == 2


def test_enumerate_needs_limit_for_huge_sets(capsys, tmp_path):
    path = tmp_path / "grid.json"
    from pfaffsurf.generators import torus_grid

    path.write_text(torus_grid(5, 5).to_json())
    code, _, err = call(capsys, "enumerate", "--input", str(path), "--puncture", "0")
    assert code == 3 and json.loads(err)["error"] == "TooLarge"


def test_matchings_modes(capsys):
    code, out, _ = call(capsys, "matchings", "--fixture", "tetrahedron", "--puncture", "0", "--signs")
    assert code == 0
    assert "matchings=1" in out and "sum=" in out
    code, out, _ = call(capsys, "matchings", "--fixture", "cube", "--puncture", "all", "--involution-check")
    assert out.count("involution_ok=true") == 6
    code, out, _ = call(capsys, "matchings", "--fixture", "tetrahedron", "--puncture", "0", "--format", "dot")
    assert out.count("digraph G") == 2


def test_matchings_json(capsys):
    code, out, _ = call(capsys, "matchings", "--fixture", "torus_grid_2x2", "--puncture", "3", "--format", "json")
    data = json.loads(out)
    assert len(data["r_edges"]) == 3
    assert data["matchings"][0]["acyclic"] is True


@pytest.mark.parametrize("dump,rows", [("incidence", 18), ("pfaffian", 22), ("reduced", 22)])
def test_matrix_dumps(capsys, dump, rows):
    code, out, _ = call(capsys, "matrix", "--fixture", "labelled_torus", "--puncture", "8", "--dump", dump)
    assert code == 0
    assert len(out.splitlines()) == rows


def test_output_file(capsys, tmp_path):
    target = tmp_path / "count.txt"
    code, out, _ = call(capsys, "count", "--fixture", "tetrahedron", "--puncture", "0", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().strip() == "8"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pfaffsurf", "count", "--fixture", "one_face_torus", "--puncture", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "4"


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        run(["count", "--fixture", "cube"])
    assert info.value.code == 2

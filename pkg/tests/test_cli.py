import json
import pathlib

import pytest

from flatfold.cli import main

DATA = pathlib.Path(__file__).parent / "data"


def test_check_passes_on_golden(capsys):
    assert main(["check", str(DATA / "square_diagonal.json")]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "cone points: 3" in out


def test_check_fails_on_bad_instance(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "polygons": [{"id": "p", "vertices": [[0, 0], [2, 0], [2, 1], [0, 1]]}],
        "gluings": [
            {"a": ["p", 0, 2], "b": ["p", 2, 3]},
            {"a": ["p", 3, 6], "b": ["p", 3, 6]},
        ],
    }))
    # inconsistent arc lengths -> refine raises -> reported as an error
    assert main(["check", str(bad)]) == 2


def test_solve_flat_writes_document(tmp_path, capsys):
    out = tmp_path / "result.json"
    svg = tmp_path / "result.svg"
    rc = main(["solve", str(DATA / "square_diagonal.json"),
               "--out", str(out), "--svg", str(svg), "--timing"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "flat"
    assert doc["half_areas"] == pytest.approx([0.5, 0.5], abs=1e-9)
    assert "timing" in doc
    assert "<svg" in svg.read_text()


def test_solve_stdout_default(capsys):
    rc = main(["solve", str(DATA / "hexagon.json")])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "flat"
    assert doc["rim"]["vertices"] == ["a", "b", "c"]


def test_solve_not_flat_exit_1(capsys):
    rc = main(["solve", str(DATA / "tetrahedron.json")])
    assert rc == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "not_flat"
    assert "polygon" not in doc


def test_solve_trace_goes_to_stderr(capsys):
    rc = main(["solve", str(DATA / "tetrahedron.json"), "--trace"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "start=" in err and "reject=" in err


def test_solve_with_oracle_route(capsys):
    rc = main(["solve", str(DATA / "square_diagonal.json"), "--oracle"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "flat"


def test_missing_file_exit_2(capsys):
    assert main(["solve", "/nonexistent/nope.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_invalid_json_exit_2(tmp_path, capsys):
    p = tmp_path / "garbage.json"
    p.write_text("{not json")
    assert main(["solve", str(p)]) == 2
    assert "error:" in capsys.readouterr().err


def test_failing_conditions_exit_2(tmp_path, capsys):
    # a gluing that leaves part of the boundary unmatched
    p = tmp_path / "gap.json"
    p.write_text(json.dumps({
        "polygons": [{"id": "p", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        "gluings": [{"a": ["p", 0, 1], "b": ["p", 1, 2]}],
    }))
    assert main(["solve", str(p)]) == 2
    assert "error:" in capsys.readouterr().err

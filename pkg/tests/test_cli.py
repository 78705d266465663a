import json

import pytest

from hypdel import equilateral as E
from hypdel.cli import main


@pytest.fixture(scope="module")
def spec_file(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    spec = {"genus": 2, "graph": [[0, 0], [0, 1], [1, 1]],
            "lengths": [1.0, 1.0, 1.0], "twists": [0.0, 0.0, 0.0]}
    f = d / "spec.json"
    f.write_text(json.dumps(spec))
    return f


@pytest.fixture(scope="module")
def triangulation_file(spec_file, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli-tri") / "tri.json"
    assert main(["triangulate", str(spec_file), "--out", str(out)]) == 0
    return out


def test_build_surface(spec_file, tmp_path, capsys):
    out = tmp_path / "surface.json"
    assert main(["build-surface", str(spec_file),
                 "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["genus"] == 2
    assert d["thin_cylinders"] == 3
    assert "genus 2" in capsys.readouterr().out


def test_triangulate_deterministic(spec_file, triangulation_file,
                                   tmp_path):
    out2 = tmp_path / "tri2.json"
    assert main(["triangulate", str(spec_file), "--out", str(out2)]) == 0
    assert out2.read_bytes() == triangulation_file.read_bytes()


def test_verify_good(spec_file, triangulation_file, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    svg = tmp_path / "tri.svg"
    code = main(["verify", str(spec_file), str(triangulation_file),
                 "--out", str(cert), "--svg", str(svg)])
    assert code == 0
    assert json.loads(cert.read_text())["passed"] is True
    assert svg.read_text().startswith("<svg")
    assert "ok" in capsys.readouterr().out


def test_verify_corrupted(spec_file, triangulation_file, tmp_path):
    d = json.loads(triangulation_file.read_text())
    del d["triangles"][0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    assert main(["verify", str(spec_file), str(bad)]) == 1


def test_bounds(spec_file, triangulation_file, capsys):
    assert main(["bounds", str(spec_file),
                 str(triangulation_file)]) == 0
    out = capsys.readouterr().out
    assert "N = " in out and "ok" in out


def test_report(spec_file, tmp_path):
    out = tmp_path / "report.json"
    assert main(["report", str(spec_file), "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["verify"]["passed"] is True
    assert d["v"] <= d["bound_151g"]


def test_equilateral_k12(tmp_path, capsys):
    import importlib.resources as ir
    rot = ir.files("hypdel").joinpath("data/k12_rotation.txt").read_text()
    f = tmp_path / "k12.txt"
    f.write_text(rot)
    out = tmp_path / "k12.json"
    assert main(["equilateral", str(f), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["genus"] == 6
    assert "K_12" in capsys.readouterr().out


def test_equilateral_k7_rejected(tmp_path, capsys):
    rows = {i: [(i + d) % 7 for d in (1, 3, 2, 6, 4, 5)]
            for i in range(7)}
    f = tmp_path / "k7.txt"
    f.write_text("\n".join(f"{v}: " + " ".join(map(str, rows[v]))
                           for v in range(7)))
    assert main(["equilateral", str(f)]) == 1
    assert "not hyperbolizable" in capsys.readouterr().out


def test_input_errors(tmp_path, spec_file):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert main(["build-surface", str(garbage)]) == 2
    assert main(["build-surface", str(tmp_path / "missing.json")]) == 2
    bad_graph = tmp_path / "bad_graph.json"
    bad_graph.write_text(json.dumps(
        {"genus": 2, "graph": [[0, 0], [0, 1], [0, 1]],
         "lengths": [1.0] * 3, "twists": [0.0] * 3}))
    assert main(["build-surface", str(bad_graph)]) == 2
    bad_rot = tmp_path / "bad_rot.txt"
    bad_rot.write_text("0 - 1 2\n")
    assert main(["equilateral", str(bad_rot)]) == 2

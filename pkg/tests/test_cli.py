import json
import re

import numpy as np
import pytest

from parkable import bodies
from parkable.cli import main

SMALL = ["--dirs", "16", "--blaschke-dirs", "8", "--psi-dirs", "8"]


@pytest.fixture()
def files(tmp_path):
    out = {}
    for name, body in {
        "cube": bodies.cube(),
        "square": bodies.cube(dim=2),
        "ball": bodies.ball(3),
        "segment": bodies.convex_hull([[1.0, 0.0], [2.0, 0.0]]),
        "edge": bodies.convex_hull([[-1, -0.5], [1, -0.5]]),
        "triangle": bodies.convex_hull([[-1, -0.5], [1, -0.5], [0, 1]]),
        "point": bodies.convex_hull([[0.3, 0.4]]),
        "gon64": bodies.regular_polygon(64),
    }.items():
        path = tmp_path / f"{name}.json"
        bodies.save(body, path)
        out[name] = str(path)
    spec = tmp_path / "ellipsoid.json"
    bodies.save_spec(bodies.corpus()["ellipsoid_diag_1_4_9"], spec)
    out["ellipsoid"] = str(spec)
    return out


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_ellipsoid(files, capsys):
    code, out, _ = run(capsys, ["analyze", files["ellipsoid"], *SMALL, "--strict"])
    report = json.loads(out)
    assert code == 0
    assert report["all_passed"]
    assert report["body_id"] == "ellipsoid"
    assert {e["name"] for e in report["predicates"]} == {
        "symmetry", "section_centers", "center_collinearity", "section_parkability",
        "midpoint_coplanarity", "projection_norms", "parallelogram_law",
        "weak_blaschke", "dual_blaschke", "ellipsoid",
    }
    assert all("runtime" not in e for e in report["predicates"])


def test_analyze_cube_strict(files, capsys):
    code, out, _ = run(capsys, ["analyze", files["cube"], *SMALL, "--strict"])
    report = json.loads(out)
    assert code == 1
    failed = [e for e in report["predicates"] if not e["verdict"]]
    assert failed
    assert any(e["witnesses"] for e in failed)
    parking = next(e for e in report["predicates"] if e["name"] == "section_parkability")
    assert not parking["verdict"] and parking["witnesses"][0]["margin"] < 0


def test_analyze_echoes_dirs(files, capsys):
    _, out, _ = run(capsys, ["analyze", files["ellipsoid"], "--dirs", "16", "--blaschke-dirs", "4", "--psi-dirs", "4"])
    assert json.loads(out)["config"]["dirs"] == 16


def test_analyze_timing_is_opt_in(files, capsys):
    _, out, _ = run(capsys, ["analyze", files["cube"], "--dirs", "4", "--blaschke-dirs", "1", "--psi-dirs", "1",
                             "--offsets", "0,0.5", "--timing"])
    report = json.loads(out)
    assert all(isinstance(e["runtime"], float) for e in report["predicates"])
    assert report["config"]["offsets"] == [0.0, 0.5]


def test_analyze_rejects_planar_body(files, capsys):
    code, _, err = run(capsys, ["analyze", files["square"]])
    assert code == 2
    assert "R^3" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, ["analyze", str(tmp_path / "nope.json")])
    assert code == 2 and "no such file" in err


def test_analyze_bad_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": 1, "kind": "vpolytope", "vertices": [[0, 0, 0], [1, "x", 0]]}')
    code, _, err = run(capsys, ["analyze", str(path)])
    assert code == 2 and "vertices[1][1]" in err


def test_bad_offsets_are_usage_errors(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", files["cube"], "--offsets", "0,1.5"])
    assert exc.value.code == 2


# park


def test_park_segment(files, capsys):
    code, out, _ = run(capsys, ["park", files["segment"], files["square"]])
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "feasible"
    x, y = doc["witness"]
    assert -2 <= x <= -1 and y == pytest.approx(0.0, abs=1e-12)


def test_park_edge_in_triangle(files, capsys):
    code, out, _ = run(capsys, ["park", files["edge"], files["triangle"], "--strict"])
    doc = json.loads(out)
    assert code == 1
    assert doc["status"] == "infeasible" and doc["witness"] is None and doc["margin"] < 0


def test_park_point(files, capsys):
    _, out, _ = run(capsys, ["park", files["point"], files["gon64"]])
    doc = json.loads(out)
    assert doc["witness"] == [-0.3, -0.4]


def test_park_dimension_mismatch(files, capsys):
    code, _, _ = run(capsys, ["park", files["square"], files["cube"]])
    assert code == 2


# plot


def path_points(svg):
    d = re.search(r'<path d="([^"]+)"', svg).group(1)
    nums = [float(t) for t in re.findall(r"-?\d+\.\d+", d)]
    return np.array(nums).reshape(-1, 2)


def test_plot_cube_section(files, capsys, tmp_path):
    out = tmp_path / "s.svg"
    code, _, _ = run(capsys, ["plot", files["cube"], "--plane", "0,0,1,0", "--out", str(out)])
    svg = out.read_text()
    assert code == 0
    pts = path_points(svg)
    assert len(pts) == 4
    assert sorted(set(pts[:, 0])) == [60.0, 740.0]
    assert sorted(set(pts[:, 1])) == [60.0, 740.0]
    assert '<circle cx="400.000" cy="400.000"' in svg


def test_plot_ball_silhouette(files, capsys, tmp_path):
    out = tmp_path / "b.svg"
    code, _, _ = run(capsys, ["plot", files["ball"], "--silhouette", "0,0,1", "--out", str(out)])
    assert code == 0
    pts = path_points(out.read_text())
    r = np.linalg.norm(pts - 400.0, axis=1)
    assert len(pts) > 20
    assert r.max() / r.min() < 1.02


def test_plot_plane_missing_body(files, capsys, tmp_path):
    code, _, err = run(capsys, ["plot", files["cube"], "--plane", "0,0,1,5", "--out", str(tmp_path / "x.svg")])
    assert code == 2 and "--plane" in err


def test_plot_malformed_plane(files, capsys, tmp_path):
    code, _, _ = run(capsys, ["plot", files["cube"], "--plane", "0,0,1", "--out", str(tmp_path / "x.svg")])
    assert code == 2


def test_plot_zero_normal(files, capsys, tmp_path):
    code, _, _ = run(capsys, ["plot", files["cube"], "--plane", "0,0,0,0", "--out", str(tmp_path / "x.svg")])
    assert code == 2

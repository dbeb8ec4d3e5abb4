import json

import numpy as np
import pytest

from parkable import bodies
from parkable.errors import BodyFormatError, DimensionError, GeometryError
from parkable.illumination import silhouette


def test_icosphere_on_unit_sphere():
    body = bodies.generate({"format": 1, "kind": "ellipsoid", "shape": np.eye(3).tolist(), "subdivision": 3})
    assert len(body.vertices) == 642
    assert np.abs(np.linalg.norm(body.vertices, axis=1) - 1.0).max() <= 1e-12


def test_ellipsoid_vertices_on_quadric():
    q = bodies.rotated_shape()
    body = bodies.ellipsoid(q)
    vals = np.einsum("ij,jk,ik->i", body.vertices, q, body.vertices)
    assert np.abs(vals - 1.0).max() <= 1e-12


def test_ellipsoid_rejects_indefinite_shape():
    with pytest.raises(GeometryError):
        bodies.ellipsoid(np.diag([1.0, -1.0, 1.0]))


def test_cube_counts():
    cube = bodies.generate({"format": 1, "kind": "cube"})
    assert len(cube.vertices) == 8
    assert cube.n_facets == 6


def test_perturbed_band():
    body = bodies.perturbed(bodies.ball(3), 0.05, seed=7)
    r = np.linalg.norm(body.vertices, axis=1)
    assert r.min() >= 0.95 - 1e-12
    assert r.max() <= 1.05 + 1e-12
    # and genuinely perturbed
    assert r.max() - r.min() > 0.01


def test_random_polytope_seeded():
    a = bodies.random_polytope(40, seed=3)
    b = bodies.random_polytope(40, seed=3)
    assert np.array_equal(a.vertices, b.vertices)


def test_symmetric_random_polytope():
    body = bodies.random_polytope(20, seed=1, symmetric=True)
    got = {tuple(np.round(v, 12)) for v in body.vertices}
    assert got == {tuple(np.round(-v, 12)) for v in body.vertices}


def test_save_load_round_trip(tmp_path, cube):
    path = tmp_path / "cube.json"
    bodies.save(cube, path)
    back = bodies.load(path)
    assert {tuple(v) for v in back.vertices} == {tuple(v) for v in cube.vertices}


def test_spec_round_trip(tmp_path):
    for name, spec in bodies.corpus().items():
        path = tmp_path / f"{name}.json"
        bodies.save_spec(spec, path)
        a, b = bodies.generate(spec), bodies.load(path)
        assert np.array_equal(a.vertices, b.vertices), name


def test_non_numeric_coordinate_names_field():
    doc = {"format": 1, "kind": "vpolytope", "dim": 2, "vertices": [[0, 0], [1, "abc"], [0, 1]]}
    with pytest.raises(BodyFormatError, match=r"vertices\[1\]\[1\]"):
        bodies.loads(json.dumps(doc))


def test_bad_json_reports_position():
    with pytest.raises(BodyFormatError, match="line 1, column"):
        bodies.loads('{"format": 1, "kind": ')


def test_unknown_kind():
    with pytest.raises(BodyFormatError, match="kind"):
        bodies.loads('{"format": 1, "kind": "blob"}')


def test_wrong_format_version():
    with pytest.raises(BodyFormatError, match="format"):
        bodies.loads('{"format": 2, "kind": "cube"}')


def test_ragged_vertices():
    with pytest.raises(BodyFormatError, match="expected 2 coordinates"):
        bodies.loads('{"format": 1, "kind": "vpolytope", "vertices": [[0, 0], [1, 0, 0]]}')


def test_planar_body_in_3d_operation(tmp_path):
    path = tmp_path / "square.json"
    bodies.save(bodies.cube(dim=2), path)
    with pytest.raises(DimensionError):
        silhouette(bodies.load(path), [0, 0, 1])


def test_corpus_names():
    names = set(bodies.corpus())
    assert len(names) == 11
    assert {"cube", "cross_polytope", "octahedron", "ellipsoid_identity"} <= names


def test_octahedron_is_regular():
    v = bodies.octahedron_vertices()
    assert np.linalg.norm(v, axis=1) == pytest.approx(np.full(6, 1.5))
    gram = v @ v.T
    assert sorted(np.round(gram[0], 9)) == [-2.25, 0, 0, 0, 0, 2.25]

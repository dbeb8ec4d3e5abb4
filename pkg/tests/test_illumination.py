import numpy as np
import pytest

from oracles import angle
from parkable import bodies
from parkable.errors import DimensionError
from parkable.geometry.body import AffineSubspace
from parkable.illumination import (
    dual_blaschke_check,
    line_supports,
    planarity_residual,
    _active_normals,
    psi_cone,
    silhouette,
    tangency_defect,
    weak_blaschke_test,
)

DIAG = np.ones(3) / np.sqrt(3)


# silhouettes


def test_ball_silhouette_near_equator(ball):
    # the polygonal silhouette zigzags about the equator by at most half an edge
    sil = silhouette(ball, [0, 0, 1])
    z = ball.vertices[sil.vertex_ids, 2]
    a, b = ball.edges.T
    half_edge = 0.5 * np.linalg.norm(ball.vertices[a] - ball.vertices[b], axis=1).max()
    assert np.abs(z).max() <= half_edge


@pytest.mark.slow
def test_fine_ball_silhouette_near_equator():
    ball = bodies.ball(5)
    sil = silhouette(ball, [0, 0, 1])
    assert np.abs(ball.vertices[sil.vertex_ids, 2]).max() <= 2e-2 * ball.diameter


def test_cube_vertical_silhouette_is_lateral_facets(cube):
    sil = silhouette(cube, [0, 0, 1])
    normals = cube.normals[sil.facet_ids]
    assert len(sil.facet_ids) == 4
    assert np.allclose(normals[:, 2], 0.0)
    assert len(sil.vertex_ids) == 8


def test_cube_diagonal_silhouette_is_hexagon(cube):
    sil = silhouette(cube, DIAG)
    verts = cube.vertices[sil.vertex_ids]
    # the six vertices other than +-(1, 1, 1)
    assert len(verts) == 6
    assert np.allclose(np.abs(verts.sum(axis=1)), 1.0)
    assert len(sil.edge_ids) == 6
    assert len(sil.facet_ids) == 0
    # the cycle is not planar: heights along the diagonal alternate
    assert sorted(np.round(verts @ DIAG * np.sqrt(3), 9)) == [-1, -1, -1, 1, 1, 1]


def test_silhouette_needs_3d(square):
    with pytest.raises(DimensionError):
        silhouette(square, [0, 1])


# weak Blaschke property


@pytest.mark.parametrize("d", [[0, 0, 1], [1, 2, 3], [-0.3, 0.2, 1.0]])
def test_ball_weak_blaschke(ball2562, d):
    res = weak_blaschke_test(ball2562, d)
    assert res.verdict
    assert res.residual <= 2e-2
    assert angle(res.normal, d) < 0.1 or angle(res.normal, -np.asarray(d)) < 0.1
    assert abs(res.offset) < 2e-2


def test_cube_vertical_weak_blaschke(cube):
    res = weak_blaschke_test(cube, [0, 0, 1])
    assert res.verdict
    # the witness plane itself re-validates
    plane = AffineSubspace.hyperplane(res.normal, res.offset)
    assert planarity_residual(cube, res.silhouette, plane) == pytest.approx(res.residual)


@pytest.mark.slow
def test_cube_diagonal_weak_blaschke_fails(cube):
    res = weak_blaschke_test(cube, DIAG, n_seeds=64, steps=200)
    assert not res.verdict
    assert res.residual >= 0.1
    assert res.evaluations <= 64 * 201


# supporting lines and the cone map


def test_line_supports_cube(cube):
    assert line_supports(cube, [1, 0, 0], [0, 0, 1])
    assert not line_supports(cube, [1, 0, 0], [-1, 0, 1])
    assert line_supports(cube, [1, 1, 0], [0, 0, 1])


def test_tangency_defect_matches_line_supports(cube):
    rng = np.random.default_rng(5)
    pts = np.array([[1.0, 0.2, -0.4], [1.0, 1.0, 0.3], [0.5, -1.0, 1.0]])
    active = _active_normals(cube, pts, 1e-9)
    for w in rng.normal(size=(200, 3)):
        for k, p in enumerate(pts):
            zero = tangency_defect(active[k : k + 1], w)[0] == 0.0
            assert zero == line_supports(cube, p, w)


def test_ball_psi_cone_is_axis(ball):
    cone = psi_cone(ball, [0, 0, 1])
    assert not cone.empty
    assert angle(cone.best, [0, 0, 1]) <= 2e-2
    assert cone.deviation < 1e-9


def test_cube_psi_cone_is_axis(cube):
    cone = psi_cone(cube, [0, 0, 1])
    assert not cone.empty
    assert cone.deviation == pytest.approx(0.0, abs=1e-12)
    assert angle(cone.best, [0, 0, 1]) < 1e-6


@pytest.mark.slow
def test_cube_psi_cone_grid_oracle(cube):
    # 1 degree direction grid on the upper hemisphere; a direction is accepted
    # when the line through every sampled boundary point supports the cube
    pts = [[x, y, 0.0] for x, y in [(1, 1), (1, -1), (-1, -1), (-1, 1), (1, 0), (0, 1), (-1, 0), (0, -1)]]
    accepted = []
    for theta in np.radians(np.arange(0, 90)):
        for phi in np.radians(np.arange(0, 360, 1 if theta else 360)):
            w = [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
            if all(line_supports(cube, p, w) for p in pts):
                accepted.append(w)
    assert len(accepted) == 1
    assert np.allclose(accepted[0], [0, 0, 1])


def test_cube_diagonal_psi_cone_is_empty(cube):
    cone = psi_cone(cube, DIAG)
    assert cone.empty
    assert cone.deviation > np.sin(0.2)


def test_cross_diagonal_psi_cone_is_empty(cross):
    assert psi_cone(cross, DIAG).empty


def test_psi_is_odd(cube):
    v = np.array([0.2, -0.5, 1.0])
    a, b = psi_cone(cube, v), psi_cone(cube, -v)
    assert a.deviation == pytest.approx(b.deviation, abs=1e-9)
    assert angle(a.best, -b.best) < 2e-2


def test_dual_blaschke_ball(ball162):
    assert dual_blaschke_check(ball162, dirs=16).passed


def test_dual_blaschke_cube_fails(cube):
    res = dual_blaschke_check(cube, dirs=np.array([[0, 0, 1.0], DIAG]))
    assert not res.passed
    assert len(res.empty_directions) == 1
    assert np.allclose(res.empty_directions[0], DIAG)

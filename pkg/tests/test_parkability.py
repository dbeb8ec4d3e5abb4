import numpy as np
import pytest

from oracles import angle, park_by_grid
from parkable import bodies
from parkable.errors import DimensionError, InfeasibleError, PreconditionError
from parkable.geometry.body import AffineSubspace, convex_hull, section
from parkable.geometry.lp import Status
from parkable.parkability import (
    condition_iii_scan,
    embed_section,
    minimum_radius,
    park,
    phi_direction,
    phi_projection_symmetry_check,
    section_level,
    sphere_radius,
    symmetric_hull,
    universal_parkability,
)


def assert_parked(inner, outer, v):
    moved = inner.translate(v)
    assert outer.contains(moved.vertices, 1e-9).all()
    assert moved.contains(np.zeros(inner.dim), 1e-9)


# park


def test_segment_in_square(square):
    seg = convex_hull([[1.0, 0.0], [2.0, 0.0]])
    res = park(seg, square)
    assert res.status is Status.FEASIBLE
    assert_parked(seg, square, res.witness)
    # every valid translate lies on [-2, -1] x {0}
    assert -2 - 1e-9 <= res.witness[0] <= -1 + 1e-9
    assert res.witness[1] == pytest.approx(0.0, abs=1e-9)


def test_triangle_bottom_edge_does_not_park():
    tri = convex_hull([[-1, -0.5], [1, -0.5], [0, 1]])
    edge = convex_hull([[-1, -0.5], [1, -0.5]])
    res = park(edge, tri)
    assert res.status is Status.INFEASIBLE
    assert res.margin < 0
    assert len(park_by_grid(edge, tri)) == 0


def test_point_in_polygon():
    gon = bodies.regular_polygon(64)
    res = park(convex_hull([[0.3, 0.4]]), gon)
    assert res.feasible
    assert res.witness == pytest.approx([-0.3, -0.4], abs=1e-9)


def test_park_rejects_when_nothing_fits(square):
    with pytest.raises(PreconditionError, match="not contained"):
        park(bodies.cube(dim=2, half_width=2.0), square)


def test_park_rejects_origin_outside(square):
    with pytest.raises(PreconditionError):
        park(convex_hull([[2.5, 0.0]]), square.translate([3.0, 0.0]))


def test_park_dimension_mismatch(square, cube):
    with pytest.raises(DimensionError):
        park(square, cube)


@pytest.mark.parametrize("seed", range(10))
def test_park_witness_is_valid(seed):
    rng = np.random.default_rng(seed)
    outer = bodies.random_polytope(30, seed=seed)
    inner = convex_hull(0.3 * rng.normal(size=(6, 3)))
    res = park(inner, outer)
    if res.feasible:
        assert_parked(inner, outer, res.witness)


# symmetric hull


def test_symmetric_hull_of_point():
    hull = symmetric_hull(convex_hull([[1.0, 0.0]]), [0.0, 0.0])
    assert sorted(hull.vertices[:, 0]) == pytest.approx([-1.0, 1.0])
    assert np.allclose(hull.vertices[:, 1], 0.0)


def test_symmetric_hull_of_square():
    unit_square = convex_hull([[0, 0], [1, 0], [1, 1], [0, 1]])
    hull = symmetric_hull(unit_square, [2.0, 0.0])
    moved = unit_square.vertices + [2.0, 0.0]
    oracle = convex_hull(np.vstack([moved, -moved]))
    assert len(hull.vertices) == len(oracle.vertices) == 6
    assert np.allclose(np.sort(hull.vertices, axis=0), np.sort(oracle.vertices, axis=0))


# universal parkability


def test_centered_square_is_universal(square):
    res = universal_parkability(square, radius=6.0, dirs=256)
    assert res.passed and res.n_checked == 256


def test_segment_is_universal():
    res = universal_parkability(convex_hull([[0, 0], [1, 0]]), radius=6.0, dirs=256)
    assert res.passed


def test_planar_triangle_parks_with_zero_margin(triangle):
    # in the plane the parked triangle touches both long edges of the hull:
    # for u = (6, 0) the translate by (-6.5, -0.5) puts (0.5, -0.5) on the edge
    # (-6, -1)-(7, 0) and (-0.5, 0.5) on the edge (-7, 0)-(6, 1)
    u = np.array([6.0, 0.0])
    hull = symmetric_hull(triangle, u)
    moved = triangle.translate(u)
    assert_parked(moved, hull, [-6.5, -0.5])
    res = park(moved, hull)
    assert res.feasible and abs(res.margin) < 1e-12
    assert universal_parkability(triangle, radius=6.0, dirs=256).passed


def test_simplex_is_not_universal():
    res = universal_parkability(bodies.simplex(), radius=6.0, dirs=256)
    assert not res.passed
    # the witness reproduces
    u = res.witness
    assert not park(bodies.simplex().translate(u), symmetric_hull(bodies.simplex(), u)).feasible


def test_radius_too_small(square):
    with pytest.raises(PreconditionError, match="need R >"):
        universal_parkability(square, radius=0.5)


def test_default_radius_clears_the_bound(triangle):
    assert sphere_radius(triangle) > minimum_radius(triangle)


# direction map


def test_phi_of_point():
    p = np.array([0.3, 0.2])
    u = 2.0 * np.array([np.cos(1.0), np.sin(1.0)])
    sample = phi_direction(convex_hull([p]), u)
    assert sample.direction == pytest.approx(-(p + u) / np.linalg.norm(p + u))


@pytest.mark.parametrize("t", np.linspace(0.1, 6.0, 7))
def test_phi_of_centered_square(square, t):
    u = 6.0 * np.array([np.cos(t), np.sin(t)])
    a, b = phi_direction(square, u), phi_direction(square, -u)
    assert a.direction == pytest.approx(-u / 6.0, abs=1e-9)
    assert angle(b.direction, -a.direction) < 1e-9
    # arccos near 1 resolves angles only to about sqrt(machine epsilon)
    assert a.uniqueness_residual < 1e-6


def test_phi_requires_origin_outside(square):
    with pytest.raises(PreconditionError):
        phi_direction(square, [0.5, 0.0])


def test_phi_infeasible_raises():
    simplex = bodies.simplex()
    u = universal_parkability(simplex, radius=6.0).witness
    with pytest.raises(InfeasibleError):
        phi_direction(simplex, u)


def test_projection_along_phi_is_symmetric_for_slab():
    slab = convex_hull([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-0.2, 0.2)])
    assert phi_projection_symmetry_check(slab, [3.0, 4.0, 1.5]) <= 1e-6


def test_projection_along_phi_is_symmetric_for_ball(ball162):
    assert phi_projection_symmetry_check(ball162, [2.0, -3.0, 1.0]) <= 2e-2


# section scans


def test_embedded_section_lies_in_the_plane(cube):
    plane = AffineSubspace.hyperplane([1, 2, 3], 0.5)
    flat = embed_section(section(cube, plane))
    assert flat.is_flat
    n = np.array([1, 2, 3]) / np.sqrt(14)
    assert flat.vertices @ n == pytest.approx(np.full(len(flat.vertices), 0.5))
    assert flat.contains(flat.vertices).all()


def test_central_sections_always_park(ball162):
    scan = condition_iii_scan(ball162, dirs=32, offsets=(0.0,))
    assert scan.passed and scan.n_checked == 32


def test_ball_sections_park(ball162):
    assert condition_iii_scan(ball162, dirs=24).passed


def test_cube_has_an_unparkable_section(cube):
    scan = condition_iii_scan(cube, dirs=64, max_failures=1)
    assert not scan.passed
    normal, frac, margin = scan.failures[0]
    plane = AffineSubspace.hyperplane(normal, section_level(cube, normal, frac))
    res = park(embed_section(section(cube, plane)), cube, check=False)
    assert not res.feasible and res.margin == pytest.approx(margin)


def test_corner_section_of_cube_does_not_park(cube):
    # a large triangle cut off near a vertex cannot be moved to cover the origin
    plane = AffineSubspace.hyperplane([1, 1, 1], 1.2 / np.sqrt(3))
    tri = embed_section(section(cube, plane))
    assert len(tri.vertices) == 3
    assert not park(tri, cube, check=False).feasible


def test_scan_needs_interior_origin(cube):
    with pytest.raises(PreconditionError):
        condition_iii_scan(cube.translate([1.5, 0, 0]), dirs=4)

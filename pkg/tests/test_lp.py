import numpy as np
import pytest
from scipy.optimize import linprog

from parkable.errors import GeometryError
from parkable.geometry.lp import lp_feasible, solve_lp


def test_interval_feasible():
    res = lp_feasible([[1.0], [-1.0]], [1.0, 0.0])
    assert res.feasible
    assert res.witness[0] == pytest.approx(0.5)
    assert res.margin == pytest.approx(0.5)


def test_interval_infeasible():
    res = lp_feasible([[1.0], [-1.0]], [-1.0, -1.0])
    assert not res.feasible
    assert res.margin == pytest.approx(-1.0)


def test_unbounded_region_is_feasible():
    res = lp_feasible([[1.0, 0.0]], [2.0])
    assert res.feasible


def test_nan_rejected():
    with pytest.raises(GeometryError):
        lp_feasible([[np.nan, 1.0]], [1.0])


def test_zero_row_contradiction():
    assert not lp_feasible([[0.0, 0.0]], [-1.0]).feasible
    assert lp_feasible([[0.0, 0.0]], [1.0]).feasible


def random_system(rng, n_rows=20, dim=3):
    a = rng.normal(size=(n_rows, dim))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    centre = rng.uniform(-2, 2, dim)
    b = a @ centre + rng.uniform(-0.2, 1.5, n_rows)
    return a, b


def grid_feasible(a, b, step, lo=-5.0, hi=5.0):
    ticks = np.arange(lo, hi + step / 2, step)
    dim = a.shape[1]
    if dim == 2:
        g = np.stack(np.meshgrid(ticks, ticks, indexing="ij"), -1).reshape(-1, 2)
        return bool(np.all(g @ a.T <= b, axis=1).any())
    yz = np.stack(np.meshgrid(ticks, ticks, indexing="ij"), -1).reshape(-1, 2)
    for x in ticks:
        vals = x * a[:, 0] + yz @ a[:, 1:].T
        if np.all(vals <= b, axis=1).any():
            return True
    return False


@pytest.mark.parametrize("seed", range(40))
def test_feasibility_matches_grid_2d(seed):
    rng = np.random.default_rng(seed)
    a, b = random_system(rng, dim=2)
    res = lp_feasible(a, b, cap=10.0)
    found = grid_feasible(a, b, 0.01)
    if found:
        assert res.feasible
    if res.feasible and res.margin > 0.01:
        assert found
    if not res.feasible:
        assert not found


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(12))
def test_feasibility_matches_grid_3d(seed):
    # a 0.01 grid on [-5, 5]^3 is 10^9 points; 0.05 keeps the oracle at desk
    # scale and the margin guard absorbs the coarser spacing
    rng = np.random.default_rng(100 + seed)
    a, b = random_system(rng)
    res = lp_feasible(a, b, cap=10.0)
    step = 0.05
    found = grid_feasible(a, b, step)
    if found:
        assert res.feasible
    if res.feasible and res.margin > step * np.sqrt(3) / 2:
        assert found
    if not res.feasible:
        assert not found


@pytest.mark.parametrize("seed", range(30))
def test_solve_lp_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 5))
    a = rng.normal(size=(30, dim))
    b = rng.uniform(0.5, 2.0, 30)
    # a box keeps every instance bounded
    a = np.vstack([a, np.eye(dim), -np.eye(dim)])
    b = np.concatenate([b, np.full(2 * dim, 3.0)])
    c = rng.normal(size=dim)
    ours = solve_lp(c, a, b)
    ref = linprog(c, A_ub=a, b_ub=b, bounds=[(None, None)] * dim, method="highs")
    assert ours.optimal
    assert ours.value == pytest.approx(ref.fun, abs=1e-8)
    assert np.all(a @ ours.x <= b + 1e-9)


def test_solve_lp_reports_infeasible():
    sol = solve_lp([1.0], [[1.0], [-1.0]], [-1.0, -1.0])
    assert not sol.optimal


def test_degenerate_system_terminates():
    # many redundant rows through one vertex
    t = np.linspace(0, np.pi / 2, 200)
    a = np.column_stack([np.cos(t), np.sin(t)])
    res = lp_feasible(np.vstack([a, -np.eye(2)]), np.concatenate([np.zeros(200), [0.0, 0.0]]))
    assert res.feasible
    assert np.allclose(res.witness, 0.0, atol=1e-9)

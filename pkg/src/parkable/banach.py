"""Gauge norms of symmetric bodies, operator norms and the ellipsoid tests
built on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .config import DEFAULT, DEFAULT_DIRECTIONS, Tolerances
from .errors import DimensionError, PreconditionError
from .geometry.body import ConvexBody, as_vector, orthonormal_complement
from .geometry.sampling import directions as sample_directions
from .symmetry import symmetry_residual


@dataclass(frozen=True, eq=False)
class Gauge:
    """The norm whose unit ball is ``body``."""

    body: ConvexBody

    def __post_init__(self):
        b = self.body
        if b.is_flat:
            raise PreconditionError("a gauge needs a full-dimensional body")
        eps = DEFAULT.geom * max(1.0, b.diameter)
        if not (b.offsets > eps).all():
            raise PreconditionError("0 must be interior to the body")

    @classmethod
    def checked(cls, body: ConvexBody, tol: Tolerances = DEFAULT) -> "Gauge":
        """Build a gauge after verifying central symmetry about 0."""
        res = symmetry_residual(body, np.zeros(body.dim))
        if res > tol.symmetry:
            raise PreconditionError(f"body is not centrally symmetric (residual {res:.3g})")
        return cls(body)

    @property
    def dim(self) -> int:
        return self.body.dim

    def __call__(self, x) -> float | np.ndarray:
        return gauge_norm(self, x)


def gauge_norm(g: Gauge, x) -> float | np.ndarray:
    """``inf{r >= 0 : x in r B}`` = ``max_i (n_i . x) / b_i`` clamped at 0; rows of ``x`` vectorize."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != g.dim:
        raise DimensionError(f"vector has {x.shape[-1]} coordinates, gauge lives in R^{g.dim}")
    vals = np.max((x @ g.body.normals.T) / g.body.offsets, axis=-1)
    vals = np.maximum(vals, 0.0)
    return float(vals) if x.ndim == 1 else vals


def operator_norm(g: Gauge, matrix) -> float:
    """``sup_{|x| <= 1} |T x|``, attained at a vertex of the unit ball."""
    t = np.asarray(matrix, dtype=float)
    if t.shape != (g.dim, g.dim):
        raise DimensionError(f"expected a {g.dim}x{g.dim} matrix")
    if not np.isfinite(t).all():
        raise PreconditionError("matrix has non-finite entries")
    return float(gauge_norm(g, g.body.vertices @ t.T).max())


def orthogonal_projection(u, metric=None) -> np.ndarray:
    """Projection onto ``span(u)`` that is self-adjoint for ``<x, y> = x . Q y``."""
    u = as_vector(u)
    q = np.eye(len(u)) if metric is None else np.asarray(metric, dtype=float)
    qu = q @ u
    return np.outer(u, qu) / (u @ qu)


@dataclass
class ProjectionAudit:
    max_norm: float
    witness: np.ndarray
    witness_direction: np.ndarray
    witness_rank: int
    norms: np.ndarray  # shape (n_dirs, 2): rank-1 and rank-(n-1) norms

    def passed(self, tol: float = DEFAULT.projection) -> bool:
        return self.max_norm <= 1.0 + tol


def _inv_sqrt(q: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(q)
    return (v / np.sqrt(w)) @ v.T


def projection_norm_audit(
    g: Gauge, dirs: int | np.ndarray = DEFAULT_DIRECTIONS, metric=None, refine: bool = True
) -> ProjectionAudit:
    """Operator norms of the rank-1 and corank-1 orthogonal projections.

    With ``metric`` (a positive definite ``Q``) the projections are
    orthogonal for ``x . Q y`` and the directions are sampled uniformly in
    the whitened frame ``Q^{1/2} x``.  With ``refine`` the best sampled
    direction is polished by Nelder-Mead in a tangent chart, so the
    reported maximum is not limited by the grid spacing.
    """
    n = g.dim
    base = sample_directions(n, dirs) if np.isscalar(dirs) else np.asarray(dirs, dtype=float)
    q = np.eye(n) if metric is None else np.asarray(metric, dtype=float)
    if metric is not None and np.linalg.eigvalsh(q).min() <= 0:
        raise PreconditionError("metric must be positive definite")
    us = base @ _inv_sqrt(q).T if metric is not None else base
    norms = np.zeros((len(us), 2))
    best = (-np.inf, None, None, 0, 0)
    for k, u in enumerate(us):
        p = orthogonal_projection(u, q)
        for j, (mat, rank) in enumerate(((p, 1), (np.eye(n) - p, n - 1))):
            val = operator_norm(g, mat)
            norms[k, j] = val
            if val > best[0]:
                best = (val, mat, u / np.linalg.norm(u), rank, k)
    if refine and n > 1:
        best = _refine_projection(g, base[best[4]], q, metric is not None, best)
    return ProjectionAudit(best[0], best[1], best[2], best[3], norms)


def _refine_projection(g: Gauge, start: np.ndarray, q: np.ndarray, whiten: bool, best: tuple) -> tuple:
    rank = best[3]
    chart = orthonormal_complement(start[None, :], len(start))
    root = _inv_sqrt(q) if whiten else np.eye(len(start))

    def project_at(z):
        u = root @ (start + chart.T @ z)
        p = orthogonal_projection(u, q)
        return (p if rank == 1 else np.eye(len(start)) - p), u

    def objective(z):
        return -operator_norm(g, project_at(z)[0])

    res = minimize(objective, np.zeros(len(start) - 1), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxfev": 400})
    if -res.fun <= best[0]:
        return best
    mat, u = project_at(res.x)
    return (-res.fun, mat, u / np.linalg.norm(u), rank, best[4])


@dataclass(frozen=True)
class ParallelogramResult:
    residual: float
    x: np.ndarray
    y: np.ndarray


def parallelogram_defect(g: Gauge, x, y) -> float:
    """``|N(x+y)^2 + N(x-y)^2 - 2N(x)^2 - 2N(y)^2| / (N(x)^2 + N(y)^2)``."""
    x, y = np.atleast_2d(x), np.atleast_2d(y)
    nx, ny = gauge_norm(g, x) ** 2, gauge_norm(g, y) ** 2
    num = gauge_norm(g, x + y) ** 2 + gauge_norm(g, x - y) ** 2 - 2 * nx - 2 * ny
    out = np.abs(num) / (nx + ny)
    return out if len(out) > 1 else float(out[0])


def parallelogram_residual(g: Gauge, n_pairs: int = 256, seed: int = 0, pairs=None) -> ParallelogramResult:
    """Largest parallelogram-law defect over vertex-direction and random unit pairs."""
    if pairs is None:
        rng = np.random.default_rng(seed)
        verts = g.body.vertices / np.linalg.norm(g.body.vertices, axis=1, keepdims=True)
        i = rng.integers(0, len(verts), size=(n_pairs, 2))
        r = rng.normal(size=(2, n_pairs, g.dim))
        r /= np.linalg.norm(r, axis=2, keepdims=True)
        xs = np.vstack([verts[i[:, 0]], r[0]])
        ys = np.vstack([verts[i[:, 1]], r[1]])
    else:
        xs = np.array([p[0] for p in pairs], dtype=float)
        ys = np.array([p[1] for p in pairs], dtype=float)
    defects = np.atleast_1d(parallelogram_defect(g, xs, ys))
    k = int(np.argmax(defects))
    return ParallelogramResult(float(defects[k]), xs[k], ys[k])


@dataclass(frozen=True)
class EllipsoidCertificate:
    """Quadric fit ``x . Q x = 1`` through the vertices.

    ``fit_residual`` is measured on the vertices; ``facet_gap`` on facet
    vertex-centroids, which separates inscribed polytopes (cube, octahedron)
    whose vertices happen to lie on one quadric.  Centroids of a fine mesh
    inscribed in an ellipsoid sit slightly inside it, so ``residual`` only
    counts the part of the gap beyond ``allowance``.
    """

    shape: np.ndarray
    fit_residual: float
    facet_gap: float
    verdict: bool
    diagnostic: str = ""
    allowance: float = DEFAULT.ellipsoid

    @property
    def residual(self) -> float:
        return max(self.fit_residual, self.facet_gap - self.allowance)


def _quadric_features(x: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    iu = np.triu_indices(n)
    scale = np.where(iu[0] == iu[1], 1.0, 2.0)
    return x[:, iu[0]] * x[:, iu[1]] * scale


def _quadric_matrix(params: np.ndarray, n: int) -> np.ndarray:
    q = np.zeros((n, n))
    q[np.triu_indices(n)] = params
    return q + np.triu(q, 1).T


def ellipsoid_certify(body: ConvexBody, tol: Tolerances = DEFAULT) -> EllipsoidCertificate:
    """Fit ``Q`` minimizing ``sum (v . Q v - 1)^2`` and test the fit."""
    n = body.dim
    if body.is_flat:
        raise PreconditionError("an ellipsoid certificate needs a full-dimensional body")
    sym = symmetry_residual(body, np.zeros(n))
    feats = _quadric_features(body.vertices)
    params, *_ = np.linalg.lstsq(feats, np.ones(len(feats)), rcond=None)
    q = _quadric_matrix(params, n)
    fit = float(np.abs(np.einsum("ij,jk,ik->i", body.vertices, q, body.vertices) - 1.0).max())
    cents = np.array([body.vertices[list(f)].mean(axis=0) for f in body.facets])
    gap = float(np.abs(np.einsum("ij,jk,ik->i", cents, q, cents) - 1.0).max()) if len(cents) else 0.0
    if sym > tol.symmetry:
        return EllipsoidCertificate(
            q, fit, gap, False, f"not centrally symmetric about 0 (residual {sym:.3g})", tol.ellipsoid
        )
    if np.linalg.eigvalsh(q).min() <= 0:
        return EllipsoidCertificate(q, fit, gap, False, "fitted quadric is not positive definite", tol.ellipsoid)
    ok = fit <= tol.ellipsoid and gap <= tol.ellipsoid
    return EllipsoidCertificate(
        q, fit, gap, ok, "" if ok else "quadric fit residual above tolerance", tol.ellipsoid
    )

"""Test-corpus generators and the JSON body format.

A body file is a single JSON object with ``"format": 1`` and a ``kind``.
``vpolytope`` files list their vertices explicitly; every other kind is a
parametric recipe resolved by :func:`generate`::

    {"format": 1, "kind": "ellipsoid", "dim": 3,
     "shape": [[1, 0, 0], [0, 4, 0], [0, 0, 9]], "subdivision": 3}
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import BodyFormatError, GeometryError
from .geometry.body import ConvexBody, convex_hull

FORMAT_VERSION = 1
KINDS = ("vpolytope", "ellipsoid", "cube", "cross_polytope", "simplex", "random_polytope", "perturbed")
MAX_SUBDIVISION = 5
MAX_VERTICES = 5000


@dataclass(frozen=True)
class BodySpec:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"format": FORMAT_VERSION, "kind": self.kind}
        for key, value in self.params.items():
            if isinstance(value, BodySpec):
                value = value.to_json()
            elif isinstance(value, np.ndarray):
                value = value.tolist()
            out[key] = value
        return out


# ---------------------------------------------------------------------------
# primitive shapes


def icosphere(subdivision: int = 3) -> np.ndarray:
    """Unit-sphere vertices of a subdivided icosahedron (antipodally closed)."""
    if not 0 <= subdivision <= MAX_SUBDIVISION:
        raise GeometryError(f"subdivision must be in [0, {MAX_SUBDIVISION}]")
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    pts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivision):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(a: int, b: int) -> int:
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = pts[a] + pts[b]
                pts.append(m / np.linalg.norm(m))
                cache[key] = len(pts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.array(pts)


def _inverse_sqrt(shape: np.ndarray) -> np.ndarray:
    shape = np.asarray(shape, dtype=float)
    if shape.ndim != 2 or shape.shape[0] != shape.shape[1]:
        raise GeometryError("shape matrix must be square")
    if not np.allclose(shape, shape.T, atol=1e-12):
        raise GeometryError("shape matrix must be symmetric")
    w, v = np.linalg.eigh(shape)
    if w.min() <= 0:
        raise GeometryError("shape matrix must be positive definite")
    return (v / np.sqrt(w)) @ v.T


def ellipsoid_points(shape, subdivision: int = 3, center=None) -> np.ndarray:
    """Icosphere mapped onto ``{x : (x-c)^T Q (x-c) = 1}``."""
    shape = np.asarray(shape, dtype=float)
    dim = shape.shape[0]
    if dim == 3:
        base = icosphere(subdivision)
    elif dim == 2:
        n = 12 * 2**subdivision
        t = 2 * np.pi * np.arange(n) / n
        base = np.column_stack([np.cos(t), np.sin(t)])
    else:
        raise GeometryError("ellipsoids are generated in dimension 2 or 3")
    pts = base @ _inverse_sqrt(shape)
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    return pts


def ellipsoid(shape=None, subdivision: int = 3, center=None, dim: int = 3) -> ConvexBody:
    shape = np.eye(dim) if shape is None else shape
    return convex_hull(ellipsoid_points(shape, subdivision, center))


def ball(subdivision: int = 3, radius: float = 1.0) -> ConvexBody:
    return convex_hull(radius * icosphere(subdivision))


def cube(dim: int = 3, half_width: float = 1.0, center=None) -> ConvexBody:
    pts = half_width * np.array(list(itertools.product([-1.0, 1.0], repeat=dim)))
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    return convex_hull(pts)


def cross_polytope(dim: int = 3, radius: float = 1.0, center=None) -> ConvexBody:
    eye = np.eye(dim)
    pts = radius * np.vstack([eye, -eye])
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    return convex_hull(pts)


def simplex(dim: int = 3) -> ConvexBody:
    """``conv{0, e_1, ..., e_dim}``."""
    return convex_hull(np.vstack([np.zeros(dim), np.eye(dim)]))


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0, center=None) -> ConvexBody:
    t = phase + 2 * np.pi * np.arange(n) / n
    pts = radius * np.column_stack([np.cos(t), np.sin(t)])
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    return convex_hull(pts)


def random_polytope(n_vertices: int, seed: int = 0, dim: int = 3, symmetric: bool = False, radius: float = 1.0) -> ConvexBody:
    """Hull of seeded uniform points on the sphere; ``symmetric`` adds ``-P``."""
    if not 1 <= n_vertices <= MAX_VERTICES:
        raise GeometryError(f"vertex count must be in [1, {MAX_VERTICES}]")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n_vertices, dim))
    pts = radius * g / np.linalg.norm(g, axis=1, keepdims=True)
    if symmetric:
        pts = np.vstack([pts, -pts])
    return convex_hull(pts)


def _radial_field(directions: np.ndarray, seed: int, degree: int = 3) -> np.ndarray:
    """Smooth random function on the sphere scaled to max |f| = 1."""
    rng = np.random.default_rng(seed)
    dim = directions.shape[1]
    monomials = [
        powers
        for total in range(1, degree + 1)
        for powers in itertools.product(range(total + 1), repeat=dim)
        if sum(powers) == total
    ]
    coeffs = rng.normal(size=len(monomials))
    values = np.zeros(len(directions))
    for c, powers in zip(coeffs, monomials):
        values += c * np.prod(directions ** np.array(powers), axis=1)
    return values / np.abs(values).max()


def perturbed(base: ConvexBody, amplitude: float, seed: int = 0, center=None) -> ConvexBody:
    """Radially perturb every vertex of ``base`` about ``center`` by at most ``amplitude``."""
    c = np.zeros(base.dim) if center is None else np.asarray(center, dtype=float)
    rel = base.vertices - c
    radii = np.linalg.norm(rel, axis=1)
    f = _radial_field(rel / radii[:, None], seed)
    return convex_hull(c + rel * (1.0 + amplitude * f)[:, None])


# ---------------------------------------------------------------------------
# specs


def generate(spec: BodySpec | dict) -> ConvexBody:
    """Resolve a :class:`BodySpec` (or its JSON dict) into a body."""
    if isinstance(spec, dict):
        spec = spec_from_json(spec)
    p = spec.params
    kind = spec.kind
    if kind == "vpolytope":
        verts = np.asarray(p["vertices"], dtype=float)
        if len(verts) > MAX_VERTICES:
            raise GeometryError(f"vertex count must be at most {MAX_VERTICES}")
        return convex_hull(verts)
    if kind == "ellipsoid":
        dim = int(p.get("dim", 3))
        shape = np.asarray(p.get("shape", np.eye(dim)), dtype=float)
        return ellipsoid(shape, int(p.get("subdivision", 3)), p.get("center"), dim=shape.shape[0])
    if kind == "cube":
        return cube(int(p.get("dim", 3)), float(p.get("half_width", 1.0)), p.get("center"))
    if kind == "cross_polytope":
        return cross_polytope(int(p.get("dim", 3)), float(p.get("radius", 1.0)), p.get("center"))
    if kind == "simplex":
        return simplex(int(p.get("dim", 3)))
    if kind == "random_polytope":
        return random_polytope(
            int(p["n_vertices"]),
            int(p.get("seed", 0)),
            int(p.get("dim", 3)),
            bool(p.get("symmetric", False)),
            float(p.get("radius", 1.0)),
        )
    if kind == "perturbed":
        base = p.get("base", BodySpec("ellipsoid", {}))
        base_body = generate(base)
        return perturbed(base_body, float(p.get("amplitude", 0.05)), int(p.get("seed", 0)), p.get("center"))
    raise GeometryError(f"unknown body kind {kind!r}")


def spec_from_json(doc: dict[str, Any]) -> BodySpec:
    if not isinstance(doc, dict):
        raise BodyFormatError("body document must be a JSON object")
    fmt = doc.get("format")
    if fmt != FORMAT_VERSION:
        raise BodyFormatError(f"format: expected {FORMAT_VERSION}, got {fmt!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise BodyFormatError(f"kind: unknown body kind {kind!r}")
    params = {k: v for k, v in doc.items() if k not in ("format", "kind")}
    if kind == "vpolytope":
        params["vertices"] = _parse_vertices(params.get("vertices"), params.get("dim"))
    if "shape" in params:
        params["shape"] = _parse_matrix(params["shape"], "shape")
    if "center" in params and params["center"] is not None:
        params["center"] = _parse_row(params["center"], "center")
    if kind == "perturbed" and isinstance(params.get("base"), dict):
        params["base"] = spec_from_json({"format": FORMAT_VERSION, **params["base"]})
    return BodySpec(kind, params)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BodyFormatError(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(value):
        raise BodyFormatError(f"{where}: non-finite value {value!r}")
    return float(value)


def _parse_row(row: Any, where: str) -> list[float]:
    if not isinstance(row, list):
        raise BodyFormatError(f"{where}: expected a list of numbers")
    return [_number(x, f"{where}[{j}]") for j, x in enumerate(row)]


def _parse_matrix(rows: Any, where: str) -> list[list[float]]:
    if not isinstance(rows, list) or not rows:
        raise BodyFormatError(f"{where}: expected a non-empty list of rows")
    out = [_parse_row(r, f"{where}[{i}]") for i, r in enumerate(rows)]
    width = len(out[0])
    for i, r in enumerate(out):
        if len(r) != width:
            raise BodyFormatError(f"{where}[{i}]: expected {width} coordinates, got {len(r)}")
    return out


def _parse_vertices(rows: Any, dim: Any) -> list[list[float]]:
    verts = _parse_matrix(rows, "vertices")
    if dim is not None:
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise BodyFormatError(f"dim: expected an integer, got {dim!r}")
        for i, r in enumerate(verts):
            if len(r) != dim:
                raise BodyFormatError(f"vertices[{i}]: expected {dim} coordinates, got {len(r)}")
    return verts


def loads(text: str) -> ConvexBody:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodyFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return generate(spec_from_json(doc))


def load(path: str | Path) -> ConvexBody:
    return loads(Path(path).read_text(encoding="utf-8"))


def load_spec(path: str | Path) -> BodySpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return spec_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise BodyFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def dumps(body: ConvexBody, metadata: dict[str, Any] | None = None) -> str:
    doc = {
        "format": FORMAT_VERSION,
        "kind": "vpolytope",
        "dim": body.dim,
        "vertices": body.vertices.tolist(),
        "metadata": metadata or {},
    }
    return _compact(doc)


def _compact(doc: dict[str, Any]) -> str:
    """Indented JSON with innermost number lists kept on one line."""
    text = json.dumps(doc, indent=1)
    return re.sub(
        r"\[\s*(-?[\d.eE+-]+(?:,\s*-?[\d.eE+-]+)*)\s*\]",
        lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]",
        text,
    )


def save(body: ConvexBody, path: str | Path, metadata: dict[str, Any] | None = None) -> None:
    Path(path).write_text(dumps(body, metadata) + "\n", encoding="utf-8")


def save_spec(spec: BodySpec, path: str | Path) -> None:
    Path(path).write_text(_compact(spec.to_json()) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# the verification corpus


def rotation(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


def rotated_shape() -> np.ndarray:
    """``R diag(1, 2, 5) R^T`` for a fixed generic rotation."""
    r = rotation([1.0, 2.0, 2.0], 0.7)
    return r @ np.diag([1.0, 2.0, 5.0]) @ r.T


def octahedron_vertices() -> np.ndarray:
    """Regular octahedron of circumradius 1.5 in a generic orientation."""
    r = rotation([3.0, -1.0, 2.0], 0.9)
    return 1.5 * np.vstack([np.eye(3), -np.eye(3)]) @ r.T


def corpus() -> dict[str, BodySpec]:
    """Named generator specs used by the acceptance suite."""
    specs: dict[str, BodySpec] = {
        "ellipsoid_identity": BodySpec("ellipsoid", {"shape": np.eye(3).tolist(), "subdivision": 3}),
        "ellipsoid_diag_1_4_9": BodySpec("ellipsoid", {"shape": np.diag([1.0, 4.0, 9.0]).tolist(), "subdivision": 3}),
        "ellipsoid_rotated_1_2_5": BodySpec("ellipsoid", {"shape": rotated_shape().tolist(), "subdivision": 3}),
        "cube": BodySpec("cube", {"dim": 3}),
        "cross_polytope": BodySpec("cross_polytope", {"dim": 3}),
        "octahedron": BodySpec("vpolytope", {"dim": 3, "vertices": octahedron_vertices().tolist()}),
    }
    for seed in range(5):
        specs[f"perturbed_ellipsoid_{seed}"] = BodySpec(
            "perturbed",
            {"base": BodySpec("ellipsoid", {"shape": np.eye(3).tolist(), "subdivision": 3}), "amplitude": 0.05, "seed": seed},
        )
    return specs

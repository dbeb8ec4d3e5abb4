"""Static SVG figures of planar sections and shadows."""

from __future__ import annotations

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import GeometryError
from .geometry.body import AffineSubspace, ConvexBody, section, unit
from .illumination import silhouette
from .symmetry import symmetry_center

SIZE = 800
PAD = 60


def _fmt(x: float) -> str:
    return f"{x:.3f}"


class _Canvas:
    """Maps chart coordinates into the fixed square canvas, y pointing up."""

    def __init__(self, points: np.ndarray):
        lo, hi = points.min(axis=0), points.max(axis=0)
        self.mid = 0.5 * (lo + hi)
        span = float(max((hi - lo).max(), 1e-12))
        self.scale = (SIZE - 2 * PAD) / span
        self.items: list[str] = []

    def xy(self, p) -> tuple[float, float]:
        q = (np.asarray(p) - self.mid) * self.scale
        return SIZE / 2 + q[0], SIZE / 2 - q[1]

    def polygon(self, pts: np.ndarray, fill: str, stroke: str) -> None:
        coords = [self.xy(p) for p in pts]
        d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in coords) + " Z"
        self.items.append(f'<path d="{d}" fill="{fill}" stroke="{stroke}" stroke-width="2"/>')

    def segment(self, a, b, color: str, width: float = 3.0) -> None:
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.items.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def marker(self, p, color: str) -> None:
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="6" fill="{color}" class="center"/>')

    def text(self, s: str) -> None:
        self.items.append(f'<text x="{PAD}" y="{PAD // 2}" font-family="monospace" font-size="16">{s}</text>')

    def render(self) -> str:
        body = "\n".join(self.items)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">\n'
            f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>\n{body}\n</svg>\n'
        )


def section_svg(body: ConvexBody, normal, offset: float, tol: Tolerances = DEFAULT) -> str:
    """The section ``{n . x = offset} & body`` with its centre of symmetry marked if it has one."""
    plane = AffineSubspace.hyperplane(normal, offset)
    sec = section(body, plane, tol)
    if sec.empty or sec.body.affine_dim < 2:
        raise GeometryError("plane does not cut the body in a polygon")
    pts = sec.body.vertices
    canvas = _Canvas(pts)
    canvas.polygon(pts, "#dde8f5", "#1f4e8c")
    rep = symmetry_center(sec.body, tol.scan)
    if rep.center is not None:
        canvas.marker(rep.center, "#c0392b")
    n = unit(normal)
    canvas.text(f"section n=({n[0]:.3f}, {n[1]:.3f}, {n[2]:.3f}) c={offset:.3f}")
    return canvas.render()


def _ramp(t: float) -> str:
    """Blue (low) to red (high)."""
    t = float(np.clip(t, 0.0, 1.0))
    return f"#{int(255 * t):02x}40{int(255 * (1 - t)):02x}"


def silhouette_svg(body: ConvexBody, direction, tol: Tolerances = DEFAULT) -> str:
    """The shadow along ``direction`` with silhouette edges coloured by height along it."""
    sil = silhouette(body, direction, tol)
    shadow = sil.shadow
    canvas = _Canvas(shadow.vertices)
    canvas.polygon(shadow.vertices, "#eeeeee", "#555555")
    a, b = sil.segments(body)
    heights = np.concatenate([a @ sil.direction, b @ sil.direction])
    lo, hi = (heights.min(), heights.max()) if len(heights) else (0.0, 1.0)
    span = max(hi - lo, 1e-12)
    for p, q in zip(a, b):
        h = 0.5 * (p + q) @ sil.direction
        canvas.segment(sil.basis @ p, sil.basis @ q, _ramp((h - lo) / span))
    d = sil.direction
    canvas.text(f"silhouette d=({d[0]:.3f}, {d[1]:.3f}, {d[2]:.3f})")
    return canvas.render()

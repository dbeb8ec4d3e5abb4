"""Command-line front end: ``analyze``, ``park`` and ``plot``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import bodies
from .banach import Gauge, ellipsoid_certify, parallelogram_residual, projection_norm_audit
from .config import DEFAULT, DEFAULT_DIRECTIONS, DEFAULT_OFFSETS, Tolerances
from .errors import DimensionError, GeometryError, PreconditionError
from .geometry.body import ConvexBody
from .geometry.sampling import directions as sample_directions
from .illumination import dual_blaschke_check, weak_blaschke_test
from .parkability import condition_iii_scan, park, section_level
from .plot import section_svg, silhouette_svg
from .symmetry import chord_midpoint_plane, condition_ii_scan, symmetry_center

FORMAT_VERSION = 1
MAX_WITNESSES = 8

# short statements of the property each predicate tests
ANCHORS = {
    "symmetry": "C = 2p - C: the body has a center of symmetry",
    "section_centers": "B is centrally symmetric and every hyperplane section has a center of symmetry",
    "center_collinearity": "centers of parallel sections are collinear",
    "section_parkability": "every closed convex subset of B (every hyperplane section) is parkable in B",
    "midpoint_coplanarity": "midpoints of parallel chords are coplanar",
    "projection_norms": "every symmetric idempotent has operator norm at most 1",
    "parallelogram_law": "the gauge norm comes from an inner product",
    "weak_blaschke": "some plane section boundary lies on supporting translates of each line",
    "dual_blaschke": "every central section admits a common supporting line direction",
    "ellipsoid": "B is an ellipsoid centered at 0",
}


class InputError(Exception):
    """Bad command-line input; mapped to exit status 2."""


def _num(x: float | None) -> float | None:
    """Round to 12 significant digits so reports are compact and stable."""
    if x is None:
        return None
    x = float(x)
    if not np.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _vec(v) -> list[float]:
    return [_num(x) for x in np.asarray(v, dtype=float).ravel()]


def _vector_arg(text: str, n: int, what: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise InputError(f"{what}: expected {n} comma-separated numbers, got {text!r}") from exc
    if len(vals) != n or not np.isfinite(vals).all():
        raise InputError(f"{what}: expected {n} comma-separated numbers, got {text!r}")
    return np.array(vals)


def _offsets_arg(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad offset list {text!r}") from exc
    if any(not -1.0 < v < 1.0 for v in vals):
        raise argparse.ArgumentTypeError("offset fractions must lie strictly between -1 and 1")
    return vals


def _load(path: str) -> ConvexBody:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    return bodies.load(p)


def _tolerances(args) -> Tolerances:
    changes = {}
    for f in dataclasses.fields(Tolerances):
        value = getattr(args, f"tol_{f.name}", None)
        if value is not None:
            changes[f.name] = value
    return DEFAULT.replace(**changes)


# ---------------------------------------------------------------------------
# analyze


def _entry(name: str, verdict: bool, residual, witnesses=(), parameters=None, note: str | None = None) -> dict:
    entry = {
        "name": name,
        "anchor": ANCHORS[name],
        "verdict": bool(verdict),
        "residual": _num(residual),
        "witnesses": list(witnesses)[:MAX_WITNESSES],
        "parameters": parameters or {},
    }
    if note:
        entry["note"] = note
    return entry


def _skipped(name: str, reason: str) -> dict:
    return _entry(name, False, None, note=f"precondition failed: {reason}")


def analyze(body: ConvexBody, body_id: str, *, dirs: int, offsets, seed: int, tol: Tolerances,
            blaschke_dirs: int, psi_dirs: int, timing: bool = False) -> dict:
    """Run every predicate on ``body`` and assemble the report dictionary."""
    if body.dim != 3:
        raise DimensionError(f"analyze needs a body in R^3, got R^{body.dim}")
    if body.is_flat:
        raise PreconditionError("analyze needs a full-dimensional body")
    entries: list[dict] = []

    def timed(fn: Callable[[], dict | list[dict]]):
        t0 = time.perf_counter()
        out = fn()
        out = out if isinstance(out, list) else [out]
        for e in out:
            e["runtime"] = _num(time.perf_counter() - t0) if timing else None
        entries.extend(out)

    sym = symmetry_center(body, tol.symmetry)
    timed(lambda: _entry(
        "symmetry", sym.center is not None, sym.residual,
        [{"center": _vec(sym.center)}] if sym.center is not None else [{"candidate": _vec(sym.candidate)}],
    ))
    centered = sym.center is not None and np.linalg.norm(sym.center) <= tol.symmetry * body.diameter
    eps = tol.geom * max(1.0, body.diameter)
    interior = bool((body.offsets > eps).all())

    def section_scans():
        scan = condition_ii_scan(body, dirs, offsets, tol, max_failures=MAX_WITNESSES)
        wit = [{"normal": _vec(n), "offset_fraction": _num(f), "residual": _num(r)} for n, f, r in scan.failures]
        first = _entry("section_centers", scan.passed, scan.max_section_residual, wit,
                       {"dirs": dirs, "offsets": list(offsets), "checked": scan.n_checked, "skipped": scan.n_skipped},
                       None if scan.symmetric else f"not centrally symmetric about 0 (residual {scan.body_residual:.3g})")
        if not scan.symmetric:
            return [first, _skipped("center_collinearity", "not centrally symmetric about 0")]
        ok = scan.passed and scan.max_line_residual <= tol.scan
        second = _entry("center_collinearity", ok, scan.max_line_residual, [],
                        {"lines": len(scan.line_residuals)},
                        None if scan.passed else "some sections have no center")
        return [first, second]

    timed(section_scans)

    def parking():
        if not interior:
            return _skipped("section_parkability", "0 is not interior to the body")
        scan = condition_iii_scan(body, dirs, offsets, tol, max_failures=MAX_WITNESSES)
        wit = []
        for n, f, m in scan.failures:
            wit.append({"normal": _vec(n), "offset_fraction": _num(f),
                        "level": _num(section_level(body, n, f)), "margin": _num(m)})
        return _entry("section_parkability", scan.passed, scan.min_margin / body.diameter, wit,
                      {"dirs": dirs, "offsets": list(offsets), "checked": scan.n_checked,
                       "skipped": scan.n_skipped, "pass_rate": _num(scan.pass_rate)})

    timed(parking)

    def coplanarity():
        if not centered:
            return _skipped("midpoint_coplanarity", "not centrally symmetric about 0")
        worst, wit = 0.0, []
        for d in sample_directions(3, dirs):
            res = chord_midpoint_plane(body, d, tol=tol, check_symmetry=False)
            worst = max(worst, res.residual)
            if res.residual > tol.scan:
                wit.append({"direction": _vec(d), "residual": _num(res.residual)})
        return _entry("midpoint_coplanarity", worst <= tol.scan, worst, wit, {"dirs": dirs})

    timed(coplanarity)

    cert = ellipsoid_certify(body, tol)
    metric = cert.shape if np.linalg.eigvalsh(cert.shape).min() > 0 else None

    def norms():
        if not (centered and interior):
            return [_skipped("projection_norms", "not centrally symmetric about 0"),
                    _skipped("parallelogram_law", "not centrally symmetric about 0")]
        g = Gauge(body)
        audit = projection_norm_audit(g, dirs, metric=metric)
        first = _entry("projection_norms", audit.passed(tol.projection), audit.max_norm,
                       [{"direction": _vec(audit.witness_direction), "rank": audit.witness_rank,
                         "norm": _num(audit.max_norm)}],
                       {"dirs": dirs, "metric": "fitted quadric" if metric is not None else "euclidean"})
        para = parallelogram_residual(g, seed=seed)
        second = _entry("parallelogram_law", para.residual <= tol.ellipsoid, para.residual,
                        [{"x": _vec(para.x), "y": _vec(para.y)}], {"pairs": 512, "seed": seed})
        return [first, second]

    timed(norms)

    def blaschke():
        # a failing direction exhausts the whole search budget, so stop at the first one
        worst, wit, evals, tested = 0.0, [], 0, 0
        for d in sample_directions(3, blaschke_dirs):
            res = weak_blaschke_test(body, d, seed=seed, tol=tol)
            evals += res.evaluations
            tested += 1
            worst = max(worst, res.residual)
            if not res.verdict:
                wit.append({"direction": _vec(d), "residual": _num(res.residual),
                            "plane_normal": _vec(res.normal), "plane_offset": _num(res.offset)})
                break
        return _entry("weak_blaschke", not wit, worst, wit,
                      {"dirs": blaschke_dirs, "tested": tested, "seed": seed, "evaluations": evals})

    timed(blaschke)

    def dual():
        if not interior:
            return _skipped("dual_blaschke", "0 is not interior to the body")
        res = dual_blaschke_check(body, psi_dirs, tol)
        wit = [{"v": _vec(v)} for v in res.empty_directions]
        return _entry("dual_blaschke", res.passed, float(np.arcsin(min(1.0, res.deviations.max()))), wit,
                      {"dirs": psi_dirs, "angular_tolerance": _num(tol.psi)})

    timed(dual)
    timed(lambda: _entry(
        "ellipsoid", cert.verdict, cert.residual,
        [{"shape": [_vec(r) for r in cert.shape], "fit_residual": _num(cert.fit_residual),
          "facet_gap": _num(cert.facet_gap)}],
        note=cert.diagnostic or None,
    ))

    if not timing:
        for e in entries:
            e.pop("runtime", None)
    return {
        "format_version": FORMAT_VERSION,
        "body_id": body_id,
        "body": {"dim": body.dim, "vertices": len(body.vertices), "facets": body.n_facets,
                 "diameter": _num(body.diameter)},
        "config": {
            "dirs": dirs,
            "offsets": [_num(o) for o in offsets],
            "seed": seed,
            "blaschke_dirs": blaschke_dirs,
            "psi_dirs": psi_dirs,
            "tolerances": {k: _num(v) for k, v in tol.as_dict().items()},
        },
        "predicates": entries,
        "all_passed": all(e["verdict"] for e in entries),
    }


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    body = _load(args.body)
    tol = _tolerances(args)
    report = analyze(
        body, Path(args.body).stem, dirs=args.dirs, offsets=args.offsets, seed=args.seed, tol=tol,
        blaschke_dirs=args.blaschke_dirs, psi_dirs=args.psi_dirs, timing=args.timing,
    )
    _emit(report, args.out)
    return 1 if args.strict and not report["all_passed"] else 0


def cmd_park(args) -> int:
    inner, outer = _load(args.inner), _load(args.outer)
    res = park(inner, outer, _tolerances(args))
    doc = {
        "format_version": FORMAT_VERSION,
        "status": res.status.value,
        "witness": _vec(res.witness) if res.witness is not None else None,
        "margin": _num(res.margin),
    }
    _emit(doc, args.out)
    return 1 if args.strict and not res.feasible else 0


def cmd_plot(args) -> int:
    body = _load(args.body)
    tol = _tolerances(args)
    if body.dim != 3:
        raise DimensionError(f"plot needs a body in R^3, got R^{body.dim}")
    if args.plane is not None:
        vals = _vector_arg(args.plane, 4, "--plane")
        if np.linalg.norm(vals[:3]) <= 1e-12:
            raise InputError("--plane: normal must be non-zero")
        n = vals[:3] / np.linalg.norm(vals[:3])
        offset = vals[3] / np.linalg.norm(vals[:3])
        try:
            svg = section_svg(body, n, offset, tol)
        except GeometryError as exc:
            raise InputError(f"--plane: {exc}") from exc
    else:
        d = _vector_arg(args.silhouette, 3, "--silhouette")
        if np.linalg.norm(d) <= 1e-12:
            raise InputError("--silhouette: direction must be non-zero")
        svg = silhouette_svg(body, d, tol)
    Path(args.out).write_text(svg, encoding="utf-8")
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for every sampled quantity (default 0)")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--strict", action="store_true", help="exit 1 when a predicate fails")
    for f in dataclasses.fields(Tolerances):
        p.add_argument(f"--tol-{f.name}", type=float, default=None, metavar="X",
                       help=f"override the {f.name} tolerance (default {f.default:g})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parkable", description="Convex-body symmetry and ellipsoid tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run every predicate on a body and print a JSON report")
    a.add_argument("body", help="body file (vertex list or generator spec)")
    a.add_argument("--dirs", type=int, default=DEFAULT_DIRECTIONS, help="sampled directions per scan")
    a.add_argument("--offsets", type=_offsets_arg, default=DEFAULT_OFFSETS,
                   help="comma-separated section offset fractions")
    a.add_argument("--blaschke-dirs", type=int, default=64, help="directions for the weak Blaschke search")
    a.add_argument("--psi-dirs", type=int, default=64, help="directions for the dual Blaschke check")
    a.add_argument("--timing", action="store_true", help="include per-predicate runtimes (not reproducible)")
    _add_common(a)
    a.set_defaults(func=cmd_analyze)

    k = sub.add_parser("park", help="try to park body C inside body B")
    k.add_argument("inner", help="body C")
    k.add_argument("outer", help="body B")
    _add_common(k)
    k.set_defaults(func=cmd_park)

    p = sub.add_parser("plot", help="draw a section or a shadow as SVG")
    p.add_argument("body")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--plane", help="nx,ny,nz,offset of the cutting plane n . x = offset")
    which.add_argument("--silhouette", help="dx,dy,dz of the viewing direction")
    p.add_argument("--out", required=True, help="SVG output path")
    for f in dataclasses.fields(Tolerances):
        p.add_argument(f"--tol-{f.name}", type=float, default=None, metavar="X", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "dirs", 1) < 1:
        parser.error("--dirs must be positive")
    try:
        return args.func(args)
    except (InputError, GeometryError, OSError) as exc:
        print(f"parkable: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Deterministic direction lattices."""

from __future__ import annotations

import numpy as np

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def fibonacci_sphere(n: int, jitter: float = 0.0, seed: int = 0) -> np.ndarray:
    """``n`` near-uniform unit vectors on the 2-sphere.

    With ``jitter > 0`` each azimuth is perturbed by a seeded uniform offset
    of that many golden-angle fractions.
    """
    if n < 1:
        raise ValueError("need at least one direction")
    k = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * k + 1.0) / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    theta = GOLDEN_ANGLE * k
    if jitter:
        rng = np.random.default_rng(seed)
        theta = theta + jitter * GOLDEN_ANGLE * rng.uniform(-0.5, 0.5, n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def circle_directions(n: int, phase: float = 0.0) -> np.ndarray:
    """``n`` equally spaced unit vectors in the plane."""
    t = phase + 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(t), np.sin(t)])


def directions(dim: int, n: int, jitter: float = 0.0, seed: int = 0) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        # half-step phase keeps the lattice off the coordinate axes
        return circle_directions(n, phase=np.pi / n)
    if dim == 3:
        return fibonacci_sphere(n, jitter=jitter, seed=seed)
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def largest_empty_cap(points: np.ndarray, probes: int = 4096) -> float:
    """Angular radius (radians) of the largest empty spherical cap, estimated.

    The cap centres are probed on a Fibonacci lattice, so the estimate is a
    lower bound accurate to about the probe spacing.
    """
    pts = np.asarray(points, dtype=float)
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    dim = pts.shape[1]
    centres = directions(dim, probes)
    cosines = np.clip(centres @ pts.T, -1.0, 1.0).max(axis=1)
    return float(np.arccos(cosines.min()))

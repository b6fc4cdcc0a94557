"""Small zoo of matrices exercising every boundary and continuity regime."""

from __future__ import annotations

import numpy as np

__all__ = [
    "disk",
    "triangle",
    "segment",
    "scalar_point",
    "stadium",
    "disk_on_flat",
    "degree3_touch",
    "ultrathin_ellipse",
    "random_matrix",
    "random_normal",
    "fixture_suite",
]


def disk() -> np.ndarray:
    """Nilpotent 2x2 whose range is the closed unit disk."""
    return np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex)


def triangle() -> np.ndarray:
    """Normal 3x3 with a triangular range: three corners, three flats."""
    return np.diag([0.0, 1.0, 1.0j]).astype(complex)


def segment() -> np.ndarray:
    """Hermitian 2x2 whose range collapses to the real segment [0, 1]."""
    return np.diag([0.0, 1.0]).astype(complex)


def scalar_point() -> np.ndarray:
    """Scalar matrix: the range is a single point."""
    return (0.2 + 0.1j) * np.eye(2, dtype=complex)


def stadium() -> np.ndarray:
    """Two Jordan-type blocks giving round caps joined by straight sides."""
    out = np.zeros((4, 4), dtype=complex)
    out[0, 1] = 2.0
    out[2, 2] = 2.0
    out[2, 3] = 2.0
    out[3, 3] = 2.0
    return out


def disk_on_flat() -> np.ndarray:
    """Unit disk tangent to the interior of a wider flat above it.

    The segment from -2+i to 2+i carries the top of the hull and the
    disk's top point i touches it from below, so the tangency lands in
    the relative interior of a flat portion.
    """
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = -2.0 + 1.0j
    out[1, 1] = 2.0 + 1.0j
    out[2, 3] = 2.0
    return out


def degree3_touch() -> np.ndarray:
    """Disk block and ellipse block meeting at one odd-degree-3 boundary touch.

    The eigenvalue gap of the rotated Hermitian family has a cubic zero
    where the two blocks' critical curves meet, so the touch point is
    fully round with split degree 3 and the preimage map loses weak
    continuity exactly there.  A rigid rotation keeps the geometry off
    the axes.
    """
    r = 3.0 * np.sqrt(2.0) / 8.0
    mu1 = (0.5 - np.sqrt(2.0) / 8.0) + 1j * (2.0 - np.sqrt(2.0)) / 4.0
    mu2 = -(0.5 + np.sqrt(2.0) / 8.0) - 1j * (2.0 + np.sqrt(2.0)) / 4.0
    core = np.zeros((4, 4), dtype=complex)
    core[0, 1] = 2.0 * r
    core[2, 2] = mu1
    core[3, 3] = mu2
    core[2, 3] = 1.0
    return np.exp(0.37j) * core


def ultrathin_ellipse() -> np.ndarray:
    """Nearly-Hermitian 2x2 whose hairline ellipse defeats the default grid.

    Useful as an honest unresolved-analysis instance: boundary
    construction keeps refining and then reports the grid as too coarse
    instead of guessing.
    """
    return np.array([[0.0, 1.0], [0.99998, 0.0]], dtype=complex)


def random_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Dense complex Gaussian matrix."""
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_normal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random normal matrix: Haar-ish unitary conjugation of a complex diagonal."""
    d = rng.normal(size=n) + 1j * rng.normal(size=n)
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(g)
    return q @ np.diag(d) @ q.conj().T


def fixture_suite(rng: np.random.Generator | None = None) -> dict[str, np.ndarray]:
    """Named fixtures covering normal, small, disk, flat, and touch regimes."""
    if rng is None:
        rng = np.random.default_rng(0)
    return {
        "normal": triangle(),
        "n3": random_matrix(3, rng),
        "disk": disk(),
        "flat": stadium(),
        "touch": degree3_touch(),
    }

"""Unit-vector chords interpolating the field of values.

Given unit vectors x and y, these maps produce a unit vector h(lambda)
with f_A(h(lambda)) = lambda f_A(x) + (1 - lambda) f_A(y) for every A,
tracing the straight chord between the two field values.  The identity
is algebraic, so residuals sit at rounding level.
"""

from __future__ import annotations

import numpy as np

from ..errors import InputError

__all__ = ["elliptic_chord", "normal_chord",
           "elliptic_chord_selection", "normal_chord_selection"]

_PARALLEL_TOL = 1e-10


def elliptic_chord(x: np.ndarray, y: np.ndarray, lam: float,
                   beta: complex | None = None,
                   overlap_power: int = 2) -> np.ndarray:
    """Chord vector between unit x and unit y at parameter lam in [0, 1].

    beta must be a unit scalar with beta^2 = (y^* x)^2 / |y^* x|^2; None
    picks the phase of y^* x.  When x^* y is real either sign of beta is
    admissible, and beta = 1 keeps the chord continuous as x^* y changes
    sign along a path.

    overlap_power controls the cross-term weight C through the factor
    (1 - |x^* y|^overlap_power).  Only the default power 2 satisfies the
    affine interpolation identity; power 1 is kept for comparison runs
    and demonstrably breaks it on generic pairs.
    """
    lam = min(max(float(lam), 0.0), 1.0)
    c = complex(np.vdot(x, y))            # x^* y
    mod2 = min(abs(c) ** 2, 1.0)
    root = np.sqrt(max(1.0 - mod2, 0.0))
    if beta is None:
        beta = np.conj(c) / abs(c) if abs(c) > 1e-14 else 1.0
    weight = 1.0 - (abs(c) if overlap_power == 1 else mod2)
    C = 2.0 * np.sqrt(max(lam * (1.0 - lam) * weight, 0.0))
    h = lam * x + (1.0 - lam) * (np.conj(c) + 1j * beta * root) * y
    u = y - c * x
    nu = np.linalg.norm(u)
    if nu > _PARALLEL_TOL:
        v = (np.sqrt(0.5)) * (x + 1j * beta * u / nu)
        h = h + (np.sqrt(0.5)) * C * v
    h = h / np.sqrt(C + 1.0)
    return h / np.linalg.norm(h)


def normal_chord(x: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """Chord vector for orthogonal unit x and y (x^* y = 0)."""
    lam = min(max(float(lam), 0.0), 1.0)
    C = 2.0 * np.sqrt(max(lam * (1.0 - lam), 0.0))
    v = np.sqrt(0.5) * (x + 1j * y)
    h = lam * x + (1.0 - lam) * 1j * y + np.sqrt(0.5) * C * v
    h = h / np.sqrt(C + 1.0)
    return h / np.linalg.norm(h)


def _spectral_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, 2))


def elliptic_chord_selection(A2: np.ndarray, x: np.ndarray, y: np.ndarray,
                             beta: complex, lam: float) -> np.ndarray:
    """Validated chord for a non-normal 2x2 matrix.

    Checks the premises the interpolation identity needs: genuinely
    elliptical range (non-normal matrix), non-orthogonal vectors, and a
    beta compatible with the overlap phase.  The bare elliptic_chord is
    the fast path used inside selection fields.
    """
    A2 = np.asarray(A2, dtype=complex)
    if A2.shape != (2, 2):
        raise InputError("elliptic chord validation needs a 2x2 matrix")
    nrm = _spectral_norm(A2)
    comm = A2 @ A2.conj().T - A2.conj().T @ A2
    if _spectral_norm(comm) <= 1e-10 * max(nrm, 1e-300) ** 2:
        raise InputError("matrix is normal; use normal_chord_selection")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    c = complex(np.vdot(x, y))
    if abs(c) <= 1e-8:
        raise InputError("overlap x^* y vanishes; chord premise fails")
    if np.linalg.norm(y - c * x) <= _PARALLEL_TOL:
        raise InputError("vectors are parallel up to phase")
    beta = complex(beta)
    ref = np.conj(c) / abs(c)
    if min(abs(beta - ref), abs(beta + ref)) > 1e-8:
        raise InputError("beta must be a unit scalar aligned with y^* x")
    return elliptic_chord(x, y, lam, beta=beta)


def normal_chord_selection(A2: np.ndarray, x: np.ndarray, y: np.ndarray,
                           lam: float) -> np.ndarray:
    """Validated chord between eigenvectors of a normal 2x2 matrix."""
    A2 = np.asarray(A2, dtype=complex)
    if A2.shape != (2, 2):
        raise InputError("normal chord validation needs a 2x2 matrix")
    nrm = max(_spectral_norm(A2), 1e-300)
    comm = A2 @ A2.conj().T - A2.conj().T @ A2
    if _spectral_norm(comm) > 1e-10 * nrm ** 2:
        raise InputError("matrix is not normal")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if abs(np.vdot(x, y)) > 1e-8:
        raise InputError("eigenvectors must be orthogonal")
    mus = []
    for v in (x, y):
        mu = complex(np.vdot(v, A2 @ v))
        if np.linalg.norm(A2 @ v - mu * v) > 1e-8 * nrm:
            raise InputError("input is not an eigenvector")
        mus.append(mu)
    if abs(mus[0] - mus[1]) <= 1e-10 * nrm:
        raise InputError("eigenvalues coincide; no chord to trace")
    return normal_chord(x, y, lam)

"""Basic field-of-values linear algebra: Hermitian parts, rotations,
quadratic forms, eigendecompositions, and compressions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigensolverError, InputError, NonHermitianError, RankDeficientSpanError

__all__ = [
    "HermitianEigenResult",
    "as_square_matrix",
    "as_unit_vector",
    "spectral_scale",
    "real_part",
    "imag_part",
    "rotate",
    "fov_eval",
    "hermitian_eigs",
    "compress",
]


def as_square_matrix(A) -> np.ndarray:
    """Validate and return A as a square complex ndarray."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InputError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix contains non-finite entries")
    return A


def as_unit_vector(x, n: int | None = None, tol: float = 1e-6) -> np.ndarray:
    """Validate and return x as a unit-norm complex vector."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    if n is not None and x.shape[0] != n:
        raise InputError(f"expected a vector of length {n}, got {x.shape[0]}")
    nrm = np.linalg.norm(x)
    if not np.isfinite(nrm) or abs(nrm - 1.0) > tol:
        raise InputError(f"expected a unit vector, got norm {nrm}")
    return x


def spectral_scale(A) -> float:
    """Spectral norm of A, floored at 1 ulp to keep relative tolerances usable."""
    s = float(np.linalg.norm(np.asarray(A, dtype=complex), 2))
    return max(s, np.finfo(float).tiny)


def real_part(A) -> np.ndarray:
    """Return the Hermitian part (A + A^*) / 2."""
    A = as_square_matrix(A)
    return (A + A.conj().T) / 2.0


def imag_part(A) -> np.ndarray:
    """Return the Hermitian matrix (A - A^*) / 2i."""
    A = as_square_matrix(A)
    return (A - A.conj().T) / 2.0j


def rotate(A, phi: float) -> np.ndarray:
    """Return e^{-i phi} A."""
    A = as_square_matrix(A)
    return np.exp(-1j * float(phi)) * A


def fov_eval(A, x) -> complex:
    """Evaluate the field-of-values map x^* A x for a unit vector x."""
    A = as_square_matrix(A)
    x = as_unit_vector(x, A.shape[0])
    return complex(x.conj() @ A @ x)


@dataclass(frozen=True)
class HermitianEigenResult:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    values: np.ndarray   # (n,) real, ascending
    vectors: np.ndarray  # (n, n) complex, vectors[:, j] pairs with values[j]


def hermitian_eigs(H, check_tol: float = 1e-10) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix, ascending order.

    Raises NonHermitianError when the anti-Hermitian residual exceeds
    check_tol relative to the norm of H.
    """
    H = as_square_matrix(H)
    scale = max(spectral_scale(H), 1.0)
    if np.linalg.norm(H - H.conj().T) > check_tol * scale:
        raise NonHermitianError("matrix is not Hermitian within tolerance")
    try:
        values, vectors = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(str(exc)) from exc
    return HermitianEigenResult(values=values, vectors=vectors)


def compress(A, span) -> tuple[np.ndarray, np.ndarray]:
    """Compress A onto the span of the given vectors.

    span is a sequence of k vectors in C^n.  Returns (A_k, Q) where Q is an
    (n, k) orthonormal basis of the span (Gram-Schmidt with one
    re-orthogonalization pass) and A_k = Q^* A Q.  Raises
    RankDeficientSpanError when the span is numerically rank deficient.
    """
    A = as_square_matrix(A)
    n = A.shape[0]
    V = np.asarray(span, dtype=complex)
    if V.ndim != 2:
        raise InputError("span must be a 2-d array of row vectors")
    if V.shape[1] != n:
        raise InputError(f"span vectors must have length {n}")
    k = V.shape[0]
    if k == 0 or k > n:
        raise InputError(f"span must hold between 1 and {n} vectors")
    if np.linalg.svd(V, compute_uv=False)[-1] < 1e-10 * max(1.0, np.abs(V).max()):
        raise RankDeficientSpanError("compression span is numerically rank deficient")
    Q = np.empty((n, k), dtype=complex)
    for j in range(k):
        v = V[j].copy()
        for _ in range(2):  # second pass restores orthogonality lost to cancellation
            for i in range(j):
                v -= (Q[:, i].conj() @ v) * Q[:, i]
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise RankDeficientSpanError("compression span is numerically rank deficient")
        Q[:, j] = v / nrm
    return Q.conj().T @ A @ Q, Q

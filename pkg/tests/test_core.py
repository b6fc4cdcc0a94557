"""Checks for the basic linear algebra layer."""

import numpy as np
import pytest

from nrselect.core import (
    as_square_matrix,
    as_unit_vector,
    compress,
    fov_eval,
    hermitian_eigs,
    imag_part,
    real_part,
    rotate,
    spectral_scale,
)
from nrselect.errors import InputError, NonHermitianError, RankDeficientSpanError


def test_as_square_matrix_accepts_nested_lists():
    A = as_square_matrix([[1, 2], [3, 4]])
    assert A.dtype == complex
    assert A.shape == (2, 2)


@pytest.mark.parametrize("bad", [
    [[1, 2, 3], [4, 5, 6]],
    [1, 2, 3],
    np.zeros((0, 0)),
    [[np.inf, 0], [0, 1]],
    [[np.nan, 0], [0, 1]],
])
def test_as_square_matrix_rejects(bad):
    with pytest.raises(InputError):
        as_square_matrix(bad)


def test_as_unit_vector_norm_and_length_checks():
    x = as_unit_vector([1 / np.sqrt(2), 1j / np.sqrt(2)])
    assert x.shape == (2,)
    with pytest.raises(InputError):
        as_unit_vector([1.0, 1.0])
    with pytest.raises(InputError):
        as_unit_vector([1.0, 0.0], n=3)


def test_spectral_scale_is_the_two_norm():
    rng = np.random.default_rng(11)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert spectral_scale(A) == pytest.approx(np.linalg.norm(A, 2))
    assert spectral_scale(np.zeros((3, 3))) > 0


def test_hermitian_parts_recompose_the_matrix():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    H, K = real_part(A), imag_part(A)
    assert np.allclose(H, H.conj().T)
    assert np.allclose(K, K.conj().T)
    assert np.allclose(H + 1j * K, A)


def test_rotate_scales_the_quadratic_form():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    x /= np.linalg.norm(x)
    phi = 0.83
    assert np.allclose(rotate(A, phi), np.exp(-1j * phi) * A)
    assert fov_eval(rotate(A, phi), x) == pytest.approx(
        np.exp(-1j * phi) * fov_eval(A, x))


def test_fov_eval_frozen_value():
    A = np.array([[1.0, 2.0], [0.0, 1j]])
    x = np.array([0.6, 0.8j])
    # x^* A x = .36 + 2*(.6)(.8j) + .64j = 0.36 + 1.6j
    assert fov_eval(A, x) == pytest.approx(0.36 + 1.6j, abs=1e-15)


def test_fov_eval_rejects_non_unit_vectors():
    with pytest.raises(InputError):
        fov_eval(np.eye(2), [2.0, 0.0])


def test_hermitian_eigs_ascending_with_small_residual():
    rng = np.random.default_rng(9)
    B = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    H = (B + B.conj().T) / 2
    res = hermitian_eigs(H)
    assert np.all(np.diff(res.values) >= 0)
    for j in range(6):
        v = res.vectors[:, j]
        assert np.linalg.norm(H @ v - res.values[j] * v) < 1e-10 * spectral_scale(H)
    assert np.allclose(res.vectors.conj().T @ res.vectors, np.eye(6), atol=1e-12)


def test_hermitian_eigs_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        hermitian_eigs(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_compress_gives_orthonormal_basis_and_matching_form():
    rng = np.random.default_rng(21)
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    span = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
    Ak, Q = compress(A, span)
    assert Ak.shape == (2, 2)
    assert np.allclose(Q.conj().T @ Q, np.eye(2), atol=1e-12)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    # Values of the compression are values of A on the lifted vector.
    assert fov_eval(Ak, v) == pytest.approx(fov_eval(A, Q @ v), abs=1e-12)


def test_compress_rejects_rank_deficient_span():
    A = np.eye(3)
    span = np.array([[1.0, 0.0, 0.0], [1.0, 1e-14, 0.0]])
    with pytest.raises(RankDeficientSpanError):
        compress(A, span)


def test_compress_rejects_bad_span_shapes():
    with pytest.raises(InputError):
        compress(np.eye(3), np.ones((1, 2)))
    with pytest.raises(InputError):
        compress(np.eye(2), np.ones((3, 2)))

"""Estimator-style wrappers over the functional core.

Both classes follow the scikit-learn calling convention: constructor
parameters are plain values retrievable through get_params, fit builds
the analysis and stores results in trailing-underscore attributes, and
the query methods consume arrays.  The asymmetry to keep in mind is that
fit takes the matrix itself while transform and predict take query
points, so the mixin-provided fit_transform shortcut is deliberately
not offered.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .boundary import build_boundary_atlas
from .config import ToleranceConfig
from .continuity import classify_continuity
from .core import as_square_matrix
from .errors import InputError
from .selection import build_selection

__all__ = ["SelectionTransformer", "ContinuityClassifier", "points_as_complex"]


def points_as_complex(X) -> np.ndarray:
    """Accept query points as complex (m,) or real (m, 2) pairs."""
    X = np.asarray(X)
    if X.ndim == 1:
        return X.astype(complex)
    if X.ndim == 2 and X.shape[1] == 2 and not np.iscomplexobj(X):
        return X[:, 0] + 1j * X[:, 1]
    if X.ndim == 2 and X.shape[1] == 1:
        return X[:, 0].astype(complex)
    raise InputError(
        f"expected points as complex (m,) or real (m, 2), got shape {X.shape}")


def _config(grid_size: int, seed: int, selection_residual: float) -> ToleranceConfig:
    try:
        return ToleranceConfig(grid_size=grid_size, seed=seed,
                               selection_residual=selection_residual)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


class SelectionTransformer(BaseEstimator):
    """Continuous right inverse of the field-of-values map, as a transformer.

    fit(A) builds a selection g for the n-by-n matrix A.  transform maps
    points z in F(A) to rows of 2n reals holding the unit vector g(z)
    with components interleaved re, im.  predict returns the achieved
    values x* A x, which reproduce the queries up to the residual bound,
    and score is the negated worst residual so that bigger is better.
    """

    def __init__(self, epsilon: float | None = None, strategy: str = "auto",
                 grid_size: int = 2048, seed: int = 42,
                 selection_residual: float = 1e-7):
        self.epsilon = epsilon
        self.strategy = strategy
        self.grid_size = grid_size
        self.seed = seed
        self.selection_residual = selection_residual

    def fit(self, X, y=None):
        A = as_square_matrix(np.asarray(X, dtype=complex))
        cfg = _config(self.grid_size, self.seed, self.selection_residual)
        self.field_ = build_selection(A, cfg, epsilon=self.epsilon,
                                      strategy=self.strategy)
        self.atlas_ = self.field_.atlas
        self.report_ = self.field_.report
        self.matrix_ = self.field_.matrix
        self.n_features_in_ = int(A.shape[1])
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "field_")
        zs = points_as_complex(X)
        Y = self.field_.select(zs)
        out = np.empty((zs.size, 2 * Y.shape[1]))
        out[:, 0::2] = Y.real
        out[:, 1::2] = Y.imag
        return out

    def inverse_transform(self, Yp) -> np.ndarray:
        """Map packed vectors back to their field-of-values points (m, 2)."""
        check_is_fitted(self, "field_")
        Yp = np.asarray(Yp, dtype=float)
        if Yp.ndim != 2 or Yp.shape[1] != 2 * self.matrix_.shape[0]:
            raise InputError(f"expected shape (m, {2 * self.matrix_.shape[0]}), "
                             f"got {Yp.shape}")
        Y = Yp[:, 0::2] + 1j * Yp[:, 1::2]
        vals = np.einsum("ti,ij,tj->t", Y.conj(), self.matrix_, Y)
        return np.column_stack([vals.real, vals.imag])

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "field_")
        zs = points_as_complex(X)
        Y = self.field_.select(zs)
        return np.einsum("ti,ij,tj->t", Y.conj(), self.matrix_, Y)

    def score(self, X, y=None) -> float:
        zs = points_as_complex(X)
        vals = self.predict(zs)
        return -float(np.abs(vals - zs).max()) if zs.size else 0.0


class ContinuityClassifier(BaseEstimator):
    """Labels boundary points by the continuity taxonomy of the inverse map.

    fit(A) builds the boundary atlas and continuity report; summary
    verdicts land in strongly_continuous_ and weakly_continuous_.
    predict labels each query with the position class of the nearest
    exceptional point when one sits within match_tol of it (relative to
    the matrix scale) and with "regular" otherwise.
    """

    _LABELS = ("regular", "corner", "flat-interior", "flat-endpoint-round",
               "fully-round")

    def __init__(self, grid_size: int = 2048, seed: int = 42,
                 match_tol: float = 1e-6):
        self.grid_size = grid_size
        self.seed = seed
        self.match_tol = match_tol

    def fit(self, X, y=None):
        A = as_square_matrix(np.asarray(X, dtype=complex))
        cfg = _config(self.grid_size, self.seed, 1e-7)
        self.atlas_ = build_boundary_atlas(A, cfg)
        self.report_ = classify_continuity(self.atlas_)
        self.strongly_continuous_ = self.report_.strongly_continuous
        self.weakly_continuous_ = self.report_.weakly_continuous
        self.n_features_in_ = int(A.shape[1])
        self.classes_ = np.array(self._LABELS)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "report_")
        zs = points_as_complex(X)
        tol = self.match_tol * max(self.atlas_.scale, 1.0)
        labels = []
        for z in zs:
            best, label = np.inf, "regular"
            for rec in self.report_.records:
                d = abs(z - rec.z)
                if d < best and d <= tol:
                    best, label = d, rec.position
            labels.append(label)
        return np.array(labels)

    def score(self, X, y) -> float:
        y = np.asarray(y)
        pred = self.predict(X)
        return float(np.mean(pred == y)) if y.size else 0.0

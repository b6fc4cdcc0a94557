"""Scikit-learn style wrappers around the selection and continuity analyses."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from nrselect import gallery
from nrselect.errors import ExcisionRequiredError, InputError
from nrselect.estimator import (
    ContinuityClassifier,
    SelectionTransformer,
    points_as_complex,
)


def test_points_as_complex_forms():
    zs = np.array([1 + 2j, 3 - 1j])
    assert np.array_equal(points_as_complex(zs), zs)
    pairs = np.array([[1.0, 2.0], [3.0, -1.0]])
    assert np.array_equal(points_as_complex(pairs), zs)
    with pytest.raises(InputError):
        points_as_complex(np.ones((2, 3)))


def test_get_params_and_clone_round_trip():
    est = SelectionTransformer(epsilon=0.2, grid_size=512, seed=9)
    params = est.get_params()
    assert params["epsilon"] == 0.2
    assert params["grid_size"] == 512
    twin = clone(est)
    assert twin.get_params() == params


def test_transform_packs_interleaved_components():
    est = SelectionTransformer(grid_size=1024).fit(gallery.disk())
    zs = np.array([0.1 + 0.2j, -0.3 + 0.1j, 0.0j])
    out = est.transform(zs)
    assert out.shape == (3, 4)
    Y = est.field_.select(zs)
    assert np.allclose(out[:, 0::2], Y.real)
    assert np.allclose(out[:, 1::2], Y.imag)
    assert np.allclose(np.linalg.norm(out, axis=1), 1.0, atol=1e-10)


def test_predict_and_score_report_the_residual():
    est = SelectionTransformer(grid_size=1024).fit(gallery.triangle())
    zs = np.array([0.2 + 0.2j, 0.5 + 0.1j])
    vals = est.predict(zs)
    assert np.abs(vals - zs).max() < 1e-7
    assert est.score(zs) == -np.abs(vals - zs).max()


def test_inverse_transform_round_trips():
    est = SelectionTransformer(grid_size=1024).fit(gallery.disk())
    zs = np.array([0.3 - 0.2j, -0.1 + 0.4j])
    back = est.inverse_transform(est.transform(zs))
    assert np.abs(back[:, 0] + 1j * back[:, 1] - zs).max() < 1e-9
    with pytest.raises(InputError):
        est.inverse_transform(np.ones((2, 3)))


def test_unfitted_estimators_raise():
    with pytest.raises(NotFittedError):
        SelectionTransformer().transform([0.0j])
    with pytest.raises(NotFittedError):
        ContinuityClassifier().predict([0.0j])


def test_fit_honors_epsilon_requirement():
    with pytest.raises(ExcisionRequiredError):
        SelectionTransformer(grid_size=1024).fit(gallery.degree3_touch())
    est = SelectionTransformer(grid_size=1024, epsilon=0.15)
    est.fit(gallery.degree3_touch())
    assert est.field_.strategy == "excised"


def test_classifier_summary_flags():
    clf = ContinuityClassifier(grid_size=1024).fit(gallery.degree3_touch())
    assert not clf.weakly_continuous_
    assert not clf.strongly_continuous_
    tri = ContinuityClassifier(grid_size=1024).fit(gallery.triangle())
    assert tri.weakly_continuous_
    assert not tri.strongly_continuous_


def test_classifier_predict_labels_boundary_points():
    clf = ContinuityClassifier(grid_size=1024).fit(gallery.degree3_touch())
    w = clf.report_.weak_failures[0]
    labels = clf.predict([w, 123.0 + 0.0j])
    assert labels[0] == "fully-round"
    assert labels[1] == "regular"
    assert set(labels) <= set(clf.classes_)


def test_classifier_score_is_label_accuracy():
    clf = ContinuityClassifier(grid_size=1024).fit(gallery.triangle())
    X = np.array([1.0 + 0.0j, 0.5 + 0.5j])
    y = np.array(["corner", "regular"])
    assert clf.score(X, y) == 1.0
    assert clf.score(X, np.array(["corner", "corner"])) == 0.5


def test_seeded_fits_are_deterministic():
    a = SelectionTransformer(grid_size=1024, seed=3).fit(gallery.stadium())
    b = SelectionTransformer(grid_size=1024, seed=3).fit(gallery.stadium())
    zs = np.array([0.5 + 0.2j, 1.2 - 0.4j])
    assert np.array_equal(a.transform(zs), b.transform(zs))

"""Weak and strong continuity classification of the inverse map."""

import numpy as np
import pytest

from nrselect import gallery
from nrselect.boundary import build_boundary_atlas
from nrselect.config import ToleranceConfig
from nrselect.continuity import classify_continuity

CFG = ToleranceConfig(grid_size=1024)


def report_for(A):
    return classify_continuity(build_boundary_atlas(A, CFG))


def test_disk_has_no_exceptional_points_and_full_continuity():
    rep = report_for(gallery.disk())
    assert rep.records == ()
    assert rep.strongly_continuous
    assert rep.weakly_continuous


def test_triangle_corners_break_strong_but_not_weak():
    # Each edge-generating crossing records both of its endpoints, so the
    # three vertices show up twice each, always as corners.
    rep = report_for(gallery.triangle())
    assert rep.weakly_continuous
    assert not rep.strongly_continuous
    corner_recs = [r for r in rep.records if r.position == "corner"]
    assert len(corner_recs) == 6
    for r in corner_recs:
        assert not r.strong_ok
        assert r.weak_ok
    # Deduplicated failure set: one entry per vertex.
    assert len(rep.strong_failures) == 3


def test_flat_interior_points_keep_strong_continuity():
    # The tangency of the disk with the wide flat above it sits in the
    # flat's relative interior, where strong continuity survives.
    rep = report_for(gallery.disk_on_flat())
    flat_recs = [r for r in rep.records if r.position == "flat-interior"]
    assert flat_recs
    for r in flat_recs:
        assert r.strong_ok
        assert r.weak_ok
        assert r.split_degree == 1
        assert abs(r.z - 1j) < 1e-6
    assert rep.weakly_continuous


def test_stadium_records_sit_at_flat_endpoints():
    rep = report_for(gallery.stadium())
    assert {r.position for r in rep.records} == {"flat-endpoint-round"}
    assert len(rep.records) == 4
    for r in rep.records:
        assert not r.strong_ok
        assert r.weak_ok
    assert rep.weakly_continuous


def test_flat_endpoints_break_strong_continuity():
    rep = report_for(gallery.degree3_touch())
    end_recs = [r for r in rep.records if r.position == "flat-endpoint-round"]
    assert end_recs
    for r in end_recs:
        assert not r.strong_ok
        assert r.weak_ok


def test_odd_degree_touch_breaks_weak_continuity():
    rep = report_for(gallery.degree3_touch())
    assert not rep.weakly_continuous
    assert len(rep.weak_failures) == 1
    w = rep.weak_failures[0]
    assert abs(w - (0.494443 + 0.191771j)) < 1e-5
    bad = [r for r in rep.records if not r.weak_ok]
    assert len(bad) == 1
    assert bad[0].position == "fully-round"
    assert bad[0].split_degree == 3


def test_weak_failures_are_a_subset_of_strong_failures():
    rep = report_for(gallery.degree3_touch())
    for w in rep.weak_failures:
        assert min(abs(w - s) for s in rep.strong_failures) < 1e-12


def test_small_matrices_are_always_weakly_continuous():
    # Weak continuity holds for every matrix with n at most 3.
    rng = np.random.default_rng(101)
    for _ in range(10):
        n = int(rng.integers(2, 4))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rep = report_for(A)
        assert rep.weakly_continuous, f"weak failure for n={n}: {rep.weak_failures}"


def test_normal_matrices_are_weakly_continuous():
    rng = np.random.default_rng(103)
    for _ in range(5):
        A = gallery.random_normal(int(rng.integers(2, 7)), rng)
        rep = report_for(A)
        assert rep.weakly_continuous


def test_degenerate_kinds_pass_through():
    assert report_for(gallery.segment()).degenerate_kind == "segment"
    assert report_for(gallery.scalar_point()).degenerate_kind == "point"
    seg = report_for(gallery.segment())
    assert seg.strongly_continuous
    assert seg.records == ()


def test_report_scale_matches_atlas():
    atlas = build_boundary_atlas(gallery.triangle(), CFG)
    rep = classify_continuity(atlas)
    assert rep.scale == pytest.approx(atlas.scale)

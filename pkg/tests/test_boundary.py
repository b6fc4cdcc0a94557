"""Boundary atlas construction: branch tracking, arcs, taxonomy, degrees."""

import numpy as np
import pytest

from nrselect import gallery
from nrselect.boundary import (
    FlatArc,
    RoundArc,
    branch_derivative,
    build_boundary_atlas,
    classify_boundary_point,
    critical_curve,
    track_branches,
)
from nrselect.config import ToleranceConfig
from nrselect.core import spectral_scale
from nrselect.errors import BoundaryPointError, GridTooCoarseError

CFG = ToleranceConfig(grid_size=1024)


def test_disk_atlas_is_one_round_arc_of_radius_one():
    atlas = build_boundary_atlas(gallery.disk(), CFG)
    assert atlas.degenerate_kind == "full-dimensional"
    assert len(atlas.exceptional) == 0
    assert len(atlas.corners) == 0
    kinds = [a.kind for a in atlas.arcs]
    assert kinds == ["round"]
    # Support function of the unit disk is identically 1.
    assert np.abs(atlas.support_values - 1.0).max() < 1e-12
    assert atlas.diameter() == pytest.approx(2.0, abs=1e-10)


def test_triangle_atlas_recovers_vertices_and_edges():
    atlas = build_boundary_atlas(gallery.triangle(), CFG)
    vertices = {0.0 + 0.0j, 1.0 + 0.0j, 1j}
    got = sorted(atlas.corners, key=lambda z: (z.real, z.imag))
    assert len(got) == 3
    for z in got:
        assert min(abs(z - v) for v in vertices) < 1e-7
    flats = atlas.flat_arcs()
    assert len(flats) == 3
    lengths = sorted(f.length() for f in flats)
    assert np.allclose(lengths, [1.0, 1.0, np.sqrt(2)], atol=1e-7)
    # Every flat runs between two vertices.
    for f in flats:
        assert min(abs(f.z_minus - v) for v in vertices) < 1e-7
        assert min(abs(f.z_plus - v) for v in vertices) < 1e-7


def test_track_branches_continuity_and_alignment():
    rng = np.random.default_rng(17)
    A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    branches = track_branches(A, tol=CFG)
    assert len(branches) == 4
    scale = spectral_scale(A)
    for br in branches:
        assert np.abs(np.diff(br.values)).max() < 0.1 * scale
        overlaps = np.einsum("ti,ti->t", br.vectors[:-1].conj(), br.vectors[1:])
        assert overlaps.real.min() > 0.0
        # Wraps around: the same eigenvalue at theta 0 and 2 pi.
        assert abs(br.values[0] - br.values[-1]) < 1e-8 * scale


def test_branch_derivative_matches_finite_differences():
    rng = np.random.default_rng(23)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    branches = track_branches(A, tol=CFG)
    br = branches[0]
    d_hf = branch_derivative(A, br)
    d_fd = np.gradient(br.values, br.thetas)
    # Away from crossings the Hellmann-Feynman slope is the curve slope.
    # Endpoints are skipped: gradient is one-sided and first order there.
    gap = np.min(np.abs(np.array([b.values for b in branches[1:]]) - br.values),
                 axis=0)
    smooth = gap > 0.05 * spectral_scale(A)
    smooth[0] = smooth[-1] = False
    assert np.abs(d_hf - d_fd)[smooth].max() < 1e-3 * spectral_scale(A)


def test_critical_curve_matches_the_quadratic_form():
    rng = np.random.default_rng(29)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    for br in track_branches(A, tol=CFG):
        curve = critical_curve(br)
        vals = np.einsum("ti,ij,tj->t", br.vectors.conj(), A, br.vectors)
        assert np.abs(curve - vals).max() < 1e-9 * spectral_scale(A)


def test_degenerate_kinds_detected():
    assert build_boundary_atlas(gallery.segment(), CFG).degenerate_kind == "segment"
    assert build_boundary_atlas(gallery.scalar_point(), CFG).degenerate_kind == "point"
    full = build_boundary_atlas(gallery.disk(), CFG)
    assert full.degenerate_kind == "full-dimensional"


def test_degenerate_atlases_have_no_arcs():
    atlas = build_boundary_atlas(gallery.segment(), CFG)
    assert atlas.arcs == ()
    assert atlas.exceptional == ()


def test_stadium_flats_come_from_degree_one_crossings():
    atlas = build_boundary_atlas(gallery.stadium(), CFG)
    flats = atlas.flat_arcs()
    assert len(flats) == 2
    degree_one = [e for e in atlas.exceptional
                  if e.involves_max and e.degree_resolved and e.split_degree == 1]
    assert len(degree_one) >= 2
    # Each flat's endpoints are the two branch critical values at its crossing.
    for f in flats:
        e = min(degree_one, key=lambda e: abs((e.theta0 - f.theta) % (2 * np.pi)))
        pair = sorted(e.z_pair, key=lambda z: (z.real, z.imag))
        ends = sorted([f.z_minus, f.z_plus], key=lambda z: (z.real, z.imag))
        assert abs(pair[0] - ends[0]) < 1e-6
        assert abs(pair[1] - ends[1]) < 1e-6


def test_degree_three_touch_point_located_and_resolved():
    atlas = build_boundary_atlas(gallery.degree3_touch(), CFG)
    deg3 = [e for e in atlas.exceptional
            if e.involves_max and e.degree_resolved and e.split_degree == 3]
    assert len(deg3) == 1
    w = deg3[0].z
    assert abs(w - (0.494443 + 0.191771j)) < 1e-5


def test_hull_slack_signs():
    atlas = build_boundary_atlas(gallery.triangle(), CFG)
    inside = 0.25 + 0.2j
    outside = 2.0 + 2.0j
    boundary = 0.5 + 0.0j          # midpoint of the bottom edge
    s = atlas.hull_slack([inside, outside, boundary])
    assert s[0] < -1e-3
    assert s[1] > 1.0
    assert abs(s[2]) < 1e-9
    assert atlas.contains(inside)
    assert not atlas.contains(outside)


def test_inner_margin_is_small_and_positive():
    atlas = build_boundary_atlas(gallery.triangle(), CFG)
    m = atlas.inner_margin()
    assert 0 < m < 0.05 * atlas.diameter()


def test_classify_boundary_point_taxonomy():
    tri = build_boundary_atlas(gallery.triangle(), CFG)
    assert classify_boundary_point(tri, 1.0 + 0.0j) == "corner"
    assert classify_boundary_point(tri, 0.5 + 0.0j) == "flat-interior"
    disk = build_boundary_atlas(gallery.disk(), CFG)
    assert classify_boundary_point(disk, 1.0 + 0.0j) == "fully-round"
    stad = build_boundary_atlas(gallery.stadium(), CFG)
    f = stad.flat_arcs()[0]
    assert classify_boundary_point(stad, f.z_minus) == "flat-endpoint-round"


def test_classify_boundary_point_rejects_off_boundary():
    atlas = build_boundary_atlas(gallery.disk(), CFG)
    with pytest.raises(BoundaryPointError):
        classify_boundary_point(atlas, 0.1 + 0.1j)
    with pytest.raises(BoundaryPointError):
        classify_boundary_point(atlas, 3.0 + 0.0j)


def test_boundary_polyline_walks_every_arc():
    atlas = build_boundary_atlas(gallery.triangle(), CFG)
    ths, zs, ids = atlas.boundary_polyline()
    assert zs.size == ths.size == ids.size
    assert set(ids) == set(range(len(atlas.arcs)))
    # All polyline points sit on the boundary: slack about zero.
    assert np.abs(atlas.hull_slack(zs)).max() < 1e-6


def test_needle_ellipse_raises_grid_too_coarse():
    with pytest.raises(GridTooCoarseError):
        build_boundary_atlas(gallery.ultrathin_ellipse(), CFG)


def test_arc_dataclass_kinds():
    atlas = build_boundary_atlas(gallery.triangle(), CFG)
    for arc in atlas.arcs:
        if isinstance(arc, FlatArc):
            assert arc.kind == "flat"
        else:
            assert isinstance(arc, RoundArc)
            assert arc.kind == "round"
            assert arc.is_corner

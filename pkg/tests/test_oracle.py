"""Independent verification tools: preimage search, probes, audits, Bloch map."""

import numpy as np
import pytest

from nrselect import gallery
from nrselect.boundary import build_boundary_atlas
from nrselect.config import ToleranceConfig
from nrselect.core import fov_eval, spectral_scale
from nrselect.errors import InputError
from nrselect.oracle import (
    bloch_map,
    continuity_audit,
    enumerate_preimage_fiber,
    openness_probe,
    phase_distance,
    preimage_search,
)
from nrselect.selection import build_selection

CFG = ToleranceConfig(grid_size=1024)


def test_preimage_search_recovers_interior_and_boundary_points():
    rng = np.random.default_rng(71)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    scale = spectral_scale(A)
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    x /= np.linalg.norm(x)
    z = fov_eval(A, x)
    res = preimage_search(A, z, rng=np.random.default_rng(1))
    assert res.converged
    assert res.residual < 1e-9 * scale
    assert abs(np.linalg.norm(res.x) - 1.0) < 1e-12
    assert abs(fov_eval(A, res.x) - z) < 1e-9 * scale


def test_preimage_search_reports_failure_outside_the_range():
    A = gallery.disk()
    res = preimage_search(A, 5.0 + 0.0j, rng=np.random.default_rng(2))
    assert not res.converged
    # Best achievable distance is to the closest range point.
    assert res.residual == pytest.approx(4.0, abs=1e-6)


def test_fiber_counts_match_the_geometry():
    rng = np.random.default_rng(3)
    # Center of the disk: exactly the two standard basis directions work.
    fiber0 = enumerate_preimage_fiber(gallery.disk(), 0.0 + 0.0j, rng=rng)
    assert len(fiber0) == 2
    # A triangle vertex has a one-dimensional eigenspace: single class.
    fiber1 = enumerate_preimage_fiber(gallery.triangle(), 1.0 + 0.0j,
                                      rng=np.random.default_rng(4))
    assert len(fiber1) == 1
    for x in fiber0 + fiber1:
        assert abs(np.linalg.norm(x) - 1.0) < 1e-8


def test_phase_distance_properties():
    rng = np.random.default_rng(5)
    x = rng.normal(size=4) + 1j * rng.normal(size=4)
    x /= np.linalg.norm(x)
    y = rng.normal(size=4) + 1j * rng.normal(size=4)
    y -= (x.conj() @ y) * x
    y /= np.linalg.norm(y)
    # The sqrt in the metric turns 1 ulp of overlap error into about 1e-8.
    assert phase_distance(x, np.exp(0.7j) * x) < 1e-7
    assert phase_distance(x, y) == pytest.approx(np.sqrt(2), abs=1e-12)
    assert phase_distance(x, y) == pytest.approx(phase_distance(y, x), abs=1e-15)


def test_bloch_map_frozen_directions():
    e1 = np.array([1.0, 0.0], dtype=complex)
    e2 = np.array([0.0, 1.0], dtype=complex)
    assert np.allclose(bloch_map(e1), [0.0, 0.0, 1.0], atol=1e-14)
    assert np.allclose(bloch_map(e2), [0.0, 0.0, -1.0], atol=1e-14)
    plus = (e1 + e2) / np.sqrt(2)
    assert np.allclose(bloch_map(plus), [1.0, 0.0, 0.0], atol=1e-14)
    plus_i = (e1 + 1j * e2) / np.sqrt(2)
    assert np.allclose(bloch_map(plus_i), [0.0, -1.0, 0.0], atol=1e-14)


def test_bloch_map_preserves_projector_inner_products():
    # <xx*, yy*> = (<psi_x, psi_y> + 1) / 2 in the trace-zero basis.
    rng = np.random.default_rng(7)
    for _ in range(10):
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        x /= np.linalg.norm(x)
        y = rng.normal(size=2) + 1j * rng.normal(size=2)
        y /= np.linalg.norm(y)
        lhs = abs(x.conj() @ y) ** 2
        rhs = 0.5 * (np.dot(bloch_map(x), bloch_map(y)) + 1.0)
        assert lhs == pytest.approx(rhs, abs=1e-12)
    assert np.linalg.norm(bloch_map(x)) == pytest.approx(1.0, abs=1e-12)


def test_bloch_map_accepts_hermitian_input_and_rejects_junk():
    x = np.array([0.6, 0.8j])
    outer = np.outer(x, x.conj())
    assert np.allclose(bloch_map(outer), bloch_map(x), atol=1e-12)
    with pytest.raises(InputError):
        bloch_map(np.array([1.0, 1.0]))          # not unit
    with pytest.raises(InputError):
        bloch_map(np.array([[0.0, 1.0], [0.0, 0.0]]))  # not Hermitian
    with pytest.raises(InputError):
        bloch_map(np.ones(3))                    # wrong dimension


def test_probe_regular_round_point_is_weakly_continuous():
    A = gallery.disk()
    atlas = build_boundary_atlas(A, CFG)
    probe = openness_probe(A, 1.0 + 0.0j, atlas)
    assert probe.verdict == "weakly-continuous-evidence"
    assert probe.witnesses.shape[0] >= 1
    assert any(s.approaching for s in probe.sequences)


def test_probe_corner_is_weakly_continuous():
    A = gallery.triangle()
    atlas = build_boundary_atlas(A, CFG)
    probe = openness_probe(A, 1.0 + 0.0j, atlas)
    assert probe.verdict == "weakly-continuous-evidence"


def test_probe_flat_interior_is_weakly_continuous():
    A = gallery.stadium()
    atlas = build_boundary_atlas(A, CFG)
    f = atlas.flat_arcs()[0]
    mid = 0.5 * (f.z_minus + f.z_plus)
    probe = openness_probe(A, mid, atlas)
    assert probe.verdict == "weakly-continuous-evidence"


def test_probe_finds_the_odd_degree_failure():
    A = gallery.degree3_touch()
    atlas = build_boundary_atlas(A, CFG)
    from nrselect.continuity import classify_continuity
    w = classify_continuity(atlas).weak_failures[0]
    probe = openness_probe(A, w, atlas)
    assert probe.verdict == "failure-evidence"
    # Two eigenspace families meet at the touch: several witness classes.
    assert probe.witnesses.shape[0] >= 2


def test_probe_rejects_interior_points():
    A = gallery.disk()
    atlas = build_boundary_atlas(A, CFG)
    with pytest.raises(InputError):
        openness_probe(A, 0.2 + 0.1j, atlas)


def audit_of(maker, **kw):
    fld = build_selection(maker(), CFG, **kw)
    return continuity_audit(fld)


def test_audit_passes_honest_fields():
    for maker in (gallery.disk, gallery.triangle):
        rep = audit_of(maker)
        assert rep.passed
        assert rep.ratio <= 0.9
        assert rep.pairs_coarse > 0 and rep.pairs_fine > rep.pairs_coarse
        assert rep.residual_max < 1e-7 * spectral_scale(maker())


def test_audit_passes_the_excised_field():
    rep = audit_of(gallery.degree3_touch, epsilon=0.15)
    assert rep.passed
    assert rep.ratio <= 0.9


def test_audit_handles_degenerate_ranges():
    seg = audit_of(gallery.segment)
    assert seg.passed
    assert seg.pairs_coarse > 0
    pt = audit_of(gallery.scalar_point)
    assert pt.passed


class _SignFlipped:
    """Wrapper injecting a half-plane sign flip, breaking continuity."""

    def __init__(self, fld):
        self._fld = fld
        self.atlas = fld.atlas
        self.report = fld.report
        self.matrix = fld.matrix
        self.center = fld.center
        self.strategy = fld.strategy

    def select(self, zs):
        Y = self._fld.select(zs)
        flip = np.asarray(zs).real > 0.0    # splits the disk down the middle
        Y[flip] *= -1.0
        return Y


def test_audit_catches_an_injected_sign_flip():
    fld = build_selection(gallery.disk(), CFG)
    rep = continuity_audit(_SignFlipped(fld))
    assert not rep.passed
    assert rep.max_jump_fine > 1.0        # order-one jump survives refinement
    assert rep.ratio > 0.9

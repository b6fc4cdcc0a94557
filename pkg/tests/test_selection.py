"""Chord formulas, boundary paths, and the assembled selection fields."""

import numpy as np
import pytest

from nrselect import gallery
from nrselect.boundary import RotatedFamily, build_boundary_atlas
from nrselect.config import ToleranceConfig
from nrselect.core import fov_eval, spectral_scale
from nrselect.errors import (
    ExcisionRequiredError,
    InputError,
    OutsideDomainError,
    PathAnchorError,
)
from nrselect.selection import (
    build_selection,
    elliptic_chord,
    elliptic_chord_selection,
    normal_chord,
    normal_chord_selection,
    radial_decompose,
    select,
    select_excised,
)
from nrselect.selection.paths import flat_bridge, sign_continuation

CFG = ToleranceConfig(grid_size=1024)


def boundary_pair(A, theta1, theta2):
    """Boundary preimage vectors at two support angles, with their values."""
    fam = RotatedFamily(A)
    _, vx = fam.eig_at(theta1)
    _, vy = fam.eig_at(theta2)
    x, y = vx[:, -1], vy[:, -1]
    return x, y, fov_eval(A, x), fov_eval(A, y)


def random_nonnormal_2x2(rng):
    while True:
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        comm = A @ A.conj().T - A.conj().T @ A
        if np.linalg.norm(comm) > 1e-2 * spectral_scale(A) ** 2:
            return A


def test_elliptic_chord_hits_the_segment_between_boundary_values():
    # The interpolation identity needs boundary preimage pairs; arbitrary
    # unit vectors do not satisfy it.
    rng = np.random.default_rng(41)
    worst = 0.0
    for _ in range(20):
        A = random_nonnormal_2x2(rng)
        th1, th2 = rng.uniform(0, 2 * np.pi, size=2)
        x, y, zx, zy = boundary_pair(A, th1, th2)
        c = complex(y.conj() @ x)
        if abs(c) < 1e-6:
            continue
        beta = c / abs(c)
        for lam in np.linspace(0.0, 1.0, 11):
            h = elliptic_chord(x, y, lam, beta)
            assert abs(np.linalg.norm(h) - 1.0) < 1e-12
            res = abs(fov_eval(A, h) - (lam * zx + (1 - lam) * zy))
            worst = max(worst, res / spectral_scale(A))
    assert worst < 1e-10


def test_elliptic_chord_unsquared_overlap_fails():
    # With the cross term built from the plain overlap factor the identity
    # breaks by many orders of magnitude on generic pairs.
    rng = np.random.default_rng(43)
    worst = 0.0
    for _ in range(20):
        A = random_nonnormal_2x2(rng)
        x, y, zx, zy = boundary_pair(A, *rng.uniform(0, 2 * np.pi, size=2))
        c = complex(y.conj() @ x)
        if abs(c) < 1e-6:
            continue
        for lam in np.linspace(0.05, 0.95, 7):
            h = elliptic_chord(x, y, lam, c / abs(c), overlap_power=1)
            res = abs(fov_eval(A, h) - (lam * zx + (1 - lam) * zy))
            worst = max(worst, res / spectral_scale(A))
    assert worst > 1e-4


def test_elliptic_chord_endpoints_reproduce_the_pair():
    rng = np.random.default_rng(47)
    A = random_nonnormal_2x2(rng)
    x, y, zx, zy = boundary_pair(A, 0.3, 2.1)
    c = complex(y.conj() @ x)
    beta = c / abs(c)
    assert fov_eval(A, elliptic_chord(x, y, 1.0, beta)) == pytest.approx(zx, abs=1e-10)
    assert fov_eval(A, elliptic_chord(x, y, 0.0, beta)) == pytest.approx(zy, abs=1e-10)


def test_normal_chord_orthogonal_pair():
    U, _ = np.linalg.qr(np.random.default_rng(53).normal(size=(2, 2))
                        + 1j * np.random.default_rng(54).normal(size=(2, 2)))
    mu = np.array([1.0 + 0.5j, -0.7 + 2.0j])
    A = U @ np.diag(mu) @ U.conj().T
    x, y = U[:, 0], U[:, 1]
    for lam in np.linspace(0, 1, 9):
        h = normal_chord(x, y, lam)
        assert abs(np.linalg.norm(h) - 1.0) < 1e-12
        assert abs(fov_eval(A, h) - (lam * mu[0] + (1 - lam) * mu[1])) < 1e-10


def test_validated_chords_reject_wrong_premises():
    rng = np.random.default_rng(59)
    A = random_nonnormal_2x2(rng)
    x, y, _, _ = boundary_pair(A, 0.4, 1.9)
    c = complex(y.conj() @ x)
    with pytest.raises(InputError):
        elliptic_chord_selection(np.diag([1.0, 2.0]), x, y, c / abs(c), 0.5)
    with pytest.raises(InputError):
        elliptic_chord_selection(A, x, y, 1j * c / abs(c), 0.5)
    with pytest.raises(InputError):
        normal_chord_selection(A, x, y, 0.5)


def test_sign_continuation_fixes_isolated_zero():
    n = 30
    xs = np.tile(np.array([1.0, 0.0], dtype=complex), (n, 1))
    xs[::2] *= -1.0
    xs[7] = 0.0              # one dead sample inside the run
    out = sign_continuation(xs, zero=1e-8)
    steps = np.linalg.norm(np.diff(out, axis=0), axis=1)
    assert steps.max() < 1e-12
    assert abs(np.linalg.norm(out[7]) - 1.0) < 1e-12


def test_sign_continuation_rejects_long_zero_runs():
    xs = np.tile(np.array([1.0, 0.0], dtype=complex), (20, 1))
    xs[5:11] = 0.0
    with pytest.raises(PathAnchorError):
        sign_continuation(xs, zero=1e-8)
    with pytest.raises(PathAnchorError):
        sign_continuation(np.zeros((4, 2), dtype=complex))


def test_flat_bridge_interpolates_orthogonal_endpoints():
    A = gallery.stadium()
    atlas = build_boundary_atlas(A, CFG)
    f = atlas.flat_arcs()[0]
    bridge = flat_bridge(f.x_minus, f.x_plus, A)
    om = np.linspace(0.0, np.pi / 2, 33)
    zs, ys = bridge.eval(om)
    assert np.abs(np.linalg.norm(ys, axis=1) - 1.0).max() < 1e-10
    # Endpoint vectors are reproduced and the values run along the flat.
    assert np.linalg.norm(ys[0] - f.x_minus) < 1e-10
    assert np.linalg.norm(ys[-1] - f.x_plus) < 1e-10
    d = f.z_plus - f.z_minus
    s = ((zs - f.z_minus) * np.conj(d)).real / abs(d) ** 2
    off = np.abs(zs - (f.z_minus + s * d))
    assert off.max() < 1e-8 * spectral_scale(A)
    assert s.min() > -1e-9 and s.max() < 1 + 1e-9


def test_canonical_path_is_continuous_and_on_the_boundary():
    A = gallery.disk()
    fld = build_selection(A, CFG)
    path = fld.path
    ts = np.linspace(0.0, 1.0, 400)
    zs, ys = path.at(ts)
    assert np.abs(np.linalg.norm(ys, axis=1) - 1.0).max() < 1e-10
    steps = np.linalg.norm(np.diff(ys, axis=0), axis=1)
    assert steps.max() < 0.1
    # The sampled support polygon circumscribes the circle by about
    # r * step^2 / 8, so on-boundary points carry that much negative slack.
    assert np.abs(fld.atlas.hull_slack(zs)).max() < 1e-5
    vals = np.einsum("ti,ij,tj->t", ys.conj(), A, ys)
    assert np.abs(vals - zs).max() < 1e-8 * spectral_scale(A)


def test_radial_decompose_reconstructs_queries():
    A = gallery.disk()
    fld = build_selection(A, CFG)
    rng = np.random.default_rng(61)
    zs = 0.8 * np.sqrt(rng.uniform(0.01, 1.0, 40)) * np.exp(
        2j * np.pi * rng.uniform(size=40))
    lam, ts = radial_decompose(zs, fld.center, fld.path)
    b, _ = fld.path.at(ts)
    recon = lam * fld.center + (1 - lam) * b
    assert np.abs(recon - zs).max() < 1e-6


def strategy_of(A, epsilon=None):
    return build_selection(A, CFG, epsilon=epsilon).strategy


def test_strategy_dispatch():
    assert strategy_of(gallery.disk()) == "no-corner"
    assert strategy_of(gallery.triangle()) == "corner"
    assert strategy_of(gallery.stadium()) == "no-corner"
    assert strategy_of(gallery.segment()) == "segment"
    assert strategy_of(gallery.scalar_point()) == "point"
    assert strategy_of(gallery.degree3_touch(), epsilon=0.15) == "excised"


def in_domain_grid(atlas, m=40):
    _, pts, _ = atlas.boundary_polyline()
    xs = np.linspace(pts.real.min(), pts.real.max(), m)
    ys = np.linspace(pts.imag.min(), pts.imag.max(), m)
    Z = (xs[None, :] + 1j * ys[:, None]).ravel()
    return Z[atlas.contains(Z, margin=-atlas.inner_margin())]


@pytest.mark.parametrize("maker", [
    gallery.disk, gallery.triangle, gallery.stadium, gallery.disk_on_flat])
def test_fields_meet_the_residual_contract(maker):
    A = maker()
    fld = build_selection(A, CFG)
    zs = in_domain_grid(fld.atlas)
    Y = fld.select(zs)
    vals = np.einsum("ti,ij,tj->t", Y.conj(), A, Y)
    scale = spectral_scale(A)
    assert np.abs(vals - zs).max() < 1e-7 * scale
    assert np.abs(np.linalg.norm(Y, axis=1) - 1.0).max() < 1e-10


def test_field_maps_center_to_base_vector_value():
    fld = build_selection(gallery.disk(), CFG)
    y = fld(np.complex128(fld.center))
    assert abs(fov_eval(fld.matrix, y) - fld.center) < 1e-9


def test_field_rejects_outside_queries():
    fld = build_selection(gallery.disk(), CFG)
    with pytest.raises(OutsideDomainError):
        fld.select(np.array([2.0 + 2.0j]))


def test_weak_failure_without_epsilon_refuses():
    with pytest.raises(ExcisionRequiredError):
        build_selection(gallery.degree3_touch(), CFG)


def test_excised_field_rejects_disk_interior():
    A = gallery.degree3_touch()
    fld = build_selection(A, CFG, epsilon=0.15)
    assert len(fld.disks) == 1
    c, r = fld.disks[0]
    with pytest.raises(OutsideDomainError):
        fld.select(np.array([c]))
    with pytest.raises(OutsideDomainError):
        fld.select(np.array([c - 0.5 * r * np.exp(1j * np.angle(c))]))


def test_excised_field_meets_contract_off_the_disk():
    A = gallery.degree3_touch()
    fld = build_selection(A, CFG, epsilon=0.15)
    atlas = fld.atlas
    zs = in_domain_grid(atlas, m=50)
    c, r = fld.disks[0]
    zs = zs[np.abs(zs - c) > r * 1.001]
    Y = fld.select(zs)
    vals = np.einsum("ti,ij,tj->t", Y.conj(), A, Y)
    assert np.abs(vals - zs).max() < 1e-7 * spectral_scale(A)
    assert np.abs(np.linalg.norm(Y, axis=1) - 1.0).max() < 1e-10


def test_degenerate_fields_cover_their_sets():
    seg = build_selection(gallery.segment(), CFG)
    zs = np.linspace(0.0, 1.0, 21).astype(complex)
    Y = seg.select(zs)
    vals = np.einsum("ti,ij,tj->t", Y.conj(), gallery.segment(), Y)
    assert np.abs(vals - zs).max() < 1e-10
    with pytest.raises(OutsideDomainError):
        seg.select(np.array([0.5 + 0.3j]))

    pt = build_selection(gallery.scalar_point(), CFG)
    y = pt.select(np.array([pt.center]))[0]
    assert abs(fov_eval(gallery.scalar_point(), y) - pt.center) < 1e-12


def test_select_functional_wrapper_matches_build():
    fld = select(gallery.disk(), tol=CFG)
    assert fld.strategy == "no-corner"


def test_select_excised_falls_through_without_failures():
    A = gallery.disk()
    atlas = build_boundary_atlas(A, CFG)
    from nrselect.continuity import classify_continuity
    rep = classify_continuity(atlas)
    fld = select_excised(A, atlas, rep, epsilon=0.1)
    assert fld.strategy == "no-corner"


def test_seeded_builds_are_reproducible():
    A = gallery.stadium()
    f1 = build_selection(A, CFG, rng=np.random.default_rng(5))
    f2 = build_selection(A, CFG, rng=np.random.default_rng(5))
    zs = in_domain_grid(f1.atlas, m=15)
    assert np.array_equal(f1.select(zs), f2.select(zs))

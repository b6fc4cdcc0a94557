"""Independent brute-force verification of selections and continuity claims.

Nothing here reuses the path or chord machinery: preimages come from
sphere optimization, boundary fibers from fresh eigensolves, and the
continuity checks from raw adjacent-jump statistics.  These tools are the
referees for everything the constructive modules produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .boundary import BoundaryAtlas, FlatArc, RotatedFamily, _golden_min, \
    build_boundary_atlas
from .config import default_seed
from .core import as_square_matrix, fov_eval, spectral_scale
from .errors import InputError

__all__ = [
    "PreimageResult",
    "preimage_search",
    "enumerate_preimage_fiber",
    "ProbeSequence",
    "OpennessProbe",
    "openness_probe",
    "AuditReport",
    "continuity_audit",
    "bloch_map",
    "phase_distance",
]


def phase_distance(x, y) -> float:
    """Distance between unit vectors after quotienting out a global phase.

    Minimizing ||x - w y|| over unimodular w leaves sqrt(2 - 2|x^H y|),
    a true metric on the projective representatives.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return float(np.sqrt(max(2.0 - 2.0 * abs(np.vdot(x, y)), 0.0)))


# ---------------------------------------------------------------------------
# preimage search on the unit sphere


@dataclass
class PreimageResult:
    """Best preimage candidate found by the sphere optimizer."""

    x: np.ndarray
    residual: float
    restarts_used: int
    converged: bool


def _objective(A: np.ndarray, z: complex):
    """Rayleigh-quotient objective |q(x) - z|^2 over packed real vectors.

    Working with q(x) = (x^H A x)/(x^H x) folds the sphere constraint into
    the objective, so a plain quasi-Newton run applies.  The gradient with
    respect to the conjugate coordinates is

        [conj(e) (A x - q x) + e (A^H x - conj(q) x)] / (x^H x)

    with e = q - z; its real and imaginary parts feed the real optimizer.
    """
    n = A.shape[0]
    AH = A.conj().T

    def fg(v: np.ndarray):
        x = v[:n] + 1j * v[n:]
        r = float((x.conj() @ x).real)
        if r < 1e-200:
            return np.inf, np.zeros(2 * n)
        Ax = A @ x
        q = complex(x.conj() @ Ax) / r
        e = q - z
        G = (np.conj(e) * (Ax - q * x) + e * (AH @ x - np.conj(q) * x)) / r
        return float(abs(e) ** 2), 2.0 * np.concatenate([G.real, G.imag])

    return fg


def preimage_search(A, z: complex, restarts: int = 20,
                    rng: np.random.Generator | None = None) -> PreimageResult:
    """Search for a unit vector x with x^H A x close to z.

    Runs L-BFGS-B on the normalized quadratic form from random unit
    starts, stopping at the first start whose polished residual is below
    1e-10 times the matrix scale.  Stagnation across all restarts is
    reported through the converged flag, never raised, since boundary
    and exterior targets legitimately resist the search.
    """
    A = as_square_matrix(A)
    z = complex(z)
    if rng is None:
        rng = np.random.default_rng(default_seed())
    n = A.shape[0]
    scale = max(spectral_scale(A), 1.0)
    goal = 1e-10 * scale
    fg = _objective(A, z)

    best_x = None
    best_res = np.inf
    used = 0
    for used in range(1, max(int(restarts), 1) + 1):
        x0 = rng.normal(size=n) + 1j * rng.normal(size=n)
        x0 /= np.linalg.norm(x0)
        sol = minimize(fg, np.concatenate([x0.real, x0.imag]), jac=True,
                       method="L-BFGS-B",
                       options={"maxiter": 500, "ftol": 1e-18, "gtol": 1e-14})
        x = sol.x[:n] + 1j * sol.x[n:]
        nx = np.linalg.norm(x)
        if nx < 1e-12:
            continue
        x /= nx
        res = abs(fov_eval(A, x) - z)
        if res < best_res:
            best_res, best_x = res, x
        if best_res <= goal:
            break
    if best_x is None:
        best_x = np.zeros(n, dtype=complex)
        best_x[0] = 1.0
        best_res = abs(fov_eval(A, best_x) - z)
    return PreimageResult(x=best_x, residual=float(best_res),
                          restarts_used=used, converged=bool(best_res <= goal))


def _canonical_phase(x: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(x)))
    c = x[k]
    return x * (abs(c) / c) if abs(c) > 0 else x


def enumerate_preimage_fiber(A, z: complex, samples: int = 40,
                             rng: np.random.Generator | None = None
                             ) -> list[np.ndarray]:
    """Collect phase-distinct preimages of z by repeated random search.

    Successful searches are merged whenever their phase distance drops
    below 0.05, so each returned vector represents one fiber cluster.
    Best effort only: missing a cluster is possible, inventing one is
    not, because every representative carries a verified residual.
    """
    A = as_square_matrix(A)
    if rng is None:
        rng = np.random.default_rng(default_seed())
    keep = 1e-8 * max(spectral_scale(A), 1.0)
    reps: list[np.ndarray] = []
    for _ in range(int(samples)):
        got = preimage_search(A, z, restarts=4, rng=rng)
        if got.residual > keep:
            continue
        x = _canonical_phase(got.x)
        if all(phase_distance(x, r) >= 0.05 for r in reps):
            reps.append(x)
    return reps


# ---------------------------------------------------------------------------
# openness probe at boundary points

_PROBE_RADII = (0.32, 0.23, 0.16, 0.11)
_PROBE_STEPS = 9
_PROBE_DECAY = 0.5
_WITNESS_TOL = 0.05
_FAILURE_TOL = 0.1


@dataclass
class ProbeSequence:
    """One approach sequence z_k -> z with its fiber-distance record."""

    label: str
    zs: np.ndarray
    distances: np.ndarray        # per step, min over both fibers
    witness_finals: np.ndarray   # per fiber(z) rep, distance at the finest step
    residual_max: float
    approaching: bool


@dataclass
class OpennessProbe:
    """Empirical weak-continuity evidence at a boundary point."""

    z: complex
    verdict: str
    witnesses: np.ndarray
    sequences: list[ProbeSequence] = field(default_factory=list)


def _cluster_fiber(A: np.ndarray, fam: RotatedFamily, theta: float,
                   target: complex, tol: float) -> list[np.ndarray]:
    """Fiber samples at a support angle: top-cluster vectors and mixtures.

    Everything returned maps to the target within tol; a degenerate top
    eigenspace contributes two-vector mixtures over a small grid of
    mixing angles and relative phases.
    """
    vals, vecs = fam.eig_at(theta % (2 * np.pi))
    top = vals.max()
    cols = np.nonzero(vals >= top - tol)[0]
    cands = [vecs[:, j] for j in cols]
    if cols.size >= 2:
        u1, u2 = vecs[:, cols[-1]], vecs[:, cols[-2]]
        for om in (np.pi / 8, np.pi / 4, 3 * np.pi / 8):
            for ph in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
                cands.append(np.cos(om) * u1
                             + np.exp(1j * ph) * np.sin(om) * u2)
    out = []
    for x in cands:
        x = x / np.linalg.norm(x)
        if abs(fov_eval(A, x) - target) <= tol:
            out.append(x)
    return out


def _support_point(A: np.ndarray, fam: RotatedFamily, theta: float,
                   near: complex, tol: float
                   ) -> tuple[complex, list[np.ndarray], float]:
    """Boundary point attained at theta, its fiber, and the worst residual.

    A degenerate top eigenspace supports several boundary values; the one
    nearest the probe target is chosen so the walk stays on the local arc.
    """
    vals, vecs = fam.eig_at(theta % (2 * np.pi))
    top = vals.max()
    cols = np.nonzero(vals >= top - tol)[0]
    zs = [fov_eval(A, vecs[:, j]) for j in cols]
    zk = zs[int(np.argmin([abs(w - near) for w in zs]))]
    fiber = _cluster_fiber(A, fam, theta, zk, tol)
    res = max((abs(fov_eval(A, x) - zk) for x in fiber), default=np.inf)
    return zk, fiber, float(res)


def _set_distance(fiber_z: list[np.ndarray], fiber_k: list[np.ndarray]) -> float:
    if not fiber_z or not fiber_k:
        return np.inf
    return min(phase_distance(x, y) for x in fiber_z for y in fiber_k)


def _theta_sequence(A, fam, atlas, z, theta_w, side, r0, witnesses, tol):
    offs = r0 * _PROBE_DECAY ** np.arange(_PROBE_STEPS)
    zs = np.empty(_PROBE_STEPS, dtype=complex)
    dists = np.empty(_PROBE_STEPS)
    res_max = 0.0
    last_fiber: list[np.ndarray] = []
    for k, off in enumerate(offs):
        zk, fiber, res = _support_point(A, fam, theta_w + side * off, z, tol)
        zs[k] = zk
        dists[k] = _set_distance(witnesses, fiber)
        res_max = max(res_max, res)
        last_fiber = fiber
    finals = np.array([_set_distance([x], last_fiber) for x in witnesses])
    d0, df = abs(zs[0] - z), abs(zs[-1] - z)
    approaching = bool(df <= 1e-8 * max(atlas.scale, 1.0)
                       or df <= 0.25 * d0 + 1e-12)
    sign = "+" if side > 0 else "-"
    return ProbeSequence(label=f"theta{sign}{r0:g}", zs=zs, distances=dists,
                         witness_finals=finals, residual_max=res_max,
                         approaching=approaching)


def _flat_mixture(arc: FlatArc, s: float, phase: float) -> np.ndarray:
    om = np.arcsin(np.sqrt(np.clip(s, 0.0, 1.0)))
    return np.cos(om) * arc.x_minus + np.exp(1j * phase) * np.sin(om) * arc.x_plus


def _flat_sequence(A, atlas, arc: FlatArc, s_base, side, r0, witnesses, tol):
    offs = 0.25 * r0 * _PROBE_DECAY ** np.arange(_PROBE_STEPS)
    zs = np.empty(_PROBE_STEPS, dtype=complex)
    dists = np.empty(_PROBE_STEPS)
    res_max = 0.0
    last_fiber: list[np.ndarray] = []
    phases = (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)
    for k, off in enumerate(offs):
        s = float(np.clip(s_base + side * off, 0.0, 1.0))
        fiber = []
        for ph in phases:
            x = _flat_mixture(arc, s, ph)
            x /= np.linalg.norm(x)
            fiber.append(x)
        zk = fov_eval(A, fiber[0])
        zs[k] = zk
        dists[k] = _set_distance(witnesses, fiber)
        res_max = max(res_max,
                      max(abs(fov_eval(A, x) - zk) for x in fiber))
        last_fiber = fiber
    finals = np.array([_set_distance([x], last_fiber) for x in witnesses])
    z = arc.z_minus + s_base * (arc.z_plus - arc.z_minus)
    d0, df = abs(zs[0] - z), abs(zs[-1] - z)
    approaching = bool(df <= 1e-8 * max(atlas.scale, 1.0)
                       or df <= 0.25 * d0 + 1e-12)
    sign = "+" if side > 0 else "-"
    return ProbeSequence(label=f"flat{sign}{r0:g}", zs=zs, distances=dists,
                         witness_finals=finals, residual_max=res_max,
                         approaching=approaching)


def _locate_flat(atlas: BoundaryAtlas, z: complex, tol: float
                 ) -> tuple[FlatArc, float] | None:
    """The flat arc holding z strictly inside, with its affine parameter."""
    for arc in atlas.flat_arcs():
        d = arc.z_plus - arc.z_minus
        if abs(d) < tol:
            continue
        s = ((z - arc.z_minus) * np.conj(d)).real / abs(d) ** 2
        off = abs(z - (arc.z_minus + np.clip(s, 0, 1) * d))
        if off <= tol and 1e-3 < s < 1 - 1e-3:
            return arc, float(s)
    return None


def openness_probe(A, z: complex,
                   atlas: BoundaryAtlas | None = None) -> OpennessProbe:
    """Probe weak continuity of the preimage map at a boundary point.

    Eight approach sequences walk toward z along the boundary, four from
    each side with staggered geometric decays.  Every sequence records
    how close its fibers come to each fiber representative at z.  A
    representative reachable from all approaching sequences certifies
    weak-continuity evidence; when every representative is pushed away
    by some trustworthy sequence the verdict is failure evidence, and
    anything murkier stays inconclusive.  Thresholds are heuristic, so
    the full witness data ships with the verdict.
    """
    A = as_square_matrix(A)
    if atlas is None:
        atlas = build_boundary_atlas(A)
    z = complex(z)
    scale = max(atlas.scale, 1.0)
    tol = 1e-8 * scale
    slack = float(atlas.hull_slack(z)[0])
    if abs(slack) > 1e-6 * scale:
        raise InputError(
            f"probe target {z} is not on the boundary (slack {slack:.3g})")

    fam = RotatedFamily(A)
    flat_hit = _locate_flat(atlas, z, 1e-7 * scale)
    if flat_hit is not None:
        arc, s_base = flat_hit
        witnesses = []
        for ph in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
            x = _flat_mixture(arc, s_base, ph)
            x /= np.linalg.norm(x)
            if abs(fov_eval(A, x) - z) <= tol:
                witnesses.append(x)
        seqs = [_flat_sequence(A, atlas, arc, s_base, side, r0, witnesses, tol)
                for side in (1, -1) for r0 in _PROBE_RADII]
    else:
        proj = (np.real(z) * np.cos(atlas.thetas)
                + np.imag(z) * np.sin(atlas.thetas))
        gaps = atlas.support_values - proj
        i0 = int(np.argmin(gaps))
        step = atlas.thetas[1] - atlas.thetas[0]

        def gap(th):
            vals, _ = fam.eig_at(th % (2 * np.pi))
            return float(vals.max()
                         - np.real(z) * np.cos(th) - np.imag(z) * np.sin(th))

        theta_w = _golden_min(gap, atlas.thetas[i0] - step,
                              atlas.thetas[i0] + step, 1e-12)
        witnesses = _cluster_fiber(A, fam, theta_w, z, tol)
        seqs = [_theta_sequence(A, fam, atlas, z, theta_w, side, r0,
                                witnesses, tol)
                for side in (1, -1) for r0 in _PROBE_RADII]

    live = [s for s in seqs if s.approaching]
    if not witnesses or not live:
        verdict = "inconclusive"
    elif any(s.residual_max > tol for s in live):
        verdict = "inconclusive"
    else:
        finals = np.stack([s.witness_finals for s in live])  # seq x witness
        if (finals <= _WITNESS_TOL).all(axis=0).any():
            verdict = "weakly-continuous-evidence"
        elif ((finals >= _FAILURE_TOL).any(axis=0)).all():
            verdict = "failure-evidence"
        else:
            verdict = "inconclusive"
    W = np.stack(witnesses) if witnesses else np.zeros((0, A.shape[0]),
                                                      dtype=complex)
    return OpennessProbe(z=z, verdict=verdict, witnesses=W, sequences=seqs)


# ---------------------------------------------------------------------------
# continuity audit of a selection field


@dataclass
class AuditReport:
    """Adjacent-jump statistics for a selection at two grid resolutions."""

    h: float
    max_jump_coarse: float
    max_jump_fine: float
    ratio: float
    residual_max: float
    norm_dev_max: float
    pairs_coarse: int
    pairs_fine: int
    passed: bool


def _degenerate_stats(fld, h: float) -> tuple[float, float, float, int]:
    """Audit samples for ranges without interior: a point or a segment."""
    if getattr(fld, "strategy", "") == "point":
        z = np.array([fld.center], dtype=complex)
        Y = fld.select(z)
        res = float(abs(fov_eval(fld.matrix, Y[0]) - z[0]))
        ndev = float(abs(np.linalg.norm(Y[0]) - 1.0))
        return 0.0, res, ndev, 0
    lo, hi = fld.z_lo, fld.z_hi
    m = max(int(np.ceil(abs(hi - lo) / h)), 1)
    zs = lo + np.linspace(0.0, 1.0, m + 1) * (hi - lo)
    Y = fld.select(zs)
    vals = np.einsum("ti,ij,tj->t", Y.conj(), fld.matrix, Y)
    res = float(np.abs(vals - zs).max())
    ndev = float(np.abs(np.linalg.norm(Y, axis=1) - 1.0).max())
    jumps = np.linalg.norm(np.diff(Y, axis=0), axis=1)
    return float(jumps.max()), res, ndev, int(m)


def _grid_stats(fld, h: float) -> tuple[float, float, float, int]:
    atlas = fld.atlas
    if getattr(fld, "strategy", "") in ("point", "segment"):
        return _degenerate_stats(fld, h)
    disks = tuple(getattr(fld, "disks", ()))
    pts = atlas.boundary_polyline()[1]
    if pts.size == 0:
        return 0.0, 0.0, 0.0, 0
    xs = np.arange(pts.real.min(), pts.real.max() + 0.6 * h, h)
    ys = np.arange(pts.imag.min(), pts.imag.max() + 0.6 * h, h)
    Z = xs[:, None] + 1j * ys[None, :]
    # Degenerate ranges live on the slack-zero set itself, so only the
    # full-dimensional case can afford the conservative inward margin.
    margin = -atlas.inner_margin() if atlas.degenerate_kind == "full-dimensional" \
        else 0.0
    mask = atlas.contains(Z.ravel(), margin=margin).reshape(Z.shape)
    for c, r in disks:
        mask &= np.abs(Z - c) >= r * (1 + 1e-9)
    if not mask.any():
        return 0.0, 0.0, 0.0, 0

    flat = Z[mask]
    Y = fld.select(flat)
    vals = np.einsum("ti,ij,tj->t", Y.conj(), fld.matrix, Y)
    res = float(np.abs(vals - flat).max())
    ndev = float(np.abs(np.linalg.norm(Y, axis=1) - 1.0).max())

    lut = np.full(Z.shape, -1, dtype=int)
    lut[mask] = np.arange(flat.size)
    worst = 0.0
    pairs = 0
    for da, db in ((1, 0), (0, 1)):
        a = lut[: Z.shape[0] - da, : Z.shape[1] - db]
        b = lut[da:, db:]
        ok = (a >= 0) & (b >= 0)
        if not ok.any():
            continue
        ia, ib = a[ok], b[ok]
        mid = 0.5 * (flat[ia] + flat[ib])
        keep = np.ones(ia.size, dtype=bool)
        for c, r in disks:
            keep &= np.abs(mid - c) >= r
        if not keep.any():
            continue
        jumps = np.linalg.norm(Y[ia[keep]] - Y[ib[keep]], axis=1)
        worst = max(worst, float(jumps.max()))
        pairs += int(keep.sum())
    return worst, res, ndev, pairs


def continuity_audit(fld, h: float | None = None) -> AuditReport:
    """Audit a selection field by adjacent jumps at two grid resolutions.

    Evaluates the field on in-domain square grids of spacing h and h/2,
    excluding pairs that straddle an excised disk, and demands the
    maximal jump shrink by a factor of at least 0.9 when the grid
    halves.  Square-root scaling near the base point passes; a genuine
    discontinuity, whose jump survives refinement, does not.
    """
    if h is None:
        d = fld.atlas.diameter()
        h = d / 100.0 if d > 0 else 1.0 / 100.0
    jc, res_c, nd_c, pc = _grid_stats(fld, h)
    jf, res_f, nd_f, pf = _grid_stats(fld, h / 2.0)
    if jc <= 1e-12:
        ratio = 0.0
        passed = jf <= 1e-12
    else:
        ratio = jf / jc
        passed = ratio <= 0.9
    return AuditReport(h=float(h), max_jump_coarse=jc, max_jump_fine=jf,
                       ratio=float(ratio), residual_max=max(res_c, res_f),
                       norm_dev_max=max(nd_c, nd_f),
                       pairs_coarse=pc, pairs_fine=pf, passed=bool(passed))


# ---------------------------------------------------------------------------
# the 2x2 Bloch map

_X1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_X2 = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
_X3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def bloch_map(x) -> np.ndarray:
    """Coordinates of a 2x2 Hermitian matrix in the trace-zero basis.

    A unit vector is first sent to its rank-1 projector.  Projectors land
    on the unit sphere, and the projector inner product satisfies
    <xx*, yy*> = <psi_x, psi_y>/2 + 1/2.
    """
    arr = np.asarray(x, dtype=complex)
    if arr.shape == (2,):
        if abs(np.linalg.norm(arr) - 1.0) > 1e-8:
            raise InputError("bloch_map expects a unit vector")
        Y = np.outer(arr, arr.conj())
    elif arr.shape == (2, 2):
        if np.linalg.norm(arr - arr.conj().T) > 1e-10 * max(
                np.linalg.norm(arr), 1.0):
            raise InputError("bloch_map expects a Hermitian matrix")
        Y = arr
    else:
        raise InputError("bloch_map needs a C^2 vector or a 2x2 matrix")
    return np.array([np.trace(X @ Y).real for X in (_X1, _X2, _X3)])

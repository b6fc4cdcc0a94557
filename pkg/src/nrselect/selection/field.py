"""Continuous selection fields g with f_A(g(z)) = z on the numerical range.

Every full-dimensional strategy decomposes a query z along the ray from
a boundary base point z0 through z, writing z = lam z0 + (1 - lam) b
with b on a preimage path, and applies a chord formula to the base
vector and the path vector at b.  Degenerate ranges use closed forms,
and matrices with weak continuity failures get epsilon-disks excised,
replacing the removed boundary portions by arcs of a 3-by-3 compression
whose preimages bridge the discontinuity inside the disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..boundary import (
    FULL_DIMENSIONAL,
    POINT,
    SEGMENT,
    BoundaryAtlas,
    RotatedFamily,
    RoundArc,
    build_boundary_atlas,
)
from ..config import ToleranceConfig, default_config
from ..continuity import ContinuityReport, classify_continuity
from ..core import as_square_matrix, compress
from ..errors import (
    ExcisionRequiredError,
    InputError,
    OutsideDomainError,
    SelectionConstructionError,
)
from .chords import elliptic_chord
from .paths import (
    ArcPiece,
    BoundaryPath,
    BridgePiece,
    canonical_boundary_path,
    open_boundary_path,
)

__all__ = [
    "SelectionField",
    "PointField",
    "SegmentField",
    "CornerField",
    "NoCornerField",
    "ExcisedField",
    "build_selection",
    "radial_decompose",
    "select",
    "select_no_corner",
    "select_corner",
    "select_excised",
]

_MARGIN_STEPS = 10
_ANGLE_TOL = 1e-10
_MAX_REFINE_ITERS = 60


def _safe_angles(zs: np.ndarray, z0: complex, scale: float) -> np.ndarray:
    """Ray angles of path samples from z0; degenerate samples take the
    direction of the neighboring secant so the table stays monotone."""
    d = zs - z0
    psis = np.angle(d)
    bad = np.abs(d) < 1e-9 * scale
    if bad.any():
        for i in np.nonzero(bad)[0]:
            if i + 1 < zs.size and abs(zs[i + 1] - zs[i]) > 1e-13 * scale:
                psis[i] = np.angle(zs[i + 1] - zs[i])
            elif i > 0:
                psis[i] = np.angle(zs[i] - zs[i - 1])
    return psis


class _RayTable:
    """Monotone angle table over path pieces for radial decomposition."""

    def __init__(self, path: BoundaryPath, z0: complex):
        self.path = path
        self.z0 = complex(z0)
        scale = path.atlas.scale
        psis, piece_ids, locals_ = [], [], []
        for pid, piece in enumerate(path.pieces):
            if piece.kind == "arc":
                p = _safe_angles(piece.zs, self.z0, scale)
                psis.append(p)
                piece_ids.append(np.full(p.size, pid))
                locals_.append(np.arange(p.size))
            else:
                p = _safe_angles(np.array([piece.z_minus, piece.z_plus]),
                                 self.z0, scale)
                psis.append(p)
                piece_ids.append(np.full(2, pid))
                locals_.append(np.arange(2))
        raw = np.unwrap(np.concatenate(psis))
        mono = np.maximum.accumulate(raw)
        self.monotone_defect = float(np.max(mono - raw))
        self.psis = mono
        self.piece_ids = np.concatenate(piece_ids)
        self.locals = np.concatenate(locals_)
        self.start = float(self.psis[0])
        self.end = float(self.psis[-1])

    def wrap_in(self, zs: np.ndarray) -> np.ndarray:
        psi = np.angle(zs - self.z0)
        k = np.ceil((self.start - psi) / (2 * np.pi))
        psi = psi + 2 * np.pi * k
        over = psi > self.end
        psi[over & (psi - 2 * np.pi >= self.start - 1e-9)] -= 2 * np.pi
        return np.clip(psi, self.start, self.end)

    def locate(self, zs: np.ndarray
               ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Decompose each query: returns (lam, b, Y, t)."""
        zs = np.asarray(zs, dtype=complex)
        lam = np.zeros(zs.size)
        bs = np.zeros(zs.size, dtype=complex)
        ys = np.zeros((zs.size, self.path.family.n), dtype=complex)
        ts = np.zeros(zs.size)
        scale = self.path.atlas.scale

        at_center = np.abs(zs - self.z0) <= 1e-12 * max(scale, 1.0)
        lam[at_center] = 1.0
        bs[at_center] = self.z0
        ys[at_center] = self.path.x0
        rest = np.nonzero(~at_center)[0]
        if rest.size == 0:
            return lam, bs, ys, ts

        psi = self.wrap_in(zs[rest])
        gi = np.clip(np.searchsorted(self.psis, psi) - 1, 0, self.psis.size - 2)
        # Widen to a sample bracket inside a single piece where possible.
        same = self.piece_ids[gi] == self.piece_ids[gi + 1]

        arc_groups: dict[int, list[int]] = {}
        for k, g in enumerate(gi):
            idx = rest[k]
            pid = int(self.piece_ids[g])
            piece = self.path.pieces[pid]
            if not same[k]:
                # Junction bracket: both global samples sit at one boundary
                # point, so decompose against the stored junction sample.
                b, y = self._sample_at(g + 1)
                bs[idx], ys[idx] = b, y
                lam[idx] = _lam_of(zs[idx], self.z0, b)
                ts[idx] = self._t_of_sample(g + 1)
            elif piece.kind == "bridge":
                b, y, omega = self._bridge_point(piece, zs[idx])
                bs[idx], ys[idx] = b, y
                lam[idx] = _lam_of(zs[idx], self.z0, b)
                ts[idx] = self._piece_t(pid, omega / (np.pi / 2))
            elif piece.is_corner:
                b, y = self._sample_at(g)
                bs[idx], ys[idx] = b, y
                lam[idx] = _lam_of(zs[idx], self.z0, b)
                ts[idx] = self._t_of_sample(g)
            else:
                arc_groups.setdefault(pid, []).append(k)

        for pid, ks in arc_groups.items():
            piece = self.path.pieces[pid]
            ks = np.asarray(ks)
            idx = rest[ks]
            lo = piece.thetas[self.locals[gi[ks]]]
            hi = piece.thetas[self.locals[gi[ks]] + 1]
            theta_star = self._refine_arc(piece, lo, hi, psi[ks])
            b_arr, y_arr = self.path.eval_arc(piece, theta_star)
            bs[idx] = b_arr
            ys[idx] = y_arr
            lam[idx] = _lam_of(zs[idx], self.z0, b_arr)
            span = max(piece.theta_hi - piece.theta_lo, 1e-300)
            ts[idx] = self._piece_t(pid, (theta_star - piece.theta_lo) / span)
        return lam, bs, ys, ts

    def _piece_t(self, pid: int, frac) -> np.ndarray:
        edges = self.path.t_edges
        return edges[pid] + np.clip(frac, 0.0, 1.0) * (edges[pid + 1] - edges[pid])

    def _t_of_sample(self, g: int) -> float:
        pid = int(self.piece_ids[g])
        piece = self.path.pieces[pid]
        j = int(self.locals[g])
        if piece.kind == "arc":
            span = max(piece.theta_hi - piece.theta_lo, 1e-300)
            frac = (piece.thetas[j] - piece.theta_lo) / span
        else:
            frac = 0.0 if j == 0 else 1.0
        return float(self._piece_t(pid, frac))

    def _sample_at(self, g: int) -> tuple[complex, np.ndarray]:
        pid = int(self.piece_ids[g])
        piece = self.path.pieces[pid]
        j = int(self.locals[g])
        if piece.kind == "arc":
            y = piece.sign * piece.ys[j]
            if piece.lift is not None:
                y = piece.lift @ y
            return complex(piece.zs[j]), y
        z, y = piece.eval(np.array([0.0 if j == 0 else np.pi / 2]))
        return complex(z[0]), y[0]

    def _bridge_point(self, piece: BridgePiece, z: complex
                      ) -> tuple[complex, np.ndarray, float]:
        d = piece.z_plus - piece.z_minus
        e = np.exp(1j * np.angle(z - self.z0))
        denom = (e * np.conj(d)).imag
        if abs(denom) < 1e-15 * abs(d):
            s = 0.5
        else:
            r = ((piece.z_minus - self.z0) * np.conj(d)).imag / denom
            hit = self.z0 + r * e
            s = ((hit - piece.z_minus) * np.conj(d)).real / (abs(d) ** 2)
        s = min(max(s, 0.0), 1.0)
        omega = math.asin(math.sqrt(s))
        zb, yb = piece.eval(np.array([omega]))
        return complex(zb[0]), yb[0], omega

    def _refine_arc(self, piece: ArcPiece, lo: np.ndarray, hi: np.ndarray,
                    target: np.ndarray) -> np.ndarray:
        """Solve angle(b(theta) - z0) = target within sample brackets."""
        fam = getattr(piece, "family", None) or self.path.family
        lo = lo.astype(float).copy()
        hi = hi.astype(float).copy()
        plo = self._arc_psi(piece, fam, lo, target)
        phi = self._arc_psi(piece, fam, hi, target)
        theta = 0.5 * (lo + hi)
        active = np.ones(lo.size, dtype=bool)
        for _ in range(_MAX_REFINE_ITERS):
            if not active.any():
                break
            den = phi[active] - plo[active]
            frac = np.where(np.abs(den) > 1e-300,
                            (target[active] - plo[active]) / np.where(den == 0, 1, den),
                            0.5)
            frac = np.clip(frac, 0.05, 0.95)
            cand = lo[active] + frac * (hi[active] - lo[active])
            pc = self._arc_psi(piece, fam, cand, target[active])
            theta[active] = cand
            err = pc - target[active]
            done = (np.abs(err) <= _ANGLE_TOL) | ((hi[active] - lo[active]) <= 1e-13)
            go_lo = err < 0
            a_idx = np.nonzero(active)[0]
            lo[a_idx[go_lo]] = cand[go_lo]
            plo[a_idx[go_lo]] = pc[go_lo]
            hi[a_idx[~go_lo]] = cand[~go_lo]
            phi[a_idx[~go_lo]] = pc[~go_lo]
            active[a_idx[done]] = False
        return theta

    def _arc_psi(self, piece: ArcPiece, fam: RotatedFamily,
                 thetas: np.ndarray, near: np.ndarray) -> np.ndarray:
        thetas = np.asarray(thetas, float)
        vals, vecs = fam.eig_stack(thetas % (2 * np.pi))
        j = np.clip(np.searchsorted(piece.thetas, thetas), 1, piece.thetas.size - 1)
        refs = piece.ys[j - 1]
        cols = np.argmax(np.abs(np.einsum("mn,mnk->mk", refs.conj(), vecs)), axis=1)
        rows = np.arange(thetas.size)
        u = vecs[rows, :, cols]
        lam = vals[rows, cols]
        # dH/dtheta = cos(theta) K0 - sin(theta) H0, so the branch slope
        # splits into two theta-independent quadratic forms.
        qk = np.einsum("mi,ij,mj->m", u.conj(), fam.K0, u).real
        qh = np.einsum("mi,ij,mj->m", u.conj(), fam.H0, u).real
        dlam = np.cos(thetas) * qk - np.sin(thetas) * qh
        b = np.exp(1j * thetas) * (lam + 1j * dlam)
        out = np.angle(b - self.z0)
        # Re-wrap next to the requested table angles to stay on their branch.
        return out + 2 * np.pi * np.round((near - out) / (2 * np.pi))


def _lam_of(z, z0, b):
    """Ray coordinate of z between b (lam 0) and z0 (lam 1); elementwise.

    Measured radially from z0 so that a query marginally past b, which
    happens for points inside the sampled hull but outside the true
    range near a flat, clamps to lam 0 instead of drifting inward.
    """
    den = np.abs(np.asarray(b) - z0)
    lam = 1.0 - np.abs(np.asarray(z) - z0) / np.maximum(den, 1e-300)
    return np.where(den < 1e-300, 1.0, np.clip(lam, 0.0, 1.0))


def radial_decompose(z, z0: complex, path: BoundaryPath
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Split z = lam z0 + (1 - lam) b with b = f_A(y(t)) on the path.

    Returns (lam, t); scalars in give scalars out.  The heavier
    decomposition carrying boundary values and vectors lives on the
    selection fields, which cache the underlying ray table.
    """
    scalar = np.isscalar(z) or np.asarray(z).ndim == 0
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    table = _RayTable(path, z0)
    lam, _, _, ts = table.locate(zs)
    if scalar:
        return float(lam[0]), float(ts[0])
    return lam, ts


class SelectionField:
    """Base class: validated queries, residual checks, common metadata."""

    strategy = "abstract"

    def __init__(self, atlas: BoundaryAtlas, report: ContinuityReport):
        self.atlas = atlas
        self.report = report
        self.matrix = atlas.matrix
        self.center: complex = 0j
        self.base_vector: np.ndarray | None = None

    def _validate(self, zs: np.ndarray) -> None:
        slack = self.atlas.hull_slack(zs)
        tol = 1e-8 * max(self.atlas.scale, 1.0)
        if (slack > tol).any():
            z = zs[int(np.argmax(slack))]
            raise OutsideDomainError(
                f"query {z} lies outside the numerical range (slack {slack.max():.3g})")

    def select(self, zs) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z):
        out = self.select(np.atleast_1d(np.asarray(z, dtype=complex)))
        return out[0] if np.ndim(z) == 0 else out

    def residuals(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        Y = self.select(zs)
        vals = np.einsum("ti,ij,tj->t", Y.conj(), self.matrix, Y)
        return np.abs(vals - zs)

    def describe(self) -> dict:
        return {
            "strategy": self.strategy,
            "center": [float(self.center.real), float(self.center.imag)],
            "degenerate_kind": self.atlas.degenerate_kind,
            "weak_failures": [[z.real, z.imag] for z in self.report.weak_failures],
            "strong_failures": [[z.real, z.imag] for z in self.report.strong_failures],
        }


class PointField(SelectionField):
    """F(A) is one point: any unit eigenvector serves for every query."""

    strategy = "point"

    def __init__(self, atlas: BoundaryAtlas, report: ContinuityReport):
        super().__init__(atlas, report)
        evals, evecs = np.linalg.eig(self.matrix)
        self.center = complex(evals[0])
        self.base_vector = evecs[:, 0] / np.linalg.norm(evecs[:, 0])

    def select(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        tol = 1e-8 * max(self.atlas.scale, 1.0)
        if (np.abs(zs - self.center) > tol).any():
            raise OutsideDomainError("query off the single-point numerical range")
        return np.tile(self.base_vector, (zs.size, 1))


class SegmentField(SelectionField):
    """F(A) is a segment: combine endpoint eigenvectors with sqrt weights."""

    strategy = "segment"

    def __init__(self, atlas: BoundaryAtlas, report: ContinuityReport):
        super().__init__(atlas, report)
        fam = RotatedFamily(self.matrix)
        N = atlas.support_values.size - 1
        half = N // 2
        width = atlas.support_values[:half] + atlas.support_values[half:2 * half]
        i0 = int(np.argmin(width))
        step = atlas.thetas[1] - atlas.thetas[0]

        def w(th: float) -> float:
            a = np.linalg.eigvalsh(fam.hermitian_at(th))[-1]
            b = np.linalg.eigvalsh(fam.hermitian_at(th + np.pi))[-1]
            return a + b

        from ..boundary import _golden_min
        theta_n = _golden_min(w, atlas.thetas[i0] - step, atlas.thetas[i0] + step, 1e-12)
        phi = theta_n + np.pi / 2                    # segment direction argument
        H = fam.hermitian_at(phi)
        vals, vecs = np.linalg.eigh(H)
        self.x_lo = vecs[:, 0]
        self.x_hi = vecs[:, -1]
        self.z_lo = complex(np.vdot(self.x_lo, self.matrix @ self.x_lo))
        self.z_hi = complex(np.vdot(self.x_hi, self.matrix @ self.x_hi))
        self.center = (self.z_lo + self.z_hi) / 2
        self.base_vector = self.x_lo

    def select(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        d = self.z_hi - self.z_lo
        tol = 1e-7 * max(self.atlas.scale, 1.0)
        s = ((zs - self.z_lo) * np.conj(d)).real / (abs(d) ** 2)
        off = np.abs(zs - (self.z_lo + np.clip(s, 0, 1) * d))
        if (off > tol).any():
            raise OutsideDomainError("query off the segment numerical range")
        s = np.clip(s, 0.0, 1.0)
        return (np.sqrt(1 - s)[:, None] * self.x_lo[None, :]
                + np.sqrt(s)[:, None] * self.x_hi[None, :])


class CornerField(SelectionField):
    """Base point at a corner (normal eigenvalue); exact two-term formula."""

    strategy = "corner"

    def __init__(self, atlas: BoundaryAtlas, report: ContinuityReport,
                 rng: np.random.Generator | None = None):
        super().__init__(atlas, report)
        if report.weak_failures:
            raise ExcisionRequiredError(
                "weak continuity failures require an excised selection")
        if not atlas.corners:
            raise SelectionConstructionError("no corner available for corner strategy")
        corner_arc = next(a for a in atlas.arcs
                          if isinstance(a, RoundArc) and a.is_corner)
        self.center = complex(corner_arc.corner)
        branch = atlas.branches[corner_arc.branch_id]
        mid = 0.5 * (corner_arc.theta_start + corner_arc.theta_end)
        j = int(np.argmin(np.abs(branch.thetas - (mid % (2 * np.pi)))))
        x0 = branch.vectors[j].copy()
        scale = max(atlas.scale, 1.0)
        r1 = np.linalg.norm(self.matrix @ x0 - self.center * x0)
        r2 = np.linalg.norm(self.matrix.conj().T @ x0 - np.conj(self.center) * x0)
        if max(r1, r2) > 1e-8 * scale:
            raise SelectionConstructionError(
                f"corner base vector is not a reducing eigenvector "
                f"(residual {max(r1, r2):.3g})")
        self.base_vector = x0

        flats = atlas.flat_arcs()
        tol = 1e-7 * scale
        try:
            flat_before = next(f for f in flats if abs(f.z_plus - self.center) <= tol)
            flat_after = next(f for f in flats if abs(f.z_minus - self.center) <= tol)
        except StopIteration as exc:
            raise SelectionConstructionError(
                "corner is not shared by two flat portions") from exc
        self.path = open_boundary_path(atlas, x0, flat_after, flat_before, rng)
        self.table = _RayTable(self.path, self.center)

    def select(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        self._validate(zs)
        lam, _, Y, _ = self.table.locate(zs)
        root_l = np.sqrt(np.clip(lam, 0.0, 1.0))
        root_m = np.sqrt(np.clip(1.0 - lam, 0.0, 1.0))
        out = root_l[:, None] * self.base_vector[None, :] + root_m[:, None] * Y
        return out / np.linalg.norm(out, axis=1, keepdims=True)


def _margin_score(cands: np.ndarray, full_turn: list[float],
                  half_turn: list[float]) -> np.ndarray:
    score = np.full(cands.size, np.inf)
    for t in full_turn:
        d = np.abs((cands - t + np.pi) % (2 * np.pi) - np.pi)
        score = np.minimum(score, d)
    for t in half_turn:
        d = np.abs((cands - t + np.pi / 2) % np.pi - np.pi / 2)
        score = np.minimum(score, d)
    return score


def _pick_rotation(atlas: BoundaryAtlas, extra_half_turn: tuple[float, ...] = ()
                   ) -> float:
    """Base angle with maximal circular margin to exceptional structure."""
    full = [e.theta0 for e in atlas.exceptional if e.involves_max]
    half = [f.theta for f in atlas.flat_arcs()] + list(extra_half_turn)
    cands = atlas.thetas[:-1]
    step = atlas.thetas[1] - atlas.thetas[0]
    if not full and not half:
        return float(cands[0]) + 0.5 * step
    score = _margin_score(cands, full, half)
    best = int(np.argmax(score))
    if score[best] < _MARGIN_STEPS * step:
        raise SelectionConstructionError(
            "no base angle has enough margin from exceptional arguments")
    return float(cands[best])


class NoCornerField(SelectionField):
    """Chord selection from a smooth boundary base point."""

    strategy = "no-corner"

    def __init__(self, atlas: BoundaryAtlas, report: ContinuityReport,
                 rng: np.random.Generator | None = None,
                 start_theta: float | None = None):
        super().__init__(atlas, report)
        if report.weak_failures:
            raise ExcisionRequiredError(
                "weak continuity failures require an excised selection")
        theta = _pick_rotation(atlas) if start_theta is None else float(start_theta)
        fam = RotatedFamily(self.matrix)
        vals, vecs = fam.eig_at(theta)
        x0 = vecs[:, -1]
        K = fam.derivative_at(theta)
        self.center = complex(np.exp(1j * theta)
                              * (vals[-1] + 1j * float((x0.conj() @ K @ x0).real)))
        self.base_vector = x0
        self.start_theta = theta
        self.path = canonical_boundary_path(atlas, x0, theta, rng)
        self.table = _RayTable(self.path, self.center)

    def select(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        self._validate(zs)
        lam, _, Y, _ = self.table.locate(zs)
        out = np.empty_like(Y)
        for i in range(zs.size):
            out[i] = elliptic_chord(self.base_vector, Y[i], lam[i], beta=1.0)
        return out


class ExcisedField(SelectionField):
    """Chord selection on F(A) minus epsilon-disks around weak failures.

    Each excised boundary cap is replaced by the facing arc of the
    numerical range of a 3-by-3 compression spanning the base vector and
    the cap's edge preimages; that arc stays inside the removed disk, so
    its anchored preimages bridge the discontinuity continuously.
    """

    strategy = "excised"

    def __init__(self, atlas: BoundaryAtlas, report: ContinuityReport,
                 epsilon: float, rng: np.random.Generator | None = None):
        super().__init__(atlas, report)
        if not report.weak_failures:
            raise SelectionConstructionError(
                "excised strategy needs at least one weak continuity failure")
        if epsilon <= 0:
            raise SelectionConstructionError("epsilon must be positive")
        self.epsilon = float(epsilon)
        rng = rng if rng is not None else np.random.default_rng(atlas.config.seed)

        fail_args = []
        for rec in report.records:
            if not rec.weak_ok:
                fail_args.append(rec.theta0)
        theta = _pick_rotation(atlas, extra_half_turn=tuple(fail_args))
        fam = RotatedFamily(self.matrix)
        vals, vecs = fam.eig_at(theta)
        x0 = vecs[:, -1]
        K = fam.derivative_at(theta)
        self.center = complex(np.exp(1j * theta)
                              * (vals[-1] + 1j * float((x0.conj() @ K @ x0).real)))
        self.base_vector = x0
        self.start_theta = theta
        self.path = canonical_boundary_path(atlas, x0, theta, rng)
        self.disks: list[tuple[complex, float]] = []
        self._excise_all(rng)
        self.table = _RayTable(self.path, self.center)

    # -- excision machinery -------------------------------------------------

    def _excise_all(self, rng: np.random.Generator) -> None:
        failures = sorted(self.report.weak_failures,
                          key=lambda w: self._path_position(w))
        for w in failures:
            self._excise_one(complex(w), rng)

    def _path_position(self, w: complex) -> float:
        zs, _ = self.path.samples()
        return int(np.argmin(np.abs(zs - w)))

    def _break_location(self, w: complex) -> int:
        """Index in path.pieces of the arc piece ending at the failure."""
        best, best_d = None, np.inf
        for i, p in enumerate(self.path.pieces):
            if p.kind != "arc":
                continue
            d = abs(p.zs[-1] - w)
            if d < best_d:
                best, best_d = i, d
        if best is None or best_d > 1e-5 * max(self.atlas.scale, 1.0):
            raise SelectionConstructionError(
                f"failure point {w} does not terminate a path piece")
        return best

    def _walk_to_radius(self, piece: ArcPiece, w: complex, radius: float,
                        from_end: bool) -> float | None:
        """Angle on the piece where |b(theta) - w| first reaches radius."""
        d = np.abs(piece.zs - w)
        order = range(d.size - 1, -1, -1) if from_end else range(d.size)
        inside_seen = False
        prev = None
        for j in order:
            if d[j] < radius:
                inside_seen = True
                prev = j
                continue
            if inside_seen:
                lo_j, hi_j = (j, prev) if from_end else (prev, j)
                a, b = piece.thetas[lo_j], piece.thetas[hi_j]
                for _ in range(80):
                    m = 0.5 * (a + b)
                    zc, _ = self.path.eval_arc(piece, np.array([m]))
                    if (abs(zc[0] - w) < radius) == from_end:
                        b = m
                    else:
                        a = m
                    if b - a < 1e-12:
                        break
                return 0.5 * (a + b)
            prev = j
        return None

    def _excise_one(self, w: complex, rng: np.random.Generator) -> None:
        i_left = self._break_location(w)
        i_right = i_left + 1
        if i_right >= len(self.path.pieces):
            raise SelectionConstructionError(
                "failure point coincides with the path base point")
        left: ArcPiece = self.path.pieces[i_left]
        right: ArcPiece = self.path.pieces[i_right]
        if right.kind != "arc":
            raise SelectionConstructionError(
                "failure point is not flanked by round arcs")

        eps_eff = 0.8 * self.epsilon
        for _attempt in range(8):
            th_l = self._walk_to_radius(left, w, eps_eff, from_end=True)
            th_r = self._walk_to_radius(right, w, eps_eff, from_end=False)
            if th_l is None or th_r is None:
                eps_eff *= 0.7
                continue
            # Every skipped boundary sample must stay well inside the disk.
            skip_l = left.zs[left.thetas > th_l]
            skip_r = right.zs[right.thetas < th_r]
            cap = np.concatenate([skip_l, skip_r])
            if cap.size and np.abs(cap - w).max() > 0.95 * self.epsilon:
                eps_eff *= 0.7
                continue
            lid = self._build_lid(left, right, th_l, th_r, w, rng)
            if lid is None:
                eps_eff *= 0.7
                continue
            lid_pieces, sign_flip = lid
            self._splice(i_left, i_right, th_l, th_r, lid_pieces)
            if sign_flip:
                start = self.path.pieces.index(lid_pieces[-1]) + 1
                for p in self.path.pieces[start:]:
                    p.sign = -p.sign
            self.disks.append((w, self.epsilon))
            return
        raise SelectionConstructionError(
            f"could not place excision endpoints for failure at {w}")

    def _build_lid(self, left: ArcPiece, right: ArcPiece, th_l: float,
                   th_r: float, w: complex, rng: np.random.Generator):
        """Pieces tracing the compression boundary across the excised cap."""
        zl, ul = self.path.eval_arc(left, np.array([th_l]))
        zr, ur = self.path.eval_arc(right, np.array([th_r]))
        u_minus, u_plus = ul[0], ur[0]
        span = np.stack([self.base_vector, u_minus, u_plus], axis=0)
        A3, V = compress(self.matrix, span)
        x0_3 = V.conj().T @ self.base_vector
        atlas3 = build_boundary_atlas(A3, self.atlas.config)
        if atlas3.degenerate_kind != FULL_DIMENSIONAL:
            return None
        lo = th_l % (2 * np.pi)
        hi = th_r % (2 * np.pi)
        if hi <= lo:
            hi += 2 * np.pi
        # The compression boundary must be break-free over the cap window;
        # degree-1 crossings are flats and get bridged, so only odd
        # degrees three and up disqualify the lid.
        for e in atlas3.exceptional:
            if not e.involves_max:
                continue
            if not e.degree_resolved:
                return None
            for cand in (e.theta0, e.theta0 + 2 * np.pi):
                if lo - 1e-6 < cand < hi + 1e-6 and e.split_degree != math.inf \
                        and e.split_degree >= 3 and int(e.split_degree) % 2 == 1:
                    return None
        pieces3 = self._window_pieces(atlas3, x0_3, lo, hi, rng)
        if pieces3 is None:
            return None
        fam3 = RotatedFamily(A3)
        for p in pieces3:
            if p.kind == "arc":
                p.family = fam3
            p.lift = V
        first, last = pieces3[0], pieces3[-1]
        if first.kind != "arc" or last.kind != "arc":
            return None
        scale = max(self.atlas.scale, 1.0)
        # The lid must land on the excision endpoints geometrically.
        if abs(first.zs[0] - zl[0]) > 1e-6 * scale \
                or abs(last.zs[-1] - zr[0]) > 1e-6 * scale:
            return None
        y_start = first.sign * (V @ first.ys[0])
        if (np.vdot(u_minus, y_start)).real < 0:
            for p in pieces3:
                p.sign = -p.sign
            y_start = -y_start
        if np.linalg.norm(y_start - u_minus) > 1e-6:
            return None
        y_end = last.sign * (V @ last.ys[-1])
        sign_flip = (np.vdot(u_plus, y_end)).real < 0
        if np.linalg.norm(y_end - (-u_plus if sign_flip else u_plus)) > 1e-6:
            return None
        # The lid must stay inside the epsilon disk around the failure.
        for p in pieces3:
            zz = p.zs if p.kind == "arc" else np.array([p.z_minus, p.z_plus])
            if np.abs(zz - w).max() > self.epsilon:
                return None
        return pieces3, sign_flip

    def _window_pieces(self, atlas3: BoundaryAtlas, x0_3: np.ndarray,
                       lo: float, hi: float, rng: np.random.Generator):
        """Arc and bridge pieces of a compression atlas over [lo, hi]."""
        from .paths import _arc_piece, _assemble
        fam3 = RotatedFamily(atlas3.matrix)
        raw = []
        for arc in atlas3.arcs:
            for off in (0.0, 2 * np.pi, -2 * np.pi):
                if isinstance(arc, RoundArc):
                    a, b = arc.theta_start + off, arc.theta_end + off
                    s, e = max(a, lo), min(b, hi)
                    if e - s > 1e-9:
                        raw.append((s, _arc_piece(atlas3, fam3, arc, s, e,
                                                  x0_3, rng, atlas3.config)))
                else:
                    t = arc.theta + off
                    if lo < t < hi:
                        raw.append((t, arc))
        if not raw:
            return None
        raw.sort(key=lambda q: q[0])
        pieces, _ = _assemble([q[1] for q in raw], x0_3, atlas3.config.path_zero)
        return pieces

    def _splice(self, i_left: int, i_right: int, th_l: float, th_r: float,
                lid_pieces: list) -> None:
        left = self.path.pieces[i_left]
        right = self.path.pieces[i_right]
        self.path.pieces[i_left] = _clip_piece(self.path, left, left.theta_lo, th_l)
        self.path.pieces[i_right] = _clip_piece(self.path, right, th_r, right.theta_hi)
        at = i_left + 1
        for k, p in enumerate(lid_pieces):
            self.path.pieces.insert(at + k, p)

    # -- queries ------------------------------------------------------------

    def select(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        self._validate(zs)
        for c, r in self.disks:
            inside = np.abs(zs - c) < r * (1 - 1e-12)
            if inside.any():
                raise OutsideDomainError(
                    f"query {zs[inside][0]} lies in the excised disk around {c}")
        lam, _, Y, _ = self.table.locate(zs)
        out = np.empty_like(Y)
        for i in range(zs.size):
            out[i] = elliptic_chord(self.base_vector, Y[i], lam[i], beta=1.0)
        return out

    def describe(self) -> dict:
        d = super().describe()
        d["epsilon"] = self.epsilon
        d["excised_disks"] = [[c.real, c.imag, r] for c, r in self.disks]
        return d


def _clip_piece(path: BoundaryPath, piece: ArcPiece, lo: float, hi: float
                ) -> ArcPiece:
    """Restrict an arc piece to [lo, hi], inserting exact endpoint samples."""
    mask = (piece.thetas > lo + 1e-12) & (piece.thetas < hi - 1e-12)
    inner_t = piece.thetas[mask]
    z_lo, y_lo = path.eval_arc(piece, np.array([lo]))
    z_hi, y_hi = path.eval_arc(piece, np.array([hi]))
    thetas = np.concatenate([[lo], inner_t, [hi]])
    zs = np.concatenate([z_lo, piece.zs[mask], z_hi])
    sign = piece.sign if piece.sign != 0 else 1.0
    ys = np.vstack([y_lo / sign, piece.ys[mask], y_hi / sign])
    valid = np.concatenate([[True], piece.valid[mask], [True]])
    clipped = ArcPiece(branch_id=piece.branch_id, theta_lo=float(lo),
                       theta_hi=float(hi), thetas=thetas, zs=zs, ys=ys,
                       anchor=piece.anchor, anchor_is_base=piece.anchor_is_base,
                       valid=valid, is_corner=piece.is_corner, sign=piece.sign)
    return clipped


def build_selection(A, tol: ToleranceConfig | None = None,
                    epsilon: float | None = None, strategy: str = "auto",
                    rng: np.random.Generator | None = None) -> SelectionField:
    """Construct the continuous selection field for a matrix.

    strategy auto picks: point or segment for degenerate ranges, corner
    when a corner point exists, otherwise the smooth-base chord field;
    weak continuity failures demand epsilon and produce an excised field.
    Raises ExcisionRequiredError when epsilon is needed but missing.
    """
    A = as_square_matrix(A)
    tol = tol or default_config()
    rng = rng if rng is not None else np.random.default_rng(tol.seed)
    atlas = build_boundary_atlas(A, tol)
    report = classify_continuity(atlas)

    if strategy == "auto":
        if atlas.degenerate_kind == POINT:
            strategy = "point"
        elif atlas.degenerate_kind == SEGMENT:
            strategy = "segment"
        elif report.weak_failures:
            if epsilon is None:
                raise ExcisionRequiredError(
                    "weak continuity fails at "
                    + ", ".join(f"{z:.6g}" for z in report.weak_failures)
                    + "; pass epsilon to excise")
            strategy = "excised"
        elif atlas.corners:
            strategy = "corner"
        else:
            strategy = "no-corner"

    if strategy == "point":
        return PointField(atlas, report)
    if strategy == "segment":
        return SegmentField(atlas, report)
    if strategy == "corner":
        return CornerField(atlas, report, rng)
    if strategy == "no-corner":
        return NoCornerField(atlas, report, rng)
    if strategy == "excised":
        if epsilon is None:
            raise ExcisionRequiredError("excised strategy requires epsilon")
        return ExcisedField(atlas, report, epsilon, rng)
    raise SelectionConstructionError(f"unknown strategy '{strategy}'")


def select(A, epsilon: float | None = None, tol: ToleranceConfig | None = None,
           rng: np.random.Generator | None = None) -> SelectionField:
    """Dispatching entry point; see build_selection for the routing."""
    return build_selection(A, tol=tol, epsilon=epsilon, rng=rng)


def select_no_corner(A, atlas: BoundaryAtlas, report: ContinuityReport,
                     rng: np.random.Generator | None = None) -> NoCornerField:
    """Smooth-base chord field from a precomputed atlas and report."""
    _check_same_matrix(A, atlas)
    return NoCornerField(atlas, report, rng)


def select_corner(A, atlas: BoundaryAtlas, report: ContinuityReport,
                  rng: np.random.Generator | None = None) -> CornerField:
    """Corner-based field from a precomputed atlas and report."""
    _check_same_matrix(A, atlas)
    return CornerField(atlas, report, rng)


def select_excised(A, atlas: BoundaryAtlas, report: ContinuityReport,
                   epsilon: float, rng: np.random.Generator | None = None
                   ) -> SelectionField:
    """Excised field from a precomputed atlas and report.

    A report without weak failures falls through to the base strategy,
    making the excision vacuous.
    """
    _check_same_matrix(A, atlas)
    if not report.weak_failures:
        if atlas.corners:
            return CornerField(atlas, report, rng)
        return NoCornerField(atlas, report, rng)
    return ExcisedField(atlas, report, epsilon, rng)


def _check_same_matrix(A, atlas: BoundaryAtlas) -> None:
    A = as_square_matrix(A)
    if A.shape != atlas.matrix.shape or not np.allclose(A, atlas.matrix):
        raise InputError("atlas was built for a different matrix")

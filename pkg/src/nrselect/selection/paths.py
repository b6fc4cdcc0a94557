"""Continuous preimage paths along the boundary of the numerical range.

A boundary path is a piecewise map t -> y(t) of unit vectors whose field
values trace the boundary: round arcs contribute maximal eigenvectors
with phases anchored against a fixed reference vector, and flat portions
contribute the bridge y(omega) = cos(omega) x- + sin(omega) x+ between
the endpoint eigenvectors.  Anchoring against the base vector keeps
x0^* y(t) real, which the chord formulas rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..boundary import (BoundaryAtlas, EigenBranch, FlatArc, RotatedFamily,
                        RoundArc, FULL_DIMENSIONAL)
from ..config import ToleranceConfig
from ..errors import InputError, PathAnchorError, SelectionConstructionError

__all__ = ["ArcPiece", "BridgePiece", "BoundaryPath", "sign_continuation",
           "spectral_projection_path", "anchored_projection_path",
           "flat_bridge", "canonical_boundary_path", "open_boundary_path"]

_W_REDRAWS = 16


@dataclass
class ArcPiece:
    """Sampled round-arc portion of a boundary path."""

    branch_id: int
    theta_lo: float
    theta_hi: float
    thetas: np.ndarray
    zs: np.ndarray
    ys: np.ndarray                 # (m, n) anchored unit vectors
    anchor: np.ndarray
    anchor_is_base: bool
    valid: np.ndarray
    is_corner: bool = False
    sign: float = 1.0
    family: RotatedFamily | None = None    # overrides the path family
    lift: np.ndarray | None = None         # isometry into the full space
    kind: str = field(default="arc", init=False)


@dataclass
class BridgePiece:
    """Flat-portion bridge between endpoint-phase-aligned eigenvectors."""

    theta: float
    x_minus: np.ndarray
    x_plus: np.ndarray
    z_minus: complex
    z_plus: complex
    sign: float = 1.0
    lift: np.ndarray | None = None
    kind: str = field(default="bridge", init=False)

    def eval(self, omegas) -> tuple[np.ndarray, np.ndarray]:
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        c, s = np.cos(omegas), np.sin(omegas)
        ys = self.sign * (c[:, None] * self.x_minus[None, :]
                          + s[:, None] * self.x_plus[None, :])
        zs = c ** 2 * self.z_minus + s ** 2 * self.z_plus
        if self.lift is not None:
            ys = ys @ self.lift.T
        return zs, ys


class BoundaryPath:
    """Ordered pieces covering a boundary stretch once."""

    def __init__(self, atlas: BoundaryAtlas, x0: np.ndarray, start_theta: float,
                 pieces: list, junction_errors: list[float], closed: bool):
        self.atlas = atlas
        self.family = RotatedFamily(atlas.matrix)
        self.x0 = x0
        self.start_theta = float(start_theta)
        self.pieces = pieces
        self.junction_errors = junction_errors
        self.closed = closed
        self._edges: np.ndarray | None = None

    @property
    def t_edges(self) -> np.ndarray:
        """Cumulative t values at piece boundaries, normalized to [0, 1].

        Arc pieces weigh their angular span, bridges a flat quarter turn,
        so t advances at a comparable rate across piece kinds.
        """
        if self._edges is None or self._edges.size != len(self.pieces) + 1:
            w = np.array([p.theta_hi - p.theta_lo if p.kind == "arc"
                          else np.pi / 2 for p in self.pieces])
            edges = np.concatenate([[0.0], np.cumsum(w)])
            self._edges = edges / edges[-1]
        return self._edges

    def at(self, ts) -> tuple[np.ndarray, np.ndarray]:
        """Boundary value and unit vector at path parameters t in [0, 1]."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        edges = self.t_edges
        pid = np.clip(np.searchsorted(edges, ts, side="right") - 1,
                      0, len(self.pieces) - 1)
        zs = np.empty(ts.shape, dtype=complex)
        ys = np.empty((ts.size, self.family.n), dtype=complex)
        for p in np.unique(pid):
            piece = self.pieces[p]
            sel = pid == p
            frac = (ts[sel] - edges[p]) / (edges[p + 1] - edges[p])
            frac = np.clip(frac, 0.0, 1.0)
            if piece.kind == "arc":
                th = piece.theta_lo + frac * (piece.theta_hi - piece.theta_lo)
                zs[sel], ys[sel] = self.eval_arc(piece, th)
            else:
                zs[sel], ys[sel] = piece.eval(frac * np.pi / 2)
        return zs, ys

    @property
    def discontinuity_ts(self) -> list[float]:
        """t values of junctions sitting on odd-degree (>= 3) branch splits.

        The vector sequence jumps exactly there; everywhere else adjacent
        pieces are phase-aligned during assembly.
        """
        out = []
        excs = [e for e in self.atlas.exceptional
                if e.involves_max and np.isfinite(e.split_degree)
                and e.split_degree >= 3 and int(e.split_degree) % 2 == 1]
        if not excs:
            return out
        edges = self.t_edges
        for j in range(len(self.pieces) - 1):
            a, b = self.pieces[j], self.pieces[j + 1]
            if a.kind != "arc" or b.kind != "arc":
                continue
            th = a.theta_hi % (2 * np.pi)
            for e in excs:
                d = abs((th - e.theta0) % (2 * np.pi))
                if min(d, 2 * np.pi - d) < 1e-7:
                    out.append(float(edges[j + 1]))
                    break
        return out

    def eval_arc(self, piece: ArcPiece, thetas) -> tuple[np.ndarray, np.ndarray]:
        """Boundary values and anchored vectors at arbitrary arc angles."""
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        fam = piece.family if piece.family is not None else self.family
        vals, vecs = fam.eig_stack(thetas % (2 * np.pi))
        zs = np.empty(thetas.shape, dtype=complex)
        ys = np.empty((thetas.size, fam.n), dtype=complex)
        zero = self.atlas.config.path_zero
        for i, th in enumerate(thetas):
            j = int(np.searchsorted(piece.thetas, th))
            j = min(max(j, 0), piece.thetas.size - 1)
            if j > 0 and th - piece.thetas[j - 1] < piece.thetas[j] - th:
                j -= 1
            ref = piece.ys[j]
            col = int(np.argmax(np.abs(ref.conj() @ vecs[i])))
            u = vecs[i][:, col]
            lam = vals[i][col]
            K = fam.derivative_at(th % (2 * np.pi))
            dlam = float((u.conj() @ K @ u).real)
            zs[i] = np.exp(1j * th) * (lam + 1j * dlam)
            c = complex(np.vdot(u, piece.anchor))
            if abs(c) > zero:
                y = u * (c / abs(c))
                # Inherit the sign-continuation state of the nearest sample.
                if (ref.conj() @ y).real < 0:
                    y = -y
            else:
                d = complex(np.vdot(u, ref))
                y = u * (d / abs(d)) if abs(d) > 1e-14 else ref
            ys[i] = piece.sign * y
        if piece.lift is not None:
            ys = ys @ piece.lift.T
        return zs, ys

    def samples(self) -> tuple[np.ndarray, np.ndarray]:
        """Concatenated (z, y) samples over all pieces, in path order."""
        zs, ys = [], []
        for p in self.pieces:
            if p.kind == "arc":
                y = p.sign * p.ys
                if p.lift is not None:
                    y = y @ p.lift.T
                zs.append(p.zs)
                ys.append(y)
            else:
                z, y = p.eval(np.linspace(0.0, np.pi / 2, 17))
                zs.append(z)
                ys.append(y)
        return np.concatenate(zs), np.vstack(ys)

    @property
    def wrap_error(self) -> float:
        if not self.closed or self.pieces[0].kind != "arc" \
                or self.pieces[-1].kind != "arc":
            return float("nan")
        y_end = self.pieces[-1].sign * self.pieces[-1].ys[-1]
        return float(min(np.linalg.norm(y_end - self.x0),
                         np.linalg.norm(y_end + self.x0)))


def sign_continuation(samples: np.ndarray, zero: float = 1e-8) -> np.ndarray:
    """Normalize a vector sequence and fix signs so it joins continuously.

    Samples whose norm is at most zero are treated as isolated zeros:
    they keep their own direction when one is numerically available and
    otherwise copy the nearest valid sample, with the phase matched
    there.  A final pass flips any sample whose overlap with its
    predecessor is negative, which realizes the minimal-jump sign choice
    run by run.
    """
    samples = np.asarray(samples, dtype=complex)
    norms = np.linalg.norm(samples, axis=1)
    valid = norms > zero
    idx = np.nonzero(valid)[0]
    if idx.size == 0:
        raise PathAnchorError("all samples vanish; nothing to continue")
    run = 0
    for v in valid:
        run = 0 if v else run + 1
        if run > 3:
            raise PathAnchorError(
                "more than 3 consecutive vanishing samples; zeros not isolated")
    ys = np.empty_like(samples)
    ys[valid] = samples[valid] / norms[valid, None]
    for i in np.nonzero(~valid)[0]:
        j = idx[np.argmin(np.abs(idx - i))]
        if norms[i] > 1e-14:
            d = samples[i] / norms[i]
            c = complex(np.vdot(d, ys[j]))
            ys[i] = d * (c / abs(c)) if abs(c) > 1e-14 else ys[j]
        else:
            ys[i] = ys[j]
    for i in range(1, ys.shape[0]):
        if (ys[i - 1].conj() @ ys[i]).real < 0:
            ys[i] = -ys[i]
    return ys


def _anchored(us: np.ndarray, anchor: np.ndarray, zero: float
              ) -> tuple[np.ndarray, np.ndarray]:
    """Phase-anchor unit eigenvector samples against a fixed vector.

    Samples with anchor overlap above the threshold take the overlap
    phase directly; the rest borrow a phase from the nearest valid
    sample.  Unlike the public sign continuation this tolerates long
    stretches of vanishing overlap, since an eigenvector path may dwell
    in the anchor's orthogonal complement without the path itself
    degenerating.  A final flip pass removes residual antipodal jumps.
    """
    cs = us.conj() @ anchor                 # row i holds u_i^H anchor
    ys = us.copy()
    valid = np.abs(cs) > zero
    ys[valid] = us[valid] * (cs[valid] / np.abs(cs[valid]))[:, None]
    if not valid.all():
        idx = np.nonzero(valid)[0]
        if idx.size == 0:
            raise PathAnchorError("no valid anchor overlap on arc piece")
        for i in np.nonzero(~valid)[0]:
            j = idx[np.argmin(np.abs(idx - i))]
            d = complex(np.vdot(us[i], ys[j]))
            ys[i] = us[i] * (d / abs(d)) if abs(d) > 1e-14 else ys[j]
    for i in range(1, ys.shape[0]):
        if (ys[i - 1].conj() @ ys[i]).real < 0:
            ys[i] = -ys[i]
    return ys, valid


def _eig_pick(fam: RotatedFamily, theta: float, ref: np.ndarray
              ) -> tuple[float, float, np.ndarray]:
    vals, vecs = fam.eig_at(theta % (2 * np.pi))
    col = int(np.argmax(np.abs(ref.conj() @ vecs)))
    u = vecs[:, col]
    K = fam.derivative_at(theta % (2 * np.pi))
    return float(vals[col]), float((u.conj() @ K @ u).real), u


def _window_samples(fam: RotatedFamily, branch: EigenBranch, lo: float, hi: float
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Branch samples on [lo, hi] with exact eigensolves at the endpoints.

    Grid samples closer than a quarter step to an endpoint are dropped
    in favor of the exact endpoint solve.  The interval may run past
    2 pi for wrap-around arcs.
    """
    grid = branch.thetas[:-1]
    step = grid[1] - grid[0]
    offsets = (grid[None, :] + np.array([0.0, 2 * np.pi, 4 * np.pi])[:, None]).ravel()
    inside = np.sort(offsets[(offsets > lo + 0.25 * step) & (offsets < hi - 0.25 * step)])
    thetas = np.concatenate([[lo], inside, [hi]])
    idx = (np.round((thetas % (2 * np.pi)) / step).astype(int)) % grid.size

    us = branch.vectors[idx].copy()
    lam = branch.values[idx].copy()
    dlam = branch.derivatives[idx].copy()
    for k in (0, thetas.size - 1):
        lam[k], dlam[k], us[k] = _eig_pick(fam, thetas[k], us[k])
    return thetas, us, lam, dlam


def spectral_projection_path(A, branch: EigenBranch, interval, w,
                             zero: float = 1e-8) -> ArcPiece:
    """Arc piece phased by projecting a fixed reference vector.

    Applying the rank-1 branch projection to w and normalizing pins the
    sample phases to w, so the path is continuous wherever the projected
    norm stays above the zero threshold.  The projected norm hitting the
    threshold means w was a bad draw; the caller redraws.
    """
    A = np.asarray(A, dtype=complex)
    fam = RotatedFamily(A)
    w = np.asarray(w, dtype=complex)
    lo, hi = float(interval[0]), float(interval[1])
    thetas, us, lam, dlam = _window_samples(fam, branch, lo, hi)
    cs = us.conj() @ w
    if np.abs(cs).min() <= zero:
        raise PathAnchorError(
            "projection of the reference vector vanishes on the interval")
    ys = us * (cs / np.abs(cs))[:, None]
    zs = np.exp(1j * thetas) * (lam + 1j * dlam)
    return ArcPiece(branch_id=branch.branch_id, theta_lo=lo, theta_hi=hi,
                    thetas=thetas, zs=zs, ys=ys,
                    anchor=w / np.linalg.norm(w), anchor_is_base=False,
                    valid=np.ones(thetas.size, dtype=bool))


def anchored_projection_path(A, branch: EigenBranch, interval, x0,
                             zero: float = 1e-8) -> ArcPiece:
    """Arc piece whose overlap with the base vector is real throughout.

    Phases come from projecting x0; the sign continuation absorbs the
    flips that raw phase anchoring picks up at overlap zeros.  Requires
    the overlap not to vanish identically; otherwise the caller falls
    back to spectral_projection_path with a random reference.
    """
    A = np.asarray(A, dtype=complex)
    fam = RotatedFamily(A)
    x0 = np.asarray(x0, dtype=complex)
    lo, hi = float(interval[0]), float(interval[1])
    thetas, us, lam, dlam = _window_samples(fam, branch, lo, hi)
    cs = us.conj() @ x0
    if np.abs(cs).max() <= zero:
        raise PathAnchorError(
            "base overlap vanishes identically on the interval")
    ys = sign_continuation(us * cs[:, None], zero)
    zs = np.exp(1j * thetas) * (lam + 1j * dlam)
    return ArcPiece(branch_id=branch.branch_id, theta_lo=lo, theta_hi=hi,
                    thetas=thetas, zs=zs, ys=ys, anchor=x0,
                    anchor_is_base=True, valid=np.abs(cs) > zero)


def flat_bridge(x_minus, x_plus, A=None) -> BridgePiece:
    """Bridge between the orthogonal endpoint vectors of a flat portion.

    Passing A fills in the endpoint boundary values and the outward
    normal; without it the bridge carries only the vector data.
    """
    x_minus = np.asarray(x_minus, dtype=complex)
    x_plus = np.asarray(x_plus, dtype=complex)
    for v in (x_minus, x_plus):
        if abs(np.linalg.norm(v) - 1.0) > 1e-8:
            raise InputError("bridge endpoints must be unit vectors")
    if abs(np.vdot(x_minus, x_plus)) > 1e-8:
        raise InputError("bridge endpoints must be orthogonal")
    theta = 0.0
    z_minus = z_plus = 0j
    if A is not None:
        A = np.asarray(A, dtype=complex)
        z_minus = complex(np.vdot(x_minus, A @ x_minus))
        z_plus = complex(np.vdot(x_plus, A @ x_plus))
        if abs(z_plus - z_minus) > 0:
            theta = float(np.angle(z_plus - z_minus) - np.pi / 2)
    return BridgePiece(theta=theta, x_minus=x_minus, x_plus=x_plus,
                       z_minus=z_minus, z_plus=z_plus)


def _arc_piece(atlas: BoundaryAtlas, fam: RotatedFamily, arc: RoundArc,
               lo: float, hi: float, x0: np.ndarray, rng: np.random.Generator,
               tolc: ToleranceConfig) -> ArcPiece:
    branch = atlas.branches[arc.branch_id]
    thetas, us, lam, dlam = _window_samples(fam, branch, lo, hi)
    zs = np.exp(1j * thetas) * (lam + 1j * dlam)

    # The random-anchor fallback handles arcs orthogonal to the base
    # vector, or overlap zeros too flat for the sign continuation;
    # elsewhere isolated zeros are absorbed by the anchoring step.
    over = np.abs(us.conj() @ x0)
    use_base = over.max() > tolc.path_zero
    if use_base:
        try:
            ys, valid = _anchored(us, x0, tolc.path_zero)
            anchor = x0
        except PathAnchorError:
            use_base = False
    if not use_base:
        anchor = None
        for _ in range(_W_REDRAWS):
            w = rng.normal(size=fam.n) + 1j * rng.normal(size=fam.n)
            w /= np.linalg.norm(w)
            if np.abs(us.conj() @ w).min() > 1e-4:
                anchor = w
                break
        if anchor is None:
            raise PathAnchorError("failed to draw an anchor for an arc piece")
        ys, valid = _anchored(us, anchor, tolc.path_zero)
    return ArcPiece(branch_id=arc.branch_id, theta_lo=float(lo), theta_hi=float(hi),
                    thetas=thetas, zs=zs, ys=ys, anchor=anchor,
                    anchor_is_base=use_base, valid=valid, is_corner=arc.is_corner)


def _aligned_endpoint(x: np.ndarray, neighbor: np.ndarray, x0: np.ndarray,
                      zero: float) -> np.ndarray:
    """Phase a bridge endpoint: real base overlap first, then match neighbor.

    When the endpoint is not orthogonal to the base vector its phase is
    fixed so the base overlap is real, leaving only a sign to pick from
    the neighboring arc sample.  Orthogonal endpoints take the full
    neighbor phase.
    """
    c0 = complex(np.vdot(x0, x))
    if abs(c0) > zero:
        x = x * (abs(c0) / c0)
        if (neighbor.conj() @ x).real < 0:
            x = -x
    else:
        d = complex(np.vdot(neighbor, x))
        if abs(d) > 1e-12:
            x = x * (abs(d) / d)
    return x


def _assemble(raw: list, x0: np.ndarray, zero: float) -> tuple[list, list[float]]:
    """Interleave arc pieces and bridges, aligning bridge endpoint phases."""
    pieces: list = []
    junction_errors: list[float] = []
    for item in raw:
        if isinstance(item, FlatArc):
            xm, xp = item.x_minus.copy(), item.x_plus.copy()
            if pieces and pieces[-1].kind == "arc":
                prev_end = pieces[-1].ys[-1]
                xm = _aligned_endpoint(xm, prev_end, x0, zero)
                junction_errors.append(float(np.linalg.norm(xm - prev_end)))
            pieces.append(BridgePiece(theta=item.theta, x_minus=xm, x_plus=xp,
                                      z_minus=item.z_minus, z_plus=item.z_plus))
        else:
            if pieces and pieces[-1].kind == "bridge":
                br = pieces[-1]
                br.x_plus = _aligned_endpoint(br.x_plus, item.ys[0], x0, zero)
                junction_errors.append(float(np.linalg.norm(br.x_plus - item.ys[0])))
            elif pieces and pieces[-1].kind == "arc":
                # Consecutive arc pieces may disagree by the per-piece sign
                # freedom; flip the incoming piece to match.
                if (pieces[-1].ys[-1].conj() @ item.ys[0]).real < 0:
                    item.ys = -item.ys
                junction_errors.append(
                    float(np.linalg.norm(pieces[-1].ys[-1] - item.ys[0])))
            pieces.append(item)
    return pieces, junction_errors


def canonical_boundary_path(atlas: BoundaryAtlas, x0: np.ndarray,
                            start_theta: float,
                            rng: np.random.Generator | None = None
                            ) -> BoundaryPath:
    """Closed path around the whole boundary, split at start_theta.

    start_theta must lie strictly inside a round arc; the first and last
    pieces are the two halves of that arc.  The final vector may differ
    from x0 by a sign, which the chord construction absorbs.
    """
    if atlas.degenerate_kind != FULL_DIMENSIONAL:
        raise SelectionConstructionError(
            "boundary paths require a full-dimensional numerical range")
    rng = rng if rng is not None else np.random.default_rng(atlas.config.seed)
    fam = RotatedFamily(atlas.matrix)
    tolc = atlas.config
    two_pi = 2 * np.pi

    arcs = list(atlas.arcs)
    s = float(start_theta) % two_pi
    start_idx = None
    for i, arc in enumerate(arcs):
        if isinstance(arc, RoundArc):
            if arc.theta_start < s < arc.theta_end:
                start_idx = i
                break
            if arc.theta_start < s + two_pi < arc.theta_end:
                start_idx = i
                s += two_pi
                break
    if start_idx is None:
        raise SelectionConstructionError(
            f"start angle {s:.6f} does not fall inside a round arc")

    raw: list = []
    first = arcs[start_idx]
    raw.append(_arc_piece(atlas, fam, first, s, first.theta_end, x0, rng, tolc))
    offset = 0.0
    for k in range(1, len(arcs)):
        j = (start_idx + k) % len(arcs)
        if j == 0:
            offset = two_pi
        arc = arcs[j]
        if isinstance(arc, FlatArc):
            raw.append(arc)
        else:
            raw.append(_arc_piece(atlas, fam, arc, arc.theta_start + offset,
                                  arc.theta_end + offset, x0, rng, tolc))
    if start_idx == 0:
        offset = two_pi
    raw.append(_arc_piece(atlas, fam, first, first.theta_start + offset,
                          s if s > first.theta_start + offset else s + two_pi,
                          x0, rng, tolc))

    pieces, junction_errors = _assemble(raw, x0, tolc.path_zero)
    return BoundaryPath(atlas, x0, s, pieces, junction_errors, closed=True)


def open_boundary_path(atlas: BoundaryAtlas, x0: np.ndarray,
                       flat_after: FlatArc, flat_before: FlatArc,
                       rng: np.random.Generator | None = None) -> BoundaryPath:
    """Open path over the boundary minus two flats sharing a corner.

    flat_after is the flat leaving the corner (its z_minus is the
    corner); flat_before is the flat arriving at it.  The path runs from
    flat_after's far endpoint counterclockwise to flat_before's far
    endpoint, bridging any other flats on the way.
    """
    if atlas.degenerate_kind != FULL_DIMENSIONAL:
        raise SelectionConstructionError(
            "boundary paths require a full-dimensional numerical range")
    rng = rng if rng is not None else np.random.default_rng(atlas.config.seed)
    fam = RotatedFamily(atlas.matrix)
    tolc = atlas.config
    two_pi = 2 * np.pi

    arcs = list(atlas.arcs)
    i_after = next(i for i, a in enumerate(arcs)
                   if isinstance(a, FlatArc) and a is flat_after)
    raw: list = []
    offset = 0.0
    for k in range(1, len(arcs)):
        j = (i_after + k) % len(arcs)
        if j == 0 and k > 0:
            offset = two_pi
        arc = arcs[j]
        if isinstance(arc, FlatArc):
            if arc is flat_before:
                break
            raw.append(arc)
        else:
            raw.append(_arc_piece(atlas, fam, arc, arc.theta_start + offset,
                                  arc.theta_end + offset, x0, rng, tolc))
    else:
        raise SelectionConstructionError("adjacent flats do not bound the path")

    pieces, junction_errors = _assemble(raw, x0, tolc.path_zero)
    start = pieces[0].theta_lo if pieces[0].kind == "arc" else pieces[0].theta
    return BoundaryPath(atlas, x0, start, pieces, junction_errors, closed=False)

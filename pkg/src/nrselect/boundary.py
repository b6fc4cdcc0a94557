"""Boundary structure of the numerical range.

Tracks the analytic eigenvalue branches of Re(e^{-i theta} A) over a theta
grid, locates their crossings, estimates split degrees from log-log gap
fits, and assembles a boundary atlas of round arcs, flat portions, and
corner points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .config import ToleranceConfig, default_config
from .core import as_square_matrix, imag_part, real_part, spectral_scale
from .errors import (
    BoundaryPointError,
    EigensolverError,
    GridTooCoarseError,
    UnresolvedSplitDegreeError,
)

__all__ = [
    "EigenBranch",
    "ExceptionalArgument",
    "RoundArc",
    "FlatArc",
    "BoundaryAtlas",
    "RotatedFamily",
    "track_branches",
    "branch_derivative",
    "critical_curve",
    "find_exceptional_arguments",
    "estimate_split_degree",
    "build_boundary_atlas",
    "classify_boundary_point",
]

# Boundary point taxonomy labels.
CORNER = "corner"
FLAT_INTERIOR = "flat-interior"
FLAT_ENDPOINT = "flat-endpoint-round"
FULLY_ROUND = "fully-round"

# Degenerate range kinds.
FULL_DIMENSIONAL = "full-dimensional"
SEGMENT = "segment"
POINT = "point"

_MAX_REFINEMENTS = 4
_MATCH_OVERLAP_MIN = 0.7
_ADJACENT_JUMP_MAX = 0.5
_SPLIT_WINDOW_IN = 2       # grid steps excluded around theta0 in degree fits
_SPLIT_WINDOW_OUT = 32     # outer window radius in grid steps
_SPLIT_RESIDUAL_MAX = 0.25
_SPLIT_DEGREE_MAX = 6      # rounded degrees above this are reported unresolved
_THETA_REFINE_TOL = 1e-11


class RotatedFamily:
    """Evaluates H(theta) = Re(e^{-i theta} A) and its theta-derivative."""

    def __init__(self, A: np.ndarray):
        self.A = as_square_matrix(A)
        self.H0 = real_part(self.A)
        self.K0 = imag_part(self.A)
        self.n = self.A.shape[0]
        self.scale = spectral_scale(self.A)

    def hermitian_at(self, theta: float) -> np.ndarray:
        return math.cos(theta) * self.H0 + math.sin(theta) * self.K0

    def derivative_at(self, theta: float) -> np.ndarray:
        # d/d theta Re(e^{-i theta} A) = Im(e^{-i theta} A)
        return math.cos(theta) * self.K0 - math.sin(theta) * self.H0

    def eig_at(self, theta: float) -> tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and eigenvector columns at one angle."""
        try:
            return np.linalg.eigh(self.hermitian_at(theta))
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise EigensolverError(str(exc)) from exc

    def eig_stack(self, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Batched eigendecomposition over an array of angles."""
        c, s = np.cos(thetas), np.sin(thetas)
        stack = c[:, None, None] * self.H0 + s[:, None, None] * self.K0
        try:
            return np.linalg.eigh(stack)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise EigensolverError(str(exc)) from exc


@dataclass(frozen=True)
class EigenBranch:
    """One tracked eigenvalue branch of Re(e^{-i theta} A).

    Vectors are phase-aligned so adjacent samples have nonnegative real
    inner product; derivatives are the Hellmann-Feynman values
    x^* Im(e^{-i theta} A) x, not finite differences.
    """

    branch_id: int
    thetas: np.ndarray       # (N+1,) uniform on [0, 2 pi], endpoint included
    values: np.ndarray       # (N+1,) real
    vectors: np.ndarray      # (N+1, n) complex
    derivatives: np.ndarray  # (N+1,) real


@dataclass(frozen=True)
class ExceptionalArgument:
    """A crossing of two eigenvalue branches at a refined angle theta0."""

    theta0: float
    branch_pair: tuple[int, int]
    value: float                      # common eigenvalue at the crossing
    z: complex                        # e^{i theta0}(value + i * mean derivative)
    z_pair: tuple[complex, complex]   # critical values of the two branches
    x_pair: tuple[np.ndarray, np.ndarray]  # limit eigenvectors of the two branches
    derivative_pair: tuple[float, float]
    involves_max: bool
    split_degree: float               # integer degree, or math.inf for identical
    degree_resolved: bool             # False when reported ">= 7, unresolved"
    fit_slope: float = float("nan")
    fit_residual: float = float("nan")


@dataclass(frozen=True)
class RoundArc:
    """Maximal interval where one branch carries the boundary."""

    kind: str = field(default="round", init=False)
    branch_id: int = 0
    theta_start: float = 0.0
    theta_end: float = 0.0           # may exceed 2 pi for the wrap-around arc
    is_corner: bool = False
    corner: complex | None = None    # constant critical value when is_corner


@dataclass(frozen=True)
class FlatArc:
    """Flat boundary portion created by a degree-1 maximal crossing."""

    kind: str = field(default="flat", init=False)
    theta: float = 0.0               # outward normal argument
    z_minus: complex = 0j            # endpoint reached from below theta
    z_plus: complex = 0j
    x_minus: np.ndarray | None = None
    x_plus: np.ndarray | None = None

    def length(self) -> float:
        return abs(self.z_plus - self.z_minus)


@dataclass(frozen=True)
class BoundaryAtlas:
    """Complete boundary description of F(A) on one grid resolution."""

    matrix: np.ndarray
    thetas: np.ndarray
    branches: tuple[EigenBranch, ...]
    support_values: np.ndarray            # lambda_max over the grid
    support_branch: np.ndarray            # argmax branch id per grid sample
    arcs: tuple[RoundArc | FlatArc, ...]  # cyclic order by theta
    exceptional: tuple[ExceptionalArgument, ...]
    corners: tuple[complex, ...]
    degenerate_kind: str
    warnings: tuple[str, ...]
    scale: float
    config: ToleranceConfig

    def hull_slack(self, zs) -> np.ndarray:
        """max_theta Re(e^{-i theta} z) - lambda_max(theta), sampled.

        Nonpositive inside F(A), about zero on the boundary, positive outside.
        Queries are processed in blocks to keep the point-by-angle product
        from ballooning on large grids.
        """
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        c, s = np.cos(self.thetas), np.sin(self.thetas)
        out = np.empty(zs.size)
        for k in range(0, zs.size, 4096):
            blk = zs[k:k + 4096]
            proj = np.real(blk)[:, None] * c[None, :] \
                + np.imag(blk)[:, None] * s[None, :]
            out[k:k + 4096] = (proj - self.support_values[None, :]).max(axis=1)
        return out

    def contains(self, zs, margin: float = 0.0) -> np.ndarray:
        return self.hull_slack(zs) <= margin

    def boundary_polyline(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(thetas, points, arc indices) sampled cyclically along the boundary."""
        ts, zs, ids = [], [], []
        for idx, arc in enumerate(self.arcs):
            if isinstance(arc, FlatArc):
                omegas = np.linspace(0.0, np.pi / 2, 33)
                seg = np.cos(omegas) ** 2 * arc.z_minus + np.sin(omegas) ** 2 * arc.z_plus
                ts.append(np.full(seg.shape, arc.theta))
                zs.append(seg)
                ids.append(np.full(seg.shape, idx, dtype=int))
            else:
                br = self.branches[arc.branch_id]
                lo, hi = arc.theta_start, arc.theta_end
                mask = (self.thetas >= lo - 1e-12) & (self.thetas <= hi + 1e-12)
                th = self.thetas[mask]
                z = _curve_from(br)[mask]
                wrapped = (self.thetas + 2 * np.pi >= lo - 1e-12) & \
                          (self.thetas + 2 * np.pi <= hi + 1e-12)
                if wrapped.any():
                    th = np.concatenate([th, self.thetas[wrapped] + 2 * np.pi])
                    z = np.concatenate([z, _curve_from(br)[wrapped]])
                order = np.argsort(th)
                ts.append(th[order])
                zs.append(z[order])
                ids.append(np.full(th.shape, idx, dtype=int))
        if not ts:
            return np.array([]), np.array([], dtype=complex), np.array([], dtype=int)
        return np.concatenate(ts), np.concatenate(zs), np.concatenate(ids)

    def diameter(self) -> float:
        # Support width along direction theta plus the opposite direction.
        N = self.support_values.size - 1
        half = N // 2
        w = self.support_values[:half] + self.support_values[half:2 * half]
        return float(w.max()) if w.size else 0.0

    def inner_margin(self) -> float:
        """Slack depth below which membership is certain.

        The sampled support polytope circumscribes the range.  Between
        grid angles it overshoots by roughly flat-length times step / 2
        at a flat's support kink and by a curvature term of order step
        squared elsewhere, so hull_slack below minus this margin puts a
        point truly inside.
        """
        step = float(self.thetas[1] - self.thetas[0])
        flat_len = max((abs(a.z_plus - a.z_minus) for a in self.flat_arcs()),
                       default=0.0)
        body = max(self.diameter(), self.scale)
        return 0.75 * step * flat_len + 4.0 * step ** 2 * body

    def flat_arcs(self) -> tuple[FlatArc, ...]:
        return tuple(a for a in self.arcs if isinstance(a, FlatArc))

    def round_arcs(self) -> tuple[RoundArc, ...]:
        return tuple(a for a in self.arcs if isinstance(a, RoundArc))


def _curve_from(branch: EigenBranch) -> np.ndarray:
    return np.exp(1j * branch.thetas) * (branch.values + 1j * branch.derivatives)


def critical_curve(branch: EigenBranch) -> np.ndarray:
    """Critical curve samples e^{i theta}(lambda + i lambda')."""
    return _curve_from(branch)


def branch_derivative(A, branch: EigenBranch) -> np.ndarray:
    """Recompute the Hellmann-Feynman derivative samples of a branch."""
    fam = RotatedFamily(A)
    X = branch.vectors
    qK = np.einsum("ti,ij,tj->t", X.conj(), fam.K0, X).real
    qH = np.einsum("ti,ij,tj->t", X.conj(), fam.H0, X).real
    return np.cos(branch.thetas) * qK - np.sin(branch.thetas) * qH


def _realign_degenerate_clusters(vals: np.ndarray, vecs: np.ndarray,
                                 prev: np.ndarray, tol: float) -> np.ndarray:
    """Rotate eigenvector bases of near-degenerate clusters toward prev.

    Within a cluster of numerically equal eigenvalues the solver's basis is
    arbitrary; replace it with the closest orthonormal basis to the previous
    step's vectors so tracking follows the analytic branches.
    """
    n = vals.size
    out = vecs.copy()
    i = 0
    while i < n:
        j = i + 1
        while j < n and vals[j] - vals[j - 1] <= tol:
            j += 1
        if j - i >= 2:
            B = vecs[:, i:j]
            proj = B.conj().T @ prev                     # (m, n) overlaps
            weight = np.linalg.norm(proj, axis=0)
            sel = np.argsort(weight)[-(j - i):]
            M = B.conj().T @ prev[:, np.sort(sel)]
            U, _, Wt = np.linalg.svd(M)
            out[:, i:j] = B @ (U @ Wt)
        i = j
    return out


def _match_branches(prev: np.ndarray, new: np.ndarray) -> tuple[np.ndarray, float]:
    """Permutation assigning new eigenvector columns to previous branches."""
    overlap = np.abs(prev.conj().T @ new)
    n = overlap.shape[0]
    perm = np.full(n, -1, dtype=int)
    work = overlap.copy()
    for _ in range(n):
        i, j = np.unravel_index(np.argmax(work), work.shape)
        perm[i] = j
        work[i, :] = -1.0
        work[:, j] = -1.0
    matched = overlap[np.arange(n), perm]
    if matched.min() < _MATCH_OVERLAP_MIN:
        rows, cols = linear_sum_assignment(-(overlap ** 2))
        perm = cols[np.argsort(rows)]
        matched = overlap[np.arange(n), perm]
    return perm, float(matched.min())


def track_branches(A, grid_size: int | None = None,
                   tol: ToleranceConfig | None = None) -> list[EigenBranch]:
    """Track the eigenvalue branches of Re(e^{-i theta} A) over [0, 2 pi].

    Branches are matched between adjacent grid samples by maximal
    eigenvector overlap (optimal assignment as fallback), so they follow
    the analytic continuation through crossings rather than the sorted
    eigenvalue order.  Raises GridTooCoarseError when the adjacent-sample
    jump invariant fails; callers refine the grid and retry.
    """
    tol = tol or default_config()
    N = int(grid_size or tol.grid_size)
    if N < 256:
        raise GridTooCoarseError("grid_size must be at least 256")
    fam = RotatedFamily(A)
    n = fam.n
    thetas = np.linspace(0.0, 2 * np.pi, N + 1)
    vals_all, vecs_all = fam.eig_stack(thetas)

    cluster_tol = 1e-12 * max(fam.scale, 1.0)
    values = np.empty((N + 1, n))
    vectors = np.empty((N + 1, n, n), dtype=complex)
    values[0] = vals_all[0]
    vectors[0] = vecs_all[0]
    worst_jump = 0.0
    for t in range(1, N + 1):
        prev = vectors[t - 1]
        vecs = _realign_degenerate_clusters(vals_all[t], vecs_all[t], prev, cluster_tol)
        perm, _ = _match_branches(prev, vecs)
        v = vecs[:, perm]
        lam = vals_all[t][perm]
        c = np.einsum("ij,ij->j", prev.conj(), v)
        phase = np.where(np.abs(c) > 1e-14, c.conj() / np.maximum(np.abs(c), 1e-300), 1.0)
        v = v * phase[None, :]
        jump = np.linalg.norm(v - prev, axis=0).max()
        worst_jump = max(worst_jump, jump)
        values[t] = lam
        vectors[t] = v
    if worst_jump > _ADJACENT_JUMP_MAX:
        raise GridTooCoarseError(
            f"branch tracking jump {worst_jump:.3g} exceeds {_ADJACENT_JUMP_MAX}")

    start, end = np.sort(values[0]), np.sort(values[N])
    if np.max(np.abs(start - end)) > 1e-8 * max(fam.scale, 1.0):
        raise GridTooCoarseError("branch multiset not 2 pi consistent")

    c, s = np.cos(thetas), np.sin(thetas)
    branches = []
    for b in range(n):
        X = vectors[:, :, b]
        qK = np.einsum("ti,ij,tj->t", X.conj(), fam.K0, X).real
        qH = np.einsum("ti,ij,tj->t", X.conj(), fam.H0, X).real
        branches.append(EigenBranch(
            branch_id=b,
            thetas=thetas,
            values=values[:, b],
            vectors=X,
            derivatives=c * qK - s * qH,
        ))
    return branches


def _golden_min(f, a: float, b: float, xtol: float) -> float:
    """Golden-section minimizer; f assumed unimodal on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    return (a + b) / 2.0


def _pair_values_at(fam: RotatedFamily, theta: float,
                    ref_a: np.ndarray, ref_b: np.ndarray) -> tuple[float, float]:
    """Eigenvalues at theta belonging to the branches holding ref vectors."""
    vals, vecs = fam.eig_at(theta)
    ov_a = np.abs(ref_a.conj() @ vecs)
    ov_b = np.abs(ref_b.conj() @ vecs)
    ia = int(np.argmax(ov_a))
    ib = int(np.argmax(ov_b))
    if ib == ia:
        ib = int(np.argmax(np.where(np.arange(vals.size) == ia, -1.0, ov_b)))
    return float(vals[ia]), float(vals[ib])


def _crossing_details(fam: RotatedFamily, theta0: float, pair: tuple[int, int],
                      branches: list[EigenBranch], tolc: ToleranceConfig):
    """Refined data at a crossing: value, derivatives, vectors, involves_max.

    The two matched eigenvectors may be arbitrarily mixed inside a
    degenerate cluster, so the limit branch vectors are recovered as the
    extreme eigenvectors of Im(e^{-i theta0} A) compressed onto their span.
    """
    a, b = pair
    thetas = branches[a].thetas
    i_near = int(np.argmin(np.abs(thetas - theta0)))
    i_ref = max(0, min(i_near - _SPLIT_WINDOW_IN, thetas.size - 1))
    ref_a = branches[a].vectors[i_ref]
    ref_b = branches[b].vectors[i_ref]

    vals, vecs = fam.eig_at(theta0)
    ov_a = np.abs(ref_a.conj() @ vecs)
    ov_b = np.abs(ref_b.conj() @ vecs)
    ia = int(np.argmax(ov_a))
    ib = int(np.argmax(ov_b))
    if ib == ia:
        ib = int(np.argmax(np.where(np.arange(vals.size) == ia, -1.0, ov_b)))
    value = float((vals[ia] + vals[ib]) / 2.0)
    involves_max = value >= vals.max() - tolc.crossing_tol * fam.scale

    B = np.stack([vecs[:, ia], vecs[:, ib]], axis=1)
    Kc = B.conj().T @ fam.derivative_at(theta0) @ B
    kvals, kvecs = np.linalg.eigh((Kc + Kc.conj().T) / 2.0)
    x_lo = B @ kvecs[:, 0]
    x_hi = B @ kvecs[:, 1]
    # Assign extremes to branches by continuity with the reference vectors.
    if abs(ref_a.conj() @ x_lo) >= abs(ref_a.conj() @ x_hi):
        x_a, k_a, x_b, k_b = x_lo, kvals[0], x_hi, kvals[1]
    else:
        x_a, k_a, x_b, k_b = x_hi, kvals[1], x_lo, kvals[0]
    rot = np.exp(1j * theta0)
    z_a = rot * (value + 1j * k_a)
    z_b = rot * (value + 1j * k_b)
    z_mid = rot * (value + 1j * (k_a + k_b) / 2.0)
    return value, z_mid, (z_a, z_b), (x_a, x_b), (float(k_a), float(k_b)), involves_max


def estimate_split_degree(branches: list[EigenBranch], pair: tuple[int, int],
                          theta0: float, scale: float,
                          tol: ToleranceConfig | None = None
                          ) -> tuple[float, bool, float, float]:
    """Estimate the branch split degree at theta0 from a log-log gap fit.

    Returns (degree, resolved, slope, residual).  Degree is math.inf when
    the gap stays below the identical-branch tolerance across the window.
    Rounded degrees above 6 are returned with resolved False.  Raises
    UnresolvedSplitDegreeError when the rounding residual is 0.25 or more.
    """
    tol = tol or default_config()
    a, b = pair
    thetas = branches[a].thetas
    step = thetas[1] - thetas[0]
    # Circular distance from theta0; endpoint sample dropped to avoid doubling.
    d = np.abs((thetas[:-1] - theta0 + np.pi) % (2 * np.pi) - np.pi)
    window = (d >= _SPLIT_WINDOW_IN * step) & (d <= _SPLIT_WINDOW_OUT * step)
    gap = np.abs(branches[a].values[:-1] - branches[b].values[:-1])[window]
    dist = d[window]
    if gap.size < 4:
        raise UnresolvedSplitDegreeError("split-degree window has too few samples")
    if np.all(gap <= tol.identical_tol * scale):
        return math.inf, True, math.inf, 0.0
    keep = gap > 1e-14 * scale
    if keep.sum() < 4:
        raise UnresolvedSplitDegreeError("split-degree window is noise dominated")
    slope, _ = np.polyfit(np.log(dist[keep]), np.log(gap[keep]), 1)
    degree = int(round(slope))
    residual = abs(slope - degree)
    if residual >= _SPLIT_RESIDUAL_MAX or degree < 1:
        raise UnresolvedSplitDegreeError(
            f"split-degree fit ambiguous: slope {slope:.3f} at theta0 {theta0:.6f}")
    if degree > _SPLIT_DEGREE_MAX:
        return float(degree), False, float(slope), float(residual)
    return float(degree), True, float(slope), float(residual)


def find_exceptional_arguments(A, branches: list[EigenBranch],
                               tol: ToleranceConfig | None = None
                               ) -> list[ExceptionalArgument]:
    """Locate isolated branch crossings and estimate their split degrees.

    Candidate crossings are local minima of the sampled gap; each is
    refined by golden-section minimization of the true gap, and kept when
    the minimized gap falls below the crossing tolerance.  Identical
    branch pairs (gap below the identical tolerance everywhere) produce no
    isolated crossings.
    """
    tol = tol or default_config()
    fam = RotatedFamily(A)
    n = len(branches)
    thetas = branches[0].thetas
    step = thetas[1] - thetas[0]
    out: list[ExceptionalArgument] = []
    for a in range(n):
        for b in range(a + 1, n):
            diff = branches[a].values - branches[b].values
            gap = np.abs(diff)
            if gap.max() <= tol.crossing_tol * fam.scale:
                continue  # identical or near-identical pair, no isolated crossing
            interior = np.arange(1, thetas.size - 1)
            is_min = (gap[interior] <= gap[interior - 1]) & (gap[interior] <= gap[interior + 1])
            coarse_slope = np.maximum(np.abs(np.diff(gap)).max(), 1e-30)
            candidates = interior[is_min & (gap[interior] <= 4.0 * coarse_slope)]
            sign_flip = np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]
            cand = np.unique(np.concatenate([candidates, sign_flip, sign_flip + 1]))
            found: list[float] = []
            for i in cand:
                lo = thetas[max(i - 1, 0)]
                hi = thetas[min(i + 1, thetas.size - 1)]
                i_ref = max(i - _SPLIT_WINDOW_IN, 0)
                ref_a = branches[a].vectors[i_ref]
                ref_b = branches[b].vectors[i_ref]

                def pair_gap(th: float) -> float:
                    va, vb = _pair_values_at(fam, th, ref_a, ref_b)
                    return abs(va - vb)

                theta0 = _golden_min(pair_gap, lo, hi, _THETA_REFINE_TOL)
                if pair_gap(theta0) > tol.crossing_tol * fam.scale:
                    continue
                theta0 = float(theta0 % (2 * np.pi))
                circ = [abs((theta0 - t + np.pi) % (2 * np.pi) - np.pi) for t in found]
                if any(d < 4 * step for d in circ):
                    continue
                found.append(theta0)
                value, z_mid, z_pair, x_pair, k_pair, involves_max = _crossing_details(
                    fam, theta0, (a, b), branches, tol)
                degree, resolved, slope, residual = estimate_split_degree(
                    branches, (a, b), theta0, fam.scale, tol)
                out.append(ExceptionalArgument(
                    theta0=theta0, branch_pair=(a, b), value=value, z=z_mid,
                    z_pair=z_pair, x_pair=x_pair, derivative_pair=k_pair,
                    involves_max=involves_max, split_degree=degree,
                    degree_resolved=resolved, fit_slope=slope, fit_residual=residual))
    out.sort(key=lambda e: e.theta0)
    return out


def _degenerate_kind(fam: RotatedFamily, thetas: np.ndarray,
                     support: np.ndarray) -> str:
    N = support.size - 1
    half = N // 2
    width = support[:half] + support[half:2 * half]
    scale = fam.scale
    if width.max() <= 1e-8 * scale:
        return POINT
    step = thetas[1] - thetas[0]
    # A zero-width direction between grid samples still shows a sampled
    # width of at most diameter * sin(step / 2); anything larger is
    # genuinely two-dimensional.
    if width.min() > 4.0 * max(scale, 1.0) * step:
        return FULL_DIMENSIONAL

    # The grid can miss a width minimum whose normal direction falls
    # between samples, so refine before judging segment degeneracy.
    def w(th: float) -> float:
        a = np.linalg.eigvalsh(fam.hermitian_at(th % (2 * np.pi)))[-1]
        b = np.linalg.eigvalsh(fam.hermitian_at((th + np.pi) % (2 * np.pi)))[-1]
        return a + b

    i0 = int(np.argmin(width))
    step = thetas[1] - thetas[0]
    refined = _golden_min(w, thetas[i0] - step, thetas[i0] + step, 1e-12)
    if w(refined) <= 1e-8 * scale:
        return SEGMENT
    return FULL_DIMENSIONAL


def _build_flat(fam: RotatedFamily, theta0: float, tolc: ToleranceConfig) -> FlatArc | None:
    """Flat portion at a degree-1 maximal crossing.

    Endpoints are the extreme eigenvectors of Im(e^{-i theta0} A)
    compressed onto the full maximal eigenspace, which handles crossings
    of multiplicity two or higher uniformly.  Returns None when the
    endpoints coincide (spurious near-crossing).
    """
    vals, vecs = fam.eig_at(theta0)
    cluster = vals >= vals.max() - tolc.crossing_tol * fam.scale
    if cluster.sum() < 2:
        cluster = vals >= vals.max() - 10 * tolc.crossing_tol * fam.scale
    if cluster.sum() < 2:
        return None
    B = vecs[:, cluster]
    Kc = B.conj().T @ fam.derivative_at(theta0) @ B
    kvals, kvecs = np.linalg.eigh((Kc + Kc.conj().T) / 2.0)
    x_minus = B @ kvecs[:, 0]
    x_plus = B @ kvecs[:, -1]
    lam = float(vals[cluster].mean())
    rot = np.exp(1j * theta0)
    z_minus = rot * (lam + 1j * kvals[0])
    z_plus = rot * (lam + 1j * kvals[-1])
    if abs(z_plus - z_minus) <= 1e-7 * fam.scale:
        return None
    return FlatArc(theta=float(theta0), z_minus=complex(z_minus), z_plus=complex(z_plus),
                   x_minus=x_minus, x_plus=x_plus)


def build_boundary_atlas(A, tol: ToleranceConfig | None = None) -> BoundaryAtlas:
    """Build the boundary atlas, refining the grid on tracking failures.

    The grid doubles (up to four times) when branch tracking breaks its
    adjacent-sample invariant or a split-degree fit stays ambiguous.
    """
    tol = tol or default_config()
    A = as_square_matrix(A)
    grid = tol.grid_size
    last_exc: Exception | None = None
    for _ in range(_MAX_REFINEMENTS + 1):
        try:
            return _build_atlas_once(A, tol.with_grid(grid))
        except (GridTooCoarseError, UnresolvedSplitDegreeError) as exc:
            last_exc = exc
            grid *= 2
    raise last_exc  # type: ignore[misc]


def _build_atlas_once(A: np.ndarray, tol: ToleranceConfig) -> BoundaryAtlas:
    fam = RotatedFamily(A)
    branches = track_branches(A, tol.grid_size, tol)
    thetas = branches[0].thetas
    values = np.stack([b.values for b in branches], axis=1)
    support_values = values.max(axis=1)
    support_branch = values.argmax(axis=1)

    warnings: list[str] = []
    for a in range(len(branches)):
        for b in range(a + 1, len(branches)):
            gap = np.abs(branches[a].values - branches[b].values)
            if gap.max() <= tol.identical_tol * fam.scale:
                warnings.append(f"branches {a} and {b} are identical")
            elif gap.max() <= tol.crossing_tol * fam.scale:
                warnings.append(
                    f"branches {a} and {b} are near-identical (gap between "
                    "tolerances everywhere); treated as identical")

    kind = _degenerate_kind(fam, thetas, support_values)
    if kind != FULL_DIMENSIONAL:
        return BoundaryAtlas(
            matrix=A, thetas=thetas, branches=tuple(branches),
            support_values=support_values, support_branch=support_branch,
            arcs=(), exceptional=(), corners=(), degenerate_kind=kind,
            warnings=tuple(warnings), scale=fam.scale, config=tol)

    exceptional = find_exceptional_arguments(A, branches, tol)

    # Group maximal crossings by refined angle; one flat per group of
    # degree-1 crossings, one arc break per group with an odd degree.
    groups: list[list[ExceptionalArgument]] = []
    for e in exceptional:
        if not e.involves_max:
            continue
        if groups and abs(e.theta0 - groups[-1][-1].theta0) < 1e-8:
            groups[-1].append(e)
        else:
            groups.append([e])
    if len(groups) > 1 and (2 * np.pi - groups[-1][-1].theta0 + groups[0][0].theta0) < 1e-8:
        groups[0] = groups.pop() + groups[0]

    flats: dict[float, FlatArc] = {}
    breaks: list[float] = []
    for grp in groups:
        theta0 = float(np.mean([e.theta0 for e in grp]))
        degrees = [e.split_degree for e in grp if e.degree_resolved]
        has_flat = any(d == 1 for d in degrees)
        odd_split = any(d != math.inf and int(d) % 2 == 1 for d in degrees)
        if has_flat:
            flat = _build_flat(fam, theta0, tol)
            if flat is not None:
                flats[theta0] = flat
                breaks.append(theta0)
        elif odd_split:
            breaks.append(theta0)

    arcs: list[RoundArc | FlatArc] = []
    step = thetas[1] - thetas[0]
    if not breaks:
        bid = int(support_branch[0])
        arcs.append(_make_round(branches[bid], 0.0, 2 * np.pi, fam, tol))
    else:
        breaks = sorted(breaks)
        for i, th in enumerate(breaks):
            if th in flats:
                arcs.append(flats[th])
            nxt = breaks[(i + 1) % len(breaks)]
            hi = nxt if nxt > th else nxt + 2 * np.pi
            mid = (th + hi) / 2.0 % (2 * np.pi)
            bid = int(support_branch[int(round(mid / step)) % (thetas.size - 1)])
            arcs.append(_make_round(branches[bid], th, hi, fam, tol))

    corners = tuple(a.corner for a in arcs
                    if isinstance(a, RoundArc) and a.is_corner and a.corner is not None)

    return BoundaryAtlas(
        matrix=A, thetas=thetas, branches=tuple(branches),
        support_values=support_values, support_branch=support_branch,
        arcs=tuple(arcs), exceptional=tuple(exceptional), corners=corners,
        degenerate_kind=FULL_DIMENSIONAL, warnings=tuple(warnings),
        scale=fam.scale, config=tol)


def _make_round(branch: EigenBranch, lo: float, hi: float,
                fam: RotatedFamily, tol: ToleranceConfig) -> RoundArc:
    thetas = branch.thetas
    mask = (thetas >= lo - 1e-12) & (thetas <= hi + 1e-12)
    mask |= (thetas + 2 * np.pi >= lo - 1e-12) & (thetas + 2 * np.pi <= hi + 1e-12)
    z = _curve_from(branch)[mask]
    is_corner = False
    corner = None
    if z.size and np.abs(z - z.mean()).max() <= 1e-7 * fam.scale:
        is_corner = True
        corner = complex(z.mean())
    return RoundArc(branch_id=branch.branch_id, theta_start=float(lo),
                    theta_end=float(hi), is_corner=is_corner, corner=corner)


def _refine_support_argument(atlas: BoundaryAtlas, z: complex) -> float:
    """Maximize Re(e^{-i theta} z) - lambda_max(theta) over theta."""
    fam = RotatedFamily(atlas.matrix)
    zs = complex(z)

    def neg_slack(th: float) -> float:
        vals = np.linalg.eigvalsh(fam.hermitian_at(th))
        return -(math.cos(th) * zs.real + math.sin(th) * zs.imag - vals[-1])

    proj = zs.real * np.cos(atlas.thetas) + zs.imag * np.sin(atlas.thetas)
    slack = proj - atlas.support_values
    i = int(np.argmax(slack[:-1]))
    step = atlas.thetas[1] - atlas.thetas[0]
    lo, hi = atlas.thetas[i] - step, atlas.thetas[i] + step
    return _golden_min(neg_slack, lo, hi, 1e-12)


def classify_boundary_point(atlas: BoundaryAtlas, z: complex,
                            point_tol: float | None = None) -> str:
    """Label a boundary point: corner, flat interior or endpoint, or round.

    Membership is decided with the support function (refined near the
    query's support argument), so points between boundary samples are
    classified correctly.  Raises BoundaryPointError for points off the
    boundary.
    """
    z = complex(z)
    tol = point_tol if point_tol is not None else 1e-7 * atlas.scale
    theta_star = _refine_support_argument(atlas, z)
    fam = RotatedFamily(atlas.matrix)
    vals = np.linalg.eigvalsh(fam.hermitian_at(theta_star))
    slack = math.cos(theta_star) * z.real + math.sin(theta_star) * z.imag - vals[-1]
    if abs(slack) > max(tol, 1e-9 * atlas.scale):
        side = "outside" if slack > 0 else "inside"
        raise BoundaryPointError(f"point {z} is {side} the boundary (slack {slack:.3g})")
    for c in atlas.corners:
        if abs(z - c) <= max(tol, 1e-8 * atlas.scale):
            return CORNER
    for arc in atlas.flat_arcs():
        u = arc.z_plus - arc.z_minus
        L = abs(u)
        if L == 0:
            continue
        s = ((z - arc.z_minus) * np.conj(u)).real / (L * L)
        dist = abs(z - (arc.z_minus + s * u))
        if -tol / L <= s <= 1 + tol / L and dist <= max(tol, 1e-8 * atlas.scale):
            end_dist = min(abs(z - arc.z_minus), abs(z - arc.z_plus))
            if end_dist <= max(tol, 1e-8 * atlas.scale):
                return FLAT_ENDPOINT
            return FLAT_INTERIOR
    return FULLY_ROUND

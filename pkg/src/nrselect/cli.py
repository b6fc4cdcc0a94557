"""Command line front end: boundary export, classification, selection grids.

Subcommands share a matrix-file format, a seed convention (--seed beats the
NRSEL_SEED environment variable beats 42), and deterministic output: floats
are printed with 17 significant digits and JSON keys are sorted, so a rerun
with the same inputs reproduces files byte for byte.

Exit codes: 0 success, 2 bad input, 3 unresolved analysis, 4 excision radius
required but missing, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from .boundary import (
    FULL_DIMENSIONAL,
    POINT,
    SEGMENT,
    FlatArc,
    RoundArc,
    build_boundary_atlas,
)
from .config import ToleranceConfig, default_config, default_seed
from .continuity import classify_continuity
from .core import spectral_scale
from .errors import (
    BoundaryPointError,
    ExcisionRequiredError,
    GridTooCoarseError,
    InputError,
    NRSelectError,
    UnresolvedSplitDegreeError,
    VerificationError,
)
from .oracle import continuity_audit, openness_probe
from .selection import build_selection

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNRESOLVED = 3
EXIT_EXCISION = 4
EXIT_VERIFY = 5

_NORM_TOL = 1e-8


def _jump_limit(h: float, span: float) -> float:
    """Adjacent-cell jump bound for re-checking an emitted grid.

    Continuous selections have sqrt-type seams, so the honest worst jump
    between cells h apart shrinks like sqrt(h / diameter); a corrupted
    or discontinuous file jumps by an order-one amount regardless of h
    (about 2 for a sign flip between unit vectors).
    """
    if span <= 0 or h <= 0:
        return 0.75
    return max(0.75, 6.0 * math.sqrt(h / span))


def _f(x) -> str:
    """Fixed float formatting for every emitted number."""
    return format(float(x), ".17g")


def _clean(obj):
    """Make a structure JSON-safe without losing precision.

    Floats are round-tripped through the 17-digit format (a no-op in value,
    it just pins the printed form), numpy scalars become Python scalars,
    and non-finite values become strings since strict JSON lacks them.
    """
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(_f(x))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    return obj


def _dump_json(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False)


def _write_json(doc, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dump_json(doc))
        fh.write("\n")


def load_matrix(path: str) -> tuple[np.ndarray, str]:
    """Read a matrix file: {"n": n, "entries": [[re, im], ...] row-major}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputError("matrix file must hold a JSON object")
    n = raw.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("matrix field 'n' must be a positive integer")
    entries = raw.get("entries")
    if not isinstance(entries, list) or len(entries) != n * n:
        raise InputError(
            f"matrix field 'entries' must list {n * n} [re, im] pairs row-major")
    flat = np.empty(n * n, dtype=complex)
    for k, item in enumerate(entries):
        ok = (isinstance(item, (list, tuple)) and len(item) == 2
              and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                      for v in item))
        if not ok:
            raise InputError(f"entry {k} must be a [re, im] pair of numbers")
        if not (math.isfinite(item[0]) and math.isfinite(item[1])):
            raise InputError(f"entry {k} is not finite")
        flat[k] = complex(item[0], item[1])
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("matrix field 'name' must be a string")
    return flat.reshape(n, n), (name or os.path.basename(path))


def save_matrix(A, path: str, name: str | None = None) -> None:
    """Write a matrix file in the format load_matrix reads."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"matrix must be square, got shape {A.shape}")
    doc = {
        "n": int(A.shape[0]),
        "entries": [[float(v.real), float(v.imag)] for v in A.ravel()],
    }
    if name:
        doc["name"] = name
    _write_json(doc, path)


def _config_from(args) -> ToleranceConfig:
    cfg = default_config()
    kw = {}
    grid = getattr(args, "theta_grid", None)
    if grid is not None:
        kw["grid_size"] = grid
    for attr, fieldname in (("tol_eig_residual", "eig_residual"),
                            ("tol_crossing", "crossing_tol"),
                            ("tol_identical", "identical_tol"),
                            ("tol_selection_residual", "selection_residual"),
                            ("tol_path_zero", "path_zero")):
        v = getattr(args, attr, None)
        if v is not None:
            kw[fieldname] = v
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    try:
        return replace(cfg, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _out_prefix(args, suffix: str) -> str:
    if args.out:
        return args.out
    stem = os.path.splitext(args.matrix)[0]
    return f"{stem}.{suffix}"


def _arc_kind(arc) -> str:
    if isinstance(arc, FlatArc):
        return "flat"
    return "corner" if arc.is_corner else "round"


def _degree_json(d: float):
    return "inf" if math.isinf(d) else float(d)


def _atlas_doc(atlas, name: str) -> dict:
    arcs = []
    for arc in atlas.arcs:
        if isinstance(arc, FlatArc):
            arcs.append({
                "kind": "flat",
                "theta": arc.theta,
                "z_minus": arc.z_minus,
                "z_plus": arc.z_plus,
                "length": arc.length(),
            })
        else:
            rec = {
                "kind": _arc_kind(arc),
                "branch_id": arc.branch_id,
                "theta_start": arc.theta_start,
                "theta_end": arc.theta_end,
            }
            if arc.is_corner:
                rec["corner"] = arc.corner
            arcs.append(rec)
    return {
        "name": name,
        "n": int(atlas.matrix.shape[0]),
        "degenerate_kind": atlas.degenerate_kind,
        "scale": atlas.scale,
        "diameter": atlas.diameter(),
        "theta_samples": int(atlas.thetas.size),
        "arcs": arcs,
        "corners": list(atlas.corners),
        "exceptional": [{
            "theta0": e.theta0,
            "z": e.z,
            "split_degree": _degree_json(e.split_degree),
            "degree_resolved": e.degree_resolved,
            "involves_max": e.involves_max,
        } for e in atlas.exceptional],
        "warnings": list(atlas.warnings),
    }


def cmd_boundary(args) -> int:
    A, name = load_matrix(args.matrix)
    cfg = _config_from(args)
    atlas = build_boundary_atlas(A, cfg)
    prefix = _out_prefix(args, "boundary")
    csv_path, json_path = prefix + ".csv", prefix + ".json"

    thetas, points, ids = atlas.boundary_polyline()
    kinds = [_arc_kind(a) for a in atlas.arcs]
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta", "re", "im", "arc_id", "arc_kind"])
        for t, z, i in zip(thetas, points, ids):
            w.writerow([_f(t), _f(z.real), _f(z.imag), int(i), kinds[int(i)]])
    _write_json(_atlas_doc(atlas, name), json_path)
    print(f"{name}: kind={atlas.degenerate_kind} arcs={len(atlas.arcs)} "
          f"corners={len(atlas.corners)} exceptional={len(atlas.exceptional)}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _report_doc(report, name: str, n: int) -> dict:
    return {
        "name": name,
        "n": n,
        "degenerate_kind": report.degenerate_kind,
        "strongly_continuous": report.strongly_continuous,
        "weakly_continuous": report.weakly_continuous,
        "strong_failures": list(report.strong_failures),
        "weak_failures": list(report.weak_failures),
        "records": [{
            "z": r.z,
            "theta0": r.theta0,
            "position": r.position,
            "split_degree": _degree_json(r.split_degree),
            "strong_ok": r.strong_ok,
            "weak_ok": r.weak_ok,
        } for r in report.records],
    }


def cmd_classify(args) -> int:
    A, name = load_matrix(args.matrix)
    cfg = _config_from(args)
    atlas = build_boundary_atlas(A, cfg)
    report = classify_continuity(atlas)
    doc = _report_doc(report, name, int(A.shape[0]))
    text = _dump_json(doc)
    print(text)
    if args.out:
        _write_json(doc, args.out)
    return EXIT_OK


def _query_points(fld, m: int) -> tuple[np.ndarray, int]:
    """In-domain query set for a selection field, plus the skipped count.

    A full-dimensional range gets an m-by-m grid over the bounding box,
    kept only where membership is certain (hull slack below the sampling
    margin) and outside any excised disk.  A segment gets m points along
    it and a point gets its single value.
    """
    atlas = fld.atlas
    if atlas.degenerate_kind == POINT:
        return np.array([fld.center]), 0
    if atlas.degenerate_kind == SEGMENT:
        s = np.linspace(0.0, 1.0, max(m, 2))
        return fld.z_lo + s * (fld.z_hi - fld.z_lo), 0
    _, points, _ = atlas.boundary_polyline()
    xs = np.linspace(points.real.min(), points.real.max(), m)
    ys = np.linspace(points.imag.min(), points.imag.max(), m)
    Z = (xs[None, :] + 1j * ys[:, None]).ravel()
    mask = atlas.contains(Z, margin=-atlas.inner_margin())
    for c, r in getattr(fld, "disks", []):
        mask &= np.abs(Z - c) > r * (1 + 1e-9)
    kept = Z[mask]
    return kept, int(Z.size - kept.size)


def _selection_rows(A, zs, Y):
    vals = np.einsum("ti,ij,tj->t", Y.conj(), A, Y)
    residuals = np.abs(vals - zs)
    norms = np.linalg.norm(Y, axis=1)
    return residuals, norms


def cmd_select(args) -> int:
    A, name = load_matrix(args.matrix)
    cfg = _config_from(args)
    if args.grid < 2:
        raise InputError("--grid must be at least 2")
    try:
        fld = build_selection(A, cfg, epsilon=args.epsilon)
    except ExcisionRequiredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("rerun with --epsilon RADIUS to excise disks around the "
              "failure points", file=sys.stderr)
        return EXIT_EXCISION

    zs, skipped = _query_points(fld, args.grid)
    Y = fld.select(zs)
    residuals, norms = _selection_rows(A, zs, Y)
    audit = continuity_audit(fld)

    prefix = _out_prefix(args, "selection")
    csv_path, json_path = prefix + ".csv", prefix + ".json"
    n = int(A.shape[0])
    header = ["z_re", "z_im"]
    for j in range(n):
        header += [f"y{j}_re", f"y{j}_im"]
    header.append("residual")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k in range(zs.size):
            row = [_f(zs[k].real), _f(zs[k].imag)]
            for j in range(n):
                row += [_f(Y[k, j].real), _f(Y[k, j].imag)]
            row.append(_f(residuals[k]))
            w.writerow(row)

    summary = {
        "name": name,
        "n": n,
        "strategy": fld.strategy,
        "degenerate_kind": fld.atlas.degenerate_kind,
        "epsilon": args.epsilon,
        "seed": cfg.seed,
        "theta_grid": cfg.grid_size,
        "query_grid": args.grid,
        "points_evaluated": int(zs.size),
        "points_skipped": skipped,
        "max_residual": float(residuals.max()) if zs.size else 0.0,
        "max_norm_deviation": float(np.abs(norms - 1.0).max()) if zs.size else 0.0,
        "scale": fld.atlas.scale,
        "excised_disks": [[c.real, c.imag, r]
                          for c, r in getattr(fld, "disks", [])],
        "audit": {
            "h": audit.h,
            "max_jump_coarse": audit.max_jump_coarse,
            "max_jump_fine": audit.max_jump_fine,
            "ratio": audit.ratio,
            "residual_max": audit.residual_max,
            "norm_dev_max": audit.norm_dev_max,
            "pairs_coarse": audit.pairs_coarse,
            "pairs_fine": audit.pairs_fine,
            "passed": audit.passed,
        },
        "csv": os.path.basename(csv_path),
    }
    _write_json(summary, json_path)
    print(f"{name}: strategy={fld.strategy} evaluated={zs.size} "
          f"skipped={skipped} max_residual={residuals.max() if zs.size else 0:.3g} "
          f"audit_ratio={audit.ratio:.3g}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _load_selection_rows(csv_path: str, n: int):
    try:
        with open(csv_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = list(reader)
    except OSError as exc:
        raise InputError(f"cannot read selection data {csv_path}: {exc}") from exc
    want = 2 + 2 * n + 1
    if header is None or len(header) != want:
        raise InputError(f"selection data must have {want} columns, "
                         f"got {0 if header is None else len(header)}")
    zs = np.empty(len(rows), dtype=complex)
    Y = np.empty((len(rows), n), dtype=complex)
    for k, row in enumerate(rows):
        if len(row) != want:
            raise InputError(f"selection row {k} has {len(row)} fields, wanted {want}")
        try:
            vals = [float(v) for v in row]
        except ValueError as exc:
            raise InputError(f"selection row {k} holds a non-number: {exc}") from exc
        zs[k] = complex(vals[0], vals[1])
        for j in range(n):
            Y[k, j] = complex(vals[2 + 2 * j], vals[3 + 2 * j])
    return zs, Y


def _grid_jumps(zs: np.ndarray, Y: np.ndarray,
                disks) -> tuple[float, complex, float, float]:
    """Largest jump between grid-adjacent emitted points.

    Pairs whose midpoint falls inside an excised disk are skipped, the
    same straddle rule the audit applies.  Returns the worst jump, its
    location, the inferred cell size, and the data span.
    """
    if zs.size < 2:
        return 0.0, 0j, 0.0, 0.0
    xs = np.unique(np.round(zs.real, 12))
    ys = np.unique(np.round(zs.imag, 12))
    span = math.hypot(xs.max() - xs.min(), ys.max() - ys.min())
    hx = np.diff(xs).min() if xs.size > 1 else np.inf
    hy = np.diff(ys).min() if ys.size > 1 else np.inf
    h = min(hx, hy)
    if not np.isfinite(h) or h <= 0:
        return 0.0, 0j, 0.0, span
    index = {(round(z.real / h), round(z.imag / h)): k for k, z in enumerate(zs)}
    worst, where = 0.0, 0j
    for (i, j), k in index.items():
        for nb in ((i + 1, j), (i, j + 1)):
            kk = index.get(nb)
            if kk is None:
                continue
            mid = 0.5 * (zs[k] + zs[kk])
            if any(abs(mid - complex(c[0], c[1])) <= c[2] * (1 + 1e-9)
                   for c in disks):
                continue
            d = float(np.linalg.norm(Y[k] - Y[kk]))
            if d > worst:
                worst, where = d, zs[k]
    return worst, where, float(h), span


def cmd_verify(args) -> int:
    A, name = load_matrix(args.matrix)
    cfg = _config_from(args)
    try:
        with open(args.selection, "r", encoding="utf-8") as fh:
            summary = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read selection summary {args.selection}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(
            f"selection summary {args.selection} is not valid JSON: {exc}") from exc
    if not isinstance(summary, dict) or "csv" not in summary or "n" not in summary:
        raise InputError("selection summary must record 'n' and 'csv'")
    n = int(A.shape[0])
    if summary["n"] != n:
        raise InputError(f"summary is for n={summary['n']}, matrix has n={n}")
    csv_path = os.path.join(os.path.dirname(os.path.abspath(args.selection)),
                            summary["csv"])
    zs, Y = _load_selection_rows(csv_path, n)

    scale = max(spectral_scale(A), 1.0)
    tol = cfg.selection_residual * scale
    failures = []

    residuals, norms = _selection_rows(A, zs, Y)
    if zs.size:
        k = int(np.argmax(residuals))
        if residuals[k] > tol:
            failures.append(f"residual {residuals[k]:.6g} at z = {zs[k]:.6g} "
                            f"exceeds {tol:.3g}")
        k = int(np.argmax(np.abs(norms - 1.0)))
        if abs(norms[k] - 1.0) > _NORM_TOL:
            failures.append(f"norm deviation {abs(norms[k] - 1.0):.6g} at "
                            f"z = {zs[k]:.6g} exceeds {_NORM_TOL:g}")
    if summary.get("degenerate_kind", FULL_DIMENSIONAL) == FULL_DIMENSIONAL:
        disks = summary.get("excised_disks", [])
        jump, where, h, span = _grid_jumps(zs, Y, disks)
        limit = _jump_limit(h, span)
        if jump > limit:
            failures.append(f"adjacent jump {jump:.6g} at z = {where:.6g} "
                            f"exceeds {limit:.3g}")

    epsilon = summary.get("epsilon")
    seed = summary.get("seed", cfg.seed)
    audit_doc = None
    try:
        fld = build_selection(A, replace(cfg, seed=int(seed)), epsilon=epsilon)
        audit = continuity_audit(fld)
        audit_doc = audit
        if not audit.passed:
            failures.append(f"independent audit failed: jump ratio {audit.ratio:.4g} "
                            f"on grid halving (limit 0.9)")
        if audit.residual_max > tol:
            failures.append(f"independent audit residual {audit.residual_max:.6g} "
                            f"exceeds {tol:.3g}")
    except NRSelectError as exc:
        failures.append(f"independent reconstruction failed: {exc}")

    if failures:
        print(f"{name}: verification FAILED", file=sys.stderr)
        for line in failures:
            print(f"  {line}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"{name}: verification ok ({zs.size} points, "
          f"max residual {residuals.max() if zs.size else 0:.3g}, "
          f"audit ratio {audit_doc.ratio:.3g})")
    return EXIT_OK


def _parse_point(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("--point expects RE,IM")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise InputError(f"--point expects two numbers: {exc}") from exc


def cmd_probe(args) -> int:
    A, name = load_matrix(args.matrix)
    cfg = _config_from(args)
    z = _parse_point(args.point)
    atlas = build_boundary_atlas(A, cfg)
    probe = openness_probe(A, z, atlas)
    doc = {
        "name": name,
        "z": probe.z,
        "verdict": probe.verdict,
        "witness_count": int(probe.witnesses.shape[0]) if probe.witnesses.size else 0,
        "witnesses": [[probe.witnesses[k, j] for j in range(probe.witnesses.shape[1])]
                      for k in range(probe.witnesses.shape[0])],
        "sequences": [{
            "label": s.label,
            "approaching": s.approaching,
            "residual_max": s.residual_max,
            "steps": int(s.zs.size),
            "points": list(s.zs),
            "distances": list(s.distances),
            "witness_finals": list(s.witness_finals),
        } for s in probe.sequences],
    }
    text = _dump_json(doc)
    print(text)
    if args.out:
        _write_json(doc, args.out)
    return EXIT_OK


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("matrix", help="matrix JSON file: "
                     '{"n": n, "entries": [[re, im], ...] row-major}')
    sub.add_argument("--seed", type=int, default=None,
                     help="base RNG seed; beats the NRSEL_SEED environment variable")
    sub.add_argument("--tol-eig-residual", dest="tol_eig_residual", type=float,
                     default=None, help="eigenpair residual bound")
    sub.add_argument("--tol-crossing", dest="tol_crossing", type=float,
                     default=None, help="branch-gap dip that counts as a crossing")
    sub.add_argument("--tol-identical", dest="tol_identical", type=float,
                     default=None, help="gap below which branches are identical")
    sub.add_argument("--tol-selection-residual", dest="tol_selection_residual",
                     type=float, default=None,
                     help="|f_A(g(z)) - z| bound relative to the matrix norm")
    sub.add_argument("--tol-path-zero", dest="tol_path_zero", type=float,
                     default=None, help="norm below which a path sample is zero")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nrselect",
        description="Numerical range boundaries, inverse-map continuity, "
                    "and continuous selections.")
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("boundary",
                        help="export the boundary curve and its atlas")
    _add_common(b)
    b.add_argument("--grid", dest="theta_grid", type=int, default=None,
                   help="support angles sampled over [0, 2pi)")
    b.add_argument("--out", default=None,
                   help="output prefix (writes PREFIX.csv and PREFIX.json)")
    b.set_defaults(func=cmd_boundary)

    c = subs.add_parser("classify",
                        help="report weak and strong continuity of the inverse map")
    _add_common(c)
    c.add_argument("--theta-grid", dest="theta_grid", type=int, default=None,
                   help="support angles sampled over [0, 2pi)")
    c.add_argument("--out", default=None, help="also write the report here")
    c.set_defaults(func=cmd_classify)

    s = subs.add_parser("select",
                        help="evaluate a continuous selection on a grid")
    _add_common(s)
    s.add_argument("--grid", type=int, default=50,
                   help="query grid is GRID x GRID over the bounding box")
    s.add_argument("--epsilon", type=float, default=None,
                   help="excision radius around weak-continuity failures")
    s.add_argument("--theta-grid", dest="theta_grid", type=int, default=None,
                   help="support angles sampled over [0, 2pi)")
    s.add_argument("--out", default=None,
                   help="output prefix (writes PREFIX.csv and PREFIX.json)")
    s.set_defaults(func=cmd_select)

    v = subs.add_parser("verify",
                        help="independently re-check an emitted selection")
    _add_common(v)
    v.add_argument("selection", help="summary JSON written by the select command")
    v.add_argument("--theta-grid", dest="theta_grid", type=int, default=None,
                   help="support angles sampled over [0, 2pi)")
    v.set_defaults(func=cmd_verify)

    p = subs.add_parser("probe",
                        help="probe weak continuity at one boundary point")
    _add_common(p)
    p.add_argument("--point", required=True, help="boundary point as RE,IM")
    p.add_argument("--theta-grid", dest="theta_grid", type=int, default=None,
                   help="support angles sampled over [0, 2pi)")
    p.add_argument("--out", default=None, help="also write the probe report here")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, BoundaryPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GridTooCoarseError, UnresolvedSplitDegreeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except ExcisionRequiredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXCISION
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except NRSelectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED


if __name__ == "__main__":
    sys.exit(main())

"""Weak and strong continuity of the inverse field-of-values map.

The multivalued inverse z -> {unit x : x^* A x = z} is examined at the
exceptional boundary points recorded in the atlas.  Strong continuity
fails wherever a finite-degree branch split meets the boundary outside
the relative interior of a flat portion; weak continuity fails only at
fully-round points with an odd split degree of three or more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary import (
    FLAT_INTERIOR,
    FULL_DIMENSIONAL,
    FULLY_ROUND,
    BoundaryAtlas,
    classify_boundary_point,
)
from .errors import UnresolvedSplitDegreeError

__all__ = [
    "ContinuityRecord",
    "ContinuityReport",
    "classify_continuity",
    "is_selection_obstructed",
]


@dataclass(frozen=True)
class ContinuityRecord:
    """Continuity verdict at one exceptional boundary point."""

    z: complex
    theta0: float
    branch_pair: tuple[int, int]
    split_degree: float
    position: str
    strong_ok: bool
    weak_ok: bool


@dataclass(frozen=True)
class ContinuityReport:
    """Continuity classification over the whole boundary."""

    records: tuple[ContinuityRecord, ...]
    strong_failures: tuple[complex, ...]
    weak_failures: tuple[complex, ...]
    degenerate_kind: str
    scale: float

    @property
    def strongly_continuous(self) -> bool:
        return not self.strong_failures

    @property
    def weakly_continuous(self) -> bool:
        return not self.weak_failures


def _verdict(position: str, degree: float) -> tuple[bool, bool]:
    strong_ok = position == FLAT_INTERIOR or degree == math.inf
    weak_ok = not (position == FULLY_ROUND and degree != math.inf
                   and degree >= 3 and int(degree) % 2 == 1)
    return strong_ok, weak_ok


def _dedupe(points: list[complex], scale: float) -> tuple[complex, ...]:
    kept: list[complex] = []
    for z in points:
        if all(abs(z - w) > 1e-8 * max(scale, 1.0) for w in kept):
            kept.append(z)
    return tuple(kept)


def classify_continuity(atlas: BoundaryAtlas) -> ContinuityReport:
    """Classify weak and strong continuity at every maximal crossing point.

    Degenerate ranges (segment or point) come from normal matrices whose
    inverse map is continuous everywhere, so they yield an empty record
    list.  Raises UnresolvedSplitDegreeError when a maximal crossing has
    an unresolved degree estimate.
    """
    if atlas.degenerate_kind != FULL_DIMENSIONAL:
        return ContinuityReport(records=(), strong_failures=(), weak_failures=(),
                                degenerate_kind=atlas.degenerate_kind,
                                scale=atlas.scale)
    records: list[ContinuityRecord] = []
    strong_bad: list[complex] = []
    weak_bad: list[complex] = []
    for e in atlas.exceptional:
        if not e.involves_max:
            continue
        if not e.degree_resolved:
            raise UnresolvedSplitDegreeError(
                f"split degree at theta0 {e.theta0:.6f} reported >= 7, unresolved")
        if e.split_degree == 1:
            points = list(e.z_pair)  # the two flat endpoints are distinct
        else:
            points = [e.z]
        for z in points:
            position = classify_boundary_point(atlas, z)
            strong_ok, weak_ok = _verdict(position, e.split_degree)
            records.append(ContinuityRecord(
                z=complex(z), theta0=e.theta0, branch_pair=e.branch_pair,
                split_degree=e.split_degree, position=position,
                strong_ok=strong_ok, weak_ok=weak_ok))
            if not strong_ok:
                strong_bad.append(complex(z))
            if not weak_ok:
                weak_bad.append(complex(z))
    return ContinuityReport(
        records=tuple(records),
        strong_failures=_dedupe(strong_bad, atlas.scale),
        weak_failures=_dedupe(weak_bad, atlas.scale),
        degenerate_kind=atlas.degenerate_kind,
        scale=atlas.scale)


def is_selection_obstructed(report: ContinuityReport, region=None) -> bool:
    """True when a weak-continuity failure blocks a continuous selection.

    With region None the whole closure of F(A) is meant.  Otherwise
    region is an iterable of (center, radius) disks; only failures inside
    some disk obstruct.
    """
    if not report.weak_failures:
        return False
    if region is None:
        return True
    disks = [(complex(c), float(r)) for c, r in region]
    return any(abs(z - c) <= r for z in report.weak_failures for c, r in disks)

"""Continuous selection construction: chords, boundary paths, fields."""

from .chords import (
    elliptic_chord,
    elliptic_chord_selection,
    normal_chord,
    normal_chord_selection,
)
from .field import (
    CornerField,
    ExcisedField,
    NoCornerField,
    PointField,
    SegmentField,
    SelectionField,
    build_selection,
    radial_decompose,
    select,
    select_corner,
    select_excised,
    select_no_corner,
)
from .paths import (
    ArcPiece,
    BoundaryPath,
    BridgePiece,
    anchored_projection_path,
    canonical_boundary_path,
    flat_bridge,
    open_boundary_path,
    sign_continuation,
    spectral_projection_path,
)

__all__ = [
    "elliptic_chord",
    "elliptic_chord_selection",
    "normal_chord",
    "normal_chord_selection",
    "ArcPiece",
    "BridgePiece",
    "BoundaryPath",
    "sign_continuation",
    "spectral_projection_path",
    "anchored_projection_path",
    "flat_bridge",
    "canonical_boundary_path",
    "open_boundary_path",
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

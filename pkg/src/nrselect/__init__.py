"""Numerical range boundary analysis and inverse-map selections."""

from .config import ToleranceConfig, default_config, default_seed
from .core import fov_eval, as_square_matrix, as_unit_vector, spectral_scale
from .boundary import (
    BoundaryAtlas,
    EigenBranch,
    ExceptionalArgument,
    FlatArc,
    RoundArc,
    build_boundary_atlas,
    classify_boundary_point,
    critical_curve,
    track_branches,
)
from .continuity import (
    ContinuityRecord,
    ContinuityReport,
    classify_continuity,
)
from .selection import (
    SelectionField,
    build_selection,
    elliptic_chord,
    normal_chord,
    select,
    select_corner,
    select_excised,
    select_no_corner,
)
from .oracle import (
    AuditReport,
    OpennessProbe,
    PreimageResult,
    bloch_map,
    continuity_audit,
    enumerate_preimage_fiber,
    openness_probe,
    phase_distance,
    preimage_search,
)
from .estimator import ContinuityClassifier, SelectionTransformer
from .errors import (
    ExcisionRequiredError,
    GridTooCoarseError,
    InputError,
    NRSelectError,
    OutsideDomainError,
    UnresolvedSplitDegreeError,
)

__version__ = "0.1.0"

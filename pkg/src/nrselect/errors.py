"""Exception types with CLI exit-code mapping."""

from __future__ import annotations


class NRSelectError(Exception):
    """Base class for package errors."""


class InputError(NRSelectError):
    """Malformed input: bad matrix data, shape mismatch, invalid options."""


class NonHermitianError(InputError):
    """Matrix handed to a Hermitian-only routine is not Hermitian."""


class RankDeficientSpanError(InputError):
    """Compression span is numerically rank deficient."""


class EigensolverError(NRSelectError):
    """Dense eigensolver failed to converge."""


class GridTooCoarseError(NRSelectError):
    """Branch tracking invariant still violated after refinement retries."""


class UnresolvedSplitDegreeError(NRSelectError):
    """Split degree estimation stayed ambiguous after grid refinement."""


class BoundaryPointError(NRSelectError):
    """Query point is not on the sampled boundary within tolerance."""


class OutsideDomainError(NRSelectError):
    """Query point lies outside the selection's domain."""


class ExcisionRequiredError(NRSelectError):
    """Weak continuity failures exist and no excision radius was given."""


class PathAnchorError(NRSelectError):
    """No usable anchor for a projection path (all redraws degenerate)."""


class SelectionConstructionError(NRSelectError):
    """A selection strategy's structural precondition failed."""


class VerificationError(NRSelectError):
    """Independent re-check of an emitted selection failed."""

"""Shared tolerance and grid configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

_SEED_ENV_VAR = "NRSEL_SEED"


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances and discretization knobs used across the package.

    Relative tolerances (crossing, identical, selection residual) are scaled
    by the spectral norm of the matrix at the point of use.
    """

    eig_residual: float = 1e-10         # eigenpair residual, absolute
    crossing_tol: float = 1e-7          # branch-gap dip that counts as a crossing
    identical_tol: float = 1e-9         # gap below which branches are identical
    selection_residual: float = 1e-7    # |f_A(g(z)) - z| bound for selections
    path_zero: float = 1e-8             # norm below which a path anchor sample is zero
    grid_size: int = 2048               # theta samples over [0, 2*pi)
    seed: int = 42                      # base seed for every stochastic choice

    def __post_init__(self) -> None:
        if self.grid_size < 256:
            raise ValueError("grid_size must be at least 256")
        for name in ("eig_residual", "crossing_tol", "identical_tol",
                     "selection_residual", "path_zero"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.crossing_tol <= self.identical_tol:
            raise ValueError("crossing_tol must exceed identical_tol")

    def with_grid(self, grid_size: int) -> "ToleranceConfig":
        return replace(self, grid_size=grid_size)


def default_seed() -> int:
    """Base seed: the NRSEL_SEED environment variable when set, else 42."""
    raw = os.environ.get(_SEED_ENV_VAR)
    if raw is None:
        return ToleranceConfig.seed
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{_SEED_ENV_VAR} must be an integer, got {raw!r}") from exc


def default_config() -> ToleranceConfig:
    """Config with defaults, honoring the seed environment variable."""
    return ToleranceConfig(seed=default_seed())

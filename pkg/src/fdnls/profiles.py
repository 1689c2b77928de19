"""Initial data: radial profile families and plane-wave modes.

Localized profiles are radially symmetric about the box center, which is
what the global-existence theory assumes of the data.  A truncation check
rejects profiles so wide that a non-negligible part of their mass falls
outside the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Field
from .grid import Grid

PROFILE_KINDS = ("gaussian", "super-gaussian", "single-mode", "ring")


class TruncationError(ValueError):
    """Profile mass outside the box exceeds the configured tolerance."""


@dataclass(frozen=True)
class InitialProfile:
    kind: str
    amplitude: complex = 1.0 + 0.0j
    width: float = 1.0
    power: float = 2.0            # super-gaussian shape exponent
    mode: tuple[int, ...] = (1,)  # single-mode lattice index
    radius: float = 4.0           # ring radius (d = 2 only)
    truncation_tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        mode = self.mode if isinstance(self.mode, tuple) else tuple(self.mode)
        object.__setattr__(self, "mode", mode)
        if self.kind != "single-mode":
            if not np.isfinite(self.width) or self.width <= 0.0:
                raise ValueError(f"profile width must be positive, got {self.width}")
            if self.kind == "super-gaussian" and self.power <= 0.0:
                raise ValueError(f"super-gaussian power must be positive, got {self.power}")


def _radial_envelope(profile: InitialProfile, r: np.ndarray) -> np.ndarray:
    w = profile.width
    if profile.kind == "gaussian":
        return np.exp(-(r**2) / (2.0 * w**2))
    if profile.kind == "super-gaussian":
        return np.exp(-((r**2) / (2.0 * w**2)) ** profile.power)
    if profile.kind == "ring":
        return np.exp(-((r - profile.radius) ** 2) / (2.0 * w**2))
    raise ValueError(f"not a radial profile: {profile.kind}")


def sample_profile(profile: InitialProfile, grid: Grid) -> Field:
    """Sample the profile at the grid nodes.

    Radial kinds come out exactly symmetric under index reflection through
    the center because the coordinate axis negates exactly.  Localized
    kinds raise TruncationError when the relative mass falling outside the
    box (estimated on a 3x-extended grid at the same spacing) exceeds
    profile.truncation_tol.
    """
    if profile.kind == "single-mode":
        mode = profile.mode
        if len(mode) != grid.d:
            raise ValueError(
                f"mode index {mode} has {len(mode)} components; grid is {grid.d}-dimensional"
            )
        half = grid.n_per_dim // 2
        for k in mode:
            if not -half <= k < half:
                raise ValueError(f"mode index {k} outside the lattice [-{half}, {half})")
        coords = grid.coords()
        phase = sum((2.0 * np.pi / grid.box_length) * k * x for k, x in zip(mode, coords))
        return Field(grid, profile.amplitude * np.exp(1j * phase))

    if profile.kind == "ring" and grid.d != 2:
        raise ValueError("ring profiles are defined for d = 2 only")

    if np.isfinite(profile.truncation_tol):
        _check_truncation(profile, grid)
    envelope = _radial_envelope(profile, grid.radius())
    return Field(grid, profile.amplitude * envelope)


def _check_truncation(profile: InitialProfile, grid: Grid) -> None:
    if profile.amplitude == 0:
        return
    # evaluate |profile|^2 on a 3L-wide axis at the grid spacing
    axis = np.concatenate(
        [grid.x_axis - grid.box_length, grid.x_axis, grid.x_axis + grid.box_length]
    )
    mesh = np.meshgrid(*([axis] * grid.d), indexing="ij")
    r = np.sqrt(sum(x**2 for x in mesh))
    density = np.abs(_radial_envelope(profile, r)) ** 2
    total = density.sum()
    n = grid.n_per_dim
    inner = density[(slice(n, 2 * n),) * grid.d].sum()
    if total <= 0.0:
        return
    outside = 1.0 - inner / total
    if outside > profile.truncation_tol:
        raise TruncationError(
            f"profile mass outside the box is {outside:.3e} of the total "
            f"(tolerance {profile.truncation_tol:.3e}); enlarge the box or narrow the profile"
        )


def random_radial_field(
    grid: Grid,
    rng: np.random.Generator,
    max_components: int = 3,
    complex_phases: bool = True,
) -> Field:
    """Random smooth radial field: a mixture of Laguerre-type ring bumps.

    Each component is c * (r^2/w^2)^m * exp(-r^2/(2 w^2)) with random
    width, integer ring order m, and (optionally) random complex phase.
    Used by the interpolation-constant estimator and its held-out checks.
    """
    length = grid.box_length
    r2 = grid.radius() ** 2
    n_comp = int(rng.integers(1, max_components + 1))
    total = np.zeros(grid.shape, dtype=np.complex128)
    for _ in range(n_comp):
        w = rng.uniform(length / 30.0, length / 8.0)
        m = int(rng.integers(0, 3))
        amp = rng.uniform(0.2, 2.0)
        phase = rng.uniform(0.0, 2.0 * np.pi) if complex_phases else 0.0
        c = amp * np.exp(1j * phase)
        total += c * (r2 / w**2) ** m * np.exp(-r2 / (2.0 * w**2))
    return Field(grid, total)

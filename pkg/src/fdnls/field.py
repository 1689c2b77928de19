"""Complex state on a grid with physical and spectral views."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .grid import Grid


@dataclass(frozen=True, eq=False)
class Field:
    """Complex-valued state sampled at the grid nodes.

    The physical array is copied and frozen at construction; the spectral
    view (unnormalized forward FFT) is computed lazily and cached.
    Instances are immutable, so concurrent reads are safe.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @cached_property
    def spectral(self) -> np.ndarray:
        spec = np.fft.fftn(self.values)
        spec.flags.writeable = False
        return spec

    @classmethod
    def from_spectral(cls, grid: Grid, spectral: np.ndarray) -> "Field":
        return cls(grid, np.fft.ifftn(spectral))

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)

    def l2_norm_sq(self) -> float:
        """Squared L2 norm by physical-space quadrature."""
        return float((np.abs(self.values) ** 2).sum() * self.grid.cell_volume)

    def l2_norm_sq_spectral(self) -> float:
        """Squared L2 norm from the spectral view (Plancherel)."""
        return float(
            (np.abs(self.spectral) ** 2).sum() * self.grid.cell_volume / self.grid.n_total
        )

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values.view(np.float64)).all())

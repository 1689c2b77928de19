"""Fractional Laplacian and the irreversible linear semigroup.

The linear flow is diagonal in Fourier space: each mode xi picks up the
factor exp((-i|xi|^(2*alpha) - a|xi|^(2*s)) * t).  For a > 0 the factor
modulus is < 1 on every nonzero frequency, so the flow contracts and
cannot be run backward; negative times are a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Field
from .grid import Grid
from .params import ModelParams


class IrreversibilityError(ValueError):
    """Raised when the dissipative semigroup is applied with t < 0."""


def fractional_laplacian(field: Field, order: float) -> Field:
    """Apply (-Laplacian)^(order/2), i.e. the multiplier |xi|^order.

    The zero mode is annihilated for order > 0 (|0|^order := 0) and left
    untouched for order = 0, so the mean is preserved in the latter case.
    """
    if order < 0.0:
        raise ValueError(f"fractional order must be >= 0, got {order}")
    multiplier = field.grid.abs_xi**order
    return Field.from_spectral(field.grid, multiplier * field.spectral)


@dataclass(frozen=True, eq=False)
class SemigroupMultiplier:
    """Per-mode factors of the linear solution operator at a fixed time."""

    grid: Grid
    params: ModelParams
    t: float
    factor: np.ndarray

    def __post_init__(self) -> None:
        self.factor.flags.writeable = False


def make_multiplier(grid: Grid, params: ModelParams, t: float) -> SemigroupMultiplier:
    if t < 0.0:
        raise IrreversibilityError(
            f"the dissipative semigroup is irreversible; got t={t} < 0"
        )
    abs_xi = grid.abs_xi
    symbol = -1j * abs_xi ** (2.0 * params.alpha) - params.a * abs_xi ** (2.0 * params.s)
    return SemigroupMultiplier(grid=grid, params=params, t=t, factor=np.exp(symbol * t))


def apply_semigroup(field: Field, t: float, params: ModelParams) -> Field:
    """Exact linear flow over time t >= 0 (spectral multiplication)."""
    if t == 0.0:
        return field
    mult = make_multiplier(field.grid, params, t)
    return Field.from_spectral(field.grid, mult.factor * field.spectral)


def semigroup_compose_check(
    field: Field, t1: float, t2: float, params: ModelParams
) -> float:
    """L2 defect of the semigroup law, ||S(t1+t2)u - S(t1)S(t2)u||."""
    once = apply_semigroup(field, t1 + t2, params)
    twice = apply_semigroup(apply_semigroup(field, t2, params), t1, params)
    diff = once.values - twice.values
    return float(np.sqrt((np.abs(diff) ** 2).sum() * field.grid.cell_volume))


def dense_oracle_semigroup(field: Field, t: float, params: ModelParams) -> Field:
    """Matrix-exponential reference for the linear flow (tests only).

    Builds the dense generator -i(-Lap)^alpha - a(-Lap)^s by explicit
    Fourier synthesis (plane-wave eigenbasis assembled as a unitary
    matrix, no FFT involved) and exponentiates it with scipy's
    scaling-and-squaring Pade routine.  Restricted to small 1-d grids.
    """
    from scipy.linalg import expm

    grid = field.grid
    if grid.d != 1 or grid.n_per_dim > 16:
        raise ValueError("dense oracle is limited to d=1 grids with n_per_dim <= 16")
    if t < 0.0:
        raise IrreversibilityError(
            f"the dissipative semigroup is irreversible; got t={t} < 0"
        )
    n = grid.n_per_dim
    x = grid.x_axis
    xi = grid.xi_axis
    # columns are sampled plane waves; V is unitary
    v = np.exp(1j * np.outer(x, xi)) / np.sqrt(n)
    eigs = -1j * np.abs(xi) ** (2.0 * params.alpha) - params.a * np.abs(xi) ** (
        2.0 * params.s
    )
    generator = (v * eigs) @ v.conj().T
    propagator = expm(t * generator)
    return Field(grid, propagator @ field.values)

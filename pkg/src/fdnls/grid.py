"""Periodic Cartesian grids and their Fourier frequency lattices.

The spatial domain is the torus [-L/2, L/2)^d sampled at n points per
dimension; the frequency lattice carries xi_k = (2*pi/L)*k for integer
k in [-n/2, n/2) in standard wraparound order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _wraparound_integers(n: int) -> np.ndarray:
    k = np.arange(n)
    k[k >= n // 2] -= n
    return k


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice with precomputed spectral quantities.

    Derived arrays are built once in __post_init__ and frozen;
    instances are immutable and safe to share across threads.
    """

    n_per_dim: int
    box_length: float
    d: int

    x_axis: np.ndarray = field(init=False, repr=False, compare=False)
    xi_axis: np.ndarray = field(init=False, repr=False, compare=False)
    abs_xi: np.ndarray = field(init=False, repr=False, compare=False)
    dealias_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n, length, d = self.n_per_dim, self.box_length, self.d
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"n_per_dim must be a power of two >= 2, got {n}")
        if not length > 0.0:
            raise ValueError(f"box_length must be positive, got {length}")
        if d not in (1, 2):
            raise ValueError(f"unsupported dimension d={d}")

        dx = length / n
        # symmetric construction keeps x -> -x exact in floating point
        x_axis = (np.arange(n) - n // 2) * dx
        k_int = _wraparound_integers(n)
        xi_axis = (2.0 * np.pi / length) * k_int

        mesh = np.meshgrid(*([xi_axis] * d), indexing="ij")
        abs_xi = np.sqrt(sum(m**2 for m in mesh))

        cutoff = n // 3  # 2/3-rule: keep |k| <= n/3 per dimension
        keep_1d = np.abs(k_int) <= cutoff
        mask = np.ones(self.shape, dtype=bool)
        for axis in range(d):
            shape = [1] * d
            shape[axis] = n
            mask &= keep_1d.reshape(shape)

        for name, arr in (
            ("x_axis", x_axis),
            ("xi_axis", xi_axis),
            ("abs_xi", abs_xi),
            ("dealias_mask", mask),
        ):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_dim,) * self.d

    @property
    def n_total(self) -> int:
        return self.n_per_dim**self.d

    @property
    def dx(self) -> float:
        return self.box_length / self.n_per_dim

    @property
    def cell_volume(self) -> float:
        return self.dx**self.d

    @property
    def volume(self) -> float:
        return self.box_length**self.d

    def coords(self) -> list[np.ndarray]:
        """Meshed physical coordinates, one array per dimension."""
        return np.meshgrid(*([self.x_axis] * self.d), indexing="ij")

    def radius(self) -> np.ndarray:
        """Distance to the box center at every node."""
        return np.sqrt(sum(x**2 for x in self.coords()))

    def quadrature(self, values: np.ndarray) -> complex:
        """Rectangle-rule integral over the torus (spectrally accurate
        for smooth periodic integrands)."""
        return complex(values.sum()) * self.cell_volume


def make_grid(n_per_dim: int, box_length: float, d: int) -> Grid:
    return Grid(n_per_dim=int(n_per_dim), box_length=float(box_length), d=int(d))

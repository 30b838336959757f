"""The Gausson family and other closed-form objects."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functionals import action_gradient, charge
from .grid import Field, Grid

__all__ = [
    "GaussonParams",
    "gausson_profile",
    "gausson_field",
    "d_closed",
    "elliptic_residual",
    "orbit_element",
]


@dataclass(frozen=True)
class GaussonParams:
    omega: float = 0.0
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")


def gausson_profile(omega: float, dim: int, r_sq) -> np.ndarray:
    """``exp((w + N)/2) * exp(-r^2/2)`` evaluated at squared radii ``r_sq``."""
    return np.exp(0.5 * (omega + dim) - 0.5 * np.asarray(r_sq))


def gausson_field(params: GaussonParams, grid: Grid) -> Field:
    if params.dim != grid.dim:
        raise ValueError(f"Gausson of dim {params.dim} on a {grid.dim}-D grid")
    return Field(grid, gausson_profile(params.omega, params.dim, grid.radius_sq))


def d_closed(omega: float, dim: int) -> float:
    """Ground-state level ``pi^(N/2) e^(w + N) / 2``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return 0.5 * math.pi ** (0.5 * dim) * math.exp(omega + dim)


def elliptic_residual(field: Field, omega: float) -> float:
    """Relative L2 residual of ``-Lap p + w p - p log|p|^2 = 0``."""
    if not np.any(field.values):
        raise ValueError("residual is undefined for the zero field")
    return math.sqrt(charge(action_gradient(field, omega)) / charge(field))


def orbit_element(params: GaussonParams, theta: float, y, grid: Grid) -> Field:
    """Sample ``exp(i theta) * phi_w(. - y)`` with periodic wrapping.

    The offset must keep the mass in the bulk, ``|y| <= L/2``.
    """
    if params.dim != grid.dim:
        raise ValueError(f"Gausson of dim {params.dim} on a {grid.dim}-D grid")
    y = np.broadcast_to(np.asarray(y, dtype=float), (grid.dim,))
    if not np.all(np.isfinite(y)):
        raise ValueError("offset must be finite")
    if np.linalg.norm(y) > 0.5 * grid.half_width:
        raise ValueError(f"offset {y} too close to the boundary (|y| > L/2)")
    r_sq = sum(d**2 for d in grid.wrap(y))
    return Field(grid, np.exp(1j * theta) * gausson_profile(params.omega, params.dim, r_sq))

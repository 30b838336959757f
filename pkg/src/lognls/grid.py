"""Periodic tensor grid on [-L, L)^N with spectral calculus.

The whole space is replaced by a torus. Quadrature is the rectangle rule,
which is spectrally accurate for smooth periodic integrands, and all
derivatives are taken in Fourier space.  The transform convention is fixed:
``numpy.fft.fftn`` unnormalized forward, ``ifftn`` divides by ``M**N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "make_grid",
    "integrate",
    "kinetic",
    "laplacian",
    "shift_field",
    "inner",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with ``points`` samples per axis.

    Parameters
    ----------
    dim : int
        Spatial dimension N (1, 2 or 3).
    half_width : float
        Half the box side, L.  The box is [-L, L)^N.
    points : int
        Samples per axis, M.  A power of two, at least 16.
    """

    dim: int
    half_width: float
    points: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not np.isfinite(self.half_width) or self.half_width <= 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        m = int(self.points)
        if m != self.points or m < 16 or m & (m - 1):
            raise ValueError(f"points must be a power of two >= 16, got {self.points}")
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def size(self) -> int:
        return self.points**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        """Sample positions along one axis, ``-L + j*h``."""
        return -self.half_width + self.spacing * np.arange(self.points)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Integer frequencies in transform layout, a permutation of -M/2..M/2-1."""
        return np.fft.fftfreq(self.points, d=1.0 / self.points).astype(int)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Per-axis wavenumbers ``(pi/L) * m``."""
        return (np.pi / self.half_width) * self.frequencies

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays, one per axis (``ij`` indexing)."""
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij", sparse=True))

    @cached_property
    def k_vectors(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.meshgrid(*([self.wavenumbers] * self.dim), indexing="ij", sparse=True)
        )

    @cached_property
    def radius_sq(self) -> np.ndarray:
        return sum(c**2 for c in self.coords) * np.ones(self.shape)

    @cached_property
    def k_sq(self) -> np.ndarray:
        return sum(k**2 for k in self.k_vectors) * np.ones(self.shape)

    def boundary_mask(self, width: float = 1.0) -> np.ndarray:
        """Sites within ``width`` of the box boundary along any axis."""
        mask = np.zeros(self.shape, dtype=bool)
        for c in self.coords:
            mask |= np.abs(c) >= self.half_width - width
        return mask

    def wrap(self, offset) -> np.ndarray:
        """Minimal-image displacement ``x - offset`` per axis, wrapped into [-L, L)."""
        offset = np.broadcast_to(np.asarray(offset, dtype=float), (self.dim,))
        two_l = 2.0 * self.half_width
        return tuple(
            (c - y + self.half_width) % two_l - self.half_width
            for c, y in zip(self.coords, offset)
        )

    def field(self, values) -> "Field":
        return Field(self, values)

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.shape, dtype=complex))


def make_grid(dim: int, half_width: float = 12.0, points: int = 256) -> Grid:
    return Grid(dim, half_width, points)


class Field:
    """Complex samples of a function on a :class:`Grid`.

    ``values`` has shape ``grid.shape``; ``flat`` gives the row-major
    vector of length ``M**N``.  Fields are treated as immutable values;
    arithmetic returns new fields.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values):
        values = np.asarray(values, dtype=complex)
        if values.size != grid.size:
            raise ValueError(
                f"expected {grid.size} samples for grid {grid.shape}, got {values.size}"
            )
        values = values.reshape(grid.shape)
        if not np.all(np.isfinite(values)):
            raise FloatingPointError("field contains non-finite values")
        values.flags.writeable = False
        self.grid = grid
        self.values = values

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    @property
    def density(self) -> np.ndarray:
        return self.values.real**2 + self.values.imag**2

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def _check(self, other: "Field"):
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Field):
            self._check(other)
            return Field(self.grid, self.values - other.values)
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, Field):
            return NotImplemented
        return Field(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __repr__(self):
        return f"Field(grid={self.grid!r}, max|u|={np.abs(self.values).max():.4g})"


def _samples(grid: Grid, samples) -> np.ndarray:
    samples = np.asarray(samples)
    if samples.size != grid.size:
        raise ValueError(f"expected {grid.size} samples, got {samples.size}")
    return samples.reshape(grid.shape)


def integrate(grid: Grid, samples) -> float:
    """Rectangle rule ``h**N * sum(samples)`` over the torus."""
    return float(grid.cell_volume * np.sum(_samples(grid, samples)).real)


def inner(u: Field, v: Field) -> complex:
    """L2 inner product ``int conj(u) v``."""
    u._check(v)
    return complex(u.grid.cell_volume * np.vdot(u.values, v.values))


def kinetic(field: Field) -> float:
    """Unhalved Dirichlet integral ``int |grad u|^2`` via Parseval."""
    grid = field.grid
    uhat = np.fft.fftn(field.values)
    power = uhat.real**2 + uhat.imag**2
    return float(grid.cell_volume / grid.size * np.sum(grid.k_sq * power))


def laplacian(field: Field) -> Field:
    grid = field.grid
    return Field(grid, np.fft.ifftn(-grid.k_sq * np.fft.fftn(field.values)))


def gradient(field: Field) -> list[np.ndarray]:
    """Spectral partial derivatives, one complex array per axis."""
    grid = field.grid
    uhat = np.fft.fftn(field.values)
    return [np.fft.ifftn(1j * k * uhat) for k in grid.k_vectors]


def shift_field(field: Field, offset) -> Field:
    """Sample ``u(. - offset)`` by a spectral phase ramp ``exp(-i k.y)``."""
    grid = field.grid
    offset = np.broadcast_to(np.asarray(offset, dtype=float), (grid.dim,))
    if not np.all(np.isfinite(offset)):
        raise ValueError("offset must be finite")
    if not np.any(offset):
        return field
    phase = sum(k * y for k, y in zip(grid.k_vectors, offset))
    return Field(grid, np.fft.ifftn(np.exp(-1j * phase) * np.fft.fftn(field.values)))

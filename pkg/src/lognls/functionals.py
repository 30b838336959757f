"""Scalar functionals of a field for the logarithmic Schrodinger equation.

Conventions
-----------
* ``kinetic`` is the unhalved integral of ``|grad u|^2``.
* ``entropy_term`` is ``int |u|^2 log |u|^2`` with ``0 log 0 = 0``; the
  integrand is zeroed where ``|u|^2 < 1e-300``.
* energy ``E = kinetic/2 - entropy/2``,
  action ``S_w = E + (w + 1)/2 * charge``,
  Nehari functional ``I_w = kinetic + w * charge - entropy``.

The Orlicz part splits ``F(s) = s^2 log s^2`` into the Young function ``A``
and the remainder ``B = F + A``, both nonnegative and convex.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .grid import Field, integrate, kinetic, laplacian

__all__ = [
    "FunctionalReport",
    "charge",
    "entropy_term",
    "energy",
    "action",
    "nehari",
    "a_pointwise",
    "b_pointwise",
    "f_pointwise",
    "orlicz_integral",
    "luxemburg_norm",
    "h1_norm",
    "w_norm",
    "log_sobolev_gap",
    "nehari_rescale",
    "action_gradient",
    "report",
]

DENSITY_FLOOR = 1e-300
SEAM = math.exp(-3.0)
_E3 = math.exp(-3.0)
_E6 = math.exp(-6.0)


def _require_nonzero(field: Field, what: str):
    if not np.any(field.values):
        raise ValueError(f"{what} is undefined for the zero field")


def _xlogx(density: np.ndarray) -> np.ndarray:
    """``rho * log(rho)`` with the integrand zeroed below the floor."""
    out = np.zeros_like(density)
    mask = density >= DENSITY_FLOOR
    out[mask] = density[mask] * np.log(density[mask])
    return out


def _log_density(density: np.ndarray) -> np.ndarray:
    """``log(rho)`` on the support, 0 below the floor (so ``u log|u|^2 -> 0``)."""
    out = np.zeros_like(density)
    mask = density >= DENSITY_FLOOR
    out[mask] = np.log(density[mask])
    return out


def charge(field: Field) -> float:
    return integrate(field.grid, field.density)


def entropy_term(field: Field) -> float:
    return integrate(field.grid, _xlogx(field.density))


def energy(field: Field) -> float:
    return 0.5 * kinetic(field) - 0.5 * entropy_term(field)


def action(field: Field, omega: float) -> float:
    return energy(field) + 0.5 * (omega + 1.0) * charge(field)


def nehari(field: Field, omega: float) -> float:
    return kinetic(field) + omega * charge(field) - entropy_term(field)


def action_gradient(field: Field, omega: float) -> Field:
    """L2 gradient of the action, ``-Lap u + w u - u log|u|^2``.

    Its zeros are exactly the solutions of the stationary equation.
    """
    u = field.values
    rhs = -laplacian(field).values + omega * u - u * _log_density(field.density)
    return Field(field.grid, rhs)


# ---------------------------------------------------------------- Orlicz split


def _nonneg(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or not np.all(np.isfinite(s)):
        raise ValueError("argument must be finite and nonnegative")
    return s


def _scalar_or_array(out: np.ndarray):
    out = out + 0.0  # normalizes -0.0
    return float(out) if out.ndim == 0 else out


def f_pointwise(s):
    """``F(s) = s^2 log s^2`` with ``F(0) = 0``."""
    s = _nonneg(s)
    return _scalar_or_array(_xlogx(s * s))


def _a_values(s: np.ndarray) -> np.ndarray:
    s2 = s * s
    small = s <= SEAM
    return np.where(small, -_xlogx(np.where(small, s2, 1.0)), 3.0 * s2 + 4.0 * _E3 * s - _E6)


def a_pointwise(s):
    """Young function ``A``: ``-s^2 log s^2`` up to ``e^-3``, then quadratic."""
    return _scalar_or_array(_a_values(_nonneg(s)))


def a_derivative(s):
    """Derivative of ``A``; both branches give ``10 e^-3`` at the seam."""
    s = _nonneg(s)
    small = s <= SEAM
    safe = np.where(small & (s > 0), s, 1.0)
    left = np.where(s > 0, -2.0 * safe * (np.log(safe * safe) + 1.0), 0.0)
    return _scalar_or_array(np.where(small, left, 6.0 * s + 4.0 * _E3))


def b_pointwise(s):
    """Remainder ``B = F + A``; vanishes identically on ``[0, e^-3]``."""
    s = _nonneg(s)
    s2 = s * s
    big = s > SEAM
    out = np.where(big, _xlogx(np.where(big, s2, 1.0)) + 3.0 * s2 + 4.0 * _E3 * s - _E6, 0.0)
    return _scalar_or_array(out)


def orlicz_integral(field: Field, scale: float = 1.0) -> float:
    """``int A(|u| / scale)``."""
    return integrate(field.grid, _a_values(np.abs(field.values) / scale))


def luxemburg_norm(field: Field, rtol: float = 1e-12) -> float:
    """Luxemburg gauge: the ``k > 0`` with ``int A(|u|/k) = 1``.

    ``k -> int A(|u|/k)`` is continuous and strictly decreasing, so the root
    is bracketed by doubling/halving and then bisected.
    """
    modulus = np.abs(field.values)
    if not np.any(modulus):
        return 0.0
    grid = field.grid

    def excess(k):
        return integrate(grid, _a_values(modulus / k)) - 1.0

    k = math.sqrt(max(charge(field), DENSITY_FLOOR))
    if excess(k) > 0:
        lo, hi = k, 2.0 * k
        while excess(hi) > 0:
            lo, hi = hi, 2.0 * hi
    else:
        lo, hi = 0.5 * k, k
        while excess(lo) <= 0:
            lo, hi = 0.5 * lo, lo
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def h1_norm(field: Field) -> float:
    return math.sqrt(charge(field) + kinetic(field))


def w_norm(field: Field) -> float:
    """Energy-space norm ``||u||_{H^1} + ||u||_{L^A}``."""
    return h1_norm(field) + luxemburg_norm(field)


# ------------------------------------------------------ inequalities, scaling


def log_sobolev_gap(field: Field, alpha: float) -> float:
    """Right side minus left side of the logarithmic Sobolev inequality.

    Nonnegative for every nonzero field on the whole space; zero exactly on
    translates of multiples of ``exp(-pi |x|^2 / (2 alpha^2))``.
    """
    _require_nonzero(field, "log-Sobolev gap")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    n = field.grid.dim
    q = charge(field)
    rhs = alpha**2 / math.pi * kinetic(field) + (math.log(q) - n * (1.0 + math.log(alpha))) * q
    return rhs - entropy_term(field)


def nehari_rescale(field: Field, omega: float) -> Field:
    """Scale ``u`` onto the Nehari manifold.

    ``I(l u) = l^2 (I(u) - log(l^2) ||u||^2)`` so ``l = exp(I(u) / (2 ||u||^2))``
    zeroes the functional exactly.
    """
    _require_nonzero(field, "Nehari rescaling")
    rho = math.exp(nehari(field, omega) / (2.0 * charge(field)))
    return field * rho


# --------------------------------------------------------------------- report


@dataclass(frozen=True)
class FunctionalReport:
    omega: float
    charge: float
    kinetic: float
    entropy: float
    energy: float
    action: float
    nehari: float
    luxemburg: float
    h1_norm: float
    w_norm: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self) -> list[float]:
        return [getattr(self, c) for c in self.columns()]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(self.columns())
        writer.writerow([repr(v) for v in self.csv_row()])
        return buf.getvalue()


def report(field: Field, omega: float) -> FunctionalReport:
    """Evaluate every functional once and assemble them consistently."""
    q = charge(field)
    kin = kinetic(field)
    ent = entropy_term(field)
    en = 0.5 * kin - 0.5 * ent
    lux = luxemburg_norm(field)
    h1 = math.sqrt(q + kin)
    return FunctionalReport(
        omega=float(omega),
        charge=q,
        kinetic=kin,
        entropy=ent,
        energy=en,
        action=en + 0.5 * (omega + 1.0) * q,
        nehari=kin + omega * q - ent,
        luxemburg=lux,
        h1_norm=h1,
        w_norm=h1 + lux,
    )

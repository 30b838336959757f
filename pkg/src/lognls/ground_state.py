"""Ground states by descent on the Nehari manifold.

On the manifold ``I_w(u) = 0`` the action reduces to half the charge, so the
minimization is mass minimization with an exact feasibility map: every
iterate is pushed back by :func:`nehari_rescale`.  Composing the action with
that projection gives a merit function whose derivative at a feasible point
in direction ``v`` is ``Re <S_w'(u), v>``; the descent direction is the
action gradient preconditioned by ``(1 - Lap)^-1`` (an H^1 gradient), with
Armijo backtracking on the merit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Union

import numpy as np

from .functionals import action, action_gradient, charge, nehari, nehari_rescale
from .gausson import GaussonParams, d_closed
from .grid import Field, Grid, inner
from .orbit import fit_orbit

__all__ = [
    "MinimizeOptions",
    "GroundStateResult",
    "minimize_action",
    "align_to_orbit",
    "random_init",
    "anisotropic_init",
]


@dataclass(frozen=True)
class MinimizeOptions:
    max_iters: int = 20000
    grad_tol: float = 1e-6
    step_init: float = 0.1
    backtrack_factor: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.grad_tol > 0 and self.step_init > 0):
            raise ValueError("tolerances and step must be positive")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass
class GroundStateResult:
    """Outcome of one constrained minimization.

    ``orbit_distance_l2`` is the L2 distance to the nearest Gausson orbit
    element divided by ``||phi_w||``.  ``trace`` rows are
    ``(iteration, action, |I_w| / charge)`` where the action is the manifold
    value ``charge / 2``.
    """

    minimizer: Field
    omega: float
    action_value: float
    d_closed_ref: float
    converged: bool
    iterations: int
    trace: list = dc_field(default_factory=list)
    orbit_distance_l2: float = math.nan
    orbit_theta: float = math.nan
    orbit_y: tuple = ()
    stationarity: float = math.nan

    @property
    def relative_error(self) -> float:
        return abs(self.action_value - self.d_closed_ref) / self.d_closed_ref

    def to_dict(self) -> dict:
        grid = self.minimizer.grid
        return {
            "omega": self.omega,
            "dim": grid.dim,
            "half_width": grid.half_width,
            "points": grid.points,
            "action_value": self.action_value,
            "d_closed_ref": self.d_closed_ref,
            "relative_error": self.relative_error,
            "converged": self.converged,
            "iterations": self.iterations,
            "stationarity": self.stationarity,
            "orbit_distance_l2": self.orbit_distance_l2,
            "orbit_theta": self.orbit_theta,
            "orbit_y": list(self.orbit_y),
            "trace": [list(row) for row in self.trace],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _bandlimited_noise(grid: Grid, rng: np.random.Generator, band_limit: float) -> np.ndarray:
    """Complex noise with Fourier support in ``|k| <= band_limit``, max modulus 1."""
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs[grid.k_sq > band_limit**2] = 0.0
    noise = np.fft.ifftn(coeffs)
    peak = np.abs(noise).max()
    return noise / peak if peak > 0 else noise


def random_init(grid: Grid, seed: int = 0, width: float = 2.5, band_limit: float = 2.0) -> Field:
    """Broad off-center Gaussian envelope times band-limited complex noise."""
    rng = np.random.default_rng(seed)
    center = rng.uniform(-1.0, 1.0, grid.dim)
    widths = width * rng.uniform(0.8, 1.25, grid.dim)
    envelope = np.exp(-0.5 * sum(((d / s) ** 2) for d, s in zip(grid.wrap(center), widths)))
    noise = _bandlimited_noise(grid, rng, band_limit)
    return Field(grid, envelope * (1.0 + 0.5 * noise))


def anisotropic_init(grid: Grid, center=None, widths=None) -> Field:
    """Off-center Gaussian with unequal axis widths (deliberately nonradial)."""
    center = np.full(grid.dim, 0.8) if center is None else np.asarray(center, float)
    if widths is None:
        widths = np.linspace(0.6, 1.6, grid.dim) if grid.dim > 1 else np.array([1.4])
    r = sum((d / s) ** 2 for d, s in zip(grid.wrap(center), widths))
    return Field(grid, np.exp(-0.5 * r))


def _preconditioner(grid: Grid) -> np.ndarray:
    return 1.0 / (1.0 + grid.k_sq)


def _tangential_norm(u: Field, grad: Field) -> float:
    """L2 norm of the action gradient with its component along ``I_w'(u)`` removed."""
    normal = 2.0 * (grad.values - u.values)
    nn = np.vdot(normal, normal).real
    coef = np.vdot(normal, grad.values).real / nn if nn > 0 else 0.0
    g_t = grad.values - coef * normal
    return math.sqrt(u.grid.cell_volume * np.vdot(g_t, g_t).real)


def minimize_action(
    omega: float,
    grid: Grid,
    init: Union[Field, str] = "random",
    opts: MinimizeOptions = MinimizeOptions(),
) -> GroundStateResult:
    """Minimize the action over the Nehari manifold.

    ``init`` is a :class:`Field`, ``"random"`` (seeded by ``opts.seed``) or
    ``"gausson-perturbed"``.  Non-convergence is reported through
    ``converged=False`` rather than raised.
    """
    if isinstance(init, str):
        if init == "random":
            init = random_init(grid, opts.seed)
        elif init == "gausson-perturbed":
            from .gausson import gausson_field

            rng = np.random.default_rng(opts.seed)
            base = gausson_field(GaussonParams(omega, grid.dim), grid)
            init = base + Field(grid, 0.1 * base.values.max() * _bandlimited_noise(grid, rng, 2.0))
        else:
            raise ValueError(f"unknown initializer {init!r}")
    if init.grid != grid:
        raise ValueError("initializer lives on a different grid")
    if not np.any(init.values):
        raise ValueError("zero initializer")

    precond = _preconditioner(grid)
    u = nehari_rescale(init, omega)
    merit = 0.5 * charge(u)
    trace = [(0, merit, abs(nehari(u, omega)) / (2.0 * merit))]
    step = opts.step_init
    converged = False
    stat = math.inf
    it = 0
    for it in range(1, opts.max_iters + 1):
        grad = action_gradient(u, omega)
        stat = _tangential_norm(u, grad) / math.sqrt(2.0 * merit)
        if stat <= opts.grad_tol:
            converged = True
            it -= 1
            break
        direction = Field(grid, np.fft.ifftn(precond * np.fft.fftn(grad.values)))
        slope = inner(grad, direction).real
        accepted = False
        while step > 1e-14:
            trial = nehari_rescale(u - step * direction, omega)
            trial_merit = 0.5 * charge(trial)
            if trial_merit <= merit - 1e-4 * step * slope and trial_merit < merit:
                accepted = True
                break
            step *= opts.backtrack_factor
        if not accepted:
            # no further decrease representable in floating point
            it -= 1
            break
        u, merit = trial, trial_merit
        trace.append((it, merit, abs(nehari(u, omega)) / (2.0 * merit)))
        step = min(step / opts.backtrack_factor, 1e3 * opts.step_init)

    fit = fit_orbit(u, omega, "L2")
    phi_norm = math.sqrt(2.0 * d_closed(omega, grid.dim))
    return GroundStateResult(
        minimizer=u,
        omega=float(omega),
        action_value=float(action(u, omega)),
        d_closed_ref=d_closed(omega, grid.dim),
        converged=converged,
        iterations=it,
        trace=trace,
        orbit_distance_l2=fit.distance / phi_norm,
        orbit_theta=fit.theta,
        orbit_y=tuple(float(v) for v in fit.y),
        stationarity=float(stat),
    )


def align_to_orbit(field: Field, omega: float, norm_kind: str = "L2"):
    """Best-fit ``(theta, y, distance)`` against ``e^{i theta} phi_w(. - y)``."""
    fit = fit_orbit(field, omega, norm_kind)
    return fit.theta, fit.y, fit.distance

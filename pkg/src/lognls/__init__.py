"""Logarithmic Schrodinger equation lab: Gaussons, ground states, dynamics.

Spectral discretization of ``i u_t + Lap u + u log|u|^2 = 0`` on a periodic
box, the functionals of the energy space ``W = H^1 cap L^A``, a Nehari
projected-descent ground-state solver, an exact-substep Strang integrator and
orbital-stability experiments around the Gausson.
"""

from .evolve import EvolveOptions, TrajectoryDiagnostics, evolve_run, nonlinear_phase_step, strang_step
from .functionals import (
    FunctionalReport,
    a_pointwise,
    action,
    b_pointwise,
    charge,
    energy,
    entropy_term,
    log_sobolev_gap,
    luxemburg_norm,
    nehari,
    nehari_rescale,
    report,
    w_norm,
)
from .gausson import GaussonParams, d_closed, elliptic_residual, gausson_field, orbit_element
from .grid import Field, Grid, integrate, kinetic, laplacian, make_grid, shift_field
from .ground_state import GroundStateResult, MinimizeOptions, align_to_orbit, minimize_action
from .stability import (
    PerturbationSpec,
    StabilityReport,
    brezis_lieb_demo,
    make_perturbation,
    orbit_distance,
    stability_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "Grid", "Field", "make_grid", "integrate", "kinetic", "laplacian", "shift_field",
    "FunctionalReport", "report", "charge", "entropy_term", "energy", "action", "nehari",
    "a_pointwise", "b_pointwise", "luxemburg_norm", "w_norm", "log_sobolev_gap", "nehari_rescale",
    "GaussonParams", "gausson_field", "d_closed", "elliptic_residual", "orbit_element",
    "MinimizeOptions", "GroundStateResult", "minimize_action", "align_to_orbit",
    "EvolveOptions", "TrajectoryDiagnostics", "evolve_run", "strang_step", "nonlinear_phase_step",
    "PerturbationSpec", "StabilityReport", "make_perturbation", "orbit_distance",
    "stability_experiment", "brezis_lieb_demo",
]

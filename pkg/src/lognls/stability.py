"""Orbital-stability experiments on the Gausson.

A perturbed Gausson ``u0 = phi_w + p`` with ``||p||_W = delta`` is evolved and
its distance to the orbit ``{e^{i theta} phi_w(. - y)}`` is sampled in time.
Small, bounded distances are the finite-time, finite-box evidence for
stability; no run can prove the ``sup over all t`` statement.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np
from scipy.optimize import brentq

from .evolve import EvolveOptions, evolve_run
from .functionals import f_pointwise, w_norm
from .gausson import GaussonParams, gausson_field, gausson_profile
from .grid import Field, Grid, integrate, shift_field
from .orbit import fit_orbit

__all__ = [
    "PERTURBATION_KINDS",
    "PerturbationSpec",
    "StabilityReport",
    "make_perturbation",
    "orbit_distance",
    "stability_experiment",
    "brezis_lieb_demo",
]

PERTURBATION_KINDS = (
    "radial_bump",
    "anisotropic_bump",
    "random_bandlimited",
    "translation_offset",
    "phase_ramp",
)


@dataclass(frozen=True)
class PerturbationSpec:
    """Shape and W-norm size of an initial perturbation.

    ``delta = 0`` is accepted and means the unperturbed Gausson.
    """

    kind: str = "random_bandlimited"
    delta: float = 0.01
    seed: int = 0
    band_limit: float = 3.0

    def __post_init__(self):
        if self.kind not in PERTURBATION_KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if not (math.isfinite(self.delta) and self.delta >= 0):
            raise ValueError("delta must be finite and nonnegative")
        if not (math.isfinite(self.band_limit) and self.band_limit > 0):
            raise ValueError("band_limit must be positive")


def _direction(grid: Grid, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(grid.dim)
    return v / np.linalg.norm(v)


def _additive_shape(base: GaussonParams, spec: PerturbationSpec, grid: Grid) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    amp = math.exp(0.5 * (base.omega + base.dim))
    if spec.kind == "radial_bump":
        return amp * np.exp(-grid.radius_sq / (2 * 0.6**2))
    if spec.kind == "anisotropic_bump":
        centers = np.array([0.9, -0.4, 0.3])[: grid.dim]
        widths = np.array([0.5, 1.2, 0.8])[: grid.dim]
        r = sum((d / w) ** 2 for d, w in zip(grid.wrap(centers), widths))
        return amp * np.exp(-0.5 * r)
    # random_bandlimited
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs[grid.k_sq > spec.band_limit**2] = 0.0
    noise = np.fft.ifftn(coeffs)
    peak = np.abs(noise).max()
    if peak == 0:
        raise ValueError("band_limit too small to represent a perturbation")
    return amp * np.exp(-grid.radius_sq / (2 * 1.5**2)) * noise / peak


def make_perturbation(base: GaussonParams, spec: PerturbationSpec, grid: Grid) -> Field:
    """``u0`` with ``w_norm(u0 - phi_w) = spec.delta``.

    Additive shapes are scaled directly (the W norm is a norm).  Translation
    and phase-ramp kinds are nonlinear in their parameter, which is found by
    a 1-D root search.
    """
    phi = gausson_field(base, grid)
    if spec.delta == 0:
        return phi

    if spec.kind in ("radial_bump", "anisotropic_bump", "random_bandlimited"):
        p = Field(grid, _additive_shape(base, spec, grid))
        size = w_norm(p)
        if not size > 0:
            raise ValueError(f"{spec.kind} perturbation has zero W norm on this grid")
        return phi + p * (spec.delta / size)

    rng = np.random.default_rng(spec.seed)
    direction = _direction(grid, rng)
    if spec.kind == "translation_offset":
        limit = 0.5 * grid.half_width

        def build(s):
            r_sq = sum(d**2 for d in grid.wrap(s * direction))
            return Field(grid, gausson_profile(base.omega, base.dim, r_sq))

    else:  # phase_ramp
        limit = 0.5 * math.pi / grid.spacing
        proj = sum(c * d for c, d in zip(grid.coords, direction))

        def build(s):
            return Field(grid, phi.values * np.exp(1j * s * proj))

    def excess(s):
        return w_norm(build(s) - phi) - spec.delta

    if excess(limit) < 0:
        raise ValueError(f"delta={spec.delta} unreachable for {spec.kind} on this grid")
    s = brentq(excess, 0.0, limit, xtol=1e-14, rtol=1e-12)
    return build(s)


def orbit_distance(field: Field, omega: float, norm_kind: str = "W"):
    """``(distance, theta, y)`` minimizing ``||u - e^{i theta} phi_w(. - y)||``."""
    fit = fit_orbit(field, omega, norm_kind)
    return fit.distance, fit.theta, fit.y


@dataclass
class StabilityReport:
    spec: PerturbationSpec
    omega: float
    dim: int
    times: list = dc_field(default_factory=list)
    orbit_distance_w: list = dc_field(default_factory=list)
    orbit_distance_l2: list = dc_field(default_factory=list)
    theta: list = dc_field(default_factory=list)
    y: list = dc_field(default_factory=list)
    charge_drift: list = dc_field(default_factory=list)
    energy_drift: list = dc_field(default_factory=list)
    polish_flags: list = dc_field(default_factory=list)
    conservation: dict = dc_field(default_factory=dict)
    initial_distance_w: float = math.nan  # ||u0 - phi_w||_W, the size of the initial ball
    aborted: bool = False

    @property
    def max_distance_w(self) -> float:
        return max(self.orbit_distance_w, default=math.nan)

    def to_dict(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "omega": self.omega,
            "dim": self.dim,
            "max_distance_w": self.max_distance_w,
            "initial_distance_w": self.initial_distance_w,
            "times": list(self.times),
            "orbit_distance_w": list(self.orbit_distance_w),
            "orbit_distance_l2": list(self.orbit_distance_l2),
            "theta": list(self.theta),
            "y": [list(v) for v in self.y],
            "polish_moved": list(self.polish_flags),
            "conservation": dict(self.conservation),
            "aborted": self.aborted,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def csv_columns(self) -> list[str]:
        ys = [f"y{i}" for i in range(self.dim)]
        return ["t", "dist_w", "dist_l2", "theta", *ys, "charge_drift", "energy_drift"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.csv_columns())
        for i, t in enumerate(self.times):
            row = [t, self.orbit_distance_w[i], self.orbit_distance_l2[i], self.theta[i], *self.y[i]]
            row += [self.charge_drift[i], self.energy_drift[i]]
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def stability_experiment(
    omega: float,
    grid: Grid,
    spec: PerturbationSpec,
    eopts: EvolveOptions,
) -> StabilityReport:
    """Evolve a perturbed Gausson and track its W and L2 orbit distances.

    The theta/y columns come from the W fit.  If the evolution aborts, the
    exception is re-raised with the partial report attached as ``.report``.
    """
    base = GaussonParams(omega, grid.dim)
    phi = gausson_field(base, grid)
    limit = 0.1 * w_norm(phi)
    if spec.delta > limit:
        raise ValueError(f"delta={spec.delta} exceeds 0.1 * ||phi_w||_W = {limit:.4g}")
    u0 = make_perturbation(base, spec, grid)
    rep = StabilityReport(spec=spec, omega=float(omega), dim=grid.dim)
    rep.initial_distance_w = w_norm(u0 - phi) if spec.delta else 0.0

    def observe(t, u):
        fit_w = fit_orbit(u, omega, "W")
        fit_l2 = fit_orbit(u, omega, "L2")
        rep.times.append(float(t))
        rep.orbit_distance_w.append(fit_w.distance)
        rep.orbit_distance_l2.append(fit_l2.distance)
        rep.theta.append(fit_w.theta)
        rep.y.append([float(v) for v in fit_w.y])
        rep.polish_flags.append(fit_w.polish_moved)

    try:
        diag = evolve_run(u0, eopts, omega_ref=omega, observer=observe)
    except FloatingPointError as exc:
        partial = getattr(exc, "diagnostics", None)
        rep.aborted = True
        if partial is not None:
            _attach_conservation(rep, partial)
        exc.report = rep
        raise
    _attach_conservation(rep, diag)
    return rep


def _attach_conservation(rep: StabilityReport, diag):
    n = len(rep.times)
    rep.charge_drift = list(diag.charge_drift[:n])
    rep.energy_drift = list(diag.energy_drift[:n])
    rep.conservation = diag.summary()


def brezis_lieb_demo(base: Field, bump: Field, shifts):
    """Residuals of the Brezis-Lieb splitting along a translate sequence.

    For ``u_s = base + bump(. - s e_1)`` returns pairs ``(s, r_s)`` with
    ``r_s = |int F(|u_s|) - F(|u_s - base|) - F(|base|)|``, ``F(z) = |z|^2 log|z|^2``.
    """
    grid = base.grid
    shifts = [float(s) for s in shifts]
    if any(abs(s) > 0.5 * grid.half_width for s in shifts):
        raise ValueError("shifts must stay within the bulk (|s| <= L/2)")
    f_base = f_pointwise(np.abs(base.values))
    e1 = np.zeros(grid.dim)
    e1[0] = 1.0
    out = []
    for s in shifts:
        moved = shift_field(bump, s * e1)
        u = base + moved
        integrand = f_pointwise(np.abs(u.values)) - f_pointwise(np.abs(moved.values)) - f_base
        out.append((s, abs(integrate(grid, integrand))))
    return out

"""Property suites over randomized fields.

Each check returns a :class:`CheckResult`; ``run_checks`` assembles the
table printed by ``lognls checks``.  Random fields are band-limited noise
under a Gaussian envelope so their mass sits in the bulk of the box: on the
torus the whole-space inequalities can fail at quadrature-error level for
fields that touch the boundary.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .functionals import (
    SEAM,
    a_derivative,
    a_pointwise,
    charge,
    log_sobolev_gap,
    luxemburg_norm,
    nehari,
    nehari_rescale,
    orlicz_integral,
)
from .gausson import GaussonParams, gausson_field
from .grid import Field, Grid, make_grid
from .stability import brezis_lieb_demo

__all__ = [
    "CheckResult",
    "random_bulk_field",
    "LOG_SOBOLEV_ALPHAS",
    "check_log_sobolev",
    "check_log_sobolev_equality",
    "check_a_seam",
    "check_luxemburg_sandwich",
    "check_luxemburg_homogeneity",
    "check_nehari_rescale",
    "check_brezis_lieb",
    "run_checks",
]

LOG_SOBOLEV_ALPHAS = (0.5, 1.0, math.sqrt(math.pi), 3.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def random_bulk_field(grid: Grid, rng: np.random.Generator, band_limit: float = 3.0, amplitude: float = 1.0) -> Field:
    """Band-limited complex noise times a centered envelope of width ~2."""
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs[grid.k_sq > band_limit**2] = 0.0
    noise = np.fft.ifftn(coeffs)
    noise /= np.abs(noise).max()
    center = rng.uniform(-1.0, 1.0, grid.dim)
    width = rng.uniform(1.0, 2.5)
    r_sq = sum(d**2 for d in grid.wrap(center))
    return Field(grid, amplitude * np.exp(-r_sq / (2 * width**2)) * noise)


def check_log_sobolev(grid: Grid, n_fields: int = 100, seed: int = 0, alphas=LOG_SOBOLEV_ALPHAS, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(n_fields):
        u = random_bulk_field(grid, rng, amplitude=10 ** rng.uniform(-1, 1))
        for a in alphas:
            worst = min(worst, log_sobolev_gap(u, a))
    return CheckResult("log_sobolev_gap", worst >= -tol, worst, -tol, f"{n_fields} fields x {len(alphas)} alphas, min gap")


def check_log_sobolev_equality(grid: Grid, alphas=LOG_SOBOLEV_ALPHAS, tol: float = 1e-8) -> CheckResult:
    worst = 0.0
    for a in alphas:
        for mult in (1.0, 0.3 + 0.4j):
            f = Field(grid, mult * np.exp(-math.pi * grid.radius_sq / (2 * a * a)))
            worst = max(worst, abs(log_sobolev_gap(f, a)))
    return CheckResult("log_sobolev_equality", worst <= tol, worst, tol, "matched Gaussians, max |gap|")


def check_a_seam(fault: bool = False, tol: float = 1e-15) -> CheckResult:
    """Both branches of ``A`` meet at ``e^-3`` with value ``6e^-6`` and slope ``10e^-3``."""
    value = 6.0 * math.exp(-6.0)
    slope = 10.0 * math.exp(-3.0)
    if fault:
        value *= 1.0 + 1e-6  # self-test of the harness
    s = SEAM
    left_val = -s * s * math.log(s * s)
    right_val = 3 * s * s + 4 * math.exp(-3.0) * s - math.exp(-6.0)
    left_slope = -2 * s * (math.log(s * s) + 1)
    right_slope = 6 * s + 4 * math.exp(-3.0)
    errs = [
        abs(left_val - value) / value,
        abs(right_val - value) / value,
        abs(a_pointwise(s) - value) / value,
        abs(left_slope - slope) / slope,
        abs(right_slope - slope) / slope,
        abs(a_derivative(s) - slope) / slope,
    ]
    worst = max(errs)
    return CheckResult("a_seam", worst <= tol, worst, tol, "relative mismatch of seam value/slope")


def check_luxemburg_sandwich(grid: Grid, n_fields: int = 100, seed: int = 1) -> CheckResult:
    """``min(k, k^2) <= int A(|u|) <= max(k, k^2)`` with ``k`` the Luxemburg norm."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(n_fields):
        u = random_bulk_field(grid, rng, amplitude=10 ** rng.uniform(-2, 2))
        k = luxemburg_norm(u)
        mass = orlicz_integral(u)
        lo, hi = min(k, k * k), max(k, k * k)
        slack = min(mass - lo, hi - mass) / max(hi, 1e-300)
        worst = min(worst, slack)
    tol = -1e-10
    return CheckResult("luxemburg_sandwich", worst >= tol, worst, tol, "min relative slack")


def check_luxemburg_homogeneity(grid: Grid, n_fields: int = 10, seed: int = 2, scale: float = 3.0, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_fields):
        u = random_bulk_field(grid, rng)
        k = luxemburg_norm(u)
        worst = max(worst, abs(luxemburg_norm(u * scale) - scale * k) / (scale * k))
    return CheckResult("luxemburg_homogeneity", worst <= tol, worst, tol, f"|k(au) - a k(u)| / a k(u), a={scale}")


def check_nehari_rescale(grid: Grid, n_fields: int = 100, seed: int = 3, omega: float = 0.0, tol: float = 1e-10, fixed_tol: float = 1e-12) -> CheckResult:
    """Projection is exact on random fields and maps ``lambda phi_w`` back to ``phi_w``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_fields):
        u = random_bulk_field(grid, rng, amplitude=10 ** rng.uniform(-1, 1))
        v = nehari_rescale(u, omega)
        worst = max(worst, abs(nehari(v, omega)) / max(1.0, charge(v)))
    phi = gausson_field(GaussonParams(omega, grid.dim), grid)
    pointwise = max(
        float(np.abs(nehari_rescale(phi * lam, omega).values - phi.values).max()) for lam in (0.5, 2.0, 5.0)
    )
    return CheckResult(
        "nehari_rescale",
        worst <= tol and pointwise <= fixed_tol,
        worst,
        tol,
        f"max |I|/max(1,Q) over random fields; max pointwise |rescale(l phi) - phi| = {pointwise:.2e} (tol {fixed_tol:g})",
    )


def check_brezis_lieb(grid: Grid | None = None, bump_scale: float = 0.5, shifts=range(1, 9), tol: float = 1e-6) -> CheckResult:
    """Translate-sequence residual decreases monotonically and ends below ``tol``."""
    grid = grid or make_grid(1, 16.0, 256)
    phi = gausson_field(GaussonParams(0.0, grid.dim), grid)
    res = [r for _, r in brezis_lieb_demo(phi, phi * bump_scale, list(shifts))]
    monotone = all(b < a for a, b in zip(res, res[1:]))
    return CheckResult(
        "brezis_lieb",
        monotone and res[-1] <= tol,
        res[-1],
        tol,
        f"monotone={monotone}, residuals " + ", ".join(f"{r:.2e}" for r in res),
    )


def run_checks(seed: int = 0, n_fields: int = 100, fault: str | None = None) -> list[CheckResult]:
    grid = make_grid(1, 12.0, 256)
    return [
        check_log_sobolev(grid, n_fields, seed),
        check_log_sobolev_equality(grid),
        check_a_seam(fault == "a_seam"),
        check_luxemburg_sandwich(grid, n_fields, seed + 1),
        check_luxemburg_homogeneity(grid, 10, seed + 2),
        check_nehari_rescale(grid, n_fields, seed + 3),
        check_brezis_lieb(),
    ]

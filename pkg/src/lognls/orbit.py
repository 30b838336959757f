"""Distance from a field to the Gausson orbit ``{e^{i theta} phi_w(. - y)}``.

The infimum over phase and translation is approximated coarse-to-fine:

1. exhaustive cross-correlation of ``|u|`` with the Gausson over all grid
   offsets, with quadratic sub-cell interpolation of the peak;
2. the phase in closed form, ``theta = arg <phi_w(. - y), u>``;
3. Newton refinement of ``y`` on the overlap ``|<phi_w(. - y), u>|``, which
   makes the L2 fit exact for orbit members;
4. for the W norm, a derivative-free Nelder-Mead polish of ``(theta, y)``
   with a fixed evaluation budget.

Local refinement can only miss the global optimum from above, so reported
distances are upper bounds on the true infimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .functionals import charge, h1_norm, luxemburg_norm
from .gausson import gausson_profile
from .grid import Field

__all__ = ["OrbitFit", "fit_orbit", "orbit_target"]

W_POLISH_EVALS = 50


@dataclass(frozen=True)
class OrbitFit:
    distance: float
    theta: float
    y: np.ndarray
    norm_kind: str
    coarse_y: np.ndarray
    polish_moved: bool  # minimizer moved more than one cell during refinement


def orbit_target(omega: float, grid, theta: float, y) -> Field:
    """``exp(i theta) phi_w(. - y)`` sampled with periodic wrapping (no bulk check)."""
    r_sq = sum(d**2 for d in grid.wrap(y))
    return Field(grid, np.exp(1j * theta) * gausson_profile(omega, grid.dim, r_sq))


def _wrap_offset(grid, y) -> np.ndarray:
    two_l = 2.0 * grid.half_width
    return (np.asarray(y, dtype=float) + grid.half_width) % two_l - grid.half_width


def _coarse_offset(u: Field, omega: float) -> np.ndarray:
    grid = u.grid
    centered = gausson_profile(omega, grid.dim, grid.radius_sq)
    kernel = np.fft.ifftshift(centered)  # Gausson peak at index 0
    corr = np.fft.ifftn(np.fft.fftn(np.abs(u.values)) * np.conj(np.fft.fftn(kernel))).real
    peak = np.unravel_index(np.argmax(corr), corr.shape)
    m = grid.points
    y = np.empty(grid.dim)
    for axis, idx in enumerate(peak):
        lo = list(peak)
        hi = list(peak)
        lo[axis] = (idx - 1) % m
        hi[axis] = (idx + 1) % m
        c0, cm, cp = corr[peak], corr[tuple(lo)], corr[tuple(hi)]
        denom = cm - 2.0 * c0 + cp
        frac = 0.5 * (cm - cp) / denom if denom < 0 else 0.0
        y[axis] = (idx + float(np.clip(frac, -0.5, 0.5))) * grid.spacing - grid.half_width
    return _wrap_offset(grid, y)


def _overlap_newton(u: Field, omega: float, y: np.ndarray, max_iter: int = 30) -> np.ndarray:
    """Maximize ``f(y) = |<phi(. - y), u>|^2`` by safeguarded Newton steps.

    For the Gausson, ``d/dy phi(x - y) = (x - y) phi(x - y)``, so gradient and
    Hessian of the overlap are moment sums.
    """
    grid = u.grid
    vol = grid.cell_volume
    h = grid.spacing

    def moments(y):
        d = grid.wrap(y)
        phi = gausson_profile(omega, grid.dim, sum(di**2 for di in d)) * np.ones(grid.shape)
        w = phi * u.values
        g = vol * w.sum()
        dg = np.array([vol * (di * w).sum() for di in d])
        d2g = np.empty((grid.dim, grid.dim), dtype=complex)
        for a in range(grid.dim):
            for b in range(a, grid.dim):
                val = vol * (d[a] * d[b] * w).sum() - (vol * w.sum() if a == b else 0.0)
                d2g[a, b] = d2g[b, a] = val
        return g, dg, d2g

    for _ in range(max_iter):
        g, dg, d2g = moments(y)
        f = abs(g) ** 2
        grad = 2.0 * np.real(np.conj(g) * dg)
        hess = 2.0 * np.real(np.outer(np.conj(dg), dg) + np.conj(g) * d2g)
        try:
            step = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = None
        if step is None or not np.all(np.isfinite(step)) or grad @ step <= 0:
            # not an ascent direction; fall back to a scaled gradient step
            step = grad / (np.abs(np.diag(hess)).max() + f + 1e-300)
        step = np.clip(step, -h, h)
        t = 1.0
        while t > 1e-6:
            trial = _wrap_offset(grid, y + t * step)
            if abs(moments(trial)[0]) ** 2 >= f:
                break
            t *= 0.5
        else:
            break
        y = trial
        if np.max(np.abs(t * step)) < 1e-15 * max(1.0, grid.half_width):
            break
    return y


def _phase(u: Field, omega: float, y) -> float:
    phi = orbit_target(omega, u.grid, 0.0, y)
    return float(np.angle(np.vdot(phi.values, u.values)))


def _w_distance(diff: Field) -> float:
    return h1_norm(diff) + luxemburg_norm(diff)


def fit_orbit(field: Field, omega: float, norm_kind: str = "L2", max_evals: int = W_POLISH_EVALS) -> OrbitFit:
    """Best phase/translation fit of ``field`` to the Gausson orbit."""
    if norm_kind not in ("L2", "W"):
        raise ValueError(f"norm_kind must be 'L2' or 'W', got {norm_kind!r}")
    if not np.any(field.values):
        raise ValueError("orbit distance is undefined for the zero field")
    grid = field.grid

    coarse = _coarse_offset(field, omega)
    y = _overlap_newton(field, omega, coarse)
    theta = _phase(field, omega, y)
    diff = field - orbit_target(omega, grid, theta, y)

    if norm_kind == "L2":
        dist = math.sqrt(charge(diff))
    else:
        x0 = np.concatenate([[theta], y])
        best = {"x": x0, "f": _w_distance(diff)}

        def objective(x):
            val = _w_distance(field - orbit_target(omega, grid, x[0], x[1:]))
            if val < best["f"]:
                best["x"], best["f"] = x.copy(), val
            return val

        if best["f"] > 0:
            steps = np.concatenate([[0.02], np.full(grid.dim, 0.5 * grid.spacing)])
            simplex = np.vstack([x0] + [x0 + np.eye(len(x0))[i] * steps[i] for i in range(len(x0))])
            minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={"maxfev": max_evals, "initial_simplex": simplex, "xatol": 1e-12, "fatol": 0.0},
            )
        theta, y, dist = float(best["x"][0]), _wrap_offset(grid, best["x"][1:]), best["f"]

    theta = float(math.remainder(theta, 2.0 * math.pi))
    shift = np.abs(_wrap_offset(grid, y - coarse))
    return OrbitFit(
        distance=float(dist),
        theta=theta,
        y=np.asarray(y, dtype=float),
        norm_kind=norm_kind,
        coarse_y=coarse,
        polish_moved=bool(np.any(shift > grid.spacing)),
    )

import json
import math

import numpy as np
import pytest

from lognls.functionals import charge, nehari
from lognls.gausson import GaussonParams, d_closed, elliptic_residual, gausson_field, orbit_element
from lognls.ground_state import MinimizeOptions, align_to_orbit, anisotropic_init, minimize_action, random_init
from lognls.grid import Field


@pytest.mark.parametrize("kwargs", [dict(max_iters=0), dict(grad_tol=0.0), dict(step_init=-1.0), dict(backtrack_factor=1.0)])
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        MinimizeOptions(**kwargs)


def _check_result(res, omega, dim):
    q = charge(res.minimizer)
    assert abs(nehari(res.minimizer, omega)) <= 1e-8 * q
    actions = [a for _, a, _ in res.trace]
    assert all(b <= a * (1 + 1e-14) for a, b in zip(actions, actions[1:]))
    assert q == pytest.approx(2 * res.action_value, rel=1e-10)
    assert res.action_value >= d_closed(omega, dim) * (1 - 1e-3)


@pytest.mark.parametrize("omega", [-1.0, 0.0, 1.0])
def test_random_init_1d(omega, grid1):
    res = minimize_action(omega, grid1, "random", MinimizeOptions(seed=3))
    assert res.converged
    assert res.relative_error <= 1e-3
    assert res.orbit_distance_l2 <= 1e-3
    assert elliptic_residual(res.minimizer, omega) <= 1e-3
    _check_result(res, omega, 1)


def test_gausson_perturbed_init(grid1):
    res = minimize_action(0.0, grid1, "gausson-perturbed", MinimizeOptions(seed=1))
    assert res.converged and res.relative_error <= 1e-3
    _check_result(res, 0.0, 1)


def test_fixed_point(grid1):
    phi = gausson_field(GaussonParams(0.5, 1), grid1)
    res = minimize_action(0.5, grid1, phi, MinimizeOptions())
    assert res.converged and res.iterations <= 2
    assert res.action_value == pytest.approx(d_closed(0.5, 1), rel=1e-8)


def test_nonradial_2d(grid2):
    init = anisotropic_init(grid2)
    v = init.values
    c = grid2.points // 2
    assert not np.allclose(v[c, c:], v[c:, c])
    res = minimize_action(0.0, grid2, init, MinimizeOptions())
    assert res.converged
    assert res.orbit_distance_l2 <= 5e-3
    assert res.relative_error <= 1e-3
    _check_result(res, 0.0, 2)


def test_non_convergence_is_reported(grid1):
    res = minimize_action(0.0, grid1, "random", MinimizeOptions(max_iters=3))
    assert not res.converged
    assert res.iterations == 3
    assert len(res.trace) >= 1


def test_zero_init_rejected(grid1):
    with pytest.raises(ValueError):
        minimize_action(0.0, grid1, grid1.zeros(), MinimizeOptions())
    with pytest.raises(ValueError):
        minimize_action(0.0, grid1, "nonsense", MinimizeOptions())


def test_random_init_is_seeded_and_nonradial(grid1):
    a, b = random_init(grid1, seed=4), random_init(grid1, seed=4)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, random_init(grid1, seed=5).values)
    assert not np.allclose(np.abs(a.values), np.abs(a.values[::-1]))


def test_align_examples(grid1, phi0):
    u = orbit_element(GaussonParams(0.0, 1), 0.7, [1.0], grid1)
    theta, y, dist = align_to_orbit(u, 0.0, "L2")
    assert dist <= 1e-8
    assert theta == pytest.approx(0.7, abs=1e-8)
    assert y[0] == pytest.approx(1.0, abs=1e-8)
    theta, y, dist = align_to_orbit(phi0, 0.0, "L2")
    assert dist <= 1e-10 and abs(theta) < 1e-10 and abs(y[0]) < 1e-10
    bump = Field(grid1, np.exp(-((grid1.axis - 0.8) ** 2)))
    delta = 1e-2
    u = phi0 + bump * (delta / math.sqrt(charge(bump)))
    _, _, dist = align_to_orbit(u, 0.0, "L2")
    assert 0 < dist <= 2 * delta
    with pytest.raises(ValueError):
        align_to_orbit(grid1.zeros(), 0.0)


def test_result_serialization(grid1):
    jsonschema = pytest.importorskip("jsonschema")
    from lognls.io import load_schema

    res = minimize_action(0.0, grid1, "random", MinimizeOptions(max_iters=50))
    doc = json.loads(res.to_json())
    jsonschema.validate(doc, load_schema("groundstate"))
    assert doc["d_closed_ref"] == d_closed(0.0, 1)

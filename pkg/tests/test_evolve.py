import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lognls.evolve import (
    EvolutionAborted,
    EvolveOptions,
    evolve_run,
    nonlinear_phase_step,
    standing_wave_error,
    strang_step,
)
from lognls.functionals import charge
from lognls.gausson import GaussonParams, gausson_field, orbit_element
from lognls.grid import Field, make_grid

from conftest import random_field


@pytest.mark.parametrize(
    "kwargs",
    [dict(dt=0.0), dict(dt=-1e-3), dict(dt=1e-2, t_final=1e-3), dict(amp_floor=0.0), dict(diagnostics_every=0)],
)
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        EvolveOptions(**kwargs)


def test_phase_step_examples(grid1, rng):
    one = Field(grid1, np.ones(grid1.shape))
    assert np.array_equal(nonlinear_phase_step(one, 0.37).values, one.values)
    c = math.exp(0.5)
    out = nonlinear_phase_step(Field(grid1, np.full(grid1.shape, c)), 0.25)
    assert np.abs(out.values - c * np.exp(0.25j)).max() < 1e-15
    u = random_field(grid1, rng)
    assert np.abs(np.abs(nonlinear_phase_step(u, 0.1).values) - np.abs(u.values)).max() < 1e-15


def test_phase_step_floor(grid1):
    v = np.full(grid1.shape, 1e-20 + 0j)  # |u|^2 = 1e-40 < amp_floor
    assert np.array_equal(nonlinear_phase_step(Field(grid1, v), 1.0).values, v)


def test_strang_identity_and_reversal(grid1, rng):
    u = random_field(grid1, rng) * 2
    assert strang_step(u, 0.0) is u
    w = u
    for _ in range(50):
        w = strang_step(w, 1e-2)
    for _ in range(50):
        w = strang_step(w, -1e-2)
    assert math.sqrt(charge(w - u)) <= 1e-10


def test_strang_charge_many_steps(phi0):
    diag = evolve_run(phi0 * 1.2, EvolveOptions(dt=1e-3, t_final=10.0, diagnostics_every=1000))
    assert diag.max_charge_drift <= 1e-11


def test_standing_wave(phi0):
    errs = []
    for dt in (1e-3, 5e-4):
        diag = evolve_run(phi0, EvolveOptions(dt=dt, t_final=5.0, diagnostics_every=10**6))
        errs.append(standing_wave_error(phi0, diag.final, 0.0, 5.0))
        assert diag.max_energy_drift <= 1e-5
        assert diag.max_charge_drift <= 1e-11
    assert errs[0] <= 1e-4
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_standing_wave_nonzero_omega(grid1):
    phi = gausson_field(GaussonParams(0.7, 1), grid1)
    diag = evolve_run(phi, EvolveOptions(dt=1e-3, t_final=1.0, diagnostics_every=10**6))
    assert standing_wave_error(phi, diag.final, 0.7, 1.0) <= 1e-5 * math.sqrt(charge(phi))


def test_equivariance(grid1, phi0):
    opts = EvolveOptions(dt=1e-3, t_final=1.0, diagnostics_every=100)
    base = evolve_run(phi0 * 1.05, opts)
    moved = evolve_run(orbit_element(GaussonParams(0.0, 1), 0.9, [2.0], grid1) * 1.05, opts)
    for a, b in ((base.charge, moved.charge), (base.energy, moved.energy)):
        assert np.allclose(a, b, rtol=1e-10, atol=1e-10)


def test_off_standing_wave_conserves(phi0):
    diag = evolve_run(phi0 * 1.05, EvolveOptions(dt=1e-3, t_final=5.0))
    assert diag.max_charge_drift <= 1e-11
    assert diag.max_energy_drift <= 1e-5


def test_diagnostics_schedule_and_csv(phi0):
    diag = evolve_run(phi0, EvolveOptions(dt=1e-2, t_final=1.0, diagnostics_every=30, snapshot_every=50))
    assert diag.times[0] == 0.0 and diag.times[-1] == pytest.approx(1.0)
    assert len(diag.times) == len(diag.charge_drift) == len(diag.energy_drift) == len(diag.boundary_mass) == 5
    assert min(diag.charge_drift) >= 0 and min(diag.energy_drift) >= 0
    assert [t for t, _ in diag.snapshots] == pytest.approx([0.0, 0.5, 1.0])
    lines = diag.to_csv().splitlines()
    assert lines[0] == "t,charge,energy,charge_drift,energy_drift,boundary_mass"
    assert len(lines) == 6
    assert not diag.boundary_warning


def test_boundary_warning(grid1, caplog):
    wide = Field(grid1, np.exp(-grid1.radius_sq / (2 * 5.0**2)))
    diag = evolve_run(wide, EvolveOptions(dt=1e-2, t_final=0.1))
    assert diag.boundary_warning
    assert any("boundary mass" in r.message for r in caplog.records)


def test_observer_called_at_schedule(phi0):
    seen = []
    evolve_run(phi0, EvolveOptions(dt=1e-2, t_final=0.5, diagnostics_every=10), observer=lambda t, u: seen.append(t))
    assert seen == pytest.approx([0.0, 0.1, 0.2, 0.3, 0.4, 0.5])


def test_nan_abort_keeps_partial(grid1, monkeypatch):
    import lognls.evolve as ev

    calls = {"n": 0}
    real = ev._advance

    def poisoned(values, *args):
        calls["n"] += 1
        out = real(values, *args)
        if calls["n"] == 3:
            out = out.copy()
            out[0] = np.nan
        return out

    monkeypatch.setattr(ev, "_advance", poisoned)
    phi = gausson_field(GaussonParams(0.0, 1), grid1)
    with pytest.raises(EvolutionAborted) as info:
        evolve_run(phi, EvolveOptions(dt=1e-2, t_final=1.0, diagnostics_every=10))
    assert len(info.value.diagnostics.times) == 3
    assert isinstance(info.value, FloatingPointError)


@settings(max_examples=20, deadline=None)
@given(dt=st.floats(1e-4, 0.2))
def test_modulus_invariance_property(dt):
    g = make_grid(1, 12.0, 64)
    u = random_field(g, np.random.default_rng(0)) * 3
    assert np.abs(np.abs(nonlinear_phase_step(u, dt).values) - np.abs(u.values)).max() < 1e-14
    assert charge(strang_step(u, dt)) == pytest.approx(charge(u), rel=1e-13)

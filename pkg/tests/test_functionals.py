import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from lognls.functionals import (
    FunctionalReport,
    a_pointwise,
    action,
    b_pointwise,
    charge,
    energy,
    entropy_term,
    f_pointwise,
    h1_norm,
    log_sobolev_gap,
    luxemburg_norm,
    nehari,
    nehari_rescale,
    orlicz_integral,
    report,
    w_norm,
)
from lognls.gausson import GaussonParams, d_closed, gausson_field
from lognls.grid import Field, kinetic, make_grid

from conftest import random_field

E = math.e
SQPI = math.sqrt(math.pi)


def _a_ref(s):
    # written out independently of the package
    if s <= math.exp(-3):
        return 0.0 if s == 0 else -2 * s * s * math.log(s)
    return 3 * s * s + 4 * math.exp(-3) * s - math.exp(-6)


def luxemburg_oracle_phi0():
    """k with int_R A(e^{1/2} e^{-x^2/2} / k) dx = 1, by adaptive quadrature on the real line."""

    def mass(k):
        amp = math.exp(0.5) / k
        f = lambda x: _a_ref(amp * math.exp(-x * x / 2))
        seam = math.sqrt(2 * math.log(amp) + 6) if amp > math.exp(-3) else 0.0
        pts = [0.0, seam, 60.0] if seam else [0.0, 60.0]
        total = sum(quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)[0] for a, b in zip(pts, pts[1:]))
        return 2 * total

    return brentq(lambda k: mass(k) - 1.0, 0.5, 20.0, xtol=1e-15, rtol=1e-15)


# frozen from luxemburg_oracle_phi0(); agrees with a 30-digit mpmath evaluation
LUXEMBURG_PHI0_1D = 4.203120270037837


def test_charge_examples(grid1, grid2, phi0):
    assert abs(charge(phi0) - SQPI * E) < 1e-8
    assert charge(grid1.zeros()) == 0.0
    assert abs(charge(gausson_field(GaussonParams(0.0, 2), grid2)) - math.pi * E**2) < 1e-8


def test_entropy_examples(grid1, phi0, rng):
    assert abs(entropy_term(phi0) - E * SQPI / 2) < 1e-8
    assert entropy_term(Field(grid1, np.exp(1j * grid1.axis))) == pytest.approx(0.0, abs=1e-14)
    u = random_field(grid1, rng)
    scaled = entropy_term(u * 2) - (4 * entropy_term(u) + 4 * math.log(4) * charge(u))
    assert abs(scaled) < 1e-12 * charge(u)


def test_energy_examples(grid1, grid2):
    for dim, grid in ((1, grid1), (2, grid2)):
        assert abs(energy(gausson_field(GaussonParams(0.0, dim), grid))) < 1e-8
    phi1 = gausson_field(GaussonParams(1.0, 1), grid1)
    assert energy(phi1) == pytest.approx(-0.5 * SQPI * E**2, rel=1e-7)
    assert energy(grid1.zeros()) == 0.0


@pytest.mark.parametrize("omega", [-1.0, 0.0, 1.0, 2.5])
@pytest.mark.parametrize("dim", [1, 2])
def test_gausson_action_nehari(omega, dim, grid1, grid2):
    grid = grid1 if dim == 1 else grid2
    phi = gausson_field(GaussonParams(omega, dim), grid)
    q = charge(phi)
    assert abs(nehari(phi, omega)) <= 1e-7 * q
    assert action(phi, omega) == pytest.approx(d_closed(omega, dim), rel=1e-8)
    assert energy(phi) == pytest.approx(-omega * d_closed(omega, dim), rel=1e-7, abs=1e-8)


def test_action_nehari_identity(grid1):
    rng = np.random.default_rng(5)
    for _ in range(50):
        u = random_field(grid1, rng) * 10 ** rng.uniform(-1, 1)
        omega = rng.uniform(-2, 2)
        lhs = action(u, omega) - 0.5 * nehari(u, omega)
        assert lhs == pytest.approx(0.5 * charge(u), rel=1e-12)


def test_pointwise_examples():
    assert a_pointwise(math.exp(-3)) == pytest.approx(6 * math.exp(-6), rel=1e-15)
    assert a_pointwise(0.0) == 0.0
    assert b_pointwise(0.0) == 0.0
    # F(1) = 0, so B(1) = A(1) = 3 + 4e^-3 - e^-6
    assert b_pointwise(1.0) == pytest.approx(3 + 4 * math.exp(-3) - math.exp(-6), rel=1e-15)
    assert b_pointwise(1.0) == pytest.approx(3.196669521, abs=1e-9)
    for bad in (-1e-3, -1.0):
        with pytest.raises(ValueError):
            a_pointwise(bad)
        with pytest.raises(ValueError):
            b_pointwise(bad)


@settings(max_examples=200, deadline=None)
@given(s=st.floats(0, 1e3))
def test_a_matches_reference_and_split(s):
    assert a_pointwise(s) == pytest.approx(_a_ref(s), rel=1e-14, abs=1e-300)
    f, a, b = f_pointwise(s), a_pointwise(s), b_pointwise(s)
    assert f == pytest.approx(b - a, rel=1e-13, abs=1e-13 * max(a, b, 1e-300))


def test_a_shape():
    s = np.concatenate([np.linspace(0, 0.2, 4001), np.linspace(0.2, 50, 4001)])
    a = a_pointwise(s)
    assert np.all(a >= 0)
    assert np.all(np.diff(a) >= 0)
    second = a[2:4001] - 2 * a[1:4000] + a[:3999]
    assert np.all(second >= -1e-15)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_luxemburg_oracle_is_frozen():
    assert luxemburg_oracle_phi0() == pytest.approx(LUXEMBURG_PHI0_1D, rel=1e-12)


def test_luxemburg_examples(grid1, phi0, rng):
    assert luxemburg_norm(grid1.zeros()) == 0.0
    k = luxemburg_norm(phi0)
    assert abs(orlicz_integral(phi0, k) - 1.0) < 1e-10
    # A is only C^1 at the seam, so the rectangle rule converges algebraically here
    assert k == pytest.approx(LUXEMBURG_PHI0_1D, rel=1e-8)
    fine = gausson_field(GaussonParams(0.0, 1), make_grid(1, 12.0, 1024))
    assert luxemburg_norm(fine) == pytest.approx(LUXEMBURG_PHI0_1D, rel=1e-10)
    u = random_field(grid1, rng)
    assert luxemburg_norm(u * 3) == pytest.approx(3 * luxemburg_norm(u), rel=1e-10)


def test_w_norm_examples(grid1, phi0, rng):
    assert w_norm(grid1.zeros()) == 0.0
    u = random_field(grid1, rng)
    assert w_norm(u) >= h1_norm(u)
    h1 = math.sqrt(SQPI * E + E * SQPI / 2)
    assert w_norm(phi0) == pytest.approx(h1 + LUXEMBURG_PHI0_1D, rel=1e-8)


def test_log_sobolev_examples(grid1, phi0):
    f = Field(grid1, np.exp(-math.pi * grid1.radius_sq / 2))
    assert abs(log_sobolev_gap(f, 1.0)) < 1e-9
    assert abs(log_sobolev_gap(phi0, SQPI)) < 1e-9
    with pytest.raises(ValueError):
        log_sobolev_gap(grid1.zeros(), 1.0)
    with pytest.raises(ValueError):
        log_sobolev_gap(phi0, 0.0)


def test_log_sobolev_sweep(grid1):
    rng = np.random.default_rng(11)
    for _ in range(100):
        u = random_field(grid1, rng, width=rng.uniform(1.0, 2.5)) * 10 ** rng.uniform(-1, 1)
        for alpha in (0.5, 1.0, SQPI, 3.0):
            assert log_sobolev_gap(u, alpha) >= -1e-9


@pytest.mark.parametrize("omega", [-1.0, 0.0, 1.0])
def test_nehari_rescale_examples(grid1, omega):
    phi = gausson_field(GaussonParams(omega, 1), grid1)
    assert np.abs(nehari_rescale(phi, omega).values - phi.values).max() < 1e-12
    for lam in (0.5, 2.0, 5.0):
        assert np.abs(nehari_rescale(phi * lam, omega).values - phi.values).max() < 1e-12
    with pytest.raises(ValueError):
        nehari_rescale(grid1.zeros(), omega)


def test_nehari_rescale_random(grid1):
    rng = np.random.default_rng(3)
    for _ in range(100):
        u = random_field(grid1, rng) * 10 ** rng.uniform(-1, 1)
        v = nehari_rescale(u, 0.3)
        assert abs(nehari(v, 0.3)) <= 1e-10 * max(1.0, charge(v))


def test_report_identities_and_serialization(grid1, rng):
    u = random_field(grid1, rng) * 2.0
    rep = report(u, 0.4)
    rel = lambda a, b: abs(a - b) <= 1e-12 * max(abs(a), abs(b), rep.charge)
    assert rel(rep.energy, 0.5 * rep.kinetic - 0.5 * rep.entropy)
    assert rel(rep.action, rep.energy + 0.7 * rep.charge)
    assert rel(rep.nehari, rep.kinetic + 0.4 * rep.charge - rep.entropy)
    assert rel(rep.action - 0.5 * rep.nehari, 0.5 * rep.charge)
    assert rel(rep.w_norm, rep.h1_norm + rep.luxemburg)
    assert rep.kinetic == pytest.approx(kinetic(u), rel=1e-15)

    cols = ["omega", "charge", "kinetic", "entropy", "energy", "action", "nehari", "luxemburg", "h1_norm", "w_norm"]
    assert FunctionalReport.columns() == cols
    assert list(json.loads(rep.to_json())) == cols
    header, row = rep.to_csv().strip().splitlines()
    assert header.split(",") == cols
    assert [float(x) for x in row.split(",")] == rep.csv_row()


def test_report_validates_schema(grid1, phi0):
    jsonschema = pytest.importorskip("jsonschema")
    from lognls.io import load_schema

    jsonschema.validate(report(phi0, 0.0).to_dict(), load_schema("functional_report"))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wbblood.geometry import Grid, build_profile
from wbblood.state import (
    SQRT_PI,
    PhysicalParams,
    PositivityError,
    State,
    celerity,
    cfl_dt,
    eigenvalues,
    elastic_pressure,
    moens_korteweg,
    physical_flux,
    pressure_flux_term,
)

RHO = 1060.0


def test_celerity_uniform_vessel():
    # sqrt(1e7 * 1e-2 / (2 * 1060))
    assert celerity(np.pi * 1e-4, 1e7, RHO) == pytest.approx(6.868028197434452, rel=1e-14)


def test_celerity_quarter_power():
    assert celerity(16 * 3e-5, 1e7, RHO) == pytest.approx(2 * celerity(3e-5, 1e7, RHO), rel=1e-15)


@pytest.mark.parametrize("A", [0.0, -1e-6, np.nan])
def test_celerity_rejects_non_positive_area(A):
    with pytest.raises(ValueError):
        celerity(A, 1e7, RHO)


def test_moens_korteweg():
    assert moens_korteweg(1e7, 1e-2, RHO) == pytest.approx(6.868028197434452, rel=1e-14)
    assert moens_korteweg(4e7, 1e-2, RHO) == pytest.approx(2 * 6.868028197434452, rel=1e-14)
    with pytest.raises(ValueError):
        moens_korteweg(0.0, 1e-2, RHO)


@settings(max_examples=200)
@given(R0=st.floats(1e-4, 5e-2), k=st.floats(1e5, 1e10), rho=st.floats(500.0, 2000.0))
def test_celerity_matches_moens_korteweg_at_rest(R0, k, rho):
    assert celerity(np.pi * R0 * R0, k, rho) == pytest.approx(moens_korteweg(k, R0, rho), rel=1e-14)


def test_pressure_flux_term_values():
    assert pressure_flux_term(0.0, 1e7, RHO) == 0.0
    assert pressure_flux_term(1.0, 3 * RHO * SQRT_PI, RHO) == pytest.approx(1.0, rel=1e-15)
    # 1e7 * (pi 16e-6)**1.5 / (3 * 1060 * sqrt(pi)), evaluated independently
    assert pressure_flux_term(np.pi * 16e-6, 1e7, RHO) == pytest.approx(6.322702195903986e-4, rel=1e-14)


def test_physical_flux():
    A, k = 5e-5, 1e7
    f1, f2 = physical_flux(A, 0.0, k, RHO)
    assert f1 == 0.0 and f2 == pressure_flux_term(A, k, RHO)
    f1, f2 = physical_flux(1.0, 2.0, 0.0, RHO)
    assert (f1, f2) == (2.0, 4.0)


@pytest.mark.parametrize("A", [0.0, -1.0])
def test_physical_flux_rejects_non_positive_area(A):
    with pytest.raises(ValueError):
        physical_flux(A, 0.0, 1e7, RHO)


def test_pressure_monotone_in_area():
    A = np.logspace(-9, -2, 400)
    _, f2 = physical_flux(A, np.zeros_like(A), 1e7, RHO)
    assert np.all(np.diff(f2) > 0.0)


def test_eigenvalues():
    A, k = 5e-5, 1e7
    c = celerity(A, k, RHO)
    assert eigenvalues(A, 0.0, k, RHO) == (-c, c)
    l1, l2 = eigenvalues(A, 0.5 * c * A, k, RHO)
    assert l1 < 0.0 < l2
    l1, _ = eigenvalues(A, c * A, k, RHO)
    assert l1 == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=200)
@given(A=st.floats(1e-8, 1e-2), u=st.floats(-50.0, 50.0), k=st.floats(1e5, 1e10))
def test_strict_hyperbolicity(A, u, k):
    l1, l2 = eigenvalues(A, u * A, k, RHO)
    assert np.isfinite(l1) and np.isfinite(l2) and l1 < l2


def test_cfl_dt_uniform_rest():
    g = Grid(1500, 3.0)
    p = build_profile("uniform", dict(R0=1e-2, k=1e7), g)
    s = State(p.A0.copy(), np.zeros(g.J))
    dt = cfl_dt(s, p, PhysicalParams(RHO), g.dx)
    assert dt == pytest.approx(2.9120439557122073e-4, rel=1e-14)
    assert cfl_dt(s, p, PhysicalParams(RHO), g.dx / 2) == pytest.approx(dt / 2, rel=1e-15)
    assert cfl_dt(s, p, PhysicalParams(RHO), g.dx, n_cfl=0.5) == pytest.approx(dt / 2, rel=1e-15)


@pytest.mark.parametrize("n_cfl", [0.0, 1.5, -0.1])
def test_cfl_dt_rejects_bad_number(n_cfl):
    g = Grid(10, 1.0)
    p = build_profile("uniform", dict(R0=1e-2, k=1e7), g)
    with pytest.raises(ValueError):
        cfl_dt(State(p.A0.copy(), np.zeros(10)), p, PhysicalParams(), g.dx, n_cfl)


def test_cfl_dt_flags_positivity_loss():
    g = Grid(3, 1.0)
    p = build_profile("uniform", dict(R0=1e-2, k=1e7), g)
    A = p.A0.copy()
    A[1] = -1e-9
    with pytest.raises(PositivityError) as info:
        cfl_dt(State(A, np.zeros(3), t=0.25), p, PhysicalParams(), g.dx)
    assert info.value.cell == 1 and info.value.t == 0.25


def test_elastic_pressure():
    assert elastic_pressure(3e-5, 3e-5, 1e7, 1.3e4) == 1.3e4
    assert elastic_pressure(4.0, 1.0, math.sqrt(math.pi), 0.0) == pytest.approx(1.0, rel=1e-15)
    assert elastic_pressure(2e-5, 3e-5, 1e7, 0.0) < 0.0


@pytest.mark.parametrize("kwargs", [dict(rho=0.0), dict(Cf=-1.0), dict(Cv=-0.1), dict(Cv=np.array([0.1, -0.1]))])
def test_physical_params_validation(kwargs):
    with pytest.raises(ValueError):
        PhysicalParams(**kwargs)

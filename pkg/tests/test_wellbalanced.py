import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wbblood.boundary import BoundarySpec
from wbblood.geometry import ArteryProfile, Grid, build_profile
from wbblood.state import PhysicalParams, State, pressure_flux_term
from wbblood.timestepper import SchemeConfig, SourceMode, convective_step
from wbblood.wellbalanced import (
    centered_source,
    centered_source_all,
    hydrostatic_reconstruct,
    reconstruct_sqrt,
    source_correction,
)

RHO = 1060.0


def test_identity_on_flat_data():
    A, k = 5e-5, 1e7
    a0b = k * np.sqrt(4e-5)
    s = hydrostatic_reconstruct(A, 0.3, k, a0b, A, -0.1, k, a0b)
    assert s.A_L_rec == pytest.approx(A, rel=1e-15) and s.A_R_rec == pytest.approx(A, rel=1e-15)
    assert s.k_star == k
    assert s.u_L == 0.3 and s.u_R == -0.1


def test_hand_example_area_step():
    # k = 1, sqrt(A0) = 1 | 0.9, at rest
    s = hydrostatic_reconstruct(1.0, 0.0, 1.0, 1.0, 0.81, 0.0, 1.0, 0.9)
    assert s.A_L_rec == pytest.approx(0.81, rel=1e-15)
    assert s.A_R_rec == pytest.approx(0.81, rel=1e-15)


def test_hand_example_stiffness_step():
    # k: 2 | 1, A0: 1 | 4, so A0_bold = 2 on both sides; at rest
    s = hydrostatic_reconstruct(1.0, 0.0, 2.0, 2.0, 4.0, 0.0, 1.0, 2.0)
    assert s.k_star == 2.0
    assert s.A_L_rec == pytest.approx(1.0, rel=1e-15)
    assert s.A_R_rec == pytest.approx(1.0, rel=1e-15)


@settings(max_examples=300)
@given(A=st.floats(1e-6, 1e-3), k=st.floats(1e5, 1e9), r0=st.floats(1e-3, 2e-2), f=st.floats(0.5, 2.0))
def test_rest_state_reconstructs_to_equal_heads(A, k, r0, f):
    # Two cells at rest on the same head: the reconstructed areas coincide.
    a0b_i = k * np.sqrt(np.pi) * r0
    a0b_j = k * np.sqrt(np.pi) * r0 * f
    A_j = (np.sqrt(A) + (a0b_j - a0b_i) / k) ** 2
    if not np.sqrt(A) + (a0b_j - a0b_i) / k > 0.0:
        return
    s = hydrostatic_reconstruct(A, 0.0, k, a0b_i, A_j, 0.0, k, a0b_j)
    assert s.A_L_rec == pytest.approx(s.A_R_rec, rel=1e-10)


@settings(max_examples=300)
@given(AL=st.floats(1e-6, 1e-3), AR=st.floats(1e-6, 1e-3), kL=st.floats(1e5, 1e9), kR=st.floats(1e5, 1e9),
       bL=st.floats(0.0, 1e6), bR=st.floats(0.0, 1e6))
def test_reconstructed_areas_bounded(AL, AR, kL, kR, bL, bR):
    s = hydrostatic_reconstruct(AL, 0.0, kL, bL, AR, 0.0, kR, bR)
    assert s.k_star == max(kL, kR)
    assert 0.0 <= s.A_L_rec <= AL * (1 + 1e-14)
    assert 0.0 <= s.A_R_rec <= AR * (1 + 1e-14)


def test_reconstruction_dries_and_zeros_discharge():
    s = hydrostatic_reconstruct(1e-6, 5.0, 1.0, 0.0, 1e-6, 5.0, 1.0, 10.0)
    assert s.A_R_rec == 0.0 and s.Q_R_rec == 0.0
    assert s.Q_L_rec == pytest.approx(5e-6, rel=1e-15)


def test_source_correction():
    z, s2 = source_correction(5e-5, 1e7, 5e-5, 1e7, RHO)
    assert z == 0.0 and s2 == 0.0
    z, s2 = source_correction(5e-5, 1e7, 4e-5, 1e7, RHO)
    assert s2 == pytest.approx(pressure_flux_term(5e-5, 1e7, RHO) - pressure_flux_term(4e-5, 1e7, RHO),
                               rel=1e-15)


def test_centered_source_zero_on_uniform_vessel():
    g = Grid(20, 1.0)
    p = build_profile("uniform", dict(R0=4e-3, k=1e7), g)
    assert np.all(centered_source_all(p, p.A0, RHO, g.dx) == 0.0)


def test_centered_source_exact_for_linear_profile():
    g = Grid(10, 1.0)
    k = np.full(10, 1e7)
    R0 = 4e-3 + 1e-3 * g.x
    p = ArteryProfile.from_radius(R0, k, g)
    A = np.full(10, 5e-5)
    got = centered_source_all(p, A, RHO, g.dx)
    # d/dx(k sqrt(pi) R0) = k sqrt(pi) 1e-3 exactly for a linear radius
    expected = A / (np.sqrt(np.pi) * RHO) * 1e7 * np.sqrt(np.pi) * 1e-3
    np.testing.assert_allclose(got, expected, rtol=1e-10)
    _, s2 = centered_source(p, State(A, np.zeros(10)), RHO, g.dx, 4)
    assert s2 == got[4]


@pytest.mark.parametrize("i", [-1, 10])
def test_centered_source_index_error(i):
    g = Grid(10, 1.0)
    p = build_profile("uniform", dict(R0=4e-3, k=1e7), g)
    with pytest.raises(IndexError):
        centered_source(p, State(p.A0.copy(), np.zeros(10)), RHO, g.dx, i)


@pytest.mark.parametrize("mode, exact", [(SourceMode.HSR, True), (SourceMode.CENTERED, False)])
def test_one_step_rest_invariance(mode, exact):
    g = Grid(60, 0.14)
    p = build_profile("aneurysm-bump",
                      dict(R0=4e-3, dR=1e-3, x1=1e-2, x2=3.05e-2, x3=4.95e-2, x4=7e-2, k=4e8), g)
    s0 = State(p.A0.copy(), np.zeros(g.J))
    s1 = convective_step(s0, p, PhysicalParams(RHO), SchemeConfig(mode), 1e-6, BoundarySpec())
    if exact:
        np.testing.assert_array_equal(s1.A, s0.A)
        np.testing.assert_array_equal(s1.Q, 0.0)
    else:
        assert np.max(np.abs(s1.Q)) > 0.0


def test_discrete_source_is_first_order_consistent():
    # [P(A_L at i+1/2, k*) - P(A_R at i-1/2, k*)] / dx approaches the centred source.
    errors = []
    for J in (50, 100, 200, 400, 800):
        g = Grid(J, 1.0)
        x = g.x
        k = 1e7 * (1 + 0.3 * np.sin(2 * np.pi * x))
        p = ArteryProfile.from_radius(4e-3 * (1 + 0.2 * np.cos(2 * np.pi * x)), k, g)
        A = p.A0 * (1 + 0.1 * np.sin(np.pi * x))
        s = np.sqrt(A)
        sL, sR, ks = reconstruct_sqrt(s[:-1], k[:-1], p.A0_bold[:-1], s[1:], k[1:], p.A0_bold[1:])
        S = (pressure_flux_term(sL**2, ks, RHO)[1:] - pressure_flux_term(sR**2, ks, RHO)[:-1]) / g.dx
        C = centered_source_all(p, A, RHO, g.dx)[1:-1]
        errors.append(np.abs(S - C).max() / np.abs(C).max())
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(orders > 0.9)

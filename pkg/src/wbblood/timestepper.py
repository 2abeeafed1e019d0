"""One time step: convection, friction, viscoelastic diffusion (Lie splitting)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .boundary import NGHOST, BoundarySpec, fill_ghosts
from .riemann import hll_flux_unchecked
from .state import PhysicalParams, PositivityError, State, cfl_dt, pressure_flux_term
from .wellbalanced import centered_source_all, reconstruct_sqrt


class SourceMode(str, Enum):
    HSR = "hsr"
    CENTERED = "centered"


@dataclass(frozen=True)
class SchemeConfig:
    source_mode: SourceMode = SourceMode.HSR
    n_cfl: float = 1.0
    enable_friction: bool = False
    enable_viscoelastic: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "source_mode", SourceMode(self.source_mode))
        if not 0.0 < self.n_cfl <= 1.0:
            raise ValueError(f"CFL number must lie in (0, 1], got {self.n_cfl!r}")


@dataclass
class SimState:
    """Solver state plus the running boundary mass budget.

    ``boundary_mass`` holds the per-step net mass inflow
    ``dt * (F1_left - F1_right)``; sum with :func:`math.fsum`.
    """

    state: State
    steps: int = 0
    boundary_mass: list[float] = field(default_factory=list)

    @property
    def t(self) -> float:
        return self.state.t

    def net_boundary_mass(self) -> float:
        return math.fsum(self.boundary_mass)


def interface_fluxes(state: State, profile, params: PhysicalParams, mode: SourceMode,
                     boundary: BoundarySpec, t: float | None = None):
    """Mass flux and the two momentum fluxes at the ``J + 1`` interfaces.

    Returns ``(F1, G_left, G_right)`` where ``G_left[m]`` is the momentum
    flux seen by the cell left of interface ``m`` and ``G_right[m]`` the one
    seen by the cell to its right. In HSR mode both omit the cell pressure
    ``P(A_i, k_i)``, which enters both corrected fluxes of cell ``i`` and
    cancels in the update; dropping it lets a balanced interface contribute
    exactly zero. In CENTERED mode ``G_left == G_right``.
    """
    ext = fill_ghosts(state, boundary, profile, params, state.t if t is None else t)
    g = NGHOST
    lo, hi = g - 1, g + profile.J + 1          # cells -1 .. J
    A = ext.A[lo:hi]
    Q = ext.Q[lo:hi]
    k = ext.k[lo:hi]
    rho = params.rho

    if mode is SourceMode.HSR:
        sqrtA = np.sqrt(A)
        u = Q / A
        a0b = ext.A0_bold[lo:hi]
        sL, sR, k_star = reconstruct_sqrt(sqrtA[:-1], k[:-1], a0b[:-1], sqrtA[1:], k[1:], a0b[1:])
        AL = sL * sL
        AR = sR * sR
        QL = np.where(AL > 0.0, AL * u[:-1], 0.0)
        QR = np.where(AR > 0.0, AR * u[1:], 0.0)
        f1, f2 = hll_flux_unchecked(AL, QL, AR, QR, k_star, k_star, rho)
        g_left = f2 - pressure_flux_term(AL, k_star, rho)
        g_right = f2 - pressure_flux_term(AR, k_star, rho)
        return f1, g_left, g_right

    f1, f2 = hll_flux_unchecked(A[:-1], Q[:-1], A[1:], Q[1:], k[:-1], k[1:], rho)
    return f1, f2, f2


def _convective(state, profile, params, mode, dt, dx, boundary):
    f1, g_left, g_right = interface_fluxes(state, profile, params, mode, boundary)
    lam = dt / dx
    A_new = state.A - lam * (f1[1:] - f1[:-1])
    Q_new = state.Q - lam * (g_left[1:] - g_right[:-1])
    if mode is SourceMode.CENTERED:
        Q_new = Q_new + dt * centered_source_all(profile, state.A, params.rho, dx)
    bad = np.flatnonzero(~(A_new > 0.0))
    if bad.size:
        i = int(bad[0])
        raise PositivityError(i, state.t + dt, float(A_new[i]))
    return A_new, Q_new, float(f1[0]), float(f1[-1])


def convective_step(state: State, profile, params: PhysicalParams, cfg: SchemeConfig,
                    dt: float, boundary: BoundarySpec, dx: float | None = None) -> State:
    """Explicit first-order finite-volume update over ``dt``.

    HSR mode uses reconstructed interface states, the HLL flux at ``k*`` and
    the pressure corrections; CENTERED mode uses plain HLL fluxes on cell
    values plus ``dt`` times the centred geometric source.
    """
    dx = profile.length / profile.J if dx is None else dx
    A, Q, _, _ = _convective(state, profile, params, cfg.source_mode, dt, dx, boundary)
    return State(A=A, Q=Q, t=state.t + dt)


def friction_correct(state: State, params: PhysicalParams, dt: float) -> State:
    """Semi-implicit friction: ``A (u_new - u) / dt = -Cf u_new`` with ``A`` frozen."""
    if params.Cf == 0.0:
        return state
    Q = state.Q * (state.A / (state.A + params.Cf * dt))
    return State(A=state.A, Q=Q, t=state.t)


def viscoelastic_matrices(Cv, dt: float, dx: float, J: int):
    """Banded ``(I - L/2)`` and the face coefficients ``Cv_face dt / dx**2``.

    ``L`` is the conservative second difference with reflecting end rows;
    per-cell ``Cv`` is averaged to the faces.
    """
    Cv = np.asarray(Cv, dtype=float)
    if Cv.ndim == 0:
        mu = np.full(J - 1, float(Cv) * dt / dx**2)
    else:
        mu = 0.5 * (Cv[:-1] + Cv[1:]) * dt / dx**2
    diag = np.ones(J)
    diag[:-1] += 0.5 * mu
    diag[1:] += 0.5 * mu
    ab = np.zeros((3, J))
    ab[0, 1:] = -0.5 * mu
    ab[1] = diag
    ab[2, :-1] = -0.5 * mu
    return ab, mu


def viscoelastic_step(state: State, params: PhysicalParams, dt: float, dx: float) -> State:
    """Crank-Nicolson step of ``dQ/dt = d/dx(Cv dQ/dx)`` with Neumann ends; ``A`` frozen."""
    if np.all(np.asarray(params.Cv) == 0.0):
        return state
    Q = state.Q
    J = Q.size
    if J == 1:
        return state
    ab, mu = viscoelastic_matrices(params.Cv, dt, dx, J)
    off = np.abs(ab[0, 1:])
    row_off = np.zeros(J)
    row_off[:-1] += off
    row_off[1:] += off
    assert np.all(ab[1] >= row_off), "Crank-Nicolson matrix lost diagonal dominance"
    face = mu * (Q[1:] - Q[:-1])
    rhs = Q.copy()
    rhs[:-1] += 0.5 * face
    rhs[1:] -= 0.5 * face
    Q_new = solve_banded((1, 1), ab, rhs, check_finite=False)
    return State(A=state.A, Q=Q_new, t=state.t)


def step(sim: SimState, profile, params: PhysicalParams, cfg: SchemeConfig,
         boundary: BoundarySpec, dt: float, dx: float, t_next: float | None = None) -> SimState:
    """Advance ``sim`` in place by one split step of size ``dt``."""
    state = sim.state
    A, Q, f_in, f_out = _convective(state, profile, params, cfg.source_mode, dt, dx, boundary)
    new = State(A=A, Q=Q, t=state.t + dt if t_next is None else t_next)
    if cfg.enable_friction:
        new = friction_correct(new, params, dt)
    if cfg.enable_viscoelastic:
        new = viscoelastic_step(new, params, dt, dx)
    sim.state = new
    sim.steps += 1
    sim.boundary_mass.append(dt * (f_in - f_out))
    return sim


def advance(sim: SimState, profile, params: PhysicalParams, cfg: SchemeConfig,
            boundary: BoundarySpec, t_end: float,
            on_step: Callable[[SimState, float], None] | None = None) -> SimState:
    """Step until ``t_end``, shrinking the last step to land on it exactly."""
    if t_end < sim.t:
        raise ValueError(f"t_end={t_end!r} lies before the current time {sim.t!r}")
    dx = profile.length / profile.J
    while sim.t < t_end:
        dt = cfl_dt(sim.state, profile, params, dx, cfg.n_cfl)
        t_next = None
        if sim.t + dt >= t_end:
            dt = t_end - sim.t
            t_next = t_end
        step(sim, profile, params, cfg, boundary, dt, dx, t_next)
        if on_step is not None:
            on_step(sim, dt)
    return sim


def initial_sim(state: State) -> SimState:
    return SimState(state=replace(state))

"""Analytic and asymptotic reference solutions.

These are the independent checks the solver is measured against: rest
residuals, the exact tourniquet Riemann solution, linear pulse solutions for
a uniform vessel (pure translation, viscous envelope, heat-kernel
diffusion) and linear reflection/transmission coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .state import SQRT_PI, celerity, moens_korteweg, pressure_flux_term

_BISECT_RTOL = 1e-12


def rest_residual(state, profile) -> tuple[float, float]:
    """``(max |u|, max |(k sqrt(A) - A0_bold) - mean|)`` in SI units."""
    u = state.Q / state.A
    head = profile.k * np.sqrt(state.A) - profile.A0_bold
    return float(np.max(np.abs(u))), float(np.max(np.abs(head - head.mean())))


def _area_from_celerity(c, k, rho):
    sqrtA = 2.0 * rho * SQRT_PI * np.asarray(c) ** 2 / k
    return sqrtA * sqrtA


def shock_velocity(A_star, A_R, k, rho):
    """Post-shock velocity of a right-moving shock into ``(A_R, 0)``."""
    dP = pressure_flux_term(A_star, k, rho) - pressure_flux_term(A_R, k, rho)
    return np.sqrt(dP * (A_star - A_R) / (A_star * A_R))


@dataclass(frozen=True)
class RiemannSolution:
    """Left rarefaction, plateau ``(A_star, u_star)``, right shock at speed ``s``."""

    A_L: float
    A_R: float
    k: float
    rho: float
    A_star: float
    u_star: float
    s: float

    @property
    def c_L(self) -> float:
        return float(celerity(self.A_L, self.k, self.rho))

    @property
    def c_star(self) -> float:
        return float(celerity(self.A_star, self.k, self.rho))

    @property
    def fan_head(self) -> float:
        return -self.c_L

    @property
    def fan_tail(self) -> float:
        return self.u_star - self.c_star

    def sample(self, xi):
        """``(A, u)`` at similarity coordinates ``xi = x / t``."""
        xi = np.asarray(xi, dtype=float)
        A = np.full(xi.shape, self.A_R)
        u = np.zeros(xi.shape)
        left = xi <= self.fan_head
        A[left] = self.A_L
        fan = (xi > self.fan_head) & (xi < self.fan_tail)
        c = (4.0 * self.c_L - xi[fan]) / 5.0
        A[fan] = _area_from_celerity(c, self.k, self.rho)
        u[fan] = 4.0 * (self.c_L - c)
        plateau = (xi >= self.fan_tail) & (xi < self.s)
        A[plateau] = self.A_star
        u[plateau] = self.u_star
        return A, u

    def fan_invariant_residual(self, n: int = 101) -> float:
        """Max relative deviation of ``u + 4c`` from ``4 c_L`` through the fan."""
        xi = np.linspace(self.fan_head, self.fan_tail, n)[1:-1]
        A, u = self.sample(xi)
        w = u + 4.0 * celerity(A, self.k, self.rho)
        return float(np.max(np.abs(w - 4.0 * self.c_L)) / (4.0 * self.c_L))

    def fan_characteristic_residual(self, n: int = 101) -> float:
        """Max relative deviation of ``u - c`` from ``x/t`` inside the fan."""
        xi = np.linspace(self.fan_head, self.fan_tail, n)[1:-1]
        A, u = self.sample(xi)
        lam = u - celerity(A, self.k, self.rho)
        return float(np.max(np.abs(lam - xi)) / self.c_L)

    def rankine_hugoniot_residual(self) -> tuple[float, float]:
        """Relative residuals of the mass and momentum jump conditions."""
        Q_star = self.A_star * self.u_star
        mass = self.s * (self.A_star - self.A_R) - Q_star
        mom_star = Q_star * self.u_star + pressure_flux_term(self.A_star, self.k, self.rho)
        mom_R = pressure_flux_term(self.A_R, self.k, self.rho)
        momentum = self.s * Q_star - (mom_star - mom_R)
        return float(abs(mass) / abs(Q_star)), float(abs(momentum) / abs(mom_star - mom_R))

    def rarefaction_match_residual(self) -> float:
        """Relative mismatch of the plateau velocity between both waves."""
        u_raref = 4.0 * (self.c_L - self.c_star)
        return float(abs(u_raref - self.u_star) / abs(self.u_star))


def solve_tourniquet(A_L: float, A_R: float, k: float, rho: float) -> RiemannSolution:
    """Solve the Riemann problem with ``A_L > A_R`` and zero initial velocity.

    The plateau area is the root of
    ``4 (c(A_L) - c(A)) - u_shock(A)`` on ``(A_R, A_L)``, found by bisection.
    """
    if not A_L > A_R > 0.0:
        raise ValueError(f"tourniquet data needs A_L > A_R > 0, got A_L={A_L!r}, A_R={A_R!r}")
    c_L = float(celerity(A_L, k, rho))

    def phi(A):
        return 4.0 * (c_L - float(celerity(A, k, rho))) - float(shock_velocity(A, A_R, k, rho))

    lo, hi = A_R, A_L
    f_lo, f_hi = phi(lo), phi(hi)
    if not (f_lo > 0.0 > f_hi):
        raise ValueError("tourniquet plateau root is not bracketed")
    # Bisect down to floating-point resolution, well past the 1e-12 target.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= _BISECT_RTOL * 1e-4 * hi:
            break
        if phi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    A_star = 0.5 * (lo + hi)
    u_star = float(shock_velocity(A_star, A_R, k, rho))
    s = A_star * u_star / (A_star - A_R)
    return RiemannSolution(A_L=A_L, A_R=A_R, k=k, rho=rho, A_star=A_star, u_star=u_star, s=s)


def tourniquet_exact(A_L: float, A_R: float, k: float, rho: float, x, t: float):
    """Exact ``(A, Q)`` of the tourniquet problem released at ``x = 0, t = 0``."""
    x = np.asarray(x, dtype=float)
    if A_L == A_R:
        return np.full(x.shape, float(A_L)), np.zeros(x.shape)
    if t <= 0.0:
        return np.where(x <= 0.0, A_L, A_R), np.zeros(x.shape)
    sol = solve_tourniquet(A_L, A_R, k, rho)
    A, u = sol.sample(x / t)
    return A, A * u


def dalembert_solution(Q_in, c0: float, A0: float, x, t: float):
    """Pure right-going wave ``Q(x, t) = Q_in(t - x/c0)``, ``A - A0 = Q / c0``.

    ``Q_in`` is a callable of time that vanishes for negative arguments
    outside the pulse.
    """
    x = np.asarray(x, dtype=float)
    lag = t - x / c0
    Q = np.where(lag >= 0.0, Q_in(np.maximum(lag, 0.0)), 0.0)
    return Q / c0, Q


def viscous_envelope(eps_f: float, x, Tc: float, c0: float):
    """Damping factor ``exp(-eps_f x / (2 Tc c0))`` of the viscous pulse."""
    if eps_f < 0.0:
        raise ValueError("eps_f must be non-negative")
    return np.exp(-eps_f * np.asarray(x, dtype=float) / (2.0 * Tc * c0))


def friction_parameter(Cf: float, A0: float, Tc: float) -> float:
    """Small parameter ``eps_f = Tc Cf / A0``."""
    return Tc * Cf / A0


def viscoelastic_parameter(Cv: float, c0: float, Tc: float) -> float:
    """Small parameter ``eps_nu = Cv / (c0**2 Tc)``."""
    return Cv / (c0 * c0 * Tc)


def heat_kernel(tau: float, xi, c0: float, Tc: float):
    """Gaussian ``G(tau, xi)`` with variance ``tau c0**2 Tc``."""
    var = tau * c0 * c0 * Tc
    return np.exp(-np.asarray(xi) ** 2 / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)


def heat_kernel_solution(initial_pulse, tau: float, c0: float, Tc: float, xi_grid,
                         truncation_tol: float = 1e-8):
    """Convolve a pulse sampled on ``xi_grid`` with ``G(tau, .)`` (trapezoid rule).

    Raises if the grid cuts off more than ``truncation_tol`` of the kernel
    mass around the pulse support.
    """
    if not tau > 0.0:
        raise ValueError("tau must be positive")
    xi = np.asarray(xi_grid, dtype=float)
    q0 = np.asarray(initial_pulse, dtype=float)
    if q0.shape != xi.shape:
        raise ValueError("pulse and grid shapes differ")
    support = np.flatnonzero(q0 != 0.0)
    if support.size == 0:
        return np.zeros_like(q0)
    sigma = np.sqrt(tau * c0 * c0 * Tc)
    left_gap = xi[support[0]] - xi[0]
    right_gap = xi[-1] - xi[support[-1]]
    lost = 0.5 * erfc(left_gap / (sigma * np.sqrt(2.0))) + 0.5 * erfc(right_gap / (sigma * np.sqrt(2.0)))
    if lost > truncation_tol:
        raise ValueError(
            f"grid truncates {lost:.2e} of the kernel mass; widen the grid beyond the pulse support")

    w = np.empty_like(xi)
    d = np.diff(xi)
    w[0] = 0.5 * d[0]
    w[-1] = 0.5 * d[-1]
    w[1:-1] = 0.5 * (d[:-1] + d[1:])
    cols = np.arange(support[0], support[-1] + 1)  # zero columns contribute nothing
    kernel = heat_kernel(tau, xi[:, None] - xi[None, cols], c0, Tc)
    return kernel @ (w[cols] * q0[cols])


def diffused_inflow_pulse(Q_in, Tc: float, c0: float, Cv: float, x, t: float,
                          points_per_metre: int = 400) -> np.ndarray:
    """Heat-kernel discharge at ``(x, t)`` for a pulse fed through ``x = 0``.

    The undiffused pulse in the moving frame ``xi = x - c0 t`` is
    ``Q_in(-xi / c0)`` on ``[-c0 Tc / 2, 0]``; it is convolved with
    ``G(eps_nu t, .)`` on a grid padded by ten kernel widths on each side and
    sampled back at ``xi = x - c0 t`` by linear interpolation.
    """
    x = np.asarray(x, dtype=float)
    if t <= 0.0:
        return np.zeros(x.shape)
    tau = viscoelastic_parameter(Cv, c0, Tc) * t
    sigma = np.sqrt(tau * c0 * c0 * Tc)
    support = 0.5 * Tc * c0
    pad = 10.0 * sigma
    lo = min(-support - pad, float(np.min(x)) - c0 * t)
    hi = max(pad, float(np.max(x)) - c0 * t)
    n = int(np.ceil((hi - lo) * points_per_metre)) + 1
    xi = np.linspace(lo, hi, n)
    lag = -xi / c0
    q0 = np.where((lag >= 0.0) & (lag <= 0.5 * Tc), Q_in(np.clip(lag, 0.0, 0.5 * Tc)), 0.0)
    q = heat_kernel_solution(q0, tau, c0, Tc, xi)
    return np.interp(x - c0 * t, xi, q)


def admittance(A0, k, rho):
    """Characteristic admittance ``A0 / (rho c0)`` of a vessel at rest."""
    c0 = moens_korteweg(k, np.sqrt(np.asarray(A0) / np.pi), rho)
    return np.asarray(A0) / (rho * c0)


def reflection_transmission(A0_p, k_p, A0_d, k_d, rho) -> tuple[float, float]:
    """Pressure reflection and transmission coefficients at a junction.

    The incident wave travels from the ``p`` side into the ``d`` side.
    ``T_r = 1 + R_e`` so a closed end (``Y_d -> 0``) gives ``(1, 2)``.
    """
    y_p = admittance(A0_p, k_p, rho)
    y_d = admittance(A0_d, k_d, rho)
    return float((y_p - y_d) / (y_p + y_d)), float(2.0 * y_p / (y_p + y_d))

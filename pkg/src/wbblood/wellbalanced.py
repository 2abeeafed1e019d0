"""Hydrostatic reconstruction for variable stiffness and rest area.

At an interface ``i+1/2`` the areas are rebuilt from the local rest
equilibrium ``k sqrt(A) - k sqrt(A0) = const`` on each side, both divided by
the upwinded stiffness ``k* = max(k_i, k_{i+1})``. Fluxes evaluated on the
rebuilt states plus the pressure corrections of :func:`source_correction`
balance the geometric source exactly on rest states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import SQRT_PI, pressure_flux_term


@dataclass(frozen=True, eq=False)
class InterfaceStates:
    A_L_rec: np.ndarray
    A_R_rec: np.ndarray
    u_L: np.ndarray
    u_R: np.ndarray
    k_star: np.ndarray

    @property
    def Q_L_rec(self) -> np.ndarray:
        # A_rec * u is zero on a dried interface even if u is not.
        return np.where(self.A_L_rec > 0.0, self.A_L_rec * self.u_L, 0.0)

    @property
    def Q_R_rec(self) -> np.ndarray:
        return np.where(self.A_R_rec > 0.0, self.A_R_rec * self.u_R, 0.0)


def reconstruct_sqrt(sqrtA_i, k_i, A0b_i, sqrtA_ip1, k_ip1, A0b_ip1):
    """Return ``(sqrt(A_L), sqrt(A_R), k*)`` at each interface (hot path)."""
    dA0b = A0b_ip1 - A0b_i
    k_star = np.maximum(k_i, k_ip1)
    sL = np.maximum(k_i * sqrtA_i + np.minimum(dA0b, 0.0), 0.0) / k_star
    sR = np.maximum(k_ip1 * sqrtA_ip1 - np.maximum(dA0b, 0.0), 0.0) / k_star
    return sL, sR, k_star


def hydrostatic_reconstruct(A_i, u_i, k_i, A0b_i, A_ip1, u_ip1, k_ip1, A0b_ip1) -> InterfaceStates:
    """Reconstruct both sides of the interface between cells ``i`` and ``i+1``.

    Velocities are carried over unchanged from the cells; only the areas are
    rebuilt. All arguments broadcast, so whole interface arrays can be passed.
    """
    A_i = np.asarray(A_i, dtype=float)
    A_ip1 = np.asarray(A_ip1, dtype=float)
    sL, sR, k_star = reconstruct_sqrt(np.sqrt(A_i), np.asarray(k_i, dtype=float), A0b_i,
                                      np.sqrt(A_ip1), np.asarray(k_ip1, dtype=float), A0b_ip1)
    return InterfaceStates(A_L_rec=sL * sL, A_R_rec=sR * sR,
                           u_L=np.asarray(u_i, dtype=float) + 0.0 * sL,
                           u_R=np.asarray(u_ip1, dtype=float) + 0.0 * sR,
                           k_star=k_star)


def source_correction(A_cell, k_cell, A_rec, k_star, rho):
    """Momentum correction ``P(A_cell, k_cell) - P(A_rec, k*)``.

    Returned as the pair ``(0, S2)`` added to the interface flux on the
    cell's side of that interface.
    """
    s2 = pressure_flux_term(A_cell, k_cell, rho) - pressure_flux_term(A_rec, k_star, rho)
    return np.zeros_like(s2), s2


def centered_source_all(profile, A, rho: float, dx: float) -> np.ndarray:
    """Naive pointwise discretisation of the geometric momentum source.

    ``A / (sqrt(pi) rho) * (d/dx A0_bold - 2/3 sqrt(A) dk/dx)`` with centred
    differences inside and one-sided first-order differences at both ends.
    """
    A = np.asarray(A, dtype=float)
    a0b = profile.A0_bold
    k = profile.k
    if a0b.size < 2:
        return np.zeros_like(A)
    grad_a0b = np.empty_like(a0b)
    grad_k = np.empty_like(k)
    grad_a0b[1:-1] = (a0b[2:] - a0b[:-2]) / (2.0 * dx)
    grad_k[1:-1] = (k[2:] - k[:-2]) / (2.0 * dx)
    grad_a0b[0] = (a0b[1] - a0b[0]) / dx
    grad_a0b[-1] = (a0b[-1] - a0b[-2]) / dx
    grad_k[0] = (k[1] - k[0]) / dx
    grad_k[-1] = (k[-1] - k[-2]) / dx
    return A / (SQRT_PI * rho) * (grad_a0b - (2.0 / 3.0) * np.sqrt(A) * grad_k)


def centered_source(profile, state, rho: float, dx: float, i: int) -> tuple[float, float]:
    """Centred source ``(0, S2)`` in cell ``i``."""
    J = profile.J
    if not 0 <= i < J:
        raise IndexError(f"cell index {i} outside [0, {J - 1}]")
    return 0.0, float(centered_source_all(profile, state.A, rho, dx)[i])

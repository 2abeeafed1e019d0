"""Conservative state, physical flux, eigenstructure and CFL bound.

The system is

    dA/dt + dQ/dx = 0
    dQ/dt + d/dx(Q**2/A + k A**1.5 / (3 rho sqrt(pi))) = sources

with ``A`` the lumen area and ``Q`` the discharge. Everything here is a pure
function of its arguments and works elementwise on numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SQRT_PI = np.sqrt(np.pi)


class PositivityError(ArithmeticError):
    """A cell area became non-positive."""

    def __init__(self, cell: int, t: float, area: float) -> None:
        self.cell = cell
        self.t = t
        self.area = area
        super().__init__(f"non-positive area A={area!r} in cell {cell} at t={t!r} s")


@dataclass(frozen=True, eq=False)
class State:
    """Cell areas ``A`` (m^2) and discharges ``Q`` (m^3/s) at time ``t``."""

    A: np.ndarray
    Q: np.ndarray
    t: float = 0.0

    @property
    def u(self) -> np.ndarray:
        return self.Q / self.A

    def check_positive(self) -> None:
        bad = np.flatnonzero(~(self.A > 0.0))
        if bad.size:
            i = int(bad[0])
            raise PositivityError(i, self.t, float(self.A[i]))


@dataclass(frozen=True)
class PhysicalParams:
    """Blood density, friction and viscoelastic coefficients.

    ``Cv`` may be a scalar or a per-cell array (wall-law coefficients that
    depend on the local rest radius). ``P0`` only enters output pressures.
    """

    rho: float = 1060.0
    Cf: float = 0.0
    Cv: float | np.ndarray = 0.0
    P0: float = 0.0

    def __post_init__(self) -> None:
        if not self.rho > 0.0:
            raise ValueError(f"density must be positive, got {self.rho!r}")
        if not self.Cf >= 0.0:
            raise ValueError(f"friction coefficient must be non-negative, got {self.Cf!r}")
        if not np.all(np.asarray(self.Cv) >= 0.0):
            raise ValueError("viscoelastic coefficient must be non-negative")


def celerity(A, k, rho):
    """Nonlinear pulse wave speed ``sqrt(k sqrt(A) / (2 rho sqrt(pi)))``."""
    A = np.asarray(A, dtype=float)
    if np.any(~(A > 0.0)):
        raise ValueError("celerity needs a positive area (loss of positivity upstream?)")
    if np.any(~(np.asarray(k) > 0.0)) or not rho > 0.0:
        raise ValueError("celerity needs positive stiffness and density")
    return np.sqrt(k * np.sqrt(A) / (2.0 * rho * SQRT_PI))


def moens_korteweg(k, R0, rho):
    """Linear wave speed ``sqrt(k R0 / (2 rho))`` of a vessel at rest."""
    if np.any(~(np.asarray(k) > 0.0)) or np.any(~(np.asarray(R0) > 0.0)) or not rho > 0.0:
        raise ValueError("Moens-Korteweg celerity needs positive k, R0 and rho")
    return np.sqrt(np.asarray(k) * np.asarray(R0) / (2.0 * rho))


def pressure_flux_term(A, k, rho):
    """Pressure part of the momentum flux, ``k A**1.5 / (3 rho sqrt(pi))``."""
    A = np.asarray(A, dtype=float)
    return k * A * np.sqrt(A) / (3.0 * rho * SQRT_PI)


def physical_flux(A, Q, k, rho):
    """Return ``(Q, Q**2/A + P(A, k))``."""
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if np.any(~(A > 0.0)):
        raise ValueError("physical flux needs a positive area")
    return Q + 0.0 * A, Q * Q / A + pressure_flux_term(A, k, rho)


def eigenvalues(A, Q, k, rho):
    """Characteristic speeds ``(u - c, u + c)``."""
    A = np.asarray(A, dtype=float)
    if np.any(~(A > 0.0)):
        raise ValueError("eigenvalues need a positive area")
    u = Q / A
    c = celerity(A, k, rho)
    return u - c, u + c


def cfl_dt(state: State, profile, params: PhysicalParams, dx: float, n_cfl: float = 1.0) -> float:
    """Largest stable step ``n_cfl * dx / max(|u| + c)``."""
    if not 0.0 < n_cfl <= 1.0:
        raise ValueError(f"CFL number must lie in (0, 1], got {n_cfl!r}")
    state.check_positive()
    speed = np.abs(state.Q / state.A) + celerity(state.A, profile.k, params.rho)
    return float(n_cfl * dx / np.max(speed))


def elastic_pressure(A, A0, k, P0=0.0):
    """Tube law ``P0 + k (sqrt(A) - sqrt(A0)) / sqrt(pi)`` (Pa)."""
    return P0 + k * (np.sqrt(A) - np.sqrt(A0)) / SQRT_PI

"""HLL approximate Riemann flux for the blood-flow system."""

from __future__ import annotations

import numpy as np

from .state import SQRT_PI, pressure_flux_term

# Relative width below which the two HLL wave-speed bounds are treated as equal.
DEGENERATE_SPEED_GAP = 1e-14


def _side(A, Q, k, rho):
    """Velocity, celerity and physical flux of one side; dry cells give zeros."""
    wet = A > 0.0
    safe_A = np.where(wet, A, 1.0)
    u = np.where(wet, Q / safe_A, 0.0)
    c = np.where(wet, np.sqrt(k * np.sqrt(A) / (2.0 * rho * SQRT_PI)), 0.0)
    f1 = np.where(wet, Q, 0.0)
    f2 = np.where(wet, Q * Q / safe_A, 0.0) + pressure_flux_term(A, k, rho)
    return u, c, f1, f2


def hll_speeds(AL, QL, AR, QR, kL, kR, rho):
    """Lower and upper HLL wave-speed bounds ``(c1, c2)``."""
    uL, cL, _, _ = _side(AL, QL, kL, rho)
    uR, cR, _, _ = _side(AR, QR, kR, rho)
    return np.minimum(uL - cL, uR - cR), np.maximum(uL + cL, uR + cR)


def hll_flux_unchecked(AL, QL, AR, QR, kL, kR, rho):
    """Vectorised HLL flux without argument validation (hot path).

    ``kL`` and ``kR`` are the stiffnesses used to evaluate the physical flux
    and eigenvalues of each state; the well-balanced scheme passes the same
    interface stiffness ``k*`` on both sides.
    """
    uL, cL, f1L, f2L = _side(AL, QL, kL, rho)
    uR, cR, f1R, f2R = _side(AR, QR, kR, rho)
    c1 = np.minimum(uL - cL, uR - cR)
    c2 = np.maximum(uL + cL, uR + cR)

    gap = c2 - c1
    degenerate = gap <= DEGENERATE_SPEED_GAP * np.maximum(np.maximum(np.abs(c1), np.abs(c2)), 1.0)
    same = (AL == AR) & (QL == QR) & (kL == kR)
    take_left = (c1 >= 0.0) | degenerate | same
    take_right = (c2 <= 0.0) & ~take_left

    den = np.where(degenerate, 1.0, gap)
    f1 = (c2 * f1L - c1 * f1R) / den + c1 * c2 * (AR - AL) / den
    f2 = (c2 * f2L - c1 * f2R) / den + c1 * c2 * (QR - QL) / den
    f1 = np.where(take_left, f1L, np.where(take_right, f1R, f1))
    f2 = np.where(take_left, f2L, np.where(take_right, f2R, f2))
    return f1, f2


def hll_flux(UL, UR, k_star, rho, k_right=None):
    """HLL numerical flux between ``UL = (A, Q)`` and ``UR = (A, Q)``.

    Parameters
    ----------
    UL, UR
        Left and right conservative states; components may be arrays.
    k_star
        Stiffness used for both physical fluxes and wave speeds.
    rho
        Blood density.
    k_right
        Optional distinct stiffness for the right state. Only the
        non-well-balanced baseline uses it, so that each cell's flux is
        evaluated with its own wall law.

    Returns
    -------
    (F1, F2)
        Mass and momentum flux. ``F(UL)`` if the slowest wave moves right,
        ``F(UR)`` if the fastest moves left, otherwise the HLL average.
        Identical states and coinciding speed bounds return ``F(UL)``.
    """
    AL, QL = (np.asarray(v, dtype=float) for v in UL)
    AR, QR = (np.asarray(v, dtype=float) for v in UR)
    kL = np.asarray(k_star, dtype=float)
    kR = kL if k_right is None else np.asarray(k_right, dtype=float)
    for v in (AL, QL, AR, QR, kL, kR):
        if np.any(np.isnan(v)):
            raise ValueError("HLL flux received NaN input")
    if np.any(AL < 0.0) or np.any(AR < 0.0):
        raise ValueError("HLL flux needs non-negative areas")
    f1, f2 = hll_flux_unchecked(AL, QL, AR, QR, kL, kR, rho)
    if f1.ndim == 0:
        return float(f1), float(f2)
    return f1, f2

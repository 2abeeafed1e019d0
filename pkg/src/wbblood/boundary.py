"""Ghost-cell boundary conditions.

Two ghost cells are added on each side. Ghosts copy the profile of the
adjacent interior cell so reconstruction at a boundary interface sees no
jump in ``k`` or ``A0_bold``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .state import SQRT_PI, PhysicalParams, State

NGHOST = 2
_NEWTON_MAXITER = 50
_MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class Neumann:
    """Zero-gradient (copy-out) end; non-reflecting for outgoing waves.

    The ghosts continue the vessel flat, so ``k`` and ``A0`` should already
    be flat at the end: on a sloped end, small perturbations of a rest state
    grow instead of leaving the domain.
    """


@dataclass(frozen=True)
class Inflow:
    """Half-sine discharge pulse ``Qc sin(2 pi t / Tc)`` for ``t <= Tc/2``."""

    Qc: float
    Tc: float

    def __post_init__(self) -> None:
        if not self.Tc > 0.0:
            raise ValueError(f"inflow period must be positive, got {self.Tc!r}")


@dataclass(frozen=True)
class BoundarySpec:
    left: Neumann | Inflow = field(default_factory=Neumann)
    right: Neumann = field(default_factory=Neumann)

    def __post_init__(self) -> None:
        if not isinstance(self.right, Neumann):
            raise ValueError("only a Neumann outlet is supported on the right")


@dataclass(frozen=True, eq=False)
class Extended:
    """State and profile padded with ``NGHOST`` ghost cells per side."""

    A: np.ndarray
    Q: np.ndarray
    k: np.ndarray
    A0_bold: np.ndarray


class InletMatchError(RuntimeError):
    pass


def inflow_discharge(t, Qc: float, Tc: float):
    """Prescribed inlet discharge; the pulse closes at ``t = Tc/2`` (H(0) = 1)."""
    t = np.asarray(t, dtype=float)
    q = np.where(t <= 0.5 * Tc, Qc * np.sin(2.0 * np.pi * t / Tc), 0.0)
    q = np.where(t == 0.5 * Tc, 0.0, q)  # sin(pi) is 1.2e-16, not 0
    return float(q) if q.ndim == 0 else q


def _c(A, k, rho):
    return np.sqrt(k * np.sqrt(A) / (2.0 * rho * SQRT_PI))


def inlet_match(Q_in: float, A1: float, u1: float, k1: float, rho: float) -> float:
    """Inlet area carrying ``Q_in`` with the outgoing invariant ``u - 4c`` unchanged.

    Solves ``Q_in / A - 4 c(A) = u1 - 4 c(A1)`` by Newton's method from
    ``A1``, falling back to bisection on ``[A1/4, 4 A1]``.
    """
    if not A1 > 0.0:
        raise InletMatchError(f"first interior cell has non-positive area {A1!r}")
    w_out = u1 - 4.0 * _c(A1, k1, rho)
    scale = max(abs(w_out), np.finfo(float).tiny)

    def residual(A):
        return Q_in / A - 4.0 * _c(A, k1, rho) - w_out

    A = A1
    for _ in range(_NEWTON_MAXITER):
        g = residual(A)
        if abs(g) <= _MATCH_RTOL * scale:
            return float(A)
        dg = -Q_in / A**2 - _c(A, k1, rho) / A
        step = g / dg
        A_next = A - step
        if not A_next > 0.0 or not np.isfinite(A_next):
            break
        A = A_next

    lo, hi = 0.25 * A1, 4.0 * A1
    glo, ghi = residual(lo), residual(hi)
    if glo * ghi > 0.0:
        raise InletMatchError(
            f"inlet matching failed to converge (Q_in={Q_in!r}, A1={A1!r}, u1={u1!r})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = residual(mid)
        if abs(gm) <= _MATCH_RTOL * scale:
            return float(mid)
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    raise InletMatchError(
        f"inlet matching failed to converge (Q_in={Q_in!r}, A1={A1!r}, u1={u1!r})")


def _pad_edge(a: np.ndarray, g: int) -> np.ndarray:
    out = np.empty(a.size + 2 * g)
    out[g:-g] = a
    out[:g] = a[0]
    out[-g:] = a[-1]
    return out


def fill_ghosts(state: State, spec: BoundarySpec, profile, params: PhysicalParams, t: float) -> Extended:
    """Pad state and profile with ghost cells for time ``t``."""
    g = NGHOST
    A = _pad_edge(state.A, g)
    Q = _pad_edge(state.Q, g)
    k = _pad_edge(profile.k, g)
    a0b = _pad_edge(profile.A0_bold, g)

    if isinstance(spec.left, Inflow):
        q_in = inflow_discharge(t, spec.left.Qc, spec.left.Tc)
        A1 = float(state.A[0])
        a_ghost = inlet_match(q_in, A1, float(state.Q[0]) / A1, float(profile.k[0]), params.rho)
        A[:g] = a_ghost
        Q[:g] = q_in
    return Extended(A=A, Q=Q, k=k, A0_bold=a0b)

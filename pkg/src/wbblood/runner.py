"""Scenario execution, CSV snapshots and the convergence harness."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import oracles
from .boundary import Inflow, inflow_discharge
from .config import ConfigError, ScenarioConfig, initial_arrays
from .geometry import ArteryProfile
from .state import PositivityError, State, elastic_pressure, moens_korteweg
from .timestepper import SimState, advance

CSV_HEADER = "x,A,Q,u,R,p"
MASS_RTOL_PER_1000_STEPS = 1e-12


class NoOracleError(ValueError):
    """The scenario has no analytic or asymptotic reference solution."""


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: float
    x: np.ndarray
    A: np.ndarray
    Q: np.ndarray
    u: np.ndarray
    R: np.ndarray
    p: np.ndarray

    @classmethod
    def from_state(cls, state: State, profile: ArteryProfile, P0: float = 0.0) -> "Snapshot":
        A = state.A.copy()
        return cls(t=float(state.t), x=profile.x.copy(), A=A, Q=state.Q.copy(), u=state.Q / A,
                   R=np.sqrt(A / np.pi), p=elastic_pressure(A, profile.A0, profile.k, P0))


@dataclass(frozen=True)
class SnapshotDiagnostics:
    t: float
    steps: int
    max_abs_u: float
    head_spread: float
    min_A: float
    mass: float
    mass_change: float
    boundary_mass: float
    mass_balance_error: float
    mass_tolerance: float


@dataclass
class RunResult:
    config: ScenarioConfig
    profile: ArteryProfile
    snapshots: list[Snapshot] = field(default_factory=list)
    diagnostics: list[SnapshotDiagnostics] = field(default_factory=list)
    failure: PositivityError | None = None

    @property
    def complete(self) -> bool:
        return self.failure is None

    @property
    def error(self) -> str | None:
        return None if self.failure is None else str(self.failure)


def _diagnose(sim: SimState, profile: ArteryProfile, dx: float, mass0: float) -> SnapshotDiagnostics:
    max_u, spread = oracles.rest_residual(sim.state, profile)
    mass = math.fsum(sim.state.A * dx)
    inflow = sim.net_boundary_mass()
    err = abs((mass - mass0) - inflow)
    return SnapshotDiagnostics(
        t=float(sim.t), steps=sim.steps, max_abs_u=max_u, head_spread=spread,
        min_A=float(sim.state.A.min()), mass=mass, mass_change=mass - mass0, boundary_mass=inflow,
        mass_balance_error=err,
        mass_tolerance=MASS_RTOL_PER_1000_STEPS * mass * max(1.0, sim.steps / 1000.0))


def run_scenario(cfg: ScenarioConfig) -> RunResult:
    """Run ``cfg`` to ``t_end``, recording a snapshot at each requested time.

    A positivity failure stops the run; the snapshots taken so far are kept
    and the result is flagged incomplete.
    """
    profile = cfg.build_profile()
    params = cfg.physics.resolve(profile)
    A, Q = initial_arrays(cfg, profile)
    sim = SimState(State(A=A, Q=Q, t=0.0))
    dx = cfg.grid.dx
    mass0 = math.fsum(A * dx)
    result = RunResult(config=cfg, profile=profile)
    try:
        for t in cfg.snapshots:
            advance(sim, profile, params, cfg.scheme, cfg.boundary, t)
            result.snapshots.append(Snapshot.from_state(sim.state, profile, params.P0))
            result.diagnostics.append(_diagnose(sim, profile, dx, mass0))
    except PositivityError as exc:
        result.failure = exc
    return result


def snapshot_filename(name: str, t: float) -> str:
    return f"{name}_t{np.format_float_positional(float(t), trim='-')}.csv"


def write_snapshot(snapshot: Snapshot, path: str | Path) -> Path:
    """Write ``x,A,Q,u,R,p`` with 17 significant digits and LF line endings."""
    path = Path(path)
    cols = np.column_stack([snapshot.x, snapshot.A, snapshot.Q, snapshot.u, snapshot.R, snapshot.p])
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        np.savetxt(fh, cols, fmt="%.17g", delimiter=",", header=CSV_HEADER, comments="")
    return path


def read_snapshot(path: str | Path, t: float = float("nan")) -> Snapshot:
    path = Path(path)
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    x, A, Q, u, R, p = data.T
    return Snapshot(t=t, x=x, A=A, Q=Q, u=u, R=R, p=p)


# --- reference solutions -----------------------------------------------------

def oracle_kind(cfg: ScenarioConfig) -> str | None:
    """``tourniquet``, ``dalembert``, ``viscous``, ``viscoelastic`` or ``None``."""
    if cfg.initial.kind == "tourniquet" and cfg.profile_kind == "uniform":
        return "tourniquet"
    if (cfg.initial.kind == "rest+inflow" and cfg.profile_kind == "uniform"
            and isinstance(cfg.boundary.left, Inflow)):
        if cfg.physics.phi is None and not cfg.physics.Cv:
            return "viscous" if cfg.physics.Cf > 0.0 else "dalembert"
        if cfg.physics.Cf == 0.0:
            return "viscoelastic"
    return None


def reference_solution(cfg: ScenarioConfig, x, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Oracle ``(A, Q)`` at time ``t``; raises :class:`NoOracleError` if there is none."""
    kind = oracle_kind(cfg)
    if kind is None:
        raise NoOracleError(f"scenario {cfg.name!r} has no reference solution")
    x = np.asarray(x, dtype=float)
    rho = cfg.physics.rho
    if kind == "tourniquet":
        p = cfg.initial.params
        if p.get("x_split", 0.0) != 0.0:
            x = x - p["x_split"]
        k = cfg.profile_params["k"]
        return oracles.tourniquet_exact(np.pi * p["R_left"] ** 2, np.pi * p["R_right"] ** 2, k, rho, x, t)

    R0 = cfg.profile_params["R0"]
    k = cfg.profile_params["k"]
    A0 = np.pi * R0 * R0
    c0 = float(moens_korteweg(k, R0, rho))
    inflow = cfg.boundary.left

    def q_in(s):
        return inflow_discharge(s, inflow.Qc, inflow.Tc)

    if kind == "viscoelastic":
        Q = oracles.diffused_inflow_pulse(q_in, inflow.Tc, c0, cfg.physics.Cv, x, t)
    else:
        _, Q = oracles.dalembert_solution(q_in, c0, A0, x, t)
        if kind == "viscous":
            eps_f = oracles.friction_parameter(cfg.physics.Cf, A0, inflow.Tc)
            Q = Q * oracles.viscous_envelope(eps_f, x, inflow.Tc, c0)
    return A0 + Q / c0, Q


# --- output ------------------------------------------------------------------

def _plot_extras(cfg: ScenarioConfig, profile: ArteryProfile) -> dict:
    """Quantities the plot script needs for reference lines."""
    extras: dict = {"layout": "pulse"}
    rho = cfg.physics.rho
    if cfg.initial.kind == "rest":
        extras["layout"] = "rest"
    elif cfg.initial.kind == "tourniquet":
        extras["layout"] = "riemann"
    elif cfg.initial.kind == "pulse-perturbation":
        extras["layout"] = "reflection"
        i_p, i_d = 0, profile.J - 1
        Re, Tr = oracles.reflection_transmission(profile.A0[i_p], profile.k[i_p], profile.A0[i_d],
                                                 profile.k[i_d], rho)
        eps = cfg.initial.params["epsilon"]
        extras.update(R_e=Re, T_r=Tr, incident=0.5 * eps * float(profile.R0[i_p]),
                      k=float(profile.k[i_p]), P0=cfg.physics.P0)
    if isinstance(cfg.boundary.left, Inflow):
        inflow = cfg.boundary.left
        A0 = float(profile.A0[0])
        c0 = float(moens_korteweg(profile.k[0], profile.R0[0], rho))
        extras.update(amplitude=inflow.Qc / A0, c0=c0, Tc=inflow.Tc)
        if oracle_kind(cfg) == "viscous":
            extras["eps_f"] = oracles.friction_parameter(cfg.physics.Cf, A0, inflow.Tc)
    return extras


def write_run(result: RunResult, out_dir: str | Path) -> Path:
    """Write snapshot CSVs, oracle CSVs (when one exists) and ``<name>_diagnostics.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    files, refs = [], []
    has_oracle = oracle_kind(cfg) is not None
    for snap in result.snapshots:
        files.append(write_snapshot(snap, out / snapshot_filename(cfg.name, snap.t)).name)
        if has_oracle and snap.t > 0.0:
            A, Q = reference_solution(cfg, snap.x, snap.t)
            ref = Snapshot(t=snap.t, x=snap.x, A=A, Q=Q, u=Q / A, R=np.sqrt(A / np.pi),
                           p=elastic_pressure(A, result.profile.A0, result.profile.k, cfg.physics.P0))
            refs.append(write_snapshot(ref, out / snapshot_filename(cfg.name + "_exact", snap.t)).name)
    profile_csv = out / f"{cfg.name}_profile.csv"
    with open(profile_csv, "w", encoding="ascii", newline="\n") as fh:
        np.savetxt(fh, np.column_stack([result.profile.x, result.profile.R0, result.profile.k]),
                   fmt="%.17g", delimiter=",", header="x,R0,k", comments="")
    manifest = {
        "scenario": cfg.name,
        "source": cfg.scheme.source_mode.value,
        "cells": cfg.grid.J,
        "complete": result.complete,
        "error": result.error,
        "snapshot_times": [s.t for s in result.snapshots],
        "snapshot_files": files,
        "reference_files": refs,
        "profile_file": profile_csv.name,
        "plot": _plot_extras(cfg, result.profile),
        "diagnostics": [asdict(d) for d in result.diagnostics],
    }
    path = out / f"{cfg.name}_diagnostics.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="ascii")
    return path


# --- convergence -------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRow:
    cells: int
    error_A: float
    error_Q: float
    order_A: float | None
    order_Q: float | None


def relative_l1_errors(cfg: ScenarioConfig, state: State, profile: ArteryProfile) -> tuple[float, float]:
    """``|A - A_ex|_1 / |A_ex - A_base|_1`` and ``|Q - Q_ex|_1 / |Q_ex|_1``.

    ``A_base`` is the undisturbed area ahead of the waves (the right state
    for the tourniquet, ``A0`` for inflow pulses), so the error is measured
    relative to the size of the disturbance rather than the rest area.
    """
    A_ex, Q_ex = reference_solution(cfg, profile.x, state.t)
    base = np.pi * cfg.initial.params["R_right"] ** 2 if cfg.initial.kind == "tourniquet" else profile.A0
    e_A = np.abs(state.A - A_ex).sum() / np.abs(A_ex - base).sum()
    e_Q = np.abs(state.Q - Q_ex).sum() / np.abs(Q_ex).sum()
    return float(e_A), float(e_Q)


def _order(e_coarse: float, e_fine: float, J_coarse: int, J_fine: int) -> float | None:
    if e_coarse <= 0.0 or e_fine <= 0.0 or J_fine == J_coarse:
        return None
    return math.log(e_coarse / e_fine) / math.log(J_fine / J_coarse)


def convergence_study(cfg: ScenarioConfig, cells: list[int]) -> list[ConvergenceRow]:
    """Relative L1 errors at ``t_end`` for each grid size and the observed orders.

    The order on row ``n`` compares it with row ``n - 1``; for doubled grids
    it is ``log2(e_J / e_2J)``.
    """
    if oracle_kind(cfg) is None:
        raise NoOracleError(f"scenario {cfg.name!r} has no reference solution")
    if not cells:
        raise ConfigError("convergence study needs at least one grid size")
    rows: list[ConvergenceRow] = []
    for J in cells:
        run_cfg = replace(cfg.with_overrides(cells=J), snapshots=(cfg.t_end,))
        res = run_scenario(run_cfg)
        if res.failure is not None:
            raise res.failure
        snap = res.snapshots[-1]
        e_A, e_Q = relative_l1_errors(run_cfg, State(A=snap.A, Q=snap.Q, t=snap.t), res.profile)
        o_A = o_Q = None
        if rows:
            prev = rows[-1]
            o_A = _order(prev.error_A, e_A, prev.cells, J)
            o_Q = _order(prev.error_Q, e_Q, prev.cells, J)
        rows.append(ConvergenceRow(J, e_A, e_Q, o_A, o_Q))
    return rows

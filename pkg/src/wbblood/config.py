"""Scenario configuration files (INI, ``schema = 1``, SI units).

A scenario file looks like::

    [scenario]
    schema = 1
    name = dead-man
    t_end = 5.0
    snapshots = 0.0, 5.0

    [grid]
    cells = 50
    length = 0.14
    x_left = 0.0

    [profile]
    kind = aneurysm-bump        ; uniform | aneurysm-bump | constriction | linear-taper | table
    R0 = 4.0e-3
    ...                         ; k, or E and h

    [physics]
    rho = 1060
    mu = 3.5e-3                 ; optional, only needed for Cf_pi_nu
    Cf = 0.0                    ; or Cf_pi_nu = 8  (Cf = 8 pi mu / rho)
    Cv = 0.0                    ; or phi and wall_h: Cv(x) = 2/3 phi h / (rho R0(x))
    P0 = 0.0

    [scheme]
    source = hsr                ; hsr | centered
    cfl = 1.0

    [boundary]
    left = neumann              ; neumann | inflow (then Qc, Tc)
    right = neumann

    [initial]
    kind = rest                 ; rest | tourniquet | pulse-perturbation | rest+inflow

Friction and the viscoelastic step are switched on whenever ``Cf`` or
``Cv`` is non-zero.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

import numpy as np

from .boundary import BoundarySpec, Inflow, Neumann
from .geometry import PROFILE_KINDS, ArteryProfile, Grid, build_profile, load_profile, read_profile_table
from .state import PhysicalParams
from .timestepper import SchemeConfig, SourceMode

SCHEMA_VERSION = 1
INITIAL_KINDS = ("rest", "tourniquet", "pulse-perturbation", "rest+inflow")


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


@dataclass(frozen=True)
class InitialSpec:
    """Initial condition.

    ``tourniquet`` uses ``R_left`` for ``x <= x_split`` and ``R_right``
    beyond. ``pulse-perturbation`` scales the rest radius by
    ``1 + epsilon sin(pi (x - x3) / (x4 - x3))`` on ``[x3, x4]``.
    """

    kind: str = "rest"
    params: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class PhysicsSpec:
    rho: float
    Cf: float = 0.0
    Cv: float | None = 0.0
    phi: float | None = None
    wall_h: float | None = None
    P0: float = 0.0
    mu: float | None = None

    def resolve(self, profile: ArteryProfile) -> PhysicalParams:
        """Physical parameters on ``profile``; a wall-derived ``Cv`` is per cell."""
        if self.phi is not None:
            Cv = (2.0 / 3.0) * self.phi * self.wall_h / (self.rho * profile.R0)
        else:
            Cv = self.Cv
        return PhysicalParams(rho=self.rho, Cf=self.Cf, Cv=Cv, P0=self.P0)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    grid: Grid
    profile_kind: str
    profile_params: Mapping[str, float]
    physics: PhysicsSpec
    scheme: SchemeConfig
    boundary: BoundarySpec
    initial: InitialSpec
    t_end: float
    snapshots: tuple[float, ...]
    profile_table: Path | None = None

    def __post_init__(self) -> None:
        snaps = tuple(float(t) for t in self.snapshots)
        if any(b < a for a, b in zip(snaps, snaps[1:])):
            raise ConfigError(f"snapshot times must be sorted, got {snaps}")
        if snaps and (snaps[0] < 0.0 or snaps[-1] > self.t_end):
            raise ConfigError(f"snapshot times must lie in [0, t_end={self.t_end}]")
        if not snaps or snaps[-1] != self.t_end:
            snaps = snaps + (self.t_end,)
        object.__setattr__(self, "snapshots", snaps)

    def build_profile(self) -> ArteryProfile:
        if self.profile_kind == "table":
            return load_profile(read_profile_table(self.profile_table), self.grid)
        return build_profile(self.profile_kind, self.profile_params, self.grid)

    def with_overrides(self, source: str | None = None, cells: int | None = None) -> "ScenarioConfig":
        cfg = self
        if source is not None:
            cfg = replace(cfg, scheme=replace(cfg.scheme, source_mode=SourceMode(source)))
        if cells is not None:
            cfg = replace(cfg, grid=Grid(int(cells), cfg.grid.length, cfg.grid.x_left))
        return cfg


def _float(section: configparser.SectionProxy, key: str, default: float | None = None) -> float:
    if key not in section:
        if default is None:
            raise ConfigError(f"[{section.name}] is missing '{key}'")
        return default
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key} = {raw!r} is not a number") from None


def _section(cp: configparser.ConfigParser, name: str) -> configparser.SectionProxy:
    if not cp.has_section(name):
        raise ConfigError(f"missing section [{name}]")
    return cp[name]


def _parse_physics(sec: configparser.SectionProxy) -> PhysicsSpec:
    rho = _float(sec, "rho")
    mu = _float(sec, "mu") if "mu" in sec else None
    if "Cf" in sec and "Cf_pi_nu" in sec:
        raise ConfigError("[physics] give either Cf or Cf_pi_nu, not both")
    if "Cf_pi_nu" in sec:
        if mu is None:
            raise ConfigError("[physics] Cf_pi_nu needs mu")
        Cf = _float(sec, "Cf_pi_nu") * math.pi * mu / rho
    else:
        Cf = _float(sec, "Cf", 0.0)

    phi = _float(sec, "phi") if "phi" in sec else None
    wall_h = _float(sec, "wall_h") if "wall_h" in sec else None
    if "Cv" in sec:
        # A literal Cv wins; phi and wall_h may still be listed for reference.
        return PhysicsSpec(rho=rho, Cf=Cf, Cv=_float(sec, "Cv"), P0=_float(sec, "P0", 0.0), mu=mu)
    if (phi is None) != (wall_h is None):
        raise ConfigError("[physics] wall-derived Cv needs both phi and wall_h")
    return PhysicsSpec(rho=rho, Cf=Cf, Cv=None if phi is not None else 0.0,
                       phi=phi, wall_h=wall_h, P0=_float(sec, "P0", 0.0), mu=mu)


def _parse_boundary(sec: configparser.SectionProxy | None) -> BoundarySpec:
    if sec is None:
        return BoundarySpec()
    left = sec.get("left", "neumann").strip().lower()
    right = sec.get("right", "neumann").strip().lower()
    if right != "neumann":
        raise ConfigError(f"[boundary] right = {right!r}; only neumann is supported")
    if left == "neumann":
        return BoundarySpec()
    if left == "inflow":
        return BoundarySpec(left=Inflow(Qc=_float(sec, "Qc"), Tc=_float(sec, "Tc")), right=Neumann())
    raise ConfigError(f"[boundary] left = {left!r}; expected neumann or inflow")


def parse_config(text: str, base_dir: Path | None = None) -> ScenarioConfig:
    """Parse scenario INI text; raise :class:`ConfigError` on any problem."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # keys are case-sensitive (Cf, Cv, R0)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None

    scen = _section(cp, "scenario")
    schema = scen.get("schema")
    if schema is None or schema.strip() != str(SCHEMA_VERSION):
        raise ConfigError(f"unsupported config schema {schema!r}; expected {SCHEMA_VERSION}")
    name = scen.get("name", "").strip()
    if not name:
        raise ConfigError("[scenario] name is empty")
    t_end = _float(scen, "t_end")
    if not t_end > 0.0:
        raise ConfigError("[scenario] t_end must be positive")
    try:
        snapshots = tuple(float(s) for s in scen.get("snapshots", "").split(",") if s.strip())
    except ValueError:
        raise ConfigError(f"[scenario] bad snapshot list {scen.get('snapshots')!r}") from None

    gs = _section(cp, "grid")
    try:
        grid = Grid(int(_float(gs, "cells")), _float(gs, "length"), _float(gs, "x_left", 0.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    ps = _section(cp, "profile")
    kind = ps.get("kind", "").strip()
    table = None
    pparams: dict[str, float] = {}
    if kind == "table":
        if "file" not in ps:
            raise ConfigError("[profile] kind = table needs 'file'")
        table = Path(ps["file"])
        if not table.is_absolute() and base_dir is not None:
            table = base_dir / table
    elif kind in PROFILE_KINDS:
        pparams = {key: _float(ps, key) for key in ps if key != "kind"}
    else:
        raise ConfigError(f"[profile] unknown kind {kind!r}")

    physics = _parse_physics(_section(cp, "physics"))

    sch = cp["scheme"] if cp.has_section("scheme") else None
    source = (sch.get("source", "hsr") if sch is not None else "hsr").strip().lower()
    try:
        scheme = SchemeConfig(
            source_mode=SourceMode(source),
            n_cfl=_float(sch, "cfl", 1.0) if sch is not None else 1.0,
            enable_friction=physics.Cf > 0.0,
            enable_viscoelastic=physics.phi is not None or (physics.Cv or 0.0) > 0.0,
        )
    except ValueError as exc:
        raise ConfigError(f"[scheme] {exc}") from None

    try:
        boundary = _parse_boundary(cp["boundary"] if cp.has_section("boundary") else None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    ini = cp["initial"] if cp.has_section("initial") else None
    ikind = (ini.get("kind", "rest") if ini is not None else "rest").strip()
    if ikind not in INITIAL_KINDS:
        raise ConfigError(f"[initial] unknown kind {ikind!r}; expected one of {INITIAL_KINDS}")
    iparams = {key: _float(ini, key) for key in ini if key != "kind"} if ini is not None else {}
    required = {"tourniquet": ("R_left", "R_right"), "pulse-perturbation": ("epsilon", "x3", "x4")}
    for key in required.get(ikind, ()):
        if key not in iparams:
            raise ConfigError(f"[initial] {ikind} needs '{key}'")
    if ikind == "rest+inflow" and not isinstance(boundary.left, Inflow):
        raise ConfigError("[initial] rest+inflow needs [boundary] left = inflow")

    try:
        cfg = ScenarioConfig(name=name, grid=grid, profile_kind=kind, profile_params=pparams,
                             physics=physics, scheme=scheme, boundary=boundary,
                             initial=InitialSpec(ikind, iparams), t_end=t_end,
                             snapshots=snapshots, profile_table=table)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if kind != "table":
        try:
            cfg.build_profile()
        except ValueError as exc:
            raise ConfigError(f"[profile] {exc}") from None
    return cfg


def load_config(path: str | Path) -> ScenarioConfig:
    """Read a scenario file. I/O errors propagate as ``OSError``."""
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)


def initial_arrays(cfg: ScenarioConfig, profile: ArteryProfile) -> tuple[np.ndarray, np.ndarray]:
    """Initial ``(A, Q)`` on the grid."""
    x = cfg.grid.x
    p = cfg.initial.params
    J = cfg.grid.J
    if cfg.initial.kind in ("rest", "rest+inflow"):
        return profile.A0.copy(), np.zeros(J)
    if cfg.initial.kind == "tourniquet":
        split = p.get("x_split", 0.0)
        R = np.where(x <= split, p["R_left"], p["R_right"])
        return np.pi * R * R, np.zeros(J)
    x3, x4, eps = p["x3"], p["x4"], p["epsilon"]
    inside = (x >= x3) & (x <= x4)
    R = profile.R0 * np.where(inside, 1.0 + eps * np.sin(np.pi * (x - x3) / (x4 - x3)), 1.0)
    return np.pi * R * R, np.zeros(J)

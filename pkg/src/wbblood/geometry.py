"""Rest geometry and wall stiffness of a single artery on a uniform 1D grid.

Profiles are sampled pointwise at cell centres. The scheme consumes cell
values of ``k`` and ``A0_bold = k * sqrt(A0)`` only, so pointwise sampling
keeps the discrete rest state exactly representable.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PROFILE_KINDS = ("uniform", "aneurysm-bump", "constriction", "linear-taper")


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred mesh on ``[x_left, x_left + length]``."""

    cells: int
    length: float
    x_left: float = 0.0

    def __post_init__(self) -> None:
        if int(self.cells) != self.cells or self.cells <= 0:
            raise ValueError(f"cell count must be a positive integer, got {self.cells!r}")
        if not np.isfinite(self.length) or self.length <= 0.0:
            raise ValueError(f"domain length must be positive, got {self.length!r}")
        if not np.isfinite(self.x_left):
            raise ValueError("x_left must be finite")

    @property
    def J(self) -> int:
        return int(self.cells)

    @property
    def dx(self) -> float:
        return self.length / self.cells

    @property
    def x_right(self) -> float:
        return self.x_left + self.length

    @property
    def x(self) -> np.ndarray:
        """Cell centres ``x_left + (i + 1/2) dx``."""
        return self.x_left + (np.arange(self.cells) + 0.5) * self.dx


@dataclass(frozen=True, eq=False)
class ArteryProfile:
    """Per-cell rest radius, rest area, stiffness and ``k * sqrt(A0)``.

    Build instances with :meth:`from_radius`; the derived fields are computed
    there once so that every consumer sees bit-identical values.
    """

    R0: np.ndarray
    A0: np.ndarray
    k: np.ndarray
    A0_bold: np.ndarray
    length: float
    x: np.ndarray = field(repr=False)

    @classmethod
    def from_radius(cls, R0, k, grid: Grid) -> "ArteryProfile":
        R0 = np.array(np.broadcast_to(np.asarray(R0, dtype=float), (grid.J,)))
        k = np.array(np.broadcast_to(np.asarray(k, dtype=float), (grid.J,)))
        if not np.all(np.isfinite(R0)) or np.any(R0 <= 0.0):
            bad = int(np.flatnonzero(~(R0 > 0.0))[0])
            raise ValueError(f"rest radius must be positive; cell {bad} has R0={R0[bad]!r}")
        if not np.all(np.isfinite(k)) or np.any(k <= 0.0):
            bad = int(np.flatnonzero(~(k > 0.0))[0])
            raise ValueError(f"stiffness must be positive; cell {bad} has k={k[bad]!r}")
        A0 = np.pi * R0**2
        A0_bold = k * np.sqrt(A0)
        arrays = [R0, A0, k, A0_bold, grid.x.copy()]
        for a in arrays:
            a.setflags(write=False)
        return cls(R0=arrays[0], A0=arrays[1], k=arrays[2], A0_bold=arrays[3],
                   length=grid.length, x=arrays[4])

    @property
    def J(self) -> int:
        return self.R0.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArteryProfile):
            return NotImplemented
        return (self.length == other.length
                and all(np.array_equal(getattr(self, n), getattr(other, n))
                        for n in ("R0", "A0", "k", "A0_bold", "x")))


def stiffness_from_elasticity(E: float, h: float, R0) -> np.ndarray:
    """Thin-wall stiffness ``k = 4/3 * E * h / R0**2`` (Pa/m)."""
    R0 = np.asarray(R0, dtype=float)
    if not E > 0.0 or not h > 0.0:
        raise ValueError(f"Young's modulus and wall thickness must be positive, got E={E!r}, h={h!r}")
    if np.any(~(R0 > 0.0)):
        raise ValueError("rest radius must be positive")
    return (4.0 / 3.0) * E * h / R0**2


def _require(params: Mapping[str, float], kind: str, *names: str) -> list[float]:
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"profile kind {kind!r} is missing parameters: {', '.join(missing)}")
    return [float(params[n]) for n in names]


def _check_increasing(kind: str, *points: float) -> None:
    if any(b <= a for a, b in zip(points, points[1:])):
        raise ValueError(f"{kind} breakpoints must be strictly increasing, got {points}")


def aneurysm_radius(x, R0: float, dR: float, x1: float, x2: float, x3: float, x4: float) -> np.ndarray:
    """Flat, sine ramp up, plateau ``R0 + dR``, cosine ramp down, flat."""
    x = np.asarray(x, dtype=float)
    r = np.full_like(x, R0)
    up = (x > x1) & (x < x2)
    r[up] = R0 + 0.5 * dR * (1.0 + np.sin(-0.5 * np.pi + np.pi * (x[up] - x1) / (x2 - x1)))
    r[(x >= x2) & (x <= x3)] = R0 + dR
    down = (x > x3) & (x < x4)
    r[down] = R0 + 0.5 * dR * (1.0 + np.cos(np.pi * (x[down] - x3) / (x4 - x3)))
    return r


def constriction_radius(x, R_R: float, dR: float, x1: float, x2: float) -> np.ndarray:
    """Parent radius ``R_R + dR`` narrowing by a half cosine to ``R_R``."""
    x = np.asarray(x, dtype=float)
    r = np.full_like(x, R_R)
    r[x <= x1] = R_R + dR
    mid = (x > x1) & (x <= x2)
    r[mid] = R_R + 0.5 * dR * (1.0 + np.cos(np.pi * (x[mid] - x1) / (x2 - x1)))
    return r


def taper_radius(x, R_L: float, slope: float, x1: float, x2: float) -> np.ndarray:
    """Linear decrease of ``slope`` metres of radius per metre on ``[x1, x2)``."""
    x = np.asarray(x, dtype=float)
    r = np.full_like(x, R_L)
    ramp = (x >= x1) & (x < x2)
    r[ramp] = R_L - (x[ramp] - x1) * slope
    r[x >= x2] = R_L - (x2 - x1) * slope
    return r


def build_profile(kind: str, params: Mapping[str, float], grid: Grid) -> ArteryProfile:
    """Sample one of the packaged rest geometries at the cell centres.

    Stiffness comes from ``params['k']`` (constant) or, when both ``E`` and
    ``h`` are given, from :func:`stiffness_from_elasticity` on the sampled
    radius.

    ``uniform``       R0
    ``aneurysm-bump`` R0, dR, x1, x2, x3, x4
    ``constriction``  R_R, dR, x1, x2
    ``linear-taper``  R_L, dR (radius drop per metre), x1, x2
    """
    x = grid.x
    if kind == "uniform":
        (r0,) = _require(params, kind, "R0")
        radius = np.full(grid.J, r0)
    elif kind == "aneurysm-bump":
        r0, dr, x1, x2, x3, x4 = _require(params, kind, "R0", "dR", "x1", "x2", "x3", "x4")
        _check_increasing(kind, x1, x2, x3, x4)
        radius = aneurysm_radius(x, r0, dr, x1, x2, x3, x4)
    elif kind == "constriction":
        rr, dr, x1, x2 = _require(params, kind, "R_R", "dR", "x1", "x2")
        _check_increasing(kind, x1, x2)
        radius = constriction_radius(x, rr, dr, x1, x2)
    elif kind == "linear-taper":
        rl, dr, x1, x2 = _require(params, kind, "R_L", "dR", "x1", "x2")
        _check_increasing(kind, x1, x2)
        radius = taper_radius(x, rl, dr, x1, x2)
    else:
        raise ValueError(f"unknown profile kind {kind!r}; expected one of {PROFILE_KINDS}")

    if np.any(radius <= 0.0):
        raise ValueError(f"profile {kind!r} produces a non-positive radius")

    if "E" in params and "h" in params:
        k = stiffness_from_elasticity(float(params["E"]), float(params["h"]), radius)
    else:
        (k,) = _require(params, kind, "k")
    return ArteryProfile.from_radius(radius, k, grid)


def load_profile(table: Sequence[Sequence[float]], grid: Grid) -> ArteryProfile:
    """Linearly interpolate a tabulated ``(x, R0, k)`` profile onto ``grid``."""
    data = np.asarray(table, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 2:
        raise ValueError("profile table needs at least two rows of (x, R0, k)")
    xs, r0, k = data.T
    if np.any(np.diff(xs) <= 0.0):
        raise ValueError("profile table x column must be strictly increasing")
    if np.any(r0 <= 0.0) or np.any(k <= 0.0):
        raise ValueError("profile table R0 and k must be positive")
    if xs[0] > grid.x_left or xs[-1] < grid.x_right:
        raise ValueError(
            f"profile table covers [{xs[0]}, {xs[-1]}] but the grid spans "
            f"[{grid.x_left}, {grid.x_right}]")
    x = grid.x
    return ArteryProfile.from_radius(np.interp(x, xs, r0), np.interp(x, xs, k), grid)


def read_profile_table(path: str | Path) -> np.ndarray:
    """Read a whitespace-separated ``x r0 k`` file ('#' starts a comment)."""
    rows = []
    header_seen = False
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line.split() != ["x", "r0", "k"]:
                raise ValueError(f"{path}:{lineno}: expected header 'x r0 k', got {line!r}")
            header_seen = True
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(fields)}")
        rows.append([float(f) for f in fields])
    if not header_seen:
        raise ValueError(f"{path}: empty profile table")
    return np.array(rows, dtype=float).reshape(-1, 3)

"""Well-balanced finite-volume solver for 1D blood flow in arteries.

Variable wall stiffness ``k(x)`` and rest area ``A0(x)`` are handled by a
hydrostatic reconstruction with an HLL flux, so that rest states
``k sqrt(A) - k sqrt(A0) = const, Q = 0`` are preserved to round-off.
"""

from .boundary import BoundarySpec, Inflow, Neumann
from .geometry import ArteryProfile, Grid, build_profile
from .state import PhysicalParams, PositivityError, State
from .timestepper import SchemeConfig, SimState, SourceMode, advance

__version__ = "0.1.0"

__all__ = [
    "ArteryProfile",
    "BoundarySpec",
    "Grid",
    "Inflow",
    "Neumann",
    "PhysicalParams",
    "PositivityError",
    "SchemeConfig",
    "SimState",
    "SourceMode",
    "State",
    "advance",
    "build_profile",
]

"""Two-velocity (D1Q2) lattice Boltzmann scheme with inflow/outflow boundary
conditions, its exact finite-difference counterparts, and the accompanying
consistency and stability analysis toolkit."""

from .core import (
    BurgersFlux,
    FdState,
    ImpulseAtCell,
    InitialData,
    LbmState,
    LinearFlux,
    PointwiseFunction,
    RawDistributionPair,
    SchemeParams,
    equilibrium,
    init_at_equilibrium,
)
from .lbm import (
    BoundarySpec,
    Extrapolation,
    Kinetic,
    SourceMode,
    collide,
    extrapolation_weights,
    run,
    run_boundary_series,
    transport_and_boundaries,
)
from .fd import build_stencils, check_equivalence, discover_stencil, run_fd, solve_gamma

__all__ = [
    "SchemeParams", "LinearFlux", "BurgersFlux", "PointwiseFunction", "ImpulseAtCell",
    "RawDistributionPair", "InitialData", "LbmState", "FdState", "equilibrium",
    "init_at_equilibrium", "BoundarySpec", "Extrapolation", "Kinetic", "SourceMode",
    "collide", "transport_and_boundaries", "extrapolation_weights", "run",
    "run_boundary_series", "build_stencils", "run_fd", "check_equivalence",
    "discover_stencil", "solve_gamma",
]

__version__ = "0.1.0"

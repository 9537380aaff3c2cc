"""Shared parameterization for the two-velocity lattice Boltzmann solver.

Grid, time step, flux definitions and the state containers used by both the
lattice Boltzmann engine and the corresponding finite-difference engine.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

__all__ = [
    "SchemeParams",
    "LinearFlux",
    "BurgersFlux",
    "Flux",
    "PointwiseFunction",
    "ImpulseAtCell",
    "RawDistributionPair",
    "InitialData",
    "LbmState",
    "FdState",
    "CourantError",
    "equilibrium",
    "init_at_equilibrium",
    "check_courant",
]


class CourantError(ValueError):
    """Raised when the advection speed exceeds the lattice velocity."""


@dataclass(frozen=True)
class SchemeParams:
    """Relaxation parameter, lattice velocity and grid description.

    The grid covers [0, L] with ``num_points`` nodes including both ends,
    so dx = L/(J-1).  Acoustic scaling ties the time step to dt = dx/lam.
    """

    omega: float
    lam: float
    num_points: int
    domain_length: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.omega <= 2.0:
            raise ValueError(f"relaxation parameter must be in (0, 2], got {self.omega}")
        if self.num_points < 3:
            raise ValueError(f"need at least 3 grid points, got {self.num_points}")
        if self.lam <= 0.0:
            raise ValueError("lattice velocity must be positive")
        if self.domain_length <= 0.0:
            raise ValueError("domain length must be positive")

    @property
    def dx(self) -> float:
        return self.domain_length / (self.num_points - 1)

    @property
    def dt(self) -> float:
        return self.dx / self.lam

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.domain_length, self.num_points)


@dataclass(frozen=True)
class LinearFlux:
    """phi(u) = V u with constant advection velocity V."""

    velocity: float

    def phi(self, u):
        return self.velocity * u

    def courant(self, params: SchemeParams) -> float:
        return self.velocity / params.lam


@dataclass(frozen=True)
class BurgersFlux:
    """phi(u) = -u^2/2."""

    def phi(self, u):
        return -0.5 * u * u


Flux = Union[LinearFlux, BurgersFlux]


def check_courant(params: SchemeParams, flux: Flux) -> None:
    """Enforce |C| <= 1; with omega = 2 the marginal case |C| = 1 only warns.

    Only meaningful for a linear flux; nonlinear fluxes have data-dependent
    speeds and are not checked here.
    """
    if not isinstance(flux, LinearFlux):
        return
    c = flux.courant(params)
    if abs(c) > 1.0:
        raise CourantError(f"Courant number {c} exceeds 1 in magnitude")
    if abs(c) == 1.0 and params.omega == 2.0:
        warnings.warn("|C| = 1 with omega = 2 is marginally outside the L2 stability region",
                      stacklevel=2)


@dataclass(frozen=True)
class PointwiseFunction:
    """Initial datum sampled pointwise at the grid nodes."""

    fn: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ImpulseAtCell:
    """Single-cell datum of given amplitude, split at equilibrium."""

    index: int
    amplitude: float = 1.0


@dataclass(frozen=True)
class RawDistributionPair:
    """Directly prescribed distribution functions."""

    f_plus: np.ndarray
    f_minus: np.ndarray


InitialData = Union[PointwiseFunction, ImpulseAtCell, RawDistributionPair]


@dataclass
class LbmState:
    """The two distribution functions at one time level."""

    f_plus: np.ndarray
    f_minus: np.ndarray

    def __post_init__(self):
        self.f_plus = np.asarray(self.f_plus, dtype=float)
        self.f_minus = np.asarray(self.f_minus, dtype=float)
        if self.f_plus.shape != self.f_minus.shape:
            raise ValueError("distribution arrays must have identical shape")

    @property
    def moment(self) -> np.ndarray:
        """Conserved moment u = f+ + f-."""
        return self.f_plus + self.f_minus

    def flux_moment(self, lam: float) -> np.ndarray:
        """Non-conserved moment v = lam (f+ - f-)."""
        return lam * (self.f_plus - self.f_minus)

    def copy(self) -> "LbmState":
        return LbmState(self.f_plus.copy(), self.f_minus.copy())


@dataclass
class FdState:
    """Conserved moment at two consecutive time levels."""

    u_now: np.ndarray
    u_prev: np.ndarray

    def __post_init__(self):
        self.u_now = np.asarray(self.u_now, dtype=float)
        self.u_prev = np.asarray(self.u_prev, dtype=float)
        if self.u_now.shape != self.u_prev.shape:
            raise ValueError("both levels must have identical length")


def equilibrium(u, params: SchemeParams, flux: Flux):
    """Equilibrium pair (f+eq, f-eq) = (u/2 + phi(u)/(2 lam), u/2 - phi(u)/(2 lam))."""
    half = 0.5 * np.asarray(u, dtype=float)
    shift = flux.phi(u) / (2.0 * params.lam)
    return half + shift, half - shift


def init_at_equilibrium(data: InitialData, params: SchemeParams, flux: Flux) -> LbmState:
    """Build the initial state with both distributions at equilibrium."""
    J = params.num_points
    if isinstance(data, RawDistributionPair):
        if len(data.f_plus) != J or len(data.f_minus) != J:
            raise ValueError("distribution arrays do not match the grid size")
        return LbmState(np.array(data.f_plus, dtype=float),
                        np.array(data.f_minus, dtype=float))
    if isinstance(data, ImpulseAtCell):
        u0 = np.zeros(J)
        if not 0 <= data.index < J:
            raise ValueError("impulse index outside the grid")
        u0[data.index] = data.amplitude
    else:
        u0 = np.asarray(data.fn(params.grid), dtype=float)
        if u0.shape != (J,):
            raise ValueError("sampled datum does not match the grid size")
    f_plus, f_minus = equilibrium(u0, params, flux)
    return LbmState(f_plus, f_minus)

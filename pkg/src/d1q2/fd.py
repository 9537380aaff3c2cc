"""Finite-difference schemes on the conserved moment that replay the LBM runs.

The multi-step schemes built here advance (u^{n-1}, u^n) -> u^{n+1} and match
the lattice Boltzmann trajectories exactly (to rounding) when the latter are
initialized at equilibrium.  The module also provides the least-squares
stencil discovery used to identify boundary schemes from simulation data, and
the LBM vs FD trajectory equivalence checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .core import Flux, FdState, InitialData, LinearFlux, SchemeParams, init_at_equilibrium
from .lbm import (
    BoundarySpec,
    Kinetic,
    SourceSeries,
    extrapolation_weights,
    run as lbm_run,
)

__all__ = [
    "GammaCoefficients",
    "FdStencilSet",
    "DiscoveredStencil",
    "solve_gamma",
    "build_stencils",
    "bulk_weights",
    "fd_first_step",
    "fd_step",
    "run_fd",
    "check_equivalence",
    "discover_stencil",
]


@dataclass(frozen=True)
class GammaCoefficients:
    """Companion weights gamma_0..gamma_{sbar-1} for the order->=2 boundary scheme.

    ``residual`` is the largest defect of the solution over the full
    over-determined system, including the redundant dropped equation.
    """

    values: np.ndarray
    residual: float


def _gamma_system(sigma: int):
    """Over-determined linear system for the gamma weights (sbar+1 equations)."""
    sbar = max(1, sigma - 1) + 1
    c = np.zeros(sbar + 2)
    c[:sigma] = extrapolation_weights(sigma)
    A = np.zeros((sbar + 1, sbar))
    b = np.zeros(sbar + 1)

    def add(row, idx, val):
        if 0 <= idx < sbar:
            A[row, idx] += val

    add(0, 0, c[0]); add(0, 1, 1.0)
    b[0] = c[0] ** 2 + c[1] - 1.0
    add(1, 0, c[1] - 1.0); add(1, 2, 1.0)
    b[1] = c[0] * (c[1] + 1.0) + c[2]
    add(2, 0, c[2]); add(2, 3, 1.0); add(2, 1, -1.0)
    b[2] = c[0] * c[2] + c[1] - 1.0 + c[3]
    for j in range(3, sbar + 1):
        add(j, 0, c[j]); add(j, j + 1, 1.0); add(j, j - 1, -1.0)
        b[j] = c[0] * c[j] + c[j + 1] + c[j - 1]
    return A, b


def solve_gamma(sigma: int) -> GammaCoefficients:
    """Solve the square system obtained by dropping the redundant last equation."""
    if sigma < 2:
        raise ValueError("gamma weights are defined for extrapolation order >= 2")
    A, b = _gamma_system(sigma)
    g = np.linalg.solve(A[:-1], b[:-1])
    residual = float(np.abs(A @ g - b).max())
    return GammaCoefficients(values=g, residual=residual)


def bulk_weights(omega: float, courant: float):
    """(a_-1, a_+1, b_0) of the three-point two-level bulk scheme, linear flux."""
    return (0.5 * (2.0 - omega + omega * courant),
            0.5 * (2.0 - omega - omega * courant),
            omega - 1.0)


@dataclass
class FdStencilSet:
    """All the stencils needed to replay one boundary-condition configuration.

    For a linear flux the boundary schemes are also recast as plain weight
    vectors ``alpha`` (level n) and ``beta`` (level n-1); these feed the
    normal-mode and matrix analyses.  For a nonlinear flux the stepping
    routines keep the flux differences symbolic and the recast fields are None.
    """

    params: SchemeParams
    flux: Flux
    outflow: object
    a_minus: float | None
    a_plus: float | None
    b_zero: float
    c: np.ndarray | None = None
    gamma: np.ndarray | None = None
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    first_u: np.ndarray | None = None
    src_prev_coeff: float = 0.0          # on S_0^n in the eventual scheme
    src_prev2_coeff: float = 0.0         # on S_0^{n-1} in the eventual scheme
    second0_u: np.ndarray | None = None  # kinetic only: u_0^2 from u^0
    second0_s1: float = 0.0
    second1_u: np.ndarray | None = None  # kinetic only: u_1^2 from u^0
    second1_s1: float = 0.0


def _kinetic_coeffs(omega: float, c: float):
    first = np.array([0.25 * (1.0 + c) ** 2,
                      0.5 * (1.0 - c),
                      0.25 * (1.0 - c * c)])
    second0 = np.array([
        (c**4 * omega + 2 * c**3 * omega - 4 * c**2 * omega - 2 * c * omega + 3 * omega
         + 2 * c**3 + 6 * c**2 + 6 * c + 2) / 16.0,
        -(c**3 * omega + c**2 * omega - c * omega - omega) / 4.0,
        -(c**4 * omega - 6 * c**2 * omega + 5 * omega + 2 * c**3 + 2 * c**2 + 6 * c - 10) / 16.0,
        (c**3 * omega + c**2 * omega - c * omega - omega - 2 * c**2 + 2) / 8.0,
    ])
    second0_s1 = 0.25 * (c * c * omega - omega + 2 * c + 2)
    second1 = np.array([
        (c**3 * omega + c**2 * omega - c * omega - omega + 2 * c**2 + 4 * c + 2) / 8.0,
        -(c**2 * omega - omega) / 2.0,
        -(c**3 * omega - c**2 * omega - c * omega + omega + 2 * c**2 - 2) / 8.0,
        (c**2 * omega - omega - 2 * c + 2) / 4.0,
    ])
    second1_s1 = 0.5 * (c * omega - omega + 2.0)
    alpha = np.array([0.25 * (c + 1) * ((c - 1) * omega + 2),
                      1.0 - 0.5 * (c + 1) * omega,
                      -0.25 * (c + 1) * ((c + 1) * omega - 2)])
    beta = np.array([0.5 * (c + 1) * omega * (omega - 1),
                     -0.5 * (c + 1) * (omega - 1) * (omega - 2)])
    return first, second0, second0_s1, second1, second1_s1, alpha, beta


def build_stencils(params: SchemeParams, flux: Flux, spec: BoundarySpec) -> FdStencilSet:
    """Assemble bulk and boundary stencils for the given configuration.

    The kinetic outflow admits a finite-difference form only for a linear
    flux; extrapolation outflows work for any flux (the nonlinear parts stay
    as flux differences applied by the step operator).
    """
    omega = params.omega
    linear = isinstance(flux, LinearFlux)
    if isinstance(spec.outflow, Kinetic) and not linear:
        raise ValueError("kinetic outflow has a finite-difference form for a linear flux only")
    if linear:
        courant = flux.courant(params)
        a_m, a_p, b0 = bulk_weights(omega, courant)
    else:
        courant = None
        a_m = a_p = None
        b0 = omega - 1.0
    out = FdStencilSet(params=params, flux=flux, outflow=spec.outflow,
                       a_minus=a_m, a_plus=a_p, b_zero=b0)
    if isinstance(spec.outflow, Kinetic):
        (out.first_u, out.second0_u, out.second0_s1,
         out.second1_u, out.second1_s1, out.alpha, out.beta) = _kinetic_coeffs(omega, courant)
        out.src_prev_coeff = 0.0
        out.src_prev2_coeff = -((omega - 1.0) ** 2)
        return out

    sigma = spec.outflow.order
    c = extrapolation_weights(sigma)
    out.c = c
    gamma = solve_gamma(sigma).values if sigma >= 2 else None
    out.gamma = gamma
    # S_0^{n+1} + (1-omega) S_0^n in both the sigma = 1 scheme and, through
    # (1-omega)/2 (c_0 - gamma_0) with c_0 - gamma_0 = 2, the sigma >= 2 one.
    out.src_prev_coeff = 1.0 - omega
    if linear:
        if sigma == 1:
            out.alpha = np.array([0.5 * omega * (1.0 + courant),
                                  0.5 * (2.0 - omega - omega * courant)])
            out.beta = np.zeros(1)
        else:
            alpha = 0.5 * (c + (1.0 - omega) * gamma) + 0.5 * omega * courant * c
            alpha[1] += 0.5 - 0.5 * omega * courant
            beta = np.zeros(sigma + 1)
            beta[1] = 0.5 * (omega - 1.0) * (c[0] + gamma[0])
            beta[2] = 0.5 * (omega - 1.0) * (c[1] + gamma[1] - 1.0)
            for j in range(3, sigma + 1):
                beta[j] = 0.5 * (omega - 1.0) * (c[j - 1] + gamma[j - 1])
            out.alpha = alpha
            out.beta = beta
        # first step, linear recast of the equilibrium-initialized half step
        first_u = 0.5 * c * (1.0 + courant)
        if sigma >= 2:
            first_u[1] += 0.5 * (1.0 - courant)
        else:
            first_u = np.concatenate([first_u, [0.5 * (1.0 - courant)]])
        out.first_u = first_u
    return out


def _boundary_first_value(u0: np.ndarray, st: FdStencilSet, s1: float) -> float:
    """u_0^1 from the sampled datum."""
    flux, lam = st.flux, st.params.lam
    if isinstance(st.outflow, Kinetic):
        return float(st.first_u @ u0[:3]) + s1
    c = st.c
    sigma = len(c)
    phi = flux.phi(u0[:max(sigma, 2)])
    u_part = c @ u0[:sigma]
    f_part = c @ phi[:sigma]
    u_part += u0[1]           # the (c_1 + 1) adjustment, with c_1 = 0 when sigma = 1
    f_part -= phi[1]          # the (c_1 - 1) adjustment
    return 0.5 * u_part + f_part / (2.0 * lam) + s1


def _boundary_eventual_value(un: np.ndarray, um: np.ndarray, st: FdStencilSet,
                             s_new: float, s_old: float, s_older: float) -> float:
    """u_0^{n+1} from (u^n, u^{n-1}) in the long-time regime."""
    flux, lam, omega = st.flux, st.params.lam, st.params.omega
    if isinstance(st.outflow, Kinetic):
        return (float(st.alpha @ un[:3] + st.beta @ um[:2])
                + s_new + st.src_prev2_coeff * s_older)
    c = st.c
    sigma = len(c)
    phi = flux.phi(un[:max(sigma, 2)])
    if sigma == 1:
        return (0.5 * omega * un[0] + 0.5 * (2.0 - omega) * un[1]
                + omega / (2.0 * lam) * (phi[0] - phi[1])
                + s_new + st.src_prev_coeff * s_old)
    gamma = st.gamma
    now = c + (1.0 - omega) * gamma
    val = 0.5 * (now @ un[:sigma] + un[1])
    prev = (omega - 1.0) / 2.0 * (
        (c[0] + gamma[0]) * um[1]
        + (c[1] + gamma[1] - 1.0) * um[2]
        + sum((c[j - 1] + gamma[j - 1]) * um[j] for j in range(3, sigma + 1)))
    f_part = c @ phi[:sigma] - phi[1]
    return val + prev + omega / (2.0 * lam) * f_part + s_new + st.src_prev_coeff * s_old


def fd_first_step(u0: np.ndarray, st: FdStencilSet, g: Callable[[float], float],
                  sources: SourceSeries) -> FdState:
    """Half Lax-Friedrichs step induced by the equilibrium initialization."""
    flux, lam = st.flux, st.params.lam
    phi = flux.phi(u0)
    u1 = np.empty_like(u0)
    u1[1:-1] = 0.5 * (u0[:-2] + u0[2:]) + (phi[:-2] - phi[2:]) / (2.0 * lam)
    u1[0] = _boundary_first_value(u0, st, sources.value(1))
    u1[-1] = g(st.params.dt)
    return FdState(u_now=u1, u_prev=u0)


def fd_step(state: FdState, st: FdStencilSet, n: int, g: Callable[[float], float],
            sources: SourceSeries) -> FdState:
    """Advance (u^{n-1}, u^n) -> u^{n+1} for n >= 1."""
    params, flux = st.params, st.flux
    omega, lam = params.omega, params.lam
    un, um = state.u_now, state.u_prev
    phi = flux.phi(un)
    new = np.empty_like(un)
    new[1:-1] = (0.5 * (2.0 - omega) * (un[:-2] + un[2:]) + (omega - 1.0) * um[1:-1]
                 + omega / (2.0 * lam) * (phi[:-2] - phi[2:]))
    new[-1] = g((n + 1) * params.dt)
    kinetic = isinstance(st.outflow, Kinetic)
    if kinetic and n == 1:
        # dedicated second-step rows next to the outflow
        new[0] = (st.second0_u @ um[:4] + st.second0_s1 * sources.value(1)
                  + sources.value(2))
        new[1] = st.second1_u @ um[:4] + st.second1_s1 * sources.value(1)
    else:
        new[0] = _boundary_eventual_value(un, um, st, sources.value(n + 1),
                                          sources.value(n), sources.value(n - 1))
    return FdState(u_now=new, u_prev=un)


def run_fd(params: SchemeParams, flux: Flux, data: InitialData, spec: BoundarySpec,
           num_steps: int) -> np.ndarray:
    """Dense finite-difference trajectory, shape (num_steps+1, J)."""
    st = build_stencils(params, flux, spec)
    u0 = init_at_equilibrium(data, params, flux).moment
    sources = SourceSeries(spec, u0, params, flux)
    out = np.empty((num_steps + 1, params.num_points))
    out[0] = u0
    if num_steps == 0:
        return out
    state = fd_first_step(u0, st, spec.inflow_trace, sources)
    out[1] = state.u_now
    for n in range(1, num_steps):
        state = fd_step(state, st, n, spec.inflow_trace, sources)
        out[n + 1] = state.u_now
    return out


def check_equivalence(params: SchemeParams, flux: Flux, data: InitialData,
                      spec: BoundarySpec, num_steps: int) -> float:
    """Largest pointwise deviation between the LBM and FD trajectories."""
    a = lbm_run(params, flux, data, spec, num_steps)
    b = run_fd(params, flux, data, spec, num_steps)
    return float(np.abs(a - b).max())


@dataclass(frozen=True)
class DiscoveredStencil:
    """Least-squares boundary stencil fitted from trajectories."""

    alpha: np.ndarray
    beta: np.ndarray
    rms_residual: float
    rank: int
    rank_deficient: bool


def discover_stencil(trajectories: Sequence[np.ndarray],
                     candidate_support: tuple[int, int]) -> DiscoveredStencil:
    """Fit u_0^n = sum_j alpha_j u_j^{n-1} + sum_j beta_j u_j^{n-2} over n >= 3.

    The regression matrix stacks all runs; the fit uses a rank-revealing QR
    factorization and reports rank deficiency instead of failing silently.
    """
    n_alpha, n_beta = candidate_support
    if len(trajectories) < 2:
        raise ValueError("need at least two runs to identify a stencil")
    rows = []
    rhs = []
    for traj in trajectories:
        steps = traj.shape[0] - 1
        if steps < 3:
            raise ValueError("each run must cover at least 3 steps")
        for n in range(3, steps + 1):
            rows.append(np.concatenate([traj[n - 1, :n_alpha], traj[n - 2, :n_beta]]))
            rhs.append(traj[n, 0])
    A = np.array(rows)
    y = np.array(rhs)
    coeffs, _, rank, _ = scipy.linalg.lstsq(A, y, lapack_driver="gelsy")
    resid = A @ coeffs - y
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return DiscoveredStencil(alpha=coeffs[:n_alpha], beta=coeffs[n_alpha:],
                             rms_residual=rms, rank=int(rank),
                             rank_deficient=rank < n_alpha + n_beta)

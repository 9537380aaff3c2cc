"""Modified-equation analysis of the stencils and the empirical convergence harness.

The modified-equation engine Taylor-expands a space-time stencil around its
target node and returns the advection velocity of the first-order equivalent
PDE, which is compared against the target flux velocity.  The convergence
harness runs the lattice Boltzmann solver over a refinement sequence and
measures discrete L2 errors against exact solutions (characteristics for both
the linear and the pre-shock Burgers problems).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Flux, LinearFlux, PointwiseFunction, SchemeParams
from .lbm import BoundarySpec, Kinetic, OutflowCondition, SourceMode, run as lbm_run
from . import fd

__all__ = [
    "Stencil",
    "ModifiedEquation",
    "ConvergenceRow",
    "ConvergenceScenario",
    "Datum",
    "modified_equation",
    "bulk_stencil",
    "boundary_stencil",
    "convergence_study",
    "exact_advection_solution",
    "exact_burgers_solution",
    "advection_sine_datum",
    "burgers_tanh_datum",
    "tanh_profile",
    "random_trig_datum",
    "DEFAULT_DX_SEQUENCE",
]

# Refinement sequence dx = 1/(J-1), J-1 growing geometrically by ~1.6.
DEFAULT_DX_SEQUENCE = tuple(1.0 / m for m in
                            (49, 79, 127, 203, 325, 520, 832, 1331, 2130, 3408))


@dataclass(frozen=True)
class Stencil:
    """One linear scheme row: target node and weighted source nodes.

    ``entries`` maps (time level, space offset) to a weight, with level 0 the
    most recent data level and level -1 the one before; the target sits
    ``advance`` time levels after level 0 at space offset ``target_offset``.
    """

    entries: tuple[tuple[int, int, float], ...]
    target_offset: int = 0
    advance: int = 1


@dataclass(frozen=True)
class ModifiedEquation:
    """First-order equivalent PDE of a stencil: d_t psi + a d_x psi = O(dx)."""

    effective_advection: float
    consistency_defect: float
    is_consistent_with_target: bool


def modified_equation(stencil: Stencil, params: SchemeParams, velocity: float,
                      tol: float = 1e-12) -> ModifiedEquation:
    """Taylor moment sums of the stencil around its target node.

    The zeroth moment (weight sum minus one) must vanish for the expansion to
    be meaningful; the first moments then give the effective advection speed.
    """
    wsum = sum(w for _, _, w in stencil.entries)
    defect = wsum - 1.0
    if abs(defect) > tol:
        raise ValueError(f"stencil is inconsistent at order zero (defect {defect:.3e})")
    j_moment = sum(j * w for _, j, w in stencil.entries)
    l_moment = sum(lvl * w for lvl, _, w in stencil.entries)
    a = params.lam * (stencil.target_offset - j_moment) / (stencil.advance - l_moment)
    return ModifiedEquation(effective_advection=a,
                            consistency_defect=defect,
                            is_consistent_with_target=abs(a - velocity) <= tol)


def _linear_spec(outflow: OutflowCondition, params: SchemeParams, velocity: float):
    flux = LinearFlux(velocity)
    spec = BoundarySpec(inflow_trace=lambda t: 0.0, outflow=outflow, source=SourceMode.OFF)
    return fd.build_stencils(params, flux, spec)


def bulk_stencil(params: SchemeParams, velocity: float) -> Stencil:
    """Interior three-point two-level scheme for a linear flux."""
    a_m, a_p, b0 = fd.bulk_weights(params.omega, velocity / params.lam)
    return Stencil(entries=((0, -1, a_m), (0, 1, a_p), (-1, 0, b0)))


def boundary_stencil(outflow: OutflowCondition, params: SchemeParams, velocity: float,
                     phase: str = "eventual") -> Stencil:
    """Outflow boundary stencil for a linear flux.

    ``phase`` selects the scheme: "initial" (first step from the datum),
    "eventual" (long-time), and for the kinetic outflow also "second"
    (second step at the boundary node) and "second_neighbor" (second step one
    node in, whose target sits at offset 1).
    """
    st = _linear_spec(outflow, params, velocity)
    if phase == "eventual":
        entries = tuple((0, j, w) for j, w in enumerate(st.alpha) if w != 0.0)
        entries += tuple((-1, j, w) for j, w in enumerate(st.beta) if w != 0.0)
        return Stencil(entries=entries)
    if phase == "initial":
        return Stencil(entries=tuple((0, j, w) for j, w in enumerate(st.first_u) if w != 0.0))
    if not isinstance(outflow, Kinetic):
        raise ValueError(f"phase {phase!r} exists for the kinetic outflow only")
    if phase == "second":
        return Stencil(entries=tuple((0, j, w) for j, w in enumerate(st.second0_u)),
                       target_offset=0, advance=2)
    if phase == "second_neighbor":
        return Stencil(entries=tuple((0, j, w) for j, w in enumerate(st.second1_u)),
                       target_offset=1, advance=2)
    raise ValueError(f"unknown phase {phase!r}")


# --------------------------------------------------------------------------
# exact solutions and problem presets


def exact_advection_solution(u0: Callable, g: Callable, velocity: float, length: float,
                             t: float, x):
    """Method of characteristics for leftward advection on [0, L].

    Points whose characteristic foot x - V t lies inside the domain carry the
    initial datum; the rest carry the inflow trace transported from x = L.
    Requires V < 0.
    """
    if velocity >= 0:
        raise ValueError("the outflow-at-the-left setup needs a negative velocity")
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    foot = x - velocity * t
    inside = foot < length
    out = np.empty_like(foot)
    out[inside] = u0(foot[inside])
    entry_time = t - (length - x[~inside]) / abs(velocity)
    out[~inside] = np.asarray([g(s) for s in entry_time])
    return out[0] if scalar else out


def exact_burgers_solution(u0: Callable, t: float, x, speed_range=(0.0, 1.0),
                           iterations: int = 90):
    """Pre-shock solution of d_t u - d_x(u^2/2) = 0 by characteristic inversion.

    Characteristics travel at -u0(xi); the foot xi of the one through (t, x)
    solves xi - u0(xi) t = x, found by bisection.  Valid before the first
    crossing time; ``speed_range`` brackets u0.
    """
    x = np.asarray(x, dtype=float)
    lo = x + speed_range[0] * t
    hi = x + speed_range[1] * t + 1e-12
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        too_far = mid - u0(mid) * t > x
        hi = np.where(too_far, mid, hi)
        lo = np.where(too_far, lo, mid)
    return u0(0.5 * (lo + hi))


def random_trig_datum(seed: int, length: float, modes: int = 4) -> Callable:
    """Seeded random trigonometric polynomial, used for equivalence checks."""
    rng = np.random.default_rng(seed)
    amps_sin = rng.normal(size=modes)
    amps_cos = rng.normal(size=modes)
    ks = np.arange(1, modes + 1) * np.pi / length

    def u0(x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for a, b, k in zip(amps_sin, amps_cos, ks):
            acc += a * np.sin(k * x) + b * np.cos(k * x)
        return acc

    return u0


def tanh_profile(x):
    """Monotone 0-to-1 ramp, smooth inside |x| < 1/2 and saturated outside."""
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = 0.5 + 0.5 * np.sign(x)
    inside = np.abs(2.0 * x) < 1.0
    xi = x[inside]
    out[inside] = 0.5 + 0.5 * np.tanh(2.0 * xi / (1.0 - 4.0 * xi * xi))
    return out[0] if scalar else out


@dataclass(frozen=True)
class Datum:
    """Initial profile, inflow trace and exact solution for a study."""

    u0: Callable
    trace: Callable[[float], float]
    exact: Callable[[float, np.ndarray], np.ndarray]  # (t, x) -> u


def advection_sine_datum(velocity: float, length: float) -> Datum:
    """sin(x) datum with the trace of the global smooth solution at x = L."""
    u0 = np.sin

    def trace(t):
        return math.sin(length - velocity * t)

    def exact(t, x):
        return exact_advection_solution(u0, trace, velocity, length, t, x)

    return Datum(u0=u0, trace=trace, exact=exact)


def burgers_tanh_datum(length: float = 1.0) -> Datum:
    """Tanh ramp for the Burgers flux; the right boundary feeds the constant 1."""

    def exact(t, x):
        return exact_burgers_solution(tanh_profile, t, x)

    return Datum(u0=tanh_profile, trace=lambda t: 1.0, exact=exact)


# --------------------------------------------------------------------------
# convergence harness


@dataclass(frozen=True)
class ConvergenceRow:
    dx: float
    l2_error: float
    observed_order: float | None
    blew_up: bool = False


@dataclass(frozen=True)
class ConvergenceScenario:
    """Everything a refinement study needs besides the grid sizes."""

    flux: Flux
    omega: float
    outflow: OutflowCondition
    source: SourceMode
    final_time: float
    datum: Datum
    lam: float = 1.0
    length: float = 1.0


def discrete_l2(values: np.ndarray, dx: float) -> float:
    return float(np.sqrt(dx * np.sum(values ** 2)))


def convergence_study(scenario: ConvergenceScenario,
                      dx_sequence: Sequence[float] = DEFAULT_DX_SEQUENCE) -> list[ConvergenceRow]:
    """Run the solver over the refinement sequence and tabulate L2 errors.

    Each run takes round(T/dt) steps and the error is measured at the reached
    time, so non-integer step counts do not pollute the observed orders.
    Blown-up rows (norm above 1e10) are flagged instead of aborting the study.
    """
    if any(b >= a for a, b in zip(dx_sequence, dx_sequence[1:])):
        raise ValueError("dx sequence must be strictly decreasing")
    rows: list[ConvergenceRow] = []
    prev: tuple[float, float] | None = None
    for dx in dx_sequence:
        segments = round(scenario.length / dx)
        params = SchemeParams(omega=scenario.omega, lam=scenario.lam,
                              num_points=segments + 1, domain_length=scenario.length)
        steps = round(scenario.final_time / params.dt)
        spec = BoundarySpec(inflow_trace=scenario.datum.trace, outflow=scenario.outflow,
                            source=scenario.source)
        traj = lbm_run(params, scenario.flux, PointwiseFunction(scenario.datum.u0),
                       spec, steps)
        final = traj[-1]
        if not np.all(np.isfinite(final)) or np.abs(final).max() > 1e10:
            rows.append(ConvergenceRow(dx=params.dx, l2_error=float("inf"),
                                       observed_order=None, blew_up=True))
            prev = None
            continue
        exact = scenario.datum.exact(steps * params.dt, params.grid)
        err = discrete_l2(final - exact, params.dx)
        order = None
        if prev is not None and err > 0.0:
            order = math.log(prev[1] / err) / math.log(prev[0] / params.dx)
        rows.append(ConvergenceRow(dx=params.dx, l2_error=err, observed_order=order))
        prev = (params.dx, err)
    return rows

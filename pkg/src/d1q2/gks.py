"""Normal-mode stability machinery for the semi-infinite outflow problem.

Characteristic spatial roots and their stable/unstable classification,
root pairs of the boundary eigenvalue problems, stability verdicts, and the
outflow/inflow reflection coefficients with a numerical pole-order estimator.
All of it is for a linear flux; ``omega`` is the relaxation parameter and
``courant`` the ratio V/lambda.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .fd import bulk_weights, build_stencils
from .lbm import BoundarySpec, Extrapolation, OutflowCondition, SourceMode
from .core import LinearFlux, SchemeParams

__all__ = [
    "CharRoots",
    "BoundaryRoot",
    "GksVerdict",
    "PoleOrderEstimate",
    "char_roots",
    "pi_value",
    "group_velocity",
    "boundary_roots",
    "gks_verdict",
    "outflow_weights",
    "reflection_out",
    "reflection_in",
    "pole_order",
    "kinetic_cubic_roots",
    "kinetic_root_sweep",
]

_CONTINUATION = 1e-6
_CONTINUATION_CHECK = 1e-8


@dataclass(frozen=True)
class CharRoots:
    """Spatial roots of the bulk characteristic equation at a given z.

    ``kappa_minus`` is the root continuing the |kappa| < 1 branch from
    |z| > 1 (the L2-admissible one), ``kappa_plus`` the other; one of them is
    None in the degenerate cases where the equation drops to first degree.
    ``ambiguous`` flags classification ties that survive both continuation
    radii.
    """

    kappa_minus: complex | None
    kappa_plus: complex | None
    degenerate_case: str | None = None
    ambiguous: bool = False

    def pair(self):
        return self.kappa_minus, self.kappa_plus


_DEGENERATE_TOL = 1e-13


def _is_negligible(weight: float) -> bool:
    return abs(weight) < _DEGENERATE_TOL


def pi_value(omega: float, courant: float) -> float | None:
    """Product of the two spatial roots, a_{-1}/a_{+1}; None where undefined."""
    a_m, a_p, _ = bulk_weights(omega, courant)
    if _is_negligible(a_p):
        return None
    return a_m / a_p


def _raw_roots(z: complex, omega: float, courant: float):
    a_m, a_p, b0 = bulk_weights(omega, courant)
    eta = z - b0 / z
    if _is_negligible(a_p):
        if _is_negligible(a_m):
            raise ValueError("degenerate bulk scheme: both off-diagonal weights vanish")
        return (a_m / eta,), "a_plus_zero"
    if _is_negligible(a_m):
        return (eta / a_p,), "a_minus_zero"
    disc = cmath.sqrt(eta * eta - 4.0 * a_m * a_p)
    return ((eta - disc) / (2.0 * a_p), (eta + disc) / (2.0 * a_p)), None


def char_roots(z: complex, omega: float, courant: float) -> CharRoots:
    """Solve the characteristic quadratic and classify the two roots.

    For |z| >= 1 the classification is the limit from outside the unit disk:
    |z| = 1 points are pushed radially to |z| (1 + 1e-6), with a cross-check
    at 1 + 1e-8 that flags ambiguous cases instead of guessing.  For |z| < 1
    the branches are continued radially inward from the unit circle, tracking
    root continuity; a near-collision along the path also raises the flag.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    roots, degenerate = _raw_roots(z, omega, courant)
    if degenerate == "a_plus_zero":
        return CharRoots(kappa_minus=roots[0], kappa_plus=None, degenerate_case=degenerate)
    if degenerate == "a_minus_zero":
        return CharRoots(kappa_minus=None, kappa_plus=roots[0], degenerate_case=degenerate)

    def modulus_order(zc):
        r, _ = _raw_roots(zc, omega, courant)
        return (r[0], r[1]) if abs(r[0]) < abs(r[1]) else (r[1], r[0])

    if abs(z) > 1.0 + 1e-14:
        km, kp = modulus_order(z)
        return CharRoots(kappa_minus=km, kappa_plus=kp)

    phase = z / abs(z)
    km, kp = modulus_order(phase * (1.0 + _CONTINUATION))
    check = modulus_order(phase * (1.0 + _CONTINUATION_CHECK))
    ambiguous = abs(km - check[0]) > abs(km - check[1])
    if abs(abs(z) - 1.0) <= 1e-14:
        # label the exact roots by proximity to the outside-continuation pair
        if abs(roots[0] - km) + abs(roots[1] - kp) <= abs(roots[1] - km) + abs(roots[0] - kp):
            km, kp = roots
        else:
            kp, km = roots
        return CharRoots(kappa_minus=km, kappa_plus=kp, ambiguous=ambiguous)
    # inward radial tracking from the circle down to |z|; a branch point of
    # the characteristic equation near the path makes the labels path
    # dependent, which is flagged rather than resolved
    ambiguous = ambiguous or _branch_point_near_segment(z, omega, courant)
    radii = np.linspace(1.0, abs(z), 64)[1:]
    for r in radii:
        pair, _ = _raw_roots(phase * r, omega, courant)
        if abs(pair[0] - km) + abs(pair[1] - kp) <= abs(pair[1] - km) + abs(pair[0] - kp):
            km, kp = pair
        else:
            km, kp = pair[1], pair[0]
        if abs(km - kp) < 1e-9 * max(1.0, abs(km)):
            ambiguous = True
    return CharRoots(kappa_minus=km, kappa_plus=kp, ambiguous=ambiguous)


def _branch_point_near_segment(z: complex, omega: float, courant: float,
                               tol: float = 1e-3) -> bool:
    """True when a double spatial root lies near the radial segment [z, z/|z|].

    Double roots occur where eta(z)^2 = 4 a_{-1} a_{+1}; in the squared
    variable w = z^2 that is a quadratic, giving four branch points.
    """
    a_m, a_p, b0 = bulk_weights(omega, courant)
    p = a_m * a_p
    disc = cmath.sqrt((2.0 * b0 + 4.0 * p) ** 2 - 4.0 * b0 * b0)
    phase = z / abs(z)
    r0, r1 = abs(z), 1.0
    for sign in (1.0, -1.0):
        w = (2.0 * b0 + 4.0 * p + sign * disc) / 2.0
        for branch in (cmath.sqrt(w), -cmath.sqrt(w)):
            s = (branch * phase.conjugate()).real
            if r0 <= s <= r1:
                dist2 = abs(branch) ** 2 - s * s
                dist = (max(dist2, 0.0)) ** 0.5
            else:
                dist = min(abs(branch - phase * r0), abs(branch - phase * r1))
            if dist < tol:
                return True
    return False


def group_velocity(z0: complex, k0: complex, omega: float, courant: float,
                   lam: float) -> float:
    """Group velocity -lam (kappa/z) dz/dkappa of a unit-modulus mode.

    Computed by implicit differentiation of the characteristic equation;
    returns +inf at poles of dz/dkappa.
    """
    a_m, a_p, b0 = bulk_weights(omega, courant)
    residual = abs((z0 - b0 / z0) - (a_m / k0 + a_p * k0))
    if residual > 1e-10:
        raise ValueError(f"(z, kappa) does not satisfy the characteristic equation "
                         f"(residual {residual:.2e})")
    deta_dz = 1.0 + b0 / (z0 * z0)
    if deta_dz == 0:
        return math.inf
    dz_dk = (a_p - a_m / (k0 * k0)) / deta_dz
    vg = -lam * (k0 / z0) * dz_dk
    return float(vg.real) if abs(vg.imag) < 1e-9 * (1.0 + abs(vg)) else vg


class BoundaryRoot(NamedTuple):
    z: complex
    kappa: complex


def outflow_weights(outflow: OutflowCondition, omega: float, courant: float):
    """(alpha, beta) weight vectors of the outflow boundary scheme."""
    params = SchemeParams(omega=omega, lam=1.0, num_points=16)
    spec = BoundarySpec(inflow_trace=lambda t: 0.0, outflow=outflow,
                        source=SourceMode.OFF)
    st = build_stencils(params, LinearFlux(courant), spec)
    return st.alpha, st.beta


def kinetic_cubic_roots(omega: float, courant: float):
    """The three non-closed-form roots of the kinetic boundary eigenvalue problem.

    Returns (z_roots, kappa_values) with kappa obtained from the rational
    expression that eliminated the boundary equation.
    """
    C, w = courant, omega
    coeffs = [
        4.0,
        -(C * C * w + 2.0 * C - w - 2.0),
        (2.0 * C * C * w * w - C * C * w - 2.0 * C * w * w + 2.0 * C * w
         - 4.0 * w * w - 2.0 * C + 7.0 * w - 2.0),
        -2.0 * C * w ** 3 + 4.0 * C * w * w - 2.0 * w ** 3 - 2.0 * C * w + 4.0 * w * w - 2.0 * w,
    ]
    zs = np.roots(coeffs)
    return zs, np.array([_kinetic_kappa(z, omega, courant) for z in zs])


def _kinetic_kappa(z: complex, omega: float, courant: float) -> complex:
    C, w = courant, omega
    num = (C + 1) * w * w - (C + 1) * w - 2.0 * z * z
    den = ((C + 1) * w * w - (C + 1) * z * z - 2.0 * (C + 1) * w
           + ((C + 1) * w - 2.0) * z + C + 1)
    if abs(den) < 1e-300:
        return complex("nan")
    return num / den


def _elimination_roots(alpha: np.ndarray, beta: np.ndarray, omega: float,
                       courant: float) -> list[BoundaryRoot]:
    """All (z, kappa) pairs solving bulk + boundary equations, numerically.

    Both equations are quadratics in z; their z-resultant is a polynomial in
    kappa whose roots are found by a companion-matrix solve, after which the
    common z roots are matched and residual-checked.
    """
    a_m, a_p, b0 = bulk_weights(omega, courant)
    Ba = np.asarray(alpha, dtype=float)                       # ascending in kappa
    Bb = np.zeros(max(len(beta), 1))
    Bb[: len(beta)] = beta

    def mul(p, q):
        return np.convolve(p, q)

    def sub(p, q):
        out = np.zeros(max(len(p), len(q)))
        out[: len(p)] += p
        out[: len(q)] -= q
        return out

    # bulk as z^2 - S(k) z - b0 with S = a_m / k + a_p k ; clear 1/k by k.
    # resultant_z of (z^2 - S z - b0, z^2 - Ba z - Bb) times k^2:
    #   (Bb - b0)^2 k^2 - (b0 Ba k - S k Bb)(Ba k - S k) with S k = a_m + a_p k^2
    Sk = np.zeros(3)
    Sk[0] = a_m
    Sk[2] = a_p
    t = Bb.copy()
    t[0] -= b0
    term1 = mul(np.array([0.0, 0.0, 1.0]), mul(t, t))          # k^2 (Bb-b0)^2
    left = sub(np.concatenate([[0.0], b0 * Ba]), mul(Sk, Bb))  # b0 Ba k - Sk Bb
    right = sub(np.concatenate([[0.0], Ba]), Sk)               # Ba k - Sk
    full = sub(term1, mul(left, right))
    coeffs = np.trim_zeros(full[::-1], "f")
    if len(coeffs) < 2:
        return []
    kappas = np.roots(coeffs)
    found: list[BoundaryRoot] = []
    for k in kappas:
        if abs(k) < 1e-12:
            continue
        s = a_m / k + a_p * k
        z_bulk = np.roots([1.0, -s, -b0])
        for z in z_bulk:
            if abs(z) < 1e-10:
                continue
            res = abs(z * z - z * np.polyval(Ba[::-1], k) - np.polyval(Bb[::-1], k))
            if res < 1e-8 * (1.0 + abs(z) ** 2):
                found.append(BoundaryRoot(z=complex(z), kappa=complex(k)))
    deduped: list[BoundaryRoot] = []
    for root in found:
        if not any(abs(root.z - r.z) < 1e-8 and abs(root.kappa - r.kappa) < 1e-8
                   for r in deduped):
            deduped.append(root)
    return deduped


def boundary_roots(outflow: OutflowCondition, omega: float,
                   courant: float) -> list[BoundaryRoot]:
    """Root pairs (z, kappa) of the outflow boundary eigenvalue problem.

    Extrapolation orders 1 and 2 are fully covered by closed forms; order 3
    and higher start from the closed candidates and add whatever the
    polynomial elimination finds beyond them.  The kinetic condition returns
    its three closed pairs plus the three roots of the residual cubic.
    """
    pi = pi_value(omega, courant)
    roots: list[BoundaryRoot] = []

    def push(z, kappa):
        cand = BoundaryRoot(z=complex(z), kappa=complex(kappa))
        if not any(abs(cand.z - r.z) < 1e-8 and abs(cand.kappa - r.kappa) < 1e-8
                   for r in roots):
            roots.append(cand)

    if isinstance(outflow, Extrapolation):
        sigma = outflow.order
        push(1.0, 1.0)
        if pi is not None:
            push(omega - 1.0, -pi)
        if sigma >= 2:
            push(1.0 - omega, 1.0)
        if sigma >= 3:
            alpha, beta = outflow_weights(outflow, omega, courant)
            for r in _elimination_roots(alpha, beta, omega, courant):
                if not any(abs(r.z - k.z) < 1e-6 and abs(r.kappa - k.kappa) < 1e-6
                           for k in roots):
                    roots.append(r)
        return roots
    # kinetic: three closed pairs and the residual cubic
    push(1.0, 1.0)
    if pi is not None:
        push(1.0 - omega, pi)
        push(omega - 1.0, -pi)
    zs, ks = kinetic_cubic_roots(omega, courant)
    for z, k in zip(zs, ks):
        if abs(z) < 1e-12 or not (np.isfinite(k.real) and np.isfinite(k.imag)):
            continue
        push(z, k)
    return roots


@dataclass(frozen=True)
class GksVerdict:
    """Outcome of the normal-mode analysis for one outflow configuration."""

    status: str                                  # "stable" or "unstable"
    unstable_modes: tuple[BoundaryRoot, ...]
    notes: str = ""

    @property
    def is_stable(self) -> bool:
        return self.status == "stable"


def gks_verdict(outflow: OutflowCondition, omega: float, courant: float) -> GksVerdict:
    """Classify each boundary root's kappa; admissible ones mean instability.

    A boundary root with |z| >= 1 whose kappa is the decaying branch
    kappa_minus is a nontrivial admissible eigensolution, hence instability.
    """
    unstable = []
    for root in boundary_roots(outflow, omega, courant):
        if abs(root.z) < 1.0 - 1e-9:
            continue
        cr = char_roots(root.z, omega, courant)
        if cr.kappa_minus is None:
            continue
        if cr.kappa_plus is None:
            is_minus = abs(root.kappa - cr.kappa_minus) < 1e-8
        else:
            is_minus = abs(root.kappa - cr.kappa_minus) < abs(root.kappa - cr.kappa_plus)
        if is_minus:
            unstable.append(root)
    notes = ""
    if (isinstance(outflow, Extrapolation) and outflow.order >= 3
            and courant < 0 and omega < 2.0 and not unstable):
        notes = "unproven regime: numerical verdict only"
    return GksVerdict(status="unstable" if unstable else "stable",
                      unstable_modes=tuple(unstable), notes=notes)


def _boundary_symbol(z: complex, kappa: complex, alpha, beta) -> complex:
    val = z
    for j, a in enumerate(alpha):
        val -= a * kappa ** j
    acc = 0.0 + 0j
    for j, b in enumerate(beta):
        acc += b * kappa ** j
    return val - acc / z


def reflection_out(z: complex, alpha, beta, omega: float, courant: float,
                   kappa_ref: tuple[complex, complex] | None = None) -> complex:
    """Outflow reflection coefficient -N(kappa_plus)/N(kappa_minus).

    ``kappa_ref`` optionally pins the branch assignment by proximity to a
    reference pair, which keeps the meromorphic continuation consistent when
    probing circles that dip inside the unit disk.  Returns complex inf at
    exact poles and complex nan when the two spatial roots coincide.
    """
    z = complex(z)
    cr = char_roots(z, omega, courant)
    km, kp = cr.kappa_minus, cr.kappa_plus
    if km is None or kp is None:
        raise ValueError("reflection coefficient needs both spatial roots")
    if kappa_ref is not None:
        ref_m, ref_p = kappa_ref
        if abs(km - ref_m) + abs(kp - ref_p) > abs(kp - ref_m) + abs(km - ref_p):
            km, kp = kp, km
    if abs(km - kp) < 1e-12 * max(1.0, abs(km)):
        return complex("nan")
    den = _boundary_symbol(z, km, alpha, beta)
    num = _boundary_symbol(z, kp, alpha, beta)
    if den == 0:
        return complex("inf")
    return -num / den


def reflection_in(z: complex, omega: float, courant: float, J: int) -> complex | None:
    """Inflow reflection coefficient -Pi^{-J+1} kappa_minus^{2J-2}; None if Pi undefined."""
    pi = pi_value(omega, courant)
    if pi is None:
        return None
    cr = char_roots(complex(z), omega, courant)
    if cr.kappa_minus is None:
        return None
    return -pi ** (-J + 1) * cr.kappa_minus ** (2 * J - 2)


class PoleOrderEstimate(NamedTuple):
    order: int | None
    slope: float
    residual: float


def pole_order(fn: Callable[[complex], complex], z0: complex,
               radii: Sequence[float] = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4),
               points_per_circle: int = 16,
               slope_tolerance: float = 0.2) -> PoleOrderEstimate:
    """Estimate the pole order of ``fn`` at ``z0`` from shrinking circles.

    Fits the slope of the circle-averaged log magnitude against log radius;
    a pole of order p gives slope -p.  ``order`` is None when the fitted
    slope is further than ``slope_tolerance`` from an integer.
    """
    mean_logs = []
    for r in radii:
        zs = z0 + r * np.exp(2j * np.pi * np.arange(points_per_circle) / points_per_circle)
        vals = np.array([abs(fn(z)) for z in zs])
        if np.any(vals == 0.0) or not np.all(np.isfinite(vals)):
            raise ValueError(f"function not finite and nonzero on circle radius {r}")
        mean_logs.append(float(np.mean(np.log(vals))))
    A = np.vstack([np.log(radii), np.ones(len(radii))]).T
    sol, res, *_ = np.linalg.lstsq(A, np.array(mean_logs), rcond=None)
    slope = float(sol[0])
    residual = float(np.sqrt(res[0] / len(radii))) if np.size(res) else 0.0
    nearest = round(-slope)
    if abs(-slope - nearest) > slope_tolerance:
        return PoleOrderEstimate(order=None, slope=slope, residual=residual)
    return PoleOrderEstimate(order=int(nearest), slope=slope, residual=residual)


def kinetic_root_sweep(omega: float, courants: Sequence[float]) -> list[dict]:
    """Moduli of the kinetic residual-cubic roots and their kappas over a C sweep."""
    rows = []
    for c in courants:
        zs, ks = kinetic_cubic_roots(omega, c)
        idx = np.argsort(-np.abs(zs.imag))  # conjugate pair first, real root last
        zs, ks = zs[idx], ks[idx]
        rows.append({
            "courant": c,
            "abs_z": [abs(z) for z in zs],
            "abs_kappa": [abs(k) for k in ks],
        })
    return rows

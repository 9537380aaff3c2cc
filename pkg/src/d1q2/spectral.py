"""Matrix-method machinery: scheme matrices, spectra, pseudo-spectra, deviations.

Four matrices represent one boundary-condition configuration: the lattice
Boltzmann update on the stacked distribution functions, its finite-difference
companion on two conserved-moment levels, and the pure Toeplitz and circulant
references obtained by stripping or wrapping the boundary rows.  On top of
the dense eigensolves this module provides the closed-form asymptotic spectra,
smallest-singular-value fields, eigenvalue counting near isolated points,
Chebyshev closed forms for the tridiagonal Toeplitz resolvent, and the
first-Newton-iterate estimate of the deviation of eigenvalues from asymptotic
targets.
"""

from __future__ import annotations

import cmath
import enum
import warnings
from dataclasses import dataclass, field
import numpy as np
import scipy.linalg

from .core import LinearFlux, SchemeParams
from .fd import build_stencils, bulk_weights
from .gks import boundary_roots, char_roots
from .lbm import BoundarySpec, Extrapolation, extrapolation_weights

__all__ = [
    "MatrixKind",
    "SchemeMatrix",
    "SpectrumReport",
    "DeviationEstimate",
    "PseudospectrumField",
    "PStabilityResult",
    "build_matrix",
    "spectrum",
    "asymptotic_spectrum",
    "pseudospectrum",
    "deviation_newton",
    "count_eigs_near",
    "tridiag_toeplitz_inverse_entry",
    "chebyshev_u",
    "p_stability_check",
]


class MatrixKind(enum.Enum):
    LBM_BLOCK = "lbm"
    FD_COMPANION = "fd"
    TOEPLITZ_COMPANION = "toeplitz"
    CIRCULANT_COMPANION = "circulant"


@dataclass(frozen=True)
class SchemeMatrix:
    kind: MatrixKind
    matrix: np.ndarray
    omega: float
    courant: float

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _collision_coefficients(omega: float, courant: float):
    """Linear collision mixing: f+* = cpp f+ + cpm f-, f-* = cmp f+ + cmm f-."""
    cpp = 0.5 * (2.0 - omega + omega * courant)
    cpm = 0.5 * omega * (1.0 + courant)
    cmp_ = 0.5 * omega * (1.0 - courant)
    cmm = 0.5 * (2.0 - omega - omega * courant)
    return cpp, cpm, cmp_, cmm


def _lbm_matrix(params: SchemeParams, flux: LinearFlux, spec: BoundarySpec) -> np.ndarray:
    """One collide+transport sweep with homogeneous boundary data, as a matrix.

    Rows are assembled directly from the update rules; the state is
    (f+_0..f+_{J-1}, f-_0..f-_{J-1}).
    """
    J = params.num_points
    omega = params.omega
    courant = flux.courant(params)
    cpp, cpm, cmp_, cmm = _collision_coefficients(omega, courant)
    E = np.zeros((2 * J, 2 * J))
    for j in range(1, J):
        E[j, j - 1] += cpp
        E[j, J + j - 1] += cpm
    for j in range(J - 1):
        E[J + j, j + 1] += cmp_
        E[J + j, J + j + 1] += cmm
    # inflow: f-_{J-1} <- -f+*_{J-2}
    E[2 * J - 1, J - 2] -= cpp
    E[2 * J - 1, 2 * J - 2] -= cpm
    if isinstance(spec.outflow, Extrapolation):
        c = extrapolation_weights(spec.outflow.order)
        for k, ck in enumerate(c):
            E[0, k] += ck * cpp
            E[0, J + k] += ck * cpm
    else:
        # equilibrium of f+*_0 + f-*_2 with weight (1 + C)/2 on the plus side
        w = 0.5 * (1.0 + courant)
        E[0, 0] += w * cpp
        E[0, J] += w * cpm
        E[0, 2] += w * cmp_
        E[0, J + 2] += w * cmm
    return E


def _fd_blocks(params: SchemeParams, flux: LinearFlux, spec: BoundarySpec):
    omega = params.omega
    courant = flux.courant(params)
    a_m, a_p, b0 = bulk_weights(omega, courant)
    J = params.num_points
    st = build_stencils(params, flux, spec)
    A = np.zeros((J, J))
    B = np.zeros((J, J))
    A[0, : len(st.alpha)] = st.alpha
    B[0, : len(st.beta)] = st.beta
    for j in range(1, J - 1):
        A[j, j - 1] = a_m
        A[j, j + 1] = a_p
        B[j, j] = b0
    return A, B


def _companion(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    J = A.shape[0]
    E = np.zeros((2 * J, 2 * J))
    E[:J, :J] = A
    E[:J, J:] = B
    E[J:, :J] = np.eye(J)
    return E


def build_matrix(kind: MatrixKind, params: SchemeParams, flux: LinearFlux,
                 spec: BoundarySpec) -> SchemeMatrix:
    """Dense 2J x 2J scheme matrix of the requested kind."""
    if not isinstance(flux, LinearFlux):
        raise ValueError("scheme matrices are defined for a linear flux")
    J = params.num_points
    omega = params.omega
    courant = flux.courant(params)
    if isinstance(spec.outflow, Extrapolation) and spec.outflow.order + 1 > J:
        raise ValueError("extrapolation stencil exceeds the grid")
    if kind is MatrixKind.LBM_BLOCK:
        M = _lbm_matrix(params, flux, spec)
    elif kind is MatrixKind.FD_COMPANION:
        A, B = _fd_blocks(params, flux, spec)
        M = _companion(A, B)
    elif kind is MatrixKind.TOEPLITZ_COMPANION:
        a_m, a_p, b0 = bulk_weights(omega, courant)
        A = np.diag(np.full(J - 1, a_m), -1) + np.diag(np.full(J - 1, a_p), 1)
        M = _companion(A, b0 * np.eye(J))
    elif kind is MatrixKind.CIRCULANT_COMPANION:
        a_m, a_p, b0 = bulk_weights(omega, courant)
        A = np.diag(np.full(J - 1, a_m), -1) + np.diag(np.full(J - 1, a_p), 1)
        A[0, J - 1] = a_m
        A[J - 1, 0] = a_p
        M = _companion(A, b0 * np.eye(J))
    else:
        raise ValueError(f"unknown matrix kind {kind}")
    return SchemeMatrix(kind=kind, matrix=M, omega=omega, courant=courant)


@dataclass
class SpectrumReport:
    """Eigenvalues and/or asymptotic structures of one scheme matrix."""

    eigenvalues: np.ndarray | None = None
    asymptotic_curve: np.ndarray | None = None
    isolated_points: np.ndarray | None = None
    max_modulus: float | None = None


def _as_array(matrix) -> np.ndarray:
    return matrix.matrix if isinstance(matrix, SchemeMatrix) else np.asarray(matrix)


def spectrum(matrix) -> SpectrumReport:
    """All eigenvalues by a dense nonsymmetric solve; conjugate closure checked."""
    M = _as_array(matrix)
    eig = np.linalg.eigvals(M)
    if np.isrealobj(M):
        remaining = list(eig[np.abs(eig.imag) > 1e-10])
        while remaining:
            lam = remaining.pop()
            dist = [abs(lam.conjugate() - mu) for mu in remaining]
            if not dist or min(dist) > 1e-10:
                raise AssertionError("spectrum of a real matrix is not conjugate-closed")
            remaining.pop(int(np.argmin(dist)))
    return SpectrumReport(eigenvalues=eig, max_modulus=float(np.abs(eig).max()))


def circulant_spectrum_closed_form(omega: float, courant: float, J: int) -> np.ndarray:
    """Exact eigenvalues of the circulant companion: per-frequency quadratics."""
    a_m, a_p, b0 = bulk_weights(omega, courant)
    k = np.arange(J)
    s = a_m * np.exp(2j * np.pi * k / J) + a_p * np.exp(-2j * np.pi * k / J)
    root = np.sqrt(s * s + 4.0 * b0 + 0j)
    return np.concatenate([(s + root) / 2.0, (s - root) / 2.0])


def asymptotic_spectrum(kind: str, omega: float, courant: float,
                        outflow=None, samples: int = 2048) -> SpectrumReport:
    """Large-J limit sets: circulant curve, Toeplitz curve, or outflow points.

    ``kind`` is one of "circulant", "toeplitz", "outflow".  The Toeplitz limit
    degenerates to the isolated pair +-sqrt(omega-1) when either off-diagonal
    bulk weight vanishes.  Outflow points are the boundary-root time
    amplification factors whose spatial root is strictly the smaller one.
    """
    a_m, a_p, b0 = bulk_weights(omega, courant)
    degenerate = abs(a_m) < 1e-13 or abs(a_p) < 1e-13
    if kind == "circulant":
        theta = np.linspace(-np.pi, np.pi, samples)
        s = a_m * np.exp(-1j * theta) + a_p * np.exp(1j * theta)
        root = np.sqrt(s * s + 4.0 * b0 + 0j)
        curve = np.concatenate([(s + root) / 2.0, (s - root) / 2.0])
        return SpectrumReport(asymptotic_curve=curve)
    if kind == "toeplitz":
        if degenerate:
            pts = np.array([np.sqrt(omega - 1.0), -np.sqrt(omega - 1.0)], dtype=complex)
            return SpectrumReport(asymptotic_curve=np.empty(0, dtype=complex),
                                  isolated_points=pts)
        pi = a_m / a_p
        sq = cmath.sqrt(pi)
        theta = np.linspace(0.0, np.pi, samples)
        s = (a_m / sq) * np.exp(-1j * theta) + (a_p * sq) * np.exp(1j * theta)
        root = np.sqrt(s * s + 4.0 * b0 + 0j)
        curve = np.concatenate([(s + root) / 2.0, (s - root) / 2.0])
        curve = np.concatenate([curve, curve.conj()])
        return SpectrumReport(asymptotic_curve=curve)
    if kind == "outflow":
        if outflow is None:
            raise ValueError("outflow kind needs the outflow condition")
        points = []
        for root in boundary_roots(outflow, omega, courant):
            rest = char_roots(root.z, omega, courant) if abs(root.z) > 1e-12 else None
            if rest is None:
                continue
            others = [k for k in rest.pair()
                      if k is not None and abs(k - root.kappa) > 1e-8]
            if not others:
                continue
            if abs(root.kappa) < min(abs(k) for k in others) - 1e-10:
                points.append(root.z)
        dedup = []
        for p in points:
            if not any(abs(p - q) < 1e-9 for q in dedup):
                dedup.append(p)
        return SpectrumReport(isolated_points=np.array(dedup, dtype=complex))
    raise ValueError(f"unknown asymptotic kind {kind!r}")


@dataclass
class PseudospectrumField:
    re: np.ndarray
    im: np.ndarray
    sigma_min: np.ndarray  # shape (len(im), len(re))


def pseudospectrum(matrix, re_range=(-1.5, 1.5), im_range=(-1.5, 1.5),
                   resolution: int | tuple[int, int] = 120) -> PseudospectrumField:
    """Smallest singular value of (zI - E) on a rectangular grid.

    A complex Schur factorization is done once; each grid node then costs two
    triangular solves per inverse-power iteration on the triangular factor.
    """
    M = _as_array(matrix)
    n = M.shape[0]
    n_re, n_im = (resolution, resolution) if np.isscalar(resolution) else resolution
    re = np.linspace(*re_range, n_re)
    im = np.linspace(*im_range, n_im)
    T, _ = scipy.linalg.schur(M.astype(complex), output="complex")
    field = np.empty((n_im, n_re))
    rng = np.random.default_rng(12345)
    v0 = rng.normal(size=n) + 1j * rng.normal(size=n)
    for iy, y in enumerate(im):
        for ix, x in enumerate(re):
            Z = (x + 1j * y) * np.eye(n) - T
            try:
                v = v0 / np.linalg.norm(v0)
                s_prev = np.inf
                for _ in range(150):
                    w = scipy.linalg.solve_triangular(Z, v, lower=False)
                    w = scipy.linalg.solve_triangular(Z.conj().T, w, lower=True)
                    nw = np.linalg.norm(w)
                    s = 1.0 / np.sqrt(nw)
                    v = w / nw
                    if abs(s - s_prev) <= 1e-10 * max(s, 1e-300):
                        break
                    s_prev = s
                field[iy, ix] = s if np.isfinite(s) else 0.0
            except scipy.linalg.LinAlgError:
                field[iy, ix] = 0.0
    return PseudospectrumField(re=re, im=im, sigma_min=field)


@dataclass(frozen=True)
class DeviationEstimate:
    """Estimated real shift from a target point to the nearest eigenvalue."""

    target: complex
    epsilon_newton: float
    epsilon_min_eig: float
    condition_estimate: float


def deviation_newton(matrix, z_target: complex) -> DeviationEstimate:
    """First Newton iterate -1/tr((z I - E)^{-1}) plus the min-eigenvalue variant.

    The trace comes from a dense LU solve against the identity.  When the
    trace cancels to zero the estimate is reported as +-inf rather than
    failing.  A one-norm condition estimate of (z I - E) is attached since the
    trace is rounding-dominated for nearly singular shifts.
    """
    M = _as_array(matrix)
    n = M.shape[0]
    shifted = z_target * np.eye(n) - M
    eig_shift = np.linalg.eigvals(shifted)
    if np.min(np.abs(eig_shift)) < 1e-14:
        raise ValueError("target is an eigenvalue of the matrix")
    lu, piv = scipy.linalg.lu_factor(shifted)
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(n))
    tr = np.trace(inv)
    tr_real = tr.real if np.iscomplexobj(inv) else float(tr)
    eps_newton = -1.0 / tr_real if tr_real != 0.0 else float("inf")
    min_idx = int(np.argmin(np.abs(eig_shift)))
    eps_min = -float(eig_shift[min_idx].real)
    cond = np.linalg.cond(shifted, 1)
    return DeviationEstimate(target=complex(z_target), epsilon_newton=float(eps_newton),
                             epsilon_min_eig=eps_min, condition_estimate=float(cond))


def count_eigs_near(matrix, z0: complex, radius: float) -> int:
    """Number of eigenvalues (with multiplicity) in the closed ball B(z0, radius)."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    eig = spectrum(matrix).eigenvalues
    dist = np.abs(eig - z0)
    near_boundary = np.abs(dist - radius) < 1e-9
    if np.any(near_boundary):
        warnings.warn(f"{int(near_boundary.sum())} eigenvalue(s) within 1e-9 of the "
                      "counting-ball boundary", stacklevel=2)
    return int(np.sum(dist <= radius))


def chebyshev_u(k: int, q: complex) -> complex:
    """Chebyshev polynomial of the second kind at a complex argument.

    Evaluated through the closed form with the principal square root; the
    degenerate q^2 = 1 points use the polynomial limit (k+1) q^k.
    """
    if k < 0:
        return 0.0 + 0j
    q = complex(q)
    w = cmath.sqrt(q * q - 1.0)
    if abs(w) < 1e-14:
        base = 1.0 if q.real >= 0 else -1.0
        return complex((k + 1) * base ** k)
    a = q + w
    return (a ** (k + 1) - (q - w) ** (k + 1)) / (2.0 * w)


def tridiag_toeplitz_inverse_entry(i: int, j: int, J: int, eta: complex,
                                   a_minus: float, a_plus: float) -> complex:
    """Entry (i, j), 1-based, of the inverse of tridiag(-a_minus, eta, -a_plus).

    Closed form through second-kind Chebyshev ratios at eta/(2 sqrt(a- a+)),
    valid for complex eta and sign-indefinite products a- a+.
    """
    if not (1 <= i <= J and 1 <= j <= J):
        raise ValueError("indices must lie in [1, J]")
    p = complex(a_minus) * complex(a_plus)
    sq = cmath.sqrt(p)
    if abs(sq) < 1e-300:
        raise ValueError("off-diagonal product vanishes; matrix is triangular")
    q = eta / (2.0 * sq)
    denom = chebyshev_u(J, q)
    if abs(denom) < 1e-13:
        raise ValueError("near-singular shift: Chebyshev denominator below 1e-13")
    if i <= j:
        return (a_plus ** (j - i) / sq ** (j - i + 1)
                * chebyshev_u(i - 1, q) * chebyshev_u(J - j, q) / denom)
    return (a_minus ** (i - j) / sq ** (i - j + 1)
            * chebyshev_u(j - 1, q) * chebyshev_u(J - i, q) / denom)


@dataclass(frozen=True)
class PStabilityResult:
    max_modulus: float
    verdict: str                      # "stable" or "unstable"
    coincident_unit_modes: bool       # repeated unit-modulus eigenvalues found

    @property
    def is_stable(self) -> bool:
        return self.verdict == "stable"


def p_stability_check(matrix, tol: float = 1e-9) -> PStabilityResult:
    """Power-boundedness proxy: all eigenvalues inside the closed unit disk.

    Unit-modulus eigenvalues that numerically coincide are flagged since a
    defective unit mode would still produce polynomial growth.
    """
    eig = spectrum(matrix).eigenvalues
    max_mod = float(np.abs(eig).max())
    unit = eig[np.abs(np.abs(eig) - 1.0) < 1e-8]
    coincident = False
    for a_idx in range(len(unit)):
        for b_idx in range(a_idx + 1, len(unit)):
            if abs(unit[a_idx] - unit[b_idx]) < 1e-8:
                coincident = True
    verdict = "stable" if max_mod <= 1.0 + tol else "unstable"
    return PStabilityResult(max_modulus=max_mod, verdict=verdict,
                            coincident_unit_modes=coincident)

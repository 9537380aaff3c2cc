"""Acceptance criteria, one test per criterion with a printed pass/fail line.

Run with `pytest tests/test_acceptance.py -v` (add -s to see the per-criterion
lines also on success).
"""

import time

import numpy as np
import pytest

from d1q2 import (
    BoundarySpec,
    BurgersFlux,
    Extrapolation,
    ImpulseAtCell,
    Kinetic,
    LinearFlux,
    PointwiseFunction,
    SchemeParams,
    SourceMode,
    check_equivalence,
    collide,
    extrapolation_weights,
    run,
    solve_gamma,
)
from d1q2.cli import fit_growth
from d1q2.consistency import (
    ConvergenceScenario,
    DEFAULT_DX_SEQUENCE,
    advection_sine_datum,
    boundary_stencil,
    bulk_stencil,
    burgers_tanh_datum,
    convergence_study,
    modified_equation,
    random_trig_datum,
)
from d1q2.core import LbmState
from d1q2.gks import char_roots, gks_verdict, outflow_weights, pi_value, pole_order, \
    reflection_out
from d1q2.lbm import run_boundary_series
from d1q2.spectral import (
    MatrixKind,
    build_matrix,
    circulant_spectrum_closed_form,
    count_eigs_near,
    deviation_newton,
    p_stability_check,
    spectrum,
    tridiag_toeplitz_inverse_entry,
)


def report(criterion: str, passed: bool, detail: str):
    print(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


def zero_trace(t):
    return 0.0


def spec_for(outflow, source=SourceMode.OFF, trace=zero_trace):
    return BoundarySpec(inflow_trace=trace, outflow=outflow, source=source)


TABLE1_COLUMNS = [
    ("extrap1_nosource", Extrapolation(1), SourceMode.OFF, 1.5, 2.432e-4),
    ("extrap1_corrected", Extrapolation(1), SourceMode.UPWIND_CORRECTION, 2.0, 6.645e-5),
    ("extrap2_nosource", Extrapolation(2), SourceMode.OFF, 2.0, 6.561e-5),
    ("kinetic_nosource", Kinetic(), SourceMode.OFF, 1.5, 7.669e-4),
    ("kinetic_corrected", Kinetic(), SourceMode.UPWIND_CORRECTION, 2.0, 7.581e-5),
]


def advection_rows(omega, outflow, source):
    scenario = ConvergenceScenario(
        flux=LinearFlux(-0.5), omega=omega, outflow=outflow, source=source,
        final_time=1.0, datum=advection_sine_datum(-0.5, 1.0))
    return convergence_study(scenario, DEFAULT_DX_SEQUENCE)


def test_criterion_01_table1_omega2():
    t0 = time.time()
    failures = []
    details = []
    for name, outflow, source, theory, coarse_err in TABLE1_COLUMNS:
        rows = advection_rows(2.0, outflow, source)
        orders = [r.observed_order for r in rows[-3:]]
        ratio = rows[0].l2_error / coarse_err
        details.append(f"{name}: e0 ratio {ratio:.3f}, finest orders "
                       + "/".join(f"{o:.3f}" for o in orders))
        if not (1 / 1.5 <= ratio <= 1.5):
            failures.append(f"{name} coarse error off by {ratio:.3f}x")
        if any(abs(o - theory) > 0.1 for o in orders):
            failures.append(f"{name} orders {orders} not within 0.1 of {theory}")
    elapsed = time.time() - t0
    if elapsed > 120.0:
        failures.append(f"runtime {elapsed:.0f}s exceeds 2 minutes")
    report("criterion 1 (advection refinement table, omega=2)", not failures,
           f"{'; '.join(details)}; runtime {elapsed:.1f}s"
           + (f"; FAILURES: {failures}" if failures else ""))


def test_criterion_02_table1_omega198():
    failures = []
    details = []
    for name, outflow, source, _, _ in TABLE1_COLUMNS:
        rows = advection_rows(1.98, outflow, source)
        orders = [r.observed_order for r in rows[-3:]]
        details.append(f"{name}: " + "/".join(f"{o:.2f}" for o in orders))
        if any(not (0.9 <= o <= 1.2) for o in orders):
            failures.append(f"{name} finest orders {orders} outside [0.9, 1.2]")
    report("criterion 2 (advection refinement table, omega=1.98)", not failures,
           "; ".join(details) + (f"; FAILURES: {failures}" if failures else ""))


TABLE2_COLUMNS = [
    ("extrap1_nosource", Extrapolation(1), SourceMode.OFF, 1.5),
    ("extrap1_corrected", Extrapolation(1), SourceMode.UPWIND_CORRECTION, 2.0),
    ("extrap2_nosource", Extrapolation(2), SourceMode.OFF, 2.0),
    ("kinetic_nosource", Kinetic(), SourceMode.OFF, 1.5),
    ("kinetic_corrected", Kinetic(), SourceMode.UPWIND_CORRECTION, 2.0),
]


def test_criterion_03_table2_burgers():
    failures = []
    details = []
    for name, outflow, source, theory in TABLE2_COLUMNS:
        scenario = ConvergenceScenario(
            flux=BurgersFlux(), omega=2.0, outflow=outflow, source=source,
            final_time=0.2, datum=burgers_tanh_datum(1.0))
        rows = convergence_study(scenario, DEFAULT_DX_SEQUENCE)
        orders = [r.observed_order for r in rows[-3:]]
        mean = float(np.mean(orders))
        details.append(f"{name}: mean {mean:.3f} "
                       + "(" + "/".join(f"{o:.2f}" for o in orders) + ")")
        if abs(mean - theory) > 0.15:
            failures.append(f"{name} mean finest order {mean:.3f} vs {theory}")
        if name == "extrap1_nosource" and any(not (1.4 <= o <= 1.75) for o in orders):
            failures.append(f"{name} finest orders {orders} outside [1.4, 1.75]")
    report("criterion 3 (Burgers refinement table, omega=2)", not failures,
           "; ".join(details) + (f"; FAILURES: {failures}" if failures else ""))


def test_criterion_04_equivalence():
    worst = 0.0
    worst_case = ""
    configs = [(Extrapolation(s), om, c)
               for s in (1, 2, 3) for om in (1.0, 1.6, 2.0) for c in (-0.5, 0.5)]
    configs += [(Kinetic(), om, -0.5) for om in (1.5, 2.0)]
    for i, (outflow, omega, courant) in enumerate(configs):
        params = SchemeParams(omega=omega, lam=1.0, num_points=16)
        dev = check_equivalence(params, LinearFlux(courant),
                                PointwiseFunction(random_trig_datum(100 + i, 1.0)),
                                spec_for(outflow), 25)
        if dev > worst:
            worst, worst_case = dev, f"{outflow} omega={omega} C={courant}"
    report("criterion 4 (LBM/FD trajectory equivalence)", worst < 1e-10,
           f"worst deviation {worst:.2e} ({worst_case}) over {len(configs)} configs")


def test_criterion_05_modified_equations():
    failures = []
    worst = 0.0
    lam = 1.0
    omegas = [0.5, 1.0, 1.3, 1.6, 1.98, 2.0]
    courants = [-0.9, -0.5, -0.25, 0.3, 0.6]
    for omega in omegas:
        for c in courants:
            params = SchemeParams(omega=omega, lam=lam, num_points=32)
            V = c * lam

            def check(stencil, expected, label):
                nonlocal worst
                a = modified_equation(stencil, params, V).effective_advection
                err = abs(a - expected)
                worst = max(worst, err)
                if err > 1e-12:
                    failures.append(f"{label} omega={omega} C={c}: |err|={err:.1e}")

            check(bulk_stencil(params, V), V, "bulk")
            check(boundary_stencil(Extrapolation(1), params, V, "initial"),
                  (V - lam) / 2, "extrap1 initial")
            check(boundary_stencil(Extrapolation(1), params, V, "eventual"),
                  lam * (omega - 2) / 2 + omega * V / 2, "extrap1 eventual")
            for sigma in (2, 3, 4):
                for phase in ("initial", "eventual"):
                    check(boundary_stencil(Extrapolation(sigma), params, V, phase),
                          V, f"extrap{sigma} {phase}")
            check(boundary_stencil(Kinetic(), params, V, "initial"),
                  (V * V / lam + V - 2 * lam) / 2, "kinetic initial")
            check(boundary_stencil(Kinetic(), params, V, "second"),
                  lam / 16 * (2 * c**3 + 8 * c**2 + 6 * c - 16
                              + omega * (c**4 - c**3 - 7 * c**2 + c + 6)),
                  "kinetic second")
            check(boundary_stencil(Kinetic(), params, V, "second_neighbor"),
                  lam / 8 * (2 * c**2 + 6 * c - 4
                             + omega * (c**3 - 2 * c**2 - c + 2)),
                  "kinetic second neighbor")
            check(boundary_stencil(Kinetic(), params, V, "eventual"),
                  -lam * (1 - omega / 2 * (c + 1) * (c + omega - 1))
                  / (1 + (c + 1) * (omega - 1)), "kinetic eventual")
    report("criterion 5 (modified-equation coefficients)", not failures,
           f"worst |a - closed form| = {worst:.2e} over "
           f"{len(omegas) * len(courants)} parameter pairs"
           + (f"; FAILURES: {failures[:4]}" if failures else ""))


def test_criterion_06_gks_verdicts():
    failures = []
    checked = 0
    for sigma in (1, 2, 3):
        for omega in (0.5, 1.0, 1.5, 1.98, 2.0):
            for c in (-0.9, -0.5, -0.25, 0.25, 0.5, 0.9):
                v = gks_verdict(Extrapolation(sigma), omega, c)
                if c > 0:
                    expected = "unstable"
                elif sigma == 1:
                    expected = "stable"
                else:
                    expected = "unstable" if omega == 2.0 else "stable"
                checked += 1
                if v.status != expected:
                    failures.append(f"sigma={sigma} omega={omega} C={c}: "
                                    f"{v.status} != {expected}")
                    continue
                if c > 0 and not any(abs(m.z - 1) < 1e-9 and abs(m.kappa - 1) < 1e-9
                                     for m in v.unstable_modes):
                    failures.append(f"sigma={sigma} omega={omega} C={c}: "
                                    "missing mode (1, 1)")
                if c < 0 and sigma >= 2 and omega == 2.0 and not any(
                        abs(m.z + 1) < 1e-9 and abs(m.kappa - 1) < 1e-9
                        for m in v.unstable_modes):
                    failures.append(f"sigma={sigma} omega={omega} C={c}: "
                                    "missing mode (-1, 1)")
    report("criterion 6 (normal-mode verdict table)", not failures,
           f"{checked} cases checked"
           + (f"; FAILURES: {failures[:4]}" if failures else ""))


def test_criterion_07_circulant_spectrum():
    from scipy.optimize import linear_sum_assignment

    worst = 0.0
    for J in (4, 8, 16):
        for omega in (0.8, 1.5, 2.0):
            params = SchemeParams(omega=omega, lam=1.0, num_points=J)
            mat = build_matrix(MatrixKind.CIRCULANT_COMPANION, params,
                               LinearFlux(-0.5), spec_for(Extrapolation(1)))
            eig = spectrum(mat).eigenvalues
            closed = circulant_spectrum_closed_form(omega, -0.5, J)
            cost = np.abs(eig[:, None] - closed[None, :])
            r, c = linear_sum_assignment(cost)
            worst = max(worst, float(cost[r, c].max()))
    report("criterion 7 (circulant closed-form spectrum)", worst < 1e-9,
           f"largest matching distance {worst:.2e} over J in (4, 8, 16)")


def test_criterion_08_deviation_and_crossover():
    failures = []
    worst = 0.0
    for z0, c in ((-1.0, -0.5), (1.0, 0.5)):
        for J in (10, 11, 30, 31):
            params = SchemeParams(omega=2.0, lam=1.0, num_points=J)
            mat = build_matrix(MatrixKind.FD_COMPANION, params, LinearFlux(c),
                               spec_for(Extrapolation(1)))
            est = deviation_newton(mat, z0)
            if z0 == -1.0:
                if J % 2 == 0:
                    closed = (c + 2) / ((c + 3) * J + c + 1)
                else:
                    closed = c * c / ((c * c + c + 2) * J + c * c - c - 2)
            else:
                closed = -c / ((c - 1) * J + c + 1)
            err = abs(est.epsilon_newton - closed)
            worst = max(worst, err)
            if err > 1e-10:
                failures.append(f"z0={z0} J={J}: |err|={err:.1e}")
    flips = []
    for sigma in (2, 3):
        verdicts = {}
        for J in (30, 200):
            params = SchemeParams(omega=1.98, lam=1.0, num_points=J)
            mat = build_matrix(MatrixKind.FD_COMPANION, params, LinearFlux(-0.5),
                               spec_for(Extrapolation(sigma)))
            verdicts[J] = p_stability_check(mat).verdict
        flips.append(f"sigma={sigma}: J=30 {verdicts[30]}, J=200 {verdicts[200]}")
        if not (verdicts[30] == "unstable" and verdicts[200] == "stable"):
            failures.append(f"sigma={sigma} verdicts {verdicts} did not flip")
    report("criterion 8 (deviation closed forms and stability crossover)",
           not failures,
           f"worst closed-form error {worst:.2e}; {'; '.join(flips)}"
           + (f"; FAILURES: {failures}" if failures else ""))


def test_criterion_09_counting_theorem():
    failures = []
    details = []
    omega, c, J = 1.6, 0.5, 80
    anchor = char_roots(1.0 + 1e-6 + 0j, omega, c)
    kref = (anchor.kappa_minus, anchor.kappa_plus)
    for outflow, expected in [(Extrapolation(1), 1), (Extrapolation(2), 2),
                              (Extrapolation(3), 3), (Kinetic(), 1)]:
        params = SchemeParams(omega=omega, lam=1.0, num_points=J)
        mat = build_matrix(MatrixKind.FD_COMPANION, params, LinearFlux(c),
                           spec_for(outflow))
        count = count_eigs_near(mat, 1.0, 0.05)
        alpha, beta = outflow_weights(outflow, omega, c)
        est = pole_order(lambda z: reflection_out(z, alpha, beta, omega, c, kref),
                         1.0 + 0j)
        label = outflow.__class__.__name__ + (str(getattr(outflow, "order", "")))
        details.append(f"{label}: count={count}, pole order={est.order}")
        if not (count == est.order == expected):
            failures.append(f"{label}: count {count}, pole {est.order}, "
                            f"expected {expected}")
    report("criterion 9 (eigenvalue count equals reflection pole order)",
           not failures, "; ".join(details)
           + (f"; FAILURES: {failures}" if failures else ""))


def test_criterion_10_growth_exponents():
    t0 = time.time()
    failures = []
    details = []
    # pre-reflection regime: leftward impulse, outflow growth ~ n^(sigma-2)
    for sigma in (3, 4):
        params = SchemeParams(omega=2.0, lam=1.0, num_points=1000)
        steps = int(0.9 * 2 * 999 / 0.5)
        series = run_boundary_series(params, LinearFlux(-0.5), ImpulseAtCell(1),
                                     spec_for(Extrapolation(sigma)), steps)
        slope, _ = fit_growth(series, 16, steps)
        details.append(f"pre sigma={sigma}: {slope:.3f}")
        if abs(slope - (sigma - 2)) > 0.2:
            failures.append(f"pre-reflection sigma={sigma} slope {slope:.3f}")
    # long-time regime with repeated reflections: ~ n^(sigma-1)
    for sigma in (1, 2, 3, 4):
        params = SchemeParams(omega=1.6, lam=1.0, num_points=30)
        steps = round(300.0 / params.dt)
        series = run_boundary_series(params, LinearFlux(0.5), ImpulseAtCell(1),
                                     spec_for(Extrapolation(sigma)), steps)
        slope, _ = fit_growth(series, 500, 3000)
        details.append(f"long sigma={sigma}: {slope:.3f}")
        if abs(slope - (sigma - 1)) > 0.2:
            failures.append(f"long-time sigma={sigma} slope {slope:.3f}")
    elapsed = time.time() - t0
    if elapsed > 60.0:
        failures.append(f"runtime {elapsed:.0f}s exceeds 1 minute")
    report("criterion 10 (boundary growth exponents)", not failures,
           "; ".join(details) + f"; runtime {elapsed:.1f}s"
           + (f"; FAILURES: {failures}" if failures else ""))


def test_criterion_11_chebyshev_inverse():
    rng = np.random.default_rng(2718)
    worst = 0.0
    for J in (3, 5, 9):
        for a_m, a_p in ((-0.2, 0.6), (0.35, 0.25)):
            M0 = -np.diag(np.full(J - 1, a_m), -1) - np.diag(np.full(J - 1, a_p), 1)
            for _ in range(20):
                eta = rng.normal(loc=2.0, scale=0.5) + 1j * rng.normal()
                dense = np.linalg.inv(eta * np.eye(J) + M0)
                for i in range(1, J + 1):
                    for j in range(1, J + 1):
                        val = tridiag_toeplitz_inverse_entry(i, j, J, eta, a_m, a_p)
                        worst = max(worst, abs(val - dense[i - 1, j - 1]))
    report("criterion 11 (Chebyshev resolvent identity)", worst < 1e-10,
           f"largest entrywise deviation from dense inverses {worst:.2e}")


def test_criterion_12_property_suite():
    rng = np.random.default_rng(31415)
    failures = []
    # collision conserves u
    params = SchemeParams(omega=1.7, lam=1.0, num_points=40)
    state = LbmState(rng.normal(size=40), rng.normal(size=40))
    out = collide(state, params, LinearFlux(-0.5))
    if np.abs(out.moment - state.moment).max() > 1e-14:
        failures.append("collision conservation")
    # zero-data fixed point
    traj = run(params, LinearFlux(-0.5),
               PointwiseFunction(lambda x: np.zeros_like(x)),
               spec_for(Extrapolation(2)), 15)
    if np.any(traj != 0.0):
        failures.append("zero fixed point")
    # kappa product identity
    for _ in range(50):
        omega = rng.uniform(0.3, 2.0)
        c = rng.uniform(-0.9, 0.9)
        pi = pi_value(omega, c)
        if pi is None:
            continue
        z = rng.uniform(1.05, 2.0) * np.exp(2j * np.pi * rng.uniform())
        cr = char_roots(z, omega, c)
        if cr.kappa_minus is None or cr.kappa_plus is None:
            continue
        if abs(cr.kappa_minus * cr.kappa_plus - pi) > 1e-12 * max(1.0, abs(pi)):
            failures.append(f"kappa product at omega={omega:.3f} C={c:.3f}")
            break
    # extrapolation weight moment identities
    for sigma in range(1, 9):
        cw = extrapolation_weights(sigma)
        if abs(cw.sum() - 1.0) > 1e-12:
            failures.append(f"weight sum sigma={sigma}")
        expected = 0.0 if sigma == 1 else -1.0
        if abs((np.arange(sigma) * cw).sum() - expected) > 1e-12:
            failures.append(f"weight first moment sigma={sigma}")
    # gamma system redundancy
    for sigma in range(2, 11):
        if solve_gamma(sigma).residual > 1e-12:
            failures.append(f"gamma residual sigma={sigma}")
    report("criterion 12 (property suite)", not failures,
           "conservation, fixed points, root product, weight moments, "
           "gamma redundancy all checked"
           + (f"; FAILURES: {failures}" if failures else ""))

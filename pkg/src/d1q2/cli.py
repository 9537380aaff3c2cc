"""Command-line front end: simulations, studies and analyses with CSV/SVG output.

Every command is a pure function of its flags.  CSV files carry the full
scenario as '#'-prefixed comment lines and format floats with 17 significant
digits, so identical invocations produce byte-identical files.  Figures are
rendered next to the CSV files when --svg is passed.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import consistency, fd, gks, plots, spectral
from .core import (
    BurgersFlux,
    ImpulseAtCell,
    LinearFlux,
    PointwiseFunction,
    SchemeParams,
)
from .lbm import (
    BoundarySpec,
    Extrapolation,
    Kinetic,
    SourceMode,
    run,
    run_boundary_series,
)

__all__ = ["Scenario", "fit_growth", "main"]

_FLOAT_FIELDS = {"omega", "courant", "lam", "length", "final_time"}
_INT_FIELDS = {"points", "seed"}
_BOOL_FIELDS = {"svg"}


@dataclass(frozen=True)
class Scenario:
    """Flat, string-friendly description of one configuration."""

    omega: float = 2.0
    courant: float = -0.5
    lam: float = 1.0
    points: int = 100
    length: float = 1.0
    final_time: float = 1.0
    outflow: str = "extrap:1"
    source: str = "off"
    flux: str = "linear"
    datum: str = "sin"
    seed: int = 0
    out: str = "."
    svg: bool = False

    # -- serialization ------------------------------------------------------
    def to_kv(self) -> list[str]:
        items = []
        for f in fields(self):
            v = getattr(self, f.name)
            items.append(f"{f.name}={repr(v) if isinstance(v, float) else v}")
        return items

    @classmethod
    def from_kv(cls, lines) -> "Scenario":
        kwargs = {}
        for line in lines:
            key, _, raw = line.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key in _FLOAT_FIELDS:
                kwargs[key] = float(raw)
            elif key in _INT_FIELDS:
                kwargs[key] = int(raw)
            elif key in _BOOL_FIELDS:
                kwargs[key] = raw in ("True", "true", "1")
            else:
                kwargs[key] = raw
        return cls(**kwargs)

    # -- derived objects ----------------------------------------------------
    def make_params(self) -> SchemeParams:
        return SchemeParams(omega=self.omega, lam=self.lam, num_points=self.points,
                            domain_length=self.length)

    def make_flux(self):
        if self.flux == "burgers":
            return BurgersFlux()
        if self.flux == "linear":
            return LinearFlux(self.courant * self.lam)
        if self.flux.startswith("linear:"):
            return LinearFlux(float(self.flux.split(":", 1)[1]))
        raise ValueError(f"unknown flux {self.flux!r}")

    def make_outflow(self):
        if self.outflow == "kinetic":
            return Kinetic()
        if self.outflow.startswith("extrap:"):
            return Extrapolation(order=int(self.outflow.split(":", 1)[1]))
        raise ValueError(f"unknown outflow {self.outflow!r}")

    def make_source(self) -> SourceMode:
        return SourceMode.UPWIND_CORRECTION if self.source == "correct" else SourceMode.OFF

    def make_datum(self):
        """(initial data, inflow trace, exact solution or None)."""
        flux = self.make_flux()
        if self.datum == "sin":
            if not isinstance(flux, LinearFlux):
                raise ValueError("the sine datum ships an exact trace for the linear flux only")
            d = consistency.advection_sine_datum(flux.velocity, self.length)
            return PointwiseFunction(d.u0), d.trace, d.exact
        if self.datum == "tanh":
            d = consistency.burgers_tanh_datum(self.length)
            exact = d.exact if isinstance(flux, BurgersFlux) else None
            return PointwiseFunction(d.u0), d.trace, exact
        if self.datum.startswith("impulse:"):
            idx = int(self.datum.split(":", 1)[1])
            return ImpulseAtCell(index=idx), (lambda t: 0.0), None
        if self.datum == "zero":
            zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
            return PointwiseFunction(zero), (lambda t: 0.0), (lambda t, x: zero(x))
        raise ValueError(f"unknown datum {self.datum!r}")

    def make_boundary_spec(self) -> BoundarySpec:
        _, trace, _ = self.make_datum()
        return BoundarySpec(inflow_trace=trace, outflow=self.make_outflow(),
                            source=self.make_source())


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(path: Path, columns, rows, scenario: Scenario | None = None,
              comments=()):
    with open(path, "w") as f:
        if scenario is not None:
            for line in scenario.to_kv():
                f.write(f"# {line}\n")
        for line in comments:
            f.write(f"# {line}\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def fit_growth(series: np.ndarray, n_min: int, n_max: int):
    """Log-log slope of |u_0^n| against n over [n_min, n_max]; zeros trimmed."""
    n_max = min(n_max, len(series) - 1)
    if n_max <= n_min:
        raise ValueError("empty fit window")
    ns = np.arange(n_min, n_max + 1)
    vals = series[n_min:n_max + 1]
    keep = vals > 0.0
    if keep.sum() < 4:
        raise ValueError("boundary series is (almost) identically zero on the window")
    A = np.vstack([np.log(ns[keep]), np.ones(int(keep.sum()))]).T
    sol, res, *_ = np.linalg.lstsq(A, np.log(vals[keep]), rcond=None)
    residual = float(np.sqrt(res[0] / keep.sum())) if np.size(res) else 0.0
    return float(sol[0]), residual


def _out_dir(sc: Scenario) -> Path:
    out = Path(sc.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --------------------------------------------------------------------------
# commands


def cmd_simulate(sc: Scenario, snapshot_times=None) -> dict:
    params = sc.make_params()
    flux = sc.make_flux()
    data, trace, _ = sc.make_datum()
    spec = BoundarySpec(inflow_trace=trace, outflow=sc.make_outflow(),
                        source=sc.make_source())
    steps = round(sc.final_time / params.dt)
    traj = run(params, flux, data, spec, steps)
    out = _out_dir(sc)
    if snapshot_times is None:
        snapshot_times = [0.0, 0.25 * sc.final_time, 0.5 * sc.final_time, sc.final_time]
    indices = sorted({min(steps, max(0, round(t / params.dt))) for t in snapshot_times})
    times = [i * params.dt for i in indices]
    columns = ["x"] + [f"u_t{_fmt(t)}" for t in times]
    rows = [[x] + [traj[i, j] for i in indices] for j, x in enumerate(params.grid)]
    traj_path = write_csv(out / "trajectory.csv", columns, rows, sc)
    series = np.abs(traj[:, 0])
    series_rows = [[n, n * params.dt, s] for n, s in enumerate(series)]
    series_path = write_csv(out / "boundary_series.csv", ["n", "t", "abs_u0"],
                            series_rows, sc)
    if sc.svg:
        plots.plot_snapshots(params.grid, [traj[i] for i in indices], times,
                             out / "trajectory.svg")
        plots.plot_boundary_series(series, out / "boundary_series.svg")
    return {"trajectory": traj_path, "boundary_series": series_path, "steps": steps}


def cmd_growth(sc: Scenario, fit_window: tuple[int, int] | None = None) -> dict:
    params = sc.make_params()
    flux = sc.make_flux()
    data, trace, _ = sc.make_datum()
    spec = BoundarySpec(inflow_trace=trace, outflow=sc.make_outflow(),
                        source=sc.make_source())
    steps = round(sc.final_time / params.dt)
    series = run_boundary_series(params, flux, data, spec, steps)
    if fit_window is None:
        if not isinstance(flux, LinearFlux):
            raise ValueError("the default pre-reflection window needs a linear flux")
        c = abs(flux.courant(params))
        fit_window = (16, int(0.9 * 2 * (params.num_points - 1) / c))
    exponent, residual = fit_growth(series, *fit_window)
    out = _out_dir(sc)
    rows = [[n, n * params.dt, s] for n, s in enumerate(series)]
    comments = [f"fit_window={fit_window[0]}:{fit_window[1]}",
                f"exponent={_fmt(exponent)}", f"fit_residual={_fmt(residual)}"]
    path = write_csv(out / "growth.csv", ["n", "t", "abs_u0"], rows, sc, comments)
    if sc.svg:
        plots.plot_boundary_series(series, out / "growth.svg",
                                   fit=(exponent, *fit_window))
    return {"exponent": exponent, "fit_residual": residual, "csv": path}


def cmd_converge(sc: Scenario, dx_sequence=None) -> dict:
    flux = sc.make_flux()
    if sc.datum == "sin":
        datum = consistency.advection_sine_datum(flux.velocity, sc.length)
    elif sc.datum == "tanh":
        datum = consistency.burgers_tanh_datum(sc.length)
    else:
        raise ValueError("convergence studies support the sin and tanh data")
    scenario = consistency.ConvergenceScenario(
        flux=flux, omega=sc.omega, outflow=sc.make_outflow(), source=sc.make_source(),
        final_time=sc.final_time, datum=datum, lam=sc.lam, length=sc.length)
    rows = consistency.convergence_study(
        scenario, tuple(dx_sequence) if dx_sequence else consistency.DEFAULT_DX_SEQUENCE)
    out = _out_dir(sc)
    csv_rows = [[r.dx, r.l2_error, "" if r.observed_order is None else _fmt(r.observed_order)]
                for r in rows]
    path = write_csv(out / "convergence.csv", ["dx", "l2_error", "order"], csv_rows, sc)
    if sc.svg:
        plots.plot_convergence(rows, out / "convergence.svg")
    return {"rows": rows, "csv": path}


def cmd_equivalence(sc: Scenario, steps: int = 25) -> dict:
    params = sc.make_params()
    flux = sc.make_flux()
    u0 = consistency.random_trig_datum(sc.seed, sc.length)
    spec = BoundarySpec(inflow_trace=lambda t: 0.0, outflow=sc.make_outflow(),
                        source=sc.make_source())
    dev = fd.check_equivalence(params, flux, PointwiseFunction(u0), spec, steps)
    out = _out_dir(sc)
    path = write_csv(out / "equivalence.csv",
                     ["outflow", "omega", "courant", "points", "steps", "max_deviation"],
                     [[sc.outflow, sc.omega, sc.courant, sc.points, steps, dev]], sc)
    return {"max_deviation": dev, "csv": path}


def cmd_modified_eq(sc: Scenario) -> dict:
    params = sc.make_params()
    flux = sc.make_flux()
    if not isinstance(flux, LinearFlux):
        raise ValueError("modified equations are computed for the linear flux")
    outflow = sc.make_outflow()
    phases = ["initial", "eventual"]
    if isinstance(outflow, Kinetic):
        phases += ["second", "second_neighbor"]
    rows = []
    me = consistency.modified_equation(consistency.bulk_stencil(params, flux.velocity),
                                       params, flux.velocity)
    rows.append(["bulk", me.effective_advection, me.consistency_defect,
                 flux.velocity, me.is_consistent_with_target])
    for phase in phases:
        st = consistency.boundary_stencil(outflow, params, flux.velocity, phase)
        me = consistency.modified_equation(st, params, flux.velocity)
        rows.append([phase, me.effective_advection, me.consistency_defect,
                     flux.velocity, me.is_consistent_with_target])
    out = _out_dir(sc)
    path = write_csv(out / "modified_equations.csv",
                     ["scheme", "effective_advection", "defect", "target_velocity",
                      "consistent"], rows, sc)
    return {"rows": rows, "csv": path}


_SWEEP_OMEGAS = (0.5, 1.0, 1.5, 1.98, 2.0)
_SWEEP_COURANTS = (-0.9, -0.5, -0.25, 0.25, 0.5, 0.9)


def cmd_gks(sc: Scenario, sweep: bool = False) -> dict:
    out = _out_dir(sc)
    configs = []
    if sweep:
        for name in ("extrap:1", "extrap:2", "extrap:3", "kinetic"):
            for omega in _SWEEP_OMEGAS:
                for courant in _SWEEP_COURANTS:
                    configs.append((name, omega, courant))
    else:
        configs.append((sc.outflow, sc.omega, sc.courant))
    rows = []
    for name, omega, courant in configs:
        cond = Kinetic() if name == "kinetic" else Extrapolation(int(name.split(":")[1]))
        verdict = gks.gks_verdict(cond, omega, courant)
        modes = ";".join(f"z={m.z:.6g} kappa={m.kappa:.6g}" for m in verdict.unstable_modes)
        rows.append([name, omega, courant, verdict.status, modes, verdict.notes])
    path = write_csv(out / "gks_verdicts.csv",
                     ["outflow", "omega", "courant", "verdict", "unstable_modes", "notes"],
                     rows, sc)
    result = {"csv": path, "rows": rows}
    if sc.outflow == "kinetic" and not sweep:
        cs = [round(-0.95 + 0.01 * i, 10) for i in range(91)]
        sweep_rows = gks.kinetic_root_sweep(sc.omega, cs)
        csv_rows = [[r["courant"], *r["abs_z"], *r["abs_kappa"]] for r in sweep_rows]
        kpath = write_csv(out / "kinetic_roots.csv",
                          ["C", "abs_z1", "abs_z2", "abs_z3",
                           "abs_kappa1", "abs_kappa2", "abs_kappa3"], csv_rows, sc)
        result["kinetic_roots"] = kpath
        if sc.svg:
            plots.plot_kinetic_roots(sweep_rows, out / "kinetic_roots.svg")
    return result


_MATRIX_KINDS = {
    "fd": spectral.MatrixKind.FD_COMPANION,
    "lbm": spectral.MatrixKind.LBM_BLOCK,
    "toeplitz": spectral.MatrixKind.TOEPLITZ_COMPANION,
    "circulant": spectral.MatrixKind.CIRCULANT_COMPANION,
}


def cmd_spectrum(sc: Scenario, matrix: str = "fd") -> dict:
    params = sc.make_params()
    flux = sc.make_flux()
    spec = sc.make_boundary_spec()
    mat = spectral.build_matrix(_MATRIX_KINDS[matrix], params, flux, spec)
    report = spectral.spectrum(mat)
    out = _out_dir(sc)
    eig = report.eigenvalues
    path = write_csv(out / "spectrum.csv", ["re", "im"],
                     [[v.real, v.imag] for v in eig], sc,
                     [f"matrix={matrix}", f"max_modulus={_fmt(report.max_modulus)}"])
    kind = "circulant" if matrix == "circulant" else "toeplitz"
    asym = spectral.asymptotic_spectrum(kind, sc.omega, flux.courant(params))
    curve = asym.asymptotic_curve
    write_csv(out / "asymptotic_curve.csv", ["re", "im"],
              [[v.real, v.imag] for v in (curve if curve is not None else [])], sc)
    isolated = asym.isolated_points
    if matrix in ("fd", "lbm"):
        iso_out = spectral.asymptotic_spectrum("outflow", sc.omega, flux.courant(params),
                                               outflow=sc.make_outflow())
        pts = list(iso_out.isolated_points)
        if isolated is not None:
            pts = list(isolated) + pts
        isolated = np.array(pts, dtype=complex)
    write_csv(out / "isolated_points.csv", ["re", "im"],
              [[v.real, v.imag] for v in (isolated if isolated is not None else [])], sc)
    if sc.svg:
        plots.plot_spectrum(eig, out / "spectrum.svg", curve=curve, isolated=isolated,
                            title=f"{matrix} matrix, J={sc.points}")
    return {"report": report, "csv": path}


def cmd_pseudospectrum(sc: Scenario, matrix: str = "fd", resolution: int = 120,
                       re_range=(-1.5, 1.5), im_range=(-1.5, 1.5)) -> dict:
    params = sc.make_params()
    flux = sc.make_flux()
    spec = sc.make_boundary_spec()
    mat = spectral.build_matrix(_MATRIX_KINDS[matrix], params, flux, spec)
    field = spectral.pseudospectrum(mat, re_range, im_range, resolution)
    out = _out_dir(sc)
    rows = []
    for iy, y in enumerate(field.im):
        for ix, x in enumerate(field.re):
            rows.append([x, y, field.sigma_min[iy, ix]])
    path = write_csv(out / "pseudospectrum.csv", ["re", "im", "sigma_min"], rows, sc,
                     [f"matrix={matrix}", f"resolution={resolution}"])
    if sc.svg:
        eig = spectral.spectrum(mat).eigenvalues
        plots.plot_pseudospectrum(field, out / "pseudospectrum.svg", eigenvalues=eig)
    return {"field": field, "csv": path}


_DEVIATION_CONDITIONS = ("extrap:1", "extrap:2", "extrap:3", "extrap:4", "kinetic")


def cmd_deviation(sc: Scenario, j_list=(10, 20, 30, 40, 60, 80, 100, 140, 200),
                  target: float | None = None,
                  conditions=_DEVIATION_CONDITIONS) -> dict:
    flux = sc.make_flux()
    if target is None:
        target = 1.0 if sc.courant > 0 else -math.sqrt(max(sc.omega - 1.0, 0.0))
    rows = []
    for name in conditions:
        cond = Kinetic() if name == "kinetic" else Extrapolation(int(name.split(":")[1]))
        for J in j_list:
            params = SchemeParams(omega=sc.omega, lam=sc.lam, num_points=J,
                                  domain_length=sc.length)
            spec = BoundarySpec(inflow_trace=lambda t: 0.0, outflow=cond,
                                source=SourceMode.OFF)
            mat = spectral.build_matrix(spectral.MatrixKind.FD_COMPANION, params,
                                        flux, spec)
            est = spectral.deviation_newton(mat, target)
            rows.append({"condition": name, "J": J,
                         "eps_newton": est.epsilon_newton,
                         "eps_min_eig": est.epsilon_min_eig,
                         "condition_estimate": est.condition_estimate})
    out = _out_dir(sc)
    csv_rows = [[r["condition"], r["J"], target, r["eps_newton"], r["eps_min_eig"],
                 r["condition_estimate"]] for r in rows]
    path = write_csv(out / "deviation.csv",
                     ["condition", "J", "target", "eps_newton", "eps_min_eig",
                      "condition_estimate"], csv_rows, sc)
    if sc.svg:
        plots.plot_deviation(rows, out / "deviation.svg")
    return {"rows": rows, "csv": path}


def cmd_reflect(sc: Scenario, target: float | None = None,
                radii=(1e-2, 3e-3, 1e-3, 3e-4, 1e-4)) -> dict:
    flux = sc.make_flux()
    params = sc.make_params()
    courant = flux.courant(params)
    outflow = sc.make_outflow()
    if target is None:
        target = 1.0 if courant > 0 else -1.0
    alpha, beta = gks.outflow_weights(outflow, sc.omega, courant)
    anchor = gks.char_roots(complex(target) * (1.0 + 1e-6), sc.omega, courant)
    kref = (anchor.kappa_minus, anchor.kappa_plus)

    def rout(z):
        return gks.reflection_out(z, alpha, beta, sc.omega, courant, kappa_ref=kref)

    estimate = gks.pole_order(rout, complex(target), radii=radii)
    rows = []
    means = []
    for r in radii:
        zs = complex(target) + r * np.exp(2j * np.pi * np.arange(16) / 16)
        vals = np.array([abs(rout(z)) for z in zs])
        means.append(float(np.exp(np.mean(np.log(vals)))))
        rows.append([r, means[-1]])
    rin = gks.reflection_in(complex(target), sc.omega, courant, sc.points)
    comments = [f"target={_fmt(float(target))}",
                f"pole_order={estimate.order}",
                f"slope={_fmt(estimate.slope)}",
                f"fit_residual={_fmt(estimate.residual)}",
                f"reflection_in_re={_fmt(rin.real) if rin is not None else 'undefined'}",
                f"reflection_in_im={_fmt(rin.imag) if rin is not None else 'undefined'}"]
    out = _out_dir(sc)
    path = write_csv(out / "reflection.csv", ["radius", "geom_mean_abs_R"], rows, sc,
                     comments)
    if sc.svg:
        plots.plot_reflection(list(radii), means, estimate.slope, out / "reflect.svg")
    return {"pole_order": estimate, "reflection_in": rin, "csv": path}


# --------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser):
    d = Scenario()
    parser.add_argument("--omega", type=float, default=d.omega)
    parser.add_argument("--courant", type=float, default=d.courant)
    parser.add_argument("--lambda", dest="lam", type=float, default=d.lam)
    parser.add_argument("--points", type=int, default=d.points)
    parser.add_argument("--length", type=float, default=d.length)
    parser.add_argument("--final-time", dest="final_time", type=float, default=d.final_time)
    parser.add_argument("--outflow", default=d.outflow,
                        help="extrap:<order> or kinetic")
    parser.add_argument("--source", choices=("off", "correct"), default=d.source)
    parser.add_argument("--flux", default=d.flux, help="linear, linear:<V>, or burgers")
    parser.add_argument("--datum", default=d.datum,
                        help="sin, tanh, impulse:<j>, or zero")
    parser.add_argument("--seed", type=int, default=d.seed)
    parser.add_argument("--out", default=d.out)
    parser.add_argument("--svg", action="store_true")


def _scenario_from(args) -> Scenario:
    sc = Scenario(omega=args.omega, courant=args.courant, lam=args.lam,
                  points=args.points, length=args.length, final_time=args.final_time,
                  outflow=args.outflow, source=args.source, flux=args.flux,
                  datum=args.datum, seed=args.seed, out=args.out, svg=args.svg)
    flux = sc.make_flux()
    if isinstance(flux, LinearFlux):
        sc = replace(sc, courant=flux.velocity / sc.lam)
    return sc


def _parse_window(text):
    a, _, b = text.partition(":")
    return int(a), int(b)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="d1q2",
        description="Two-velocity lattice Boltzmann boundary-condition toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one simulation, write snapshots and series")
    _add_common(p)
    p.add_argument("--snapshot-times", default=None,
                   help="comma-separated times; defaults to 4 spread over [0, T]")

    p = sub.add_parser("growth", help="boundary-value growth exponent fit")
    _add_common(p)
    p.add_argument("--fit-window", default=None,
                   help="n_min:n_max; defaults to the pre-reflection window")

    p = sub.add_parser("converge", help="refinement study against the exact solution")
    _add_common(p)
    p.add_argument("--dx-list", default=None,
                   help="comma-separated dx values; defaults to the built-in sequence")

    p = sub.add_parser("equivalence", help="LBM vs FD trajectory deviation on random data")
    _add_common(p)
    p.add_argument("--steps", type=int, default=25)

    p = sub.add_parser("modified-eq", help="effective advection of each boundary scheme")
    _add_common(p)

    p = sub.add_parser("gks", help="normal-mode verdicts; --sweep for the full table")
    _add_common(p)
    p.add_argument("--sweep", action="store_true")

    for name in ("spectrum", "pseudospectrum"):
        p = sub.add_parser(name, help=f"{name} of a scheme matrix")
        _add_common(p)
        p.add_argument("--matrix", choices=tuple(_MATRIX_KINDS), default="fd")
        if name == "pseudospectrum":
            p.add_argument("--resolution", type=int, default=120)
            p.add_argument("--re-range", default="-1.5:1.5")
            p.add_argument("--im-range", default="-1.5:1.5")

    p = sub.add_parser("deviation", help="eigenvalue deviation estimates per condition")
    _add_common(p)
    p.add_argument("--j-list", default="10,20,30,40,60,80,100,140,200")
    p.add_argument("--target", type=float, default=None)
    p.add_argument("--conditions", default=",".join(_DEVIATION_CONDITIONS))

    p = sub.add_parser("reflect", help="reflection coefficients and pole order")
    _add_common(p)
    p.add_argument("--target", type=float, default=None)
    p.add_argument("--radii", default="1e-2,3e-3,1e-3,3e-4,1e-4")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sc = _scenario_from(args)
        if args.command == "simulate":
            times = ([float(t) for t in args.snapshot_times.split(",")]
                     if args.snapshot_times else None)
            res = cmd_simulate(sc, times)
            print(f"wrote {res['trajectory']} and {res['boundary_series']}")
        elif args.command == "growth":
            window = _parse_window(args.fit_window) if args.fit_window else None
            res = cmd_growth(sc, window)
            print(f"growth exponent {res['exponent']:.4f} "
                  f"(fit residual {res['fit_residual']:.2e}); wrote {res['csv']}")
        elif args.command == "converge":
            dxs = [float(v) for v in args.dx_list.split(",")] if args.dx_list else None
            res = cmd_converge(sc, dxs)
            for r in res["rows"]:
                order = "" if r.observed_order is None else f"{r.observed_order:7.3f}"
                print(f"dx={r.dx:.4e}  err={r.l2_error:.4e}  {order}"
                      + ("  [blow-up]" if r.blew_up else ""))
        elif args.command == "equivalence":
            res = cmd_equivalence(sc, args.steps)
            print(f"max |u_LBM - u_FD| = {res['max_deviation']:.3e}; wrote {res['csv']}")
        elif args.command == "modified-eq":
            res = cmd_modified_eq(sc)
            for row in res["rows"]:
                print(f"{row[0]:>16}: a = {row[1]:+.12f} (target {row[3]:+.3f}, "
                      f"{'consistent' if row[4] else 'inconsistent'})")
        elif args.command == "gks":
            res = cmd_gks(sc, args.sweep)
            for row in res["rows"]:
                print(f"{row[0]:>9} omega={row[1]:<5} C={row[2]:<6} -> {row[3]}"
                      + (f" [{row[4]}]" if row[4] else ""))
        elif args.command == "spectrum":
            res = cmd_spectrum(sc, args.matrix)
            print(f"max modulus {res['report'].max_modulus:.12f}; wrote {res['csv']}")
        elif args.command == "pseudospectrum":
            rr = tuple(float(v) for v in args.re_range.split(":"))
            ir = tuple(float(v) for v in args.im_range.split(":"))
            res = cmd_pseudospectrum(sc, args.matrix, args.resolution, rr, ir)
            print(f"wrote {res['csv']}")
        elif args.command == "deviation":
            res = cmd_deviation(sc, [int(v) for v in args.j_list.split(",")],
                                args.target, args.conditions.split(","))
            print(f"wrote {res['csv']}")
        elif args.command == "reflect":
            res = cmd_reflect(sc, args.target,
                              tuple(float(v) for v in args.radii.split(",")))
            est = res["pole_order"]
            print(f"pole order {est.order} (slope {est.slope:.3f}); wrote {res['csv']}")
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

import numpy as np
import pytest

from d1q2.cli import Scenario, build_parser, fit_growth, main


def test_scenario_round_trips_exactly():
    sc = Scenario(omega=1.9799999999999999, courant=-1 / 3, lam=1.7, points=123,
                  length=2.5, final_time=0.3333333333333333, outflow="extrap:3",
                  source="correct", flux="linear:-0.5666666666666667",
                  datum="impulse:7", seed=42, out="somewhere", svg=True)
    again = Scenario.from_kv(sc.to_kv())
    assert again == sc


def test_scenario_object_builders():
    sc = Scenario(outflow="kinetic", flux="burgers", datum="tanh")
    from d1q2 import BurgersFlux, Kinetic

    assert isinstance(sc.make_flux(), BurgersFlux)
    assert isinstance(sc.make_outflow(), Kinetic)
    with pytest.raises(ValueError):
        Scenario(outflow="bogus").make_outflow()
    with pytest.raises(ValueError):
        Scenario(flux="bogus").make_flux()
    with pytest.raises(ValueError):
        Scenario(datum="bogus").make_datum()


def test_fit_growth_recovers_power_law():
    n = np.arange(0, 600)
    series = np.zeros(600)
    series[1:] = 3.0 * n[1:] ** 1.7
    slope, residual = fit_growth(series, 10, 500)
    assert slope == pytest.approx(1.7, abs=1e-12)
    assert residual < 1e-12


def test_fit_growth_trims_zeros():
    n = np.arange(0, 300, dtype=float)
    series = n.copy()
    series[::7] = 0.0
    slope, _ = fit_growth(series, 5, 280)
    assert slope == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        fit_growth(np.zeros(50), 5, 45)


def run_cli(args, tmp_path):
    return main(args + ["--out", str(tmp_path)])


def test_cli_simulate_writes_files(tmp_path):
    rc = run_cli(["simulate", "--points", "40", "--final-time", "0.5",
                  "--svg"], tmp_path)
    assert rc == 0
    traj = tmp_path / "trajectory.csv"
    series = tmp_path / "boundary_series.csv"
    assert traj.exists() and series.exists()
    assert (tmp_path / "trajectory.svg").exists()
    assert (tmp_path / "boundary_series.svg").exists()
    header = traj.read_text().splitlines()
    assert header[0].startswith("# omega=")
    # scenario block round-trips from the header comments
    kv = [line[2:] for line in header if line.startswith("# ")]
    sc = Scenario.from_kv(kv)
    assert sc.points == 40


def test_cli_zero_datum_produces_zero_files(tmp_path):
    rc = run_cli(["simulate", "--datum", "zero", "--points", "24",
                  "--final-time", "0.25"], tmp_path)
    assert rc == 0
    rows = [line for line in (tmp_path / "boundary_series.csv").read_text().splitlines()
            if line and not line.startswith("#")][1:]
    vals = [float(line.split(",")[2]) for line in rows]
    assert all(v == 0.0 for v in vals)


def test_cli_deterministic_output(tmp_path):
    # identical scenario (including the output path) gives identical bytes
    args = ["converge", "--dx-list", "0.02,0.012", "--points", "8",
            "--out", str(tmp_path)]
    assert main(args) == 0
    first = (tmp_path / "convergence.csv").read_bytes()
    assert main(args) == 0
    assert (tmp_path / "convergence.csv").read_bytes() == first


def test_cli_equivalence_command(tmp_path):
    rc = run_cli(["equivalence", "--points", "16", "--outflow", "extrap:2",
                  "--omega", "1.6", "--steps", "20"], tmp_path)
    assert rc == 0
    text = (tmp_path / "equivalence.csv").read_text()
    last = text.strip().splitlines()[-1]
    assert float(last.split(",")[-1]) < 1e-11


def test_cli_gks_and_modified_eq(tmp_path):
    rc = run_cli(["gks", "--outflow", "extrap:2", "--omega", "2.0",
                  "--courant", "-0.5"], tmp_path)
    assert rc == 0
    text = (tmp_path / "gks_verdicts.csv").read_text()
    assert "unstable" in text
    rc = run_cli(["modified-eq", "--outflow", "kinetic", "--omega", "1.6"], tmp_path)
    assert rc == 0
    lines = (tmp_path / "modified_equations.csv").read_text().splitlines()
    schemes = [line.split(",")[0] for line in lines if not line.startswith("#")]
    assert {"bulk", "initial", "eventual", "second", "second_neighbor"} <= set(schemes)


def test_cli_gks_kinetic_emits_root_sweep(tmp_path):
    rc = run_cli(["gks", "--outflow", "kinetic", "--omega", "1.6"], tmp_path)
    assert rc == 0
    text = (tmp_path / "kinetic_roots.csv").read_text()
    header = [line for line in text.splitlines() if not line.startswith("#")][0]
    assert header == "C,abs_z1,abs_z2,abs_z3,abs_kappa1,abs_kappa2,abs_kappa3"


def test_cli_spectrum_files(tmp_path):
    rc = run_cli(["spectrum", "--points", "10", "--omega", "1.6", "--svg"], tmp_path)
    assert rc == 0
    for name in ("spectrum.csv", "asymptotic_curve.csv", "isolated_points.csv",
                 "spectrum.svg"):
        assert (tmp_path / name).exists(), name
    rows = [line for line in (tmp_path / "spectrum.csv").read_text().splitlines()
            if line and not line.startswith("#")]
    assert rows[0] == "re,im"
    assert len(rows) - 1 == 20


def test_cli_pseudospectrum_grid(tmp_path):
    rc = run_cli(["pseudospectrum", "--points", "8", "--resolution", "5",
                  "--re-range=-1.2:1.2", "--im-range=-1.0:1.0"], tmp_path)
    assert rc == 0
    rows = [line for line in (tmp_path / "pseudospectrum.csv").read_text().splitlines()
            if line and not line.startswith("#")]
    assert rows[0] == "re,im,sigma_min"
    assert len(rows) - 1 == 25


def test_cli_growth_fit(tmp_path):
    rc = run_cli(["growth", "--points", "200", "--omega", "2.0", "--courant", "-0.5",
                  "--outflow", "extrap:3", "--datum", "impulse:1",
                  "--final-time", "3.5"], tmp_path)
    assert rc == 0
    comments = [line for line in (tmp_path / "growth.csv").read_text().splitlines()
                if line.startswith("# exponent=")]
    assert len(comments) == 1
    assert float(comments[0].split("=")[1]) == pytest.approx(1.0, abs=0.25)


def test_cli_deviation_and_reflect(tmp_path):
    rc = run_cli(["deviation", "--omega", "2.0", "--courant", "-0.5",
                  "--j-list", "10,11", "--conditions", "extrap:1"], tmp_path)
    assert rc == 0
    rows = [line for line in (tmp_path / "deviation.csv").read_text().splitlines()
            if line and not line.startswith("#")]
    assert rows[0].startswith("condition,J,target")
    vals = dict()
    for line in rows[1:]:
        parts = line.split(",")
        vals[int(parts[1])] = float(parts[3])
    assert vals[10] == pytest.approx(1.5 / 25.5, abs=1e-12)
    rc = run_cli(["reflect", "--omega", "1.6", "--courant", "0.5",
                  "--outflow", "extrap:2"], tmp_path)
    assert rc == 0
    text = (tmp_path / "reflection.csv").read_text()
    assert "# pole_order=2" in text


def test_cli_invalid_scenario_exits_nonzero(tmp_path, capsys):
    rc = run_cli(["simulate", "--outflow", "extrap:0"], tmp_path)
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_cli_inline_velocity_overrides_courant(tmp_path):
    parser = build_parser()
    args = parser.parse_args(["simulate", "--flux", "linear:-0.25",
                              "--courant", "-0.9"])
    from d1q2.cli import _scenario_from

    sc = _scenario_from(args)
    assert sc.courant == pytest.approx(-0.25)

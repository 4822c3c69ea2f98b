import csv
import io
import math

import numpy as np
import pytest

from telegraph_qubit import cli
from telegraph_qubit.exceptions import ConfigError, ConvergenceError, UnknownFigure
from telegraph_qubit.metrics import TimeGrid
from telegraph_qubit.params import NoiseParams
from telegraph_qubit.sweep import FIGURES, SweepSpec, format_float, run_figure, run_sweep, sweep_rows


def _table(text):
    return list(csv.reader(io.StringIO(text)))


class TestSweepSpec:
    def test_empty_values(self):
        with pytest.raises(ConfigError):
            SweepSpec("a", ())

    def test_unknown_knob_and_output(self):
        with pytest.raises(ConfigError):
            SweepSpec("omega", (1.0,))
        with pytest.raises(ConfigError):
            SweepSpec("a", (0.0,), outputs=("purity",))

    def test_inadmissible_value(self):
        with pytest.raises(ConfigError, match="a=2"):
            SweepSpec("a", (0.0, 2.0))

    def test_outputs_canonical_order(self):
        assert SweepSpec("a", (0.0,), outputs=("C_l", "G")).outputs == ("G", "C_l")

    def test_point_scales_rates_by_lambda(self):
        spec = SweepSpec("kappa_over_lambda", (2.0,), noise=NoiseParams(0.1, 1.0, 3.0, 1.5))
        noise, _ = spec.point(2.0)
        assert noise.kappa == 6.0 and noise.lam == 3.0


def test_format_float_roundtrip_and_negative_zero():
    assert format_float(-0.0) == "0"
    x = 0.1 + 0.2
    assert float(format_float(x)) == x


def test_per_time_sweep_shape():
    spec = SweepSpec("kappa_over_lambda", (0.0, 1.0, 10.0), grid=TimeGrid(20.0, 2001), outputs=("F_phi",))
    rows = sweep_rows(spec)
    assert rows[0] == ["a", "kappa_over_lambda", "nu_over_lambda", "theta", "phi", "lambda_t", "F_phi"]
    assert len(rows) == 1 + 3 * 2001


def test_n_only_sweep_has_one_row_per_value():
    spec = SweepSpec("nu_over_lambda", (0.5, 4.0), grid=TimeGrid(20.0, 1001), outputs=("N",))
    rows = sweep_rows(spec)
    assert rows[0][-1] == "N" and "lambda_t" not in rows[0]
    assert len(rows) == 3


def test_g_columns_and_lambda_units():
    p = NoiseParams(0.5, 16.0, 2.0, 1.6)
    spec = SweepSpec("a", (0.5,), noise=p, grid=TimeGrid(1.0, 3), outputs=("G",))
    rows = sweep_rows(spec)
    assert rows[0][-2:] == ["G_re", "G_im"]
    assert rows[1][1] == "8" and rows[1][2] == "0.80000000000000004"
    # same environment in units lam = 1 gives identical columns
    ref = sweep_rows(SweepSpec("a", (0.5,), noise=NoiseParams(0.5, 8.0, 1.0, 0.8), grid=TimeGrid(1.0, 3), outputs=("G",)))
    for r1, r2 in zip(rows[1:], ref[1:]):
        np.testing.assert_allclose([float(v) for v in r1[-2:]], [float(v) for v in r2[-2:]], atol=1e-14)


def test_jobs_do_not_change_output():
    spec = SweepSpec("a", (-1.0, -0.5, 0.0, 0.5, 1.0), grid=TimeGrid(10.0, 201), outputs=("G", "D", "F_phi", "C_l"))
    assert run_sweep(spec, jobs=1) == run_sweep(spec, jobs=4)


def test_sweep_error_names_knob(monkeypatch):
    from telegraph_qubit import sweep

    def boom(series):
        raise ConvergenceError("no", {})

    monkeypatch.setattr(sweep, "verify_identity", boom)
    with pytest.raises(ConvergenceError, match="a=0.25") as info:
        sweep_rows(SweepSpec("a", (0.25,)))
    assert info.value.knob == ("a", 0.25)


def test_fig3a_panel_shape():
    rows = FIGURES["fig3"].panel_rows("a")
    assert len(rows) == 1 + 3 * 2001
    kappas = {r[1] for r in rows[1:]}
    assert kappas == {"0", "1", "10"}


def test_fig1_curves_even_in_a():
    rows = FIGURES["fig1"].panel_rows("a")[1:]
    curves = {}
    for r in rows:
        curves.setdefault(float(r[0]), []).append(float(r[-1]))
    assert len(curves) == 5 and all(len(v) == 80 for v in curves.values())
    for a in (0.5, 1.0):
        np.testing.assert_allclose(curves[a], curves[-a], rtol=0, atol=1e-12)


def test_fig7a_starts_at_one():
    rows = FIGURES["fig7"].panel_rows("a")
    starts = [r for r in rows[1:] if r[5] == "0"]
    assert len(starts) == 4
    assert all(abs(float(r[-1]) - 1.0) < 1e-12 for r in starts)


def test_run_figure_files(tmp_path):
    paths = run_figure("fig3", tmp_path)
    names = sorted(p.name for p in paths)
    assert names == ["fig3_a.csv", "fig3_b.csv", "fig3_c.csv", "fig3_d.csv", "fig3_params.txt"]
    side = (tmp_path / "fig3_params.txt").read_text()
    assert "kappa_over_lambda" in side and "steps = 2001" in side


def test_unknown_figure(tmp_path):
    with pytest.raises(UnknownFigure):
        run_figure("fig99", tmp_path)


class TestParsers:
    @pytest.mark.parametrize(
        "text, value",
        [("1.5", 1.5), ("pi", math.pi), ("pi/2", math.pi / 2), ("2*pi/3", 2 * math.pi / 3), ("-pi/4", -math.pi / 4)],
    )
    def test_parse_angle(self, text, value):
        assert cli.parse_angle(text) == pytest.approx(value, rel=1e-15)

    def test_parse_angle_garbage(self):
        with pytest.raises(ConfigError):
            cli.parse_angle("tau")

    def test_parse_values(self):
        assert cli.parse_values("0,0.5, 1") == (0.0, 0.5, 1.0)
        assert cli.parse_values("0:1:5") == (0.0, 0.25, 0.5, 0.75, 1.0)
        assert cli.parse_values("pi/5:pi/2:2") == pytest.approx((math.pi / 5, math.pi / 2))

    @pytest.mark.parametrize("text", ["", "0:1", "0:1:x", "0:1:0"])
    def test_parse_values_bad(self, text):
        with pytest.raises(ConfigError):
            cli.parse_values(text)


class TestCli:
    def test_gfunc_stdout(self, capsys):
        assert cli.main(["gfunc", "--kappa", "0", "--a", "0", "--nu", "1", "--tmax", "1", "--steps", "3"]) == 0
        rows = _table(capsys.readouterr().out)
        assert rows[0] == ["lambda_t", "G_re", "G_im", "G_abs"]
        assert float(rows[2][1]) == pytest.approx(math.cos(0.5), abs=1e-12)

    def test_gfunc_oracle_columns(self, capsys):
        assert cli.main(["gfunc", "--oracle", "--tmax", "2", "--steps", "5"]) == 0
        rows = _table(capsys.readouterr().out)
        assert rows[0][-3:] == ["oracle_re", "oracle_im", "oracle_err_est"]
        for r in rows[2:]:
            assert abs(float(r[1]) - float(r[4])) < 1e-8

    def test_gfunc_poles(self, capsys):
        assert cli.main(["gfunc", "--poles"]) == 0
        rows = _table(capsys.readouterr().out)
        assert rows[0] == ["re_pole", "im_pole", "re_res", "im_res"]
        assert len(rows) == 4
        assert sum(float(r[2]) for r in rows[1:]) == pytest.approx(1.0, abs=1e-10)

    def test_sweep_to_file(self, tmp_path):
        out = tmp_path / "s.csv"
        args = ["sweep", "--vary", "theta", "--values", "pi/2,pi/4", "--tmax", "5", "--steps", "11", "--out", str(out)]
        assert cli.main(args) == 0
        rows = _table(out.read_text())
        assert len(rows) == 1 + 2 * 11

    def test_sweep_jobs_identical(self, tmp_path):
        base = ["sweep", "--vary", "a", "--values=-1:1:5", "--tmax", "5", "--steps", "51"]
        cli.main(base + ["--out", str(tmp_path / "1.csv")])
        cli.main(base + ["--jobs", "3", "--out", str(tmp_path / "3.csv")])
        assert (tmp_path / "1.csv").read_bytes() == (tmp_path / "3.csv").read_bytes()

    def test_nonmarkov(self, capsys):
        assert cli.main(["nonmarkov", "--kappa", "10", "--nu", "0.8", "--a", "0.5"]) == 0
        rows = _table(capsys.readouterr().out)
        assert float(rows[1][0]) < 1e-4
        assert rows[1][5:] == ["50", "5001"]

    def test_nonmarkov_bad_pair_search(self, capsys):
        assert cli.main(["nonmarkov", "--pair-search", "3"]) == cli.EXIT_CONFIG

    def test_figure_writes(self, tmp_path, capsys):
        assert cli.main(["figure", "fig7", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "fig7_a.csv").exists() and (tmp_path / "fig7_b.csv").exists()

    def test_unknown_figure_exit_code(self, tmp_path, capsys):
        assert cli.main(["figure", "fig0", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
        assert "unknown figure" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "argv",
        [
            ["gfunc", "--a", "1.5"],
            ["gfunc", "--kappa", "-1"],
            ["gfunc", "--theta", "tau"],
            ["gfunc", "--jobs", "0"],
            ["sweep", "--vary", "a", "--values", ""],
            ["gfunc", "--config", "/nonexistent/file"],
        ],
    )
    def test_config_errors_exit_2(self, argv, capsys):
        assert cli.main(argv) == cli.EXIT_CONFIG

    def test_numerical_error_exit_3(self, monkeypatch, capsys):
        def boom(*args, **kwargs):
            raise ConvergenceError("synthetic failure", {})

        monkeypatch.setattr(cli, "eval_G", boom)
        assert cli.main(["gfunc"]) == cli.EXIT_NUMERICAL
        assert "synthetic failure" in capsys.readouterr().err

    def test_config_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# environment\nkappa = 0\na = 0\nnu = 2\ntmax = 1\nsteps = 3\n")
        cli.main(["gfunc", "--config", str(cfg), "--nu", "1"])
        rows = _table(capsys.readouterr().out)
        # flag nu=1 overrides the file's nu=2; kappa=0 from the file gives cos(nu t)
        assert float(rows[2][1]) == pytest.approx(math.cos(0.5), abs=1e-12)

    def test_config_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("temperature = 3\n")
        assert cli.main(["gfunc", "--config", str(cfg)]) == cli.EXIT_CONFIG

    def test_selftest(self, capsys):
        assert cli.main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out and "PASS" in out

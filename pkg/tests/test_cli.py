import numpy as np
import pytest

from sfadrive.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main
from sfadrive.fileio import numeric_column, read_series, read_table

FAST = ["--m", "5", "--points", "800", "--k", "2"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_all_bytes(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


class TestGenerate:
    def test_writes_files_and_prints_etas(self, tmp_path, capsys):
        out = tmp_path / "g"
        code, stdout, _ = run_cli(
            capsys, "generate", "--nu-f", "40", "--q", "0.1",
            "--points", "6000", "--seed", "1", "--out", str(out),
        )
        assert code == EXIT_OK
        series = read_series(out / "series.csv")
        assert series.values.min() >= 0.0 and series.values.max() <= 1.0
        assert (out / "force.csv").exists()
        lines = dict(line.split("=") for line in stdout.strip().splitlines())
        assert 125.0 <= float(lines["eta_gamma"]) <= 129.0
        assert 18.9 <= float(lines["eta_gamma_slow"]) <= 19.3

    def test_repeat_invocations_identical(self, tmp_path, capsys):
        args = ["generate", "--nu-f", "30", "--q", "0.3", "--points", "1000",
                "--seed", "3", "--noise-pct", "2"]
        code_a, *_ = run_cli(capsys, *args, "--out", str(tmp_path / "a"))
        code_b, *_ = run_cli(capsys, *args, "--out", str(tmp_path / "b"))
        assert code_a == code_b == EXIT_OK
        assert read_all_bytes(tmp_path / "a") == read_all_bytes(tmp_path / "b")

    def test_plot_renders_file(self, tmp_path, capsys):
        out = tmp_path / "g"
        code, *_ = run_cli(
            capsys, "generate", "--points", "500", "--out", str(out), "--plot"
        )
        assert code == EXIT_OK
        assert (out / "force.png").stat().st_size > 0


class TestFit:
    def test_generated_fit_outputs(self, tmp_path, capsys):
        out = tmp_path / "f"
        code, stdout, _ = run_cli(
            capsys, "fit", "--nu-f", "20", "--m", "9", "--points", "1500",
            "--k", "3", "--out", str(out),
        )
        assert code == EXIT_OK
        header, _ = read_table(out / "signals.csv")
        assert header == ["t", "y_1", "y_2", "y_3"]
        header, rows = read_table(out / "summary.csv")
        assert header == ["corr_full", "corr_slow", "eta_y1", "eta_force",
                          "eta_slow", "eta_ratio"]
        assert len(rows) == 1
        summary = dict(zip(header, map(float, rows[0])))
        assert summary["corr_full"] > 0.9
        assert "corr_full=" in stdout

    def test_minimal_model_runs(self, tmp_path, capsys):
        code, stdout, _ = run_cli(
            capsys, "fit", "--m", "1", "--degree", "1", "--points", "600",
            "--out", str(tmp_path / "f"),
        )
        assert code == EXIT_OK
        summary = dict(
            line.split("=") for line in stdout.strip().splitlines()
        )
        assert float(summary["corr_full"]) < 0.9

    def test_fit_from_files_matches_generated(self, tmp_path, capsys):
        gen = tmp_path / "gen"
        args = ["--nu-f", "20", "--m", "9", "--points", "1500", "--k", "2"]
        run_cli(capsys, "generate", *args, "--out", str(gen))
        from_files = tmp_path / "ff"
        code, *_ = run_cli(
            capsys, "fit", "--series", str(gen / "series.csv"),
            "--force", str(gen / "force.csv"), *args, "--out", str(from_files),
        )
        assert code == EXIT_OK
        direct = tmp_path / "fd"
        run_cli(capsys, "fit", *args, "--out", str(direct))
        assert (from_files / "summary.csv").read_bytes() == (direct / "summary.csv").read_bytes()
        assert (from_files / "signals.csv").read_bytes() == (direct / "signals.csv").read_bytes()

    def test_series_without_force_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "fit", "--series", str(tmp_path / "s.csv"),
            "--out", str(tmp_path / "f"),
        )
        assert code == EXIT_USAGE
        assert "--series and --force" in err

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "fit", "--series", str(tmp_path / "none.csv"),
            "--force", str(tmp_path / "none2.csv"), "--out", str(tmp_path / "f"),
        )
        assert code == EXIT_IO
        assert "error" in err

    def test_malformed_input_is_parse_error(self, tmp_path, capsys):
        series = tmp_path / "series.csv"
        series.write_text("t,value\n1,0.5\n2,broken\n")
        force = tmp_path / "force.csv"
        force.write_text("t,gamma,gamma_slow,gamma_fast\n1,0,0,0\n2,0,0,0\n")
        code, _, err = run_cli(
            capsys, "fit", "--series", str(series), "--force", str(force),
            "--out", str(tmp_path / "f"),
        )
        assert code == EXIT_PARSE
        assert "series.csv:3" in err

    def test_plot_renders_file(self, tmp_path, capsys):
        out = tmp_path / "f"
        code, *_ = run_cli(
            capsys, "fit", "--nu-f", "20", *FAST, "--out", str(out), "--plot"
        )
        assert code == EXIT_OK
        assert (out / "fit.png").stat().st_size > 0

    @pytest.mark.parametrize(
        "nu_f,strong,weak",
        [("20", "corr_full", "corr_slow"), ("80", "corr_slow", "corr_full")],
    )
    def test_protocol_defaults_recover_forces(self, tmp_path, capsys, nu_f, strong, weak):
        code, stdout, _ = run_cli(
            capsys, "fit", "--nu-f", nu_f, "--out", str(tmp_path / "f")
        )
        assert code == EXIT_OK
        values = dict(line.split("=") for line in stdout.strip().splitlines())
        assert float(values[strong]) >= 0.98
        assert float(values[strong]) > float(values[weak])


class TestSweep:
    def test_pt_scan_prints_transition(self, tmp_path, capsys):
        out = tmp_path / "s"
        code, stdout, _ = run_cli(
            capsys, "sweep", "--mode", "pt-scan", "--q", "0.4", *FAST,
            "--nu-min", "10", "--nu-max", "30", "--nu-step", "5",
            "--out", str(out), "--plot",
        )
        assert code == EXIT_OK
        assert stdout.startswith("nu_pt=")
        header, rows = read_table(out / "records.csv")
        assert len(rows) == 5
        assert (out / "pt_scan.png").stat().st_size > 0

    def test_qm_grid_writes_table_and_records(self, tmp_path, capsys):
        out = tmp_path / "s"
        code, stdout, _ = run_cli(
            capsys, "sweep", "--mode", "qm-grid", *FAST,
            "--q-grid", "0.1,0.7", "--m-grid", "5,9",
            "--nu-min", "10", "--nu-max", "20", "--nu-step", "5",
            "--out", str(out),
        )
        assert code == EXIT_OK
        header, rows = read_table(out / "qm_table.csv")
        assert header == ["q", "m", "nu_pt", "error"]
        assert len(rows) == 4
        assert (out / "records.csv").exists()
        assert stdout.count("nu_pt=") == 4

    def test_eta_table_defaults_to_reference_frequency(self, tmp_path, capsys):
        out = tmp_path / "s"
        code, _, _ = run_cli(
            capsys, "sweep", "--mode", "eta-table", "--points", "800",
            "--m-grid", "3,5", "--q-grid", "0.1,0.5", "--out", str(out),
        )
        assert code == EXIT_OK
        header, rows = read_table(out / "eta_table.csv")
        assert len(rows) == 4
        nu_f = numeric_column((header, rows), "nu_f", out / "eta_table.csv")
        assert np.all(nu_f == 40.0)

    def test_noise_mode_aggregates(self, tmp_path, capsys):
        out = tmp_path / "s"
        code, stdout, _ = run_cli(
            capsys, "sweep", "--mode", "noise", *FAST,
            "--percents", "1,5", "--seeds", "0,1", "--out", str(out),
        )
        assert code == EXIT_OK
        header, rows = read_table(out / "noise_table.csv")
        assert len(rows) == 2
        _, records = read_table(out / "records.csv")
        assert len(records) == 4

    def test_unknown_mode_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--mode", "bogus", "--out", str(tmp_path / "s")])
        assert exc.value.code == EXIT_USAGE


class TestEtaAndAlign:
    def test_eta_of_force_column(self, tmp_path, capsys):
        gen = tmp_path / "g"
        run_cli(capsys, "generate", "--nu-f", "40", "--points", "6000",
                "--out", str(gen))
        code, stdout, _ = run_cli(capsys, "eta", str(gen / "force.csv"),
                                  "--column", "gamma")
        assert code == EXIT_OK
        assert 125.0 <= float(stdout.split("=")[1]) <= 129.0

    def test_eta_of_constant_column_is_numeric_error(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        path.write_text("t,value\n1,1\n2,1\n3,1\n")
        code, _, err = run_cli(capsys, "eta", str(path))
        assert code == EXIT_NUMERIC
        assert "constant" in err

    def test_align_self_recovers_identity(self, tmp_path, capsys):
        gen = tmp_path / "g"
        run_cli(capsys, "generate", "--nu-f", "20", "--points", "500",
                "--out", str(gen))
        out_file = tmp_path / "aligned.csv"
        code, stdout, _ = run_cli(
            capsys, "align", str(gen / "force.csv"),
            "--y-column", "gamma_slow", "--target-column", "gamma_slow",
            "--out", str(out_file),
        )
        assert code == EXIT_OK
        values = dict(line.split("=") for line in stdout.strip().splitlines())
        assert float(values["a"]) == 1.0
        assert float(values["mse"]) == 0.0
        assert float(values["corr"]) == pytest.approx(1.0, abs=1e-12)
        header, rows = read_table(out_file)
        assert header == ["t", "gamma_slow", "gamma_slow", "aligned"]
        assert len(rows) == 500


class TestConfigFile:
    def test_flags_override_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# reference setup\nnu-f = 40\nm = 5\npoints = 800\n")
        out_file_only = tmp_path / "a"
        run_cli(capsys, "generate", "--config", str(cfg), "--out", str(out_file_only))
        out_override = tmp_path / "b"
        run_cli(capsys, "generate", "--config", str(cfg), "--nu-f", "20",
                "--out", str(out_override))
        baseline = tmp_path / "c"
        run_cli(capsys, "generate", "--nu-f", "20", "--points", "800",
                "--out", str(baseline))
        a = (out_file_only / "force.csv").read_bytes()
        b = (out_override / "force.csv").read_bytes()
        c = (baseline / "force.csv").read_bytes()
        assert a != b
        assert b == c

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("banana = 4\n")
        code, _, err = run_cli(capsys, "generate", "--config", str(cfg),
                               "--out", str(tmp_path / "o"))
        assert code == EXIT_USAGE
        assert "banana" in err

    def test_help_lists_protocol_defaults(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["fit", "--help"])
        assert exc.value.code == 0
        stdout = capsys.readouterr().out
        assert "default 19" in stdout
        assert "default 6000" in stdout
        assert "exit codes" in stdout

    def test_sweep_grid_defaults_match_reference_table(self):
        from sfadrive.cli import build_parser
        from sfadrive.experiments import ETA_TABLE_M, ETA_TABLE_Q

        args = build_parser().parse_args(["sweep", "--mode", "eta-table"])
        assert args.m_grid == ETA_TABLE_M == (5, 10, 15, 20, 30)
        assert args.q_grid == ETA_TABLE_Q == (0.1, 0.3, 0.5, 0.6, 0.7)
        assert args.percents == (1.0, 2.0, 5.0)
        assert args.seeds == (0, 1, 2, 3, 4)

"""Command-line interface: argument parsing, exit codes, output formats."""

import subprocess
import sys

import pytest

from locsim.cli import main, parse_float_list, parse_seed_list
from locsim.errors import ConfigError

SUMMARY_HEADER = "kind,alpha,beta,seed,total_energy_mJ,satisfaction,fix_count,sample_count"
GOLDEN_SEED7_ROW = "adaptive,0.500000,1.000000,7,149185.000000,0.655144,230,322"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestListParsing:
    def test_range_string_inclusive(self):
        vals = parse_float_list("0.1:1.0:0.1")
        assert vals == [pytest.approx(0.1 * i) for i in range(1, 11)]
        assert vals[-1] == 1.0

    def test_comma_list(self):
        assert parse_float_list("0.3,0.5") == [0.3, 0.5]

    def test_bad_float_list(self):
        for bad in ("", "a,b", "1:2", "1:2:3:4"):
            with pytest.raises(ConfigError):
                parse_float_list(bad)

    def test_seed_range(self):
        assert parse_seed_list("1..4") == [1, 2, 3, 4]
        assert parse_seed_list("7") == [7]
        assert parse_seed_list("3,1,2") == [3, 1, 2]

    def test_bad_seed_list(self):
        for bad in ("", "4..1", "a", "1..b"):
            with pytest.raises(ConfigError):
                parse_seed_list(bad)


class TestSimulate:
    def test_golden_run_seed_7(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "--seed", "7")
        assert code == 0
        assert out == f"{SUMMARY_HEADER}\n{GOLDEN_SEED7_ROW}\n"

    def test_invalid_beta_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--beta", "0")
        assert code == 2
        assert "beta must satisfy 0 < beta <= 1" in err

    def test_zero_duration(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "--duration", "0")
        assert code == 0
        row = out.splitlines()[1].split(",")
        assert row[5] == "1.000000"
        assert row[6] == "1"

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# test config\nseed = 7\nalpha = 0.3\n")
        code, out, err = run_cli(capsys, "simulate", "--config", str(cfg), "--alpha", "0.5")
        assert code == 0
        assert out.splitlines()[1] == GOLDEN_SEED7_ROW
        assert "alpha = 0.5" in err
        assert "seed = 7" in err

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("velocity_cap = 3\n")
        code, _, err = run_cli(capsys, "simulate", "--config", str(cfg))
        assert code == 2
        assert "velocity_cap" in err

    def test_event_log_written_and_deterministic(self, tmp_path, capsys):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        for path in (out_a, out_b):
            code, _, _ = run_cli(capsys, "simulate", "--seed", "3", "--out", str(path))
            assert code == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        lines = out_a.read_text().splitlines()
        assert lines[0] == "time_s,kind,method,energy_mJs,position_m,velocity_mps,ve_mps".replace(
            "mJs", "mJ"
        )
        assert lines[1].startswith("0.000000,fix,")

    def test_out_into_missing_dir_exits_1(self, tmp_path, capsys):
        target = tmp_path / "no_such_dir" / "events.csv"
        code, _, err = run_cli(capsys, "simulate", "--out", str(target))
        assert code == 1
        assert err != ""

    def test_stdout_identical_across_invocations(self, capsys):
        _, first, _ = run_cli(capsys, "simulate", "--seed", "11")
        _, second, _ = run_cli(capsys, "simulate", "--seed", "11")
        assert first == second


class TestSweepCommand:
    def test_grid_rows_and_mean_file(self, tmp_path, capsys):
        out = tmp_path / "grid.csv"
        code, _, _ = run_cli(
            capsys,
            "sweep", "--duration", "600", "--alphas", "0.3,0.5", "--betas", "0.5,1.0",
            "--seeds", "1..3", "--kinds", "adaptive,fixed:gps", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == SUMMARY_HEADER
        assert len(lines) == 1 + 2 * 2 * 3 * 2
        mean_path = tmp_path / "grid_mean.csv"
        mean_lines = mean_path.read_text().splitlines()
        assert mean_lines[0] == "kind,alpha,beta,total_energy_mJ,satisfaction,fix_count,sample_count"
        assert len(mean_lines) == 1 + 2 * 2 * 2

    def test_singleton_sweep_matches_simulate(self, tmp_path, capsys):
        out = tmp_path / "one.csv"
        code, _, _ = run_cli(
            capsys,
            "sweep", "--alphas", "0.5", "--betas", "1.0", "--seeds", "7",
            "--kinds", "adaptive", "--out", str(out),
        )
        assert code == 0
        assert out.read_text().splitlines()[1] == GOLDEN_SEED7_ROW

    def test_out_flag_required(self, capsys):
        code, _, _ = run_cli(capsys, "sweep", "--seeds", "1")
        assert code == 2


class TestReproduceFigures:
    def test_writes_four_series(self, tmp_path, capsys):
        out_dir = tmp_path / "figs"
        code, _, _ = run_cli(
            capsys,
            "reproduce-figures", "--duration", "900", "--out", str(out_dir),
        )
        assert code == 0
        for name in ("fig2", "fig3", "fig4", "fig5"):
            lines = (out_dir / f"{name}.csv").read_text().splitlines()
            assert lines[0] == "beta,gps_value,ours_value"
            assert len(lines) == 11
            betas = [float(l.split(",")[0]) for l in lines[1:]]
            assert betas == [pytest.approx(0.1 * i) for i in range(1, 11)]

    def test_energy_series_favors_adaptive(self, tmp_path, capsys):
        out_dir = tmp_path / "figs"
        run_cli(capsys, "reproduce-figures", "--duration", "900", "--out", str(out_dir))
        for line in (out_dir / "fig2.csv").read_text().splitlines()[1:]:
            _, gps_e, ours_e = (float(x) for x in line.split(","))
            assert ours_e < gps_e

    def test_satisfaction_series_in_unit_interval(self, tmp_path, capsys):
        out_dir = tmp_path / "figs"
        run_cli(capsys, "reproduce-figures", "--duration", "900", "--out", str(out_dir))
        for name in ("fig3", "fig5"):
            for line in (out_dir / f"{name}.csv").read_text().splitlines()[1:]:
                _, gps_s, ours_s = (float(x) for x in line.split(","))
                assert 0.0 <= gps_s <= 1.0
                assert 0.0 <= ours_s <= 1.0


class TestEntryPoints:
    def test_no_args_exits_2(self, capsys):
        assert run_cli(capsys)[0] == 2

    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "locsim", "simulate", "--seed", "7"],
            capture_output=True, text=True, timeout=60,
        )
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[1] == GOLDEN_SEED7_ROW

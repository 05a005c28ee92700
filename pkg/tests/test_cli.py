"""Tests for the command-line surface: file formats, key order, exit codes,
seeding and determinism."""

import csv
import json
import subprocess
import sys

import pytest

from qres import cli
from qres.errors import AccuracyError
from qres.probe import ProbeSpec, density, gamma_for_energy


def run_cli(args, tmp_path, env=None):
    """Run the CLI in a subprocess from tmp_path; returns (exit, stdout)."""
    result = subprocess.run(
        [sys.executable, "-m", "qres", *args],
        cwd=tmp_path,
        capture_output=True,
        text=True,
        env=env,
    )
    return result.returncode, result.stdout, result.stderr


def read_csv(path):
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    return rows[0], rows[1:]


class TestProbeCommand:
    def test_default_figure_curves(self, tmp_path):
        code, out, _ = run_cli(
            ["probe", "--alpha", "2,10,20", "--energy", "0.3333333333333333"],
            tmp_path,
        )
        assert code == 0
        for alpha in (2, 10, 20):
            header, rows = read_csv(tmp_path / f"probe_alpha{alpha}.csv")
            assert header == ["p", "density"]
            assert len(rows) == 2001
            p = [float(r[0]) for r in rows]
            d = [float(r[1]) for r in rows]
            # trapezoid normalization
            dx = p[1] - p[0]
            total = dx * (sum(d) - 0.5 * (d[0] + d[-1]))
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_bare_invocation_uses_figure_defaults(self, tmp_path):
        # defaults: alpha 2,10,20 at mean energy 1/3
        code, _, _ = run_cli(["probe"], tmp_path)
        assert code == 0
        for alpha in (2, 10, 20):
            assert (tmp_path / f"probe_alpha{alpha}.csv").exists()
        _, rows = read_csv(tmp_path / "probe_alpha20.csv")
        peak = float(rows[len(rows) // 2][1])
        spec = ProbeSpec(20, gamma_for_energy(20, 1.0 / 3.0))
        assert peak == pytest.approx(density(spec, 0.0), rel=1e-15)
        assert 0.45 <= peak <= 0.55

    def test_single_alpha_writes_plain_path_and_peak_value(self, tmp_path):
        code, _, _ = run_cli(
            ["probe", "--alpha", "2", "--gamma", "1.0", "--out", "single.csv"],
            tmp_path,
        )
        assert code == 0
        _, rows = read_csv(tmp_path / "single.csv")
        center = rows[len(rows) // 2]
        assert float(center[0]) == pytest.approx(0.0, abs=1e-12)
        assert float(center[1]) == pytest.approx(
            density(ProbeSpec(2, 1.0), 0.0), rel=1e-15
        )


class TestSweepCommand:
    def test_columns_and_shape(self, tmp_path):
        code, _, _ = run_cli(["sweep", "--alpha-max", "40"], tmp_path)
        assert code == 0
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert header == ["alpha", "normalized_bound", "approx_3_over_alpha"]
        table = {int(r[0]): (float(r[1]), float(r[2])) for r in rows}
        assert table[2][0] == 1.0
        bounds = [table[a][0] for a in sorted(table)]
        assert all(b < a for a, b in zip(bounds, bounds[1:]))
        assert table[20][1] == pytest.approx(0.15, rel=1e-15)
        assert abs(table[20][1] - table[20][0]) / table[20][0] < 0.05


class TestSimulateCommand:
    def test_json_keys_and_gaussian_posterior(self, tmp_path):
        code, out, _ = run_cli(
            [
                "simulate",
                "--alpha",
                "2",
                "--gamma",
                "1.0",
                "--n",
                "25",
                "--seed",
                "3",
            ],
            tmp_path,
        )
        assert code == 0
        payload = json.loads(out)
        for key in (
            "chi_true",
            "mle",
            "posterior_mean",
            "posterior_variance",
            "energy_bound",
            "n_required",
            "seed",
        ):
            assert key in payload
        assert payload["posterior_variance"] == pytest.approx(1.0 / 100.0, rel=1e-2)
        assert payload["seed"] == 3

    def test_posterior_csv(self, tmp_path):
        code, _, _ = run_cli(
            [
                "simulate",
                "--alpha",
                "4",
                "--energy",
                "0.5",
                "--n",
                "10",
                "--seed",
                "1",
                "--posterior-out",
                "post.csv",
            ],
            tmp_path,
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "post.csv")
        assert header == ["chi_tilde", "density"]
        assert len(rows) == 2001

    def test_trial_aggregate_keys(self, tmp_path):
        code, out, _ = run_cli(
            [
                "simulate",
                "--alpha",
                "4",
                "--energy",
                "0.5",
                "--n",
                "10",
                "--trials",
                "5",
                "--seed",
                "1",
            ],
            tmp_path,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["trials"] == 5
        assert payload["mle_variance"] is not None

    def test_env_seed_override(self, tmp_path, monkeypatch):
        import os

        env = dict(os.environ, QRES_SEED="9")
        _, with_env, _ = run_cli(
            ["simulate", "--alpha", "2", "--gamma", "1", "--n", "5"],
            tmp_path,
            env=env,
        )
        _, with_flag, _ = run_cli(
            ["simulate", "--alpha", "2", "--gamma", "1", "--n", "5", "--seed", "9"],
            tmp_path,
        )
        assert with_env == with_flag
        assert json.loads(with_env)["seed"] == 9
        # explicit flag wins over the environment
        _, flag_wins, _ = run_cli(
            ["simulate", "--alpha", "2", "--gamma", "1", "--n", "5", "--seed", "4"],
            tmp_path,
            env=env,
        )
        assert json.loads(flag_wins)["seed"] == 4


class TestBoundsCommand:
    def test_report_values(self, tmp_path):
        code, out, _ = run_cli(
            ["bounds", "--alpha", "20", "--energy", "0.3333333333333333", "--n", "50"],
            tmp_path,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["approx_bound"] == pytest.approx(1e-3, rel=1e-12)
        assert payload["energy_bound"] == pytest.approx(1.0366e-3, rel=1e-3)
        assert list(payload)[:4] == ["alpha", "gamma", "mean_energy", "repetitions"]

    def test_gamma_parameterization(self, tmp_path):
        code, out, _ = run_cli(
            ["bounds", "--alpha", "2", "--gamma", "1.0", "--n", "1"], tmp_path
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["fisher"] == pytest.approx(4.0, rel=1e-12)
        assert payload["mean_energy"] == pytest.approx(0.25, rel=1e-12)


class TestOscillatorCommand:
    def test_bound_only(self, tmp_path):
        code, out, _ = run_cli(
            ["oscillator", "--omega", "1", "--energy", "1", "--n", "1"], tmp_path
        )
        assert code == 0
        assert json.loads(out)["ho_bound"] == 0.25

    def test_number_shift_block(self, tmp_path):
        code, out, _ = run_cli(
            [
                "oscillator",
                "--omega",
                "1",
                "--energy",
                "1",
                "--n",
                "1",
                "--n-level",
                "0",
                "--chi",
                "0.01",
            ],
            tmp_path,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["fisher_approx"] == pytest.approx(100.0)
        assert payload["crb_approx"] == pytest.approx(0.01)
        assert payload["prob_stay"] + payload["prob_shift"] == pytest.approx(1.0)


class TestScenarioCommand:
    def test_electric(self, tmp_path):
        code, out, _ = run_cli(
            ["scenario", "electric", "--q", "2", "--field", "0.5", "--tau", "3"],
            tmp_path,
        )
        assert code == 0
        assert json.loads(out)["chi"] == 3.0

    def test_stern_gerlach(self, tmp_path):
        code, out, _ = run_cli(
            [
                "scenario",
                "stern-gerlach",
                "--mu-z",
                "-1",
                "--gradient",
                "2",
                "--tau",
                "0.5",
            ],
            tmp_path,
        )
        assert code == 0
        assert json.loads(out)["chi"] == -1.0


class TestExitCodes:
    def test_usage_error_when_both_width_and_energy(self, tmp_path):
        code, _, err = run_cli(
            ["bounds", "--alpha", "2", "--energy", "1", "--gamma", "1", "--n", "1"],
            tmp_path,
        )
        assert code == 2
        assert "energy" in err

    def test_usage_error_when_neither(self, tmp_path):
        code, _, _ = run_cli(["bounds", "--alpha", "2", "--n", "1"], tmp_path)
        assert code == 2

    def test_usage_error_odd_alpha(self, tmp_path):
        code, _, _ = run_cli(
            ["bounds", "--alpha", "3", "--energy", "1", "--n", "1"], tmp_path
        )
        assert code == 2

    def test_unknown_flag_is_a_usage_error(self, tmp_path):
        code, _, _ = run_cli(["bounds", "--bogus", "1"], tmp_path)
        assert code == 2

    def test_accuracy_errors_map_to_exit_3(self, monkeypatch, capsys):
        def boom(args):
            raise AccuracyError("synthetic failure", best_estimate=1.0)

        # build_parser wires the command to cli._cmd_bounds at parse time
        monkeypatch.setattr(cli, "_cmd_bounds", boom)
        assert cli.main(["bounds", "--alpha", "2", "--energy", "1", "--n", "1"]) == 3
        assert "numerical-accuracy" in capsys.readouterr().err


class TestDeterminism:
    @pytest.mark.parametrize(
        "args",
        [
            ["probe", "--alpha", "6", "--energy", "0.25", "--out", "det.csv"],
            ["sweep", "--alpha-max", "12", "--out", "det.csv"],
            [
                "simulate",
                "--alpha",
                "4",
                "--energy",
                "0.5",
                "--n",
                "10",
                "--trials",
                "3",
                "--seed",
                "5",
                "--out",
                "det.json",
                "--posterior-out",
                "det_post.csv",
            ],
            [
                "bounds",
                "--alpha",
                "8",
                "--energy",
                "1.0",
                "--n",
                "7",
                "--out",
                "det.json",
            ],
        ],
    )
    def test_reruns_are_byte_identical(self, tmp_path, args):
        first_dir = tmp_path / "first"
        second_dir = tmp_path / "second"
        first_dir.mkdir()
        second_dir.mkdir()
        code1, out1, _ = run_cli(args, first_dir)
        code2, out2, _ = run_cli(args, second_dir)
        assert code1 == code2 == 0
        assert out1 == out2
        first_files = sorted(p.name for p in first_dir.iterdir())
        assert first_files == sorted(p.name for p in second_dir.iterdir())
        for name in first_files:
            assert (first_dir / name).read_bytes() == (second_dir / name).read_bytes()

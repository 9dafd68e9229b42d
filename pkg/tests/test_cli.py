"""Command-line interface: schemas, determinism, exit codes."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from melink.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


def test_help_for_every_subcommand(runner):
    for sub in ("trajectory", "sweep", "link", "compare", "variation",
                "convergence"):
        res = runner.invoke(main, [sub, "--help"])
        assert res.exit_code == 0, sub


class TestTrajectory:
    def test_reversal_crosses_before_500ps(self, runner, tmp_path):
        out = tmp_path / "traj.csv"
        res = runner.invoke(main, [
            "trajectory", "--v-me", "0.2", "--duration-ns", "1",
            "--temperature", "0", "--out", str(out)])
        assert res.exit_code == 0, res.output
        header, rows = read_csv(out)
        assert header == ["time_ps", "mx", "my", "mz", "v_me_mv"]
        t_cross = next(float(r[0]) for r in rows if float(r[1]) >= 0.9)
        assert t_cross <= 500.0

    def test_zero_drive_cold_stays_put(self, runner, tmp_path):
        out = tmp_path / "flat.csv"
        res = runner.invoke(main, [
            "trajectory", "--v-me", "0", "--duration-ns", "2",
            "--temperature", "0", "--out", str(out)])
        assert res.exit_code == 0
        _, rows = read_csv(out)
        mx = np.array([float(r[1]) for r in rows])
        assert np.all(mx < -0.99)

    def test_bad_duration_is_usage_error(self, runner):
        res = runner.invoke(main, ["trajectory", "--duration-ns", "0"])
        assert res.exit_code == 2


class TestSweep:
    def test_probability_reaches_one_by_250mv(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        res = runner.invoke(main, [
            "sweep", "--v-min", "0.05", "--v-max", "0.25", "--step", "0.05",
            "--trials", "200", "--window-ns", "2", "--seed", "4",
            "--out", str(out)])
        assert res.exit_code == 0, res.output
        header, rows = read_csv(out)
        assert header == ["v_me_mv", "n_trials", "n_switched", "probability",
                          "ci_low", "ci_high"]
        by_v = {float(r[0]): float(r[3]) for r in rows}
        assert by_v[250.0] >= 0.99
        assert by_v[50.0] <= 0.05

    def test_zero_trials_usage_error(self, runner):
        res = runner.invoke(main, ["sweep", "--trials", "0"])
        assert res.exit_code == 2

    def test_byte_identical_for_same_seed(self, runner, tmp_path):
        args = ["sweep", "--v-min", "0.1", "--v-max", "0.15", "--step", "0.05",
                "--trials", "100", "--window-ns", "1", "--seed", "9"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()


class TestLink:
    def test_pattern_tracks_with_one_cycle_delay(self, runner, tmp_path):
        out = tmp_path / "link.csv"
        summ = tmp_path / "summary.json"
        res = runner.invoke(main, [
            "link", "--pattern", "10110", "--length-mm", "5",
            "--seed", "2", "--out", str(out), "--summary", str(summ)])
        assert res.exit_code == 0, res.output
        header, rows = read_csv(out)
        assert header == ["time_ps", "v_in_mv", "v_me_mv", "mx",
                          "v_node_m_mv", "v_out_bit"]
        payload = json.loads(summ.read_text())
        assert payload["bits_in"] == "10110"
        assert payload["bits_out"] == "010110"
        # the output-bit waveform reproduces the pattern one cycle late
        t = np.array([float(r[0]) for r in rows])
        period_ps = (t[-1] + t[1] - t[0]) / 5
        vout = np.array([int(r[5]) for r in rows])
        for k, bit in enumerate("10110"):
            probe = min((k + 1) * period_ps + 100.0, t[-1])
            assert vout[min(np.searchsorted(t, probe), len(t) - 1)] == int(bit)

    def test_all_zero_pattern(self, runner, tmp_path):
        out = tmp_path / "link0.csv"
        summ = tmp_path / "s0.json"
        res = runner.invoke(main, [
            "link", "--pattern", "00000", "--out", str(out),
            "--summary", str(summ)])
        assert res.exit_code == 0
        _, rows = read_csv(out)
        assert all(int(r[5]) == 0 for r in rows)

    def test_summary_energy_matches_recomputation(self, runner, tmp_path, cfg):
        from melink.link import LinkConfig, energy_per_bit, simulate_link
        summ = tmp_path / "s.json"
        res = runner.invoke(main, [
            "link", "--pattern", "1011", "--seed", "6",
            "--out", str(tmp_path / "l.csv"), "--summary", str(summ)])
        assert res.exit_code == 0
        payload = json.loads(summ.read_text())
        trace = simulate_link(LinkConfig.from_run_config(cfg, seed=6),
                              [1, 0, 1, 1])
        expect = energy_per_bit(trace)["total_fj_per_bit_per_mm"]
        assert payload["energy_fj_per_bit_per_mm"] == pytest.approx(
            expect, rel=1e-12)

    def test_bad_pattern_usage_error(self, runner):
        assert runner.invoke(main, ["link", "--pattern", "10a"]).exit_code == 2
        assert runner.invoke(main, ["link", "--pattern", ""]).exit_code == 2


class TestCompare:
    def test_two_lengths_six_rows(self, runner, tmp_path):
        out = tmp_path / "cmp.json"
        csv_out = tmp_path / "cmp.csv"
        res = runner.invoke(main, [
            "compare", "--lengths", "5,10", "--out", str(out),
            "--csv", str(csv_out)])
        assert res.exit_code == 0, res.output
        payload = json.loads(out.read_text())
        assert len(payload["rows"]) == 6
        assert set(payload["energy_ratios"]) == {"5.0", "10.0"}
        for ratios in payload["energy_ratios"].values():
            assert ratios["full_swing_over_me"] > ratios["low_swing_over_me"] > 1.0
        _, rows = read_csv(csv_out)
        assert len(rows) == 6

    def test_empty_lengths_usage_error(self, runner):
        assert runner.invoke(main, ["compare", "--lengths", ""]).exit_code == 2


class TestVariation:
    def test_nominal_spread_passes(self, runner, tmp_path):
        out = tmp_path / "var.csv"
        res = runner.invoke(main, [
            "variation", "--spread", "0.2", "--trials", "100",
            "--seed", "8", "--out", str(out)])
        assert res.exit_code == 0, res.output
        header, rows = read_csv(out)
        assert header == ["trial", "peak_v_me_mv", "pass"]
        assert len(rows) == 100
        assert all(float(r[1]) > 200.0 for r in rows)

    def test_zero_spread_identical_rows(self, runner, tmp_path):
        out = tmp_path / "var0.csv"
        res = runner.invoke(main, [
            "variation", "--spread", "0", "--trials", "100", "--out", str(out)])
        assert res.exit_code == 0
        _, rows = read_csv(out)
        assert len({r[1] for r in rows}) == 1

    def test_out_of_range_spread_usage_error(self, runner):
        res = runner.invoke(main, ["variation", "--spread", "0.9"])
        assert res.exit_code == 2


class TestConvergence:
    def test_default_run(self, runner, tmp_path):
        out = tmp_path / "conv.csv"
        res = runner.invoke(main, ["convergence", "--out", str(out)])
        assert res.exit_code == 0, res.output
        header, rows = read_csv(out)
        assert header == ["dt_ps", "max_angle_error_deg"]
        assert "observed order" in res.output

    def test_too_few_steps_usage_error(self, runner):
        res = runner.invoke(main, ["convergence", "--dt-ps", "0.1,0.2"])
        assert res.exit_code == 2


class TestSetOverrides:
    def test_set_overrides_any_key(self, runner, tmp_path):
        out = tmp_path / "t.csv"
        res = runner.invoke(main, [
            "trajectory", "--set", "magnet.temperature_k=0",
            "--set", "wire.n_segments=20", "--duration-ns", "0.01",
            "--out", str(out)])
        assert res.exit_code == 0, res.output

    def test_set_rejects_unknown_key(self, runner, tmp_path):
        res = runner.invoke(main, [
            "trajectory", "--set", "magnet.bogus=1",
            "--out", str(tmp_path / "t.csv")])
        assert res.exit_code == 2

    def test_set_rejects_malformed(self, runner, tmp_path):
        res = runner.invoke(main, [
            "trajectory", "--set", "magnet.alpha",
            "--out", str(tmp_path / "t.csv")])
        assert res.exit_code == 2


class TestConfigFile:
    def test_config_file_and_unknown_key(self, runner, tmp_path):
        good = tmp_path / "good.json"
        good.write_text(json.dumps({"wire.length_mm": 5.0}))
        res = runner.invoke(main, [
            "trajectory", "--config", str(good), "--temperature", "0",
            "--duration-ns", "0.01", "--out", str(tmp_path / "t.csv")])
        assert res.exit_code == 0, res.output
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"wire.lenght_mm": 5.0}))
        res = runner.invoke(main, [
            "trajectory", "--config", str(bad),
            "--out", str(tmp_path / "t2.csv")])
        assert res.exit_code == 2

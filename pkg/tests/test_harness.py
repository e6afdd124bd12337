"""Experiment harness and command-line interface."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from specmeans import (
    ConvergenceReport,
    ExperimentConfig,
    run_conditions,
    run_convergence_distribution,
    run_convergence_function,
    run_equivalence,
)
from specmeans.cli import main as cli_main
from specmeans.harness import (
    CSV_HEADER,
    parse_mean,
    parse_norm_spec,
    parse_symbol,
    report_to_csv,
    report_to_json,
)


class TestParsers:
    def test_means(self):
        assert parse_mean("gaussian").label == "gaussian"
        assert parse_mean("riesz:1.5")(0.5) == pytest.approx(0.5**1.5)
        assert parse_mean("cutoff:2.0")(0.5) == 1.0
        with pytest.raises(ValueError):
            parse_mean("cauchy")

    def test_symbols(self):
        assert parse_symbol("abs:2").degree == 2
        assert parse_symbol("quartic").degree == 4
        with pytest.raises(ValueError):
            parse_symbol("hyperbolic")

    def test_norm_specs(self):
        ns = parse_norm_spec("liouville:0.5:2")
        assert (ns.kind, ns.s, ns.p) == ("liouville", 0.5, 2.0)
        ns = parse_norm_spec("besov:0.5:2:2")
        assert ns.kind == "besov_lp"
        ns = parse_norm_spec("nikolskii:0.7:2")
        assert ns.kind == "nikolskii"
        with pytest.raises(ValueError):
            parse_norm_spec("orlicz:1:2")


class TestConfig:
    def test_defaults_valid(self):
        config = ExperimentConfig()
        assert config.grid.points_per_axis == 64
        ts = config.t_schedule()
        assert len(ts) == config.steps
        assert all(b < a for a, b in zip(ts, ts[1:]))

    def test_bad_schedule(self):
        with pytest.raises(ValueError):
            ExperimentConfig(ratio=1.5)
        with pytest.raises(ValueError):
            ExperimentConfig(t0=-1.0)

    def test_window_radius_margin(self):
        with pytest.raises(ValueError):
            ExperimentConfig(window_radius=0.5 * 2 * math.pi)

    def test_from_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"points_per_axis": 32, "mean": "riesz:1"}))
        config = ExperimentConfig.from_json(path)
        assert config.points_per_axis == 32
        assert config.mean == "riesz:1"


class TestConvergenceFunction:
    def test_gaussian_bump_decays(self):
        config = ExperimentConfig(
            points_per_axis=64,
            mean="gaussian",
            space="liouville:0.5:2",
            t0=1e-1,
            ratio=0.25,
            steps=6,
            window_radius=1.0,
        )
        report = run_convergence_function(config)
        errs = [r["error"] for r in report.records]
        assert report.monotone
        assert errs[-1] / errs[0] < 1e-2
        assert report.hypothesis_passed
        assert report.boundedness_ratio < 10.0

    def test_slope_near_theory(self):
        # gaussian mean, order-2 symbol, measuring beta - alpha = 1 order
        config = ExperimentConfig(
            points_per_axis=128,
            mean="gaussian",
            space="liouville:0.5:2",
            signal="bump",
            t0=1e-1,
            ratio=0.5,
            steps=8,
        )
        report = run_convergence_function(config)
        assert report.slope == pytest.approx(1.0, abs=0.2)

    def test_hypothesis_failure_recorded(self):
        config = ExperimentConfig(mean="riesz:0", l=1)
        report = run_convergence_function(config)
        assert report.hypothesis_passed is False


class TestConvergenceDistribution:
    def test_delta_converges(self):
        config = ExperimentConfig(
            points_per_axis=64,
            mean="gaussian",
            alpha=0.75,
            t0=1e-1,
            ratio=0.5,
            steps=8,
            atoms=[{"x": [0.0], "alpha": [0], "c": [1.0, 0.0]}],
            window_radius=1.0,
        )
        report = run_convergence_distribution(config)
        errs = [r["error"] for r in report.records]
        assert report.monotone
        assert errs[-1] < errs[0]
        assert report.extra["pairing_errors"][0] is not None


class TestEquivalence:
    def test_brackets_bounded_and_stable(self):
        config = ExperimentConfig(points_per_axis=64, corpus_size=20, band=8)
        res = run_equivalence(config)
        for key, bracket in res["bracket"].items():
            assert 0 < bracket["min"] <= bracket["max"]
            assert bracket["max"] / bracket["min"] < 50.0
        # liouville vs sobolev quadratic identity is exact at p=2, s=1
        lio = res["liouville_vs_sobolev_ratio"]
        assert lio["min"] == pytest.approx(1.0, rel=1e-10)
        assert lio["max"] == pytest.approx(1.0, rel=1e-10)

    def test_small_corpus_rejected(self):
        with pytest.raises(ValueError):
            run_equivalence(ExperimentConfig(corpus_size=5))


class TestConditions:
    def test_json_payload(self):
        out = run_conditions(ExperimentConfig(theorem="T1", mean="gaussian"))
        payload = json.loads(out)
        assert payload["pass"] is True
        names = [c["condition"] for c in payload["checks"]]
        assert "integrability" in names
        assert all({"formula", "lhs", "rhs", "pass"} <= set(c) for c in payload["checks"])


class TestEmission:
    def _report(self):
        config = ExperimentConfig(points_per_axis=32, steps=3)
        return run_convergence_function(config)

    def test_csv_deterministic(self):
        a = report_to_csv(self._report())
        b = report_to_csv(self._report())
        assert a == b
        assert a.splitlines()[0] == CSV_HEADER
        assert len(a.splitlines()) == 4

    def test_csv_fields_parse_back(self):
        text = report_to_csv(self._report())
        for line in text.splitlines()[1:]:
            t, err, space, route, mono, slope, floor = line.split(",")
            float(t), float(err), float(slope), float(floor)
            assert mono in ("0", "1")
            assert route == "liouville"

    def test_json_round_trip(self):
        payload = json.loads(report_to_json(self._report()))
        assert payload["monotone"] in (True, False)
        assert len(payload["records"]) == 3
        assert "hypothesis" in payload


class TestCLI:
    def test_converge_csv(self, capsys):
        rc = cli_main(
            [
                "converge",
                "--grid",
                "32",
                "--steps",
                "3",
                "--format",
                "csv",
            ]
        )
        out = capsys.readouterr().out
        assert rc == 0
        assert out.splitlines()[0] == CSV_HEADER

    def test_out_file(self, tmp_path):
        path = tmp_path / "report.csv"
        rc = cli_main(
            ["converge", "--grid", "32", "--steps", "3", "--format", "csv", "--out", str(path)]
        )
        assert rc == 0
        assert path.read_text().splitlines()[0] == CSV_HEADER

    def test_byte_identical_runs(self, tmp_path):
        args = ["converge", "--grid", "32", "--steps", "3", "--format", "csv"]
        p1 = tmp_path / "a.csv"
        p2 = tmp_path / "b.csv"
        assert cli_main(args + ["--out", str(p1)]) == 0
        assert cli_main(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_conditions_json(self, capsys):
        rc = cli_main(["conditions", "--theorem", "T1", "--mean", "gaussian"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pass"] is True

    def test_norm_command(self, capsys):
        rc = cli_main(
            ["norm", "--grid", "64", "--signal", "bump", "--space", "besov:0.5:2:2", "--via", "modulus"]
        )
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["space"].startswith("besov_modulus")
        assert payload["value"] > 0

    def test_apply_command(self, capsys):
        rc = cli_main(["apply", "--grid", "32", "--signal", "bump", "--t", "0.01"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["spec"]["n"] == 32

    def test_config_error_exit_2(self, capsys):
        rc = cli_main(["converge", "--ratio", "1.5"])
        assert rc == 2

    def test_unknown_mean_exit_2(self, capsys):
        rc = cli_main(["converge", "--mean", "cauchy"])
        assert rc == 2

    def test_usage_error_exit_2(self):
        assert cli_main(["no-such-command"]) == 2

    def test_converge_dist_defaults_to_delta(self, capsys):
        rc = cli_main(
            ["converge-dist", "--grid", "32", "--steps", "3", "--alpha", "0.75", "--format", "csv"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "liouville:-0.75" in out

    def test_entry_point_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "specmeans.cli", "conditions", "--mean", "gaussian"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["pass"] is True

"""Tests for the wing-rock Case-2 experiment."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from pcm_amortized.config import RunConfig
from pcm_amortized.experiments import evaluate_controller, generate_case2_dataset, run_case2
from pcm_amortized.experiments.case2 import metrics_row, scenario
from pcm_amortized.pcm import ObjectiveMetrics
from pcm_amortized.wingrock import linear_mpc_baseline


class TestCase2Setup:
    """Test dataset and scenario helpers."""

    def test_dataset_shapes(self, reduced_config):
        """Features are (x0, xd) and inputs span the horizon."""
        dataset = generate_case2_dataset(reduced_config)
        assert dataset.X.shape == (20, 4)
        assert dataset.U.shape == (20, 2)
        assert np.all(np.abs(dataset.U) <= 1.75)

    def test_scenario_in_radians(self, reduced_config):
        """Closed-loop scenario converts degrees to radians."""
        x0, xd = scenario(reduced_config)
        np.testing.assert_allclose(x0, np.deg2rad([10.0, 45.0]))
        np.testing.assert_allclose(xd, np.deg2rad([-25.0, 0.0]))

    def test_linear_mpc_metrics(self, reduced_config):
        """A plain controller is scored on the test split without exclusions."""
        dataset = generate_case2_dataset(reduced_config)
        controller = linear_mpc_baseline(
            reduced_config.nmpc_problem(), reduced_config.wingrock_consts(), reduced_config.solver_opts()
        )
        metrics = evaluate_controller(reduced_config, controller, dataset)
        assert np.isfinite(metrics.mean_objective)
        assert metrics.excluded_samples == 0

    def test_metrics_row_without_trajectory(self):
        """A failed rollout leaves NaN terminal errors."""
        row = metrics_row("eplse", ObjectiveMetrics(1.5, 0.01, 0), None, np.zeros(2))
        assert row["mean_objective"] == 1.5
        assert np.isnan(row["terminal_phi_err_deg"])


class TestRunCase2:
    """Test the full Case-2 pipeline on a reduced configuration."""

    def test_artifacts(self, reduced_config):
        """Trained models and the baseline get trajectories and metrics rows."""
        config = reduced_config.with_overrides(models=["eplse", "linear-mpc"])
        outcome = run_case2(config)
        out_dir = Path(config.run.output_dir)
        assert outcome.ok
        for name in ("manifest.txt", "case2-dataset.csv", "eplse-loss.csv", "eplse-best.ckpt",
                     "case2-trajectory-eplse.csv", "case2-trajectory-linear-mpc.csv", "case2-metrics.csv"):
            assert (out_dir / name).exists()
        metrics = pd.read_csv(out_dir / "case2-metrics.csv")
        assert list(metrics["model_kind"]) == ["eplse", "linear-mpc"]
        trajectory = pd.read_csv(out_dir / "case2-trajectory-eplse.csv")
        assert len(trajectory) == 4
        assert np.all(np.abs(trajectory["delta_g"].dropna()) <= 1.75 + 1e-12)

    def test_dataset_columns(self, reduced_config):
        """The dataset file has one input column per horizon step."""
        run_case2(reduced_config.with_overrides(models=["linear-mpc"]))
        frame = pd.read_csv(Path(reduced_config.run.output_dir) / "case2-dataset.csv")
        assert list(frame.columns) == ["x0_phi", "x0_phidot", "xd_phi", "xd_phidot", "u1", "u2", "J", "split_tag"]
        assert len(frame) == 20

    def test_baseline_runs_unlisted(self, reduced_config):
        """The linear-MPC baseline is compared even when only approximators are requested."""
        config = reduced_config.with_overrides(models=["eplse"])
        outcome = run_case2(config)
        out_dir = Path(config.run.output_dir)
        assert outcome.ok
        metrics = pd.read_csv(out_dir / "case2-metrics.csv")
        assert list(metrics["model_kind"]) == ["eplse", "linear-mpc"]
        assert (out_dir / "case2-trajectory-linear-mpc.csv").exists()

    @pytest.mark.slow
    def test_default_protocol(self, tmp_path):
        """Full-size Case 2: EPLSE settles on the setpoint and no input leaves the box."""
        outcome = run_case2(RunConfig().with_overrides(output_dir=str(tmp_path)))
        assert outcome.ok

        metrics = pd.read_csv(tmp_path / "case2-metrics.csv").set_index("model_kind")
        assert {"eplse", "linear-mpc"} <= set(metrics.index)
        assert metrics.loc["eplse", "terminal_phi_err_deg"] <= 2.0
        assert metrics.loc["eplse", "terminal_phidot_err_degps"] <= 2.0

        for name in ("eplse", "linear-mpc"):
            trajectory = pd.read_csv(tmp_path / f"case2-trajectory-{name}.csv")
            assert trajectory["t_s"].iloc[-1] == pytest.approx(15.0)
            assert np.all(np.abs(trajectory["delta_g"].dropna()) <= 1.75)
            assert np.isfinite(metrics.loc[name, "terminal_phi_err_deg"])

        final = pd.read_csv(tmp_path / "case2-trajectory-eplse.csv").iloc[-1]
        assert abs(final["phi_deg"] - (-25.0)) <= 2.0
        assert abs(final["phidot_degps"]) <= 2.0

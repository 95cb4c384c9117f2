"""Tests for the scalar Case-1 experiment."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from pcm_amortized.approximators import ModelKind
from pcm_amortized.config import RunConfig
from pcm_amortized.experiments import (
    case1_dataset_frame,
    case1_min_oracle,
    case1_objective,
    generate_case1_dataset,
    run_case1,
)
from pcm_amortized.experiments import case1
from pcm_amortized.experiments.case1 import trainable_kinds
from pcm_amortized.experiments.schemas import case1_dataset_schema
from pcm_amortized.pcm import TrainingError


class TestCase1Objective:
    """Test the benchmark objective and its oracle."""

    def test_values(self):
        """``x^2 + u^2 + sin(2 pi u)`` at known points."""
        X = np.array([[0.0], [1.0], [0.5]])
        U = np.array([[0.0], [0.25], [-0.5]])
        np.testing.assert_allclose(case1_objective(X, U), [0.0, 2.0625, 0.5], atol=1e-12)

    def test_oracle_minimizer(self):
        """The true minimizer is unique near u = -0.23793 with minimum x^2 - 0.94052."""
        oracle = case1_min_oracle(RunConfig())
        minimizers, minimum = oracle(np.array([0.5]))
        assert minimizers.shape == (1, 1)
        assert minimizers[0, 0] == pytest.approx(-0.23793, abs=1e-4)
        assert minimum == pytest.approx(0.25 - 0.94052, abs=1e-5)

    def test_oracle_independent_of_x_in_u(self):
        """Only the minimum moves with x."""
        oracle = case1_min_oracle(RunConfig())
        (m1, v1), (m2, v2) = oracle(np.array([0.0])), oracle(np.array([-1.0]))
        np.testing.assert_array_equal(m1, m2)
        assert v2 - v1 == pytest.approx(1.0)


class TestCase1Dataset:
    """Test dataset generation."""

    def test_dataset(self, reduced_config):
        """Samples lie in the boxes, labels are exact and splits are 28/8/4."""
        dataset = generate_case1_dataset(reduced_config)
        assert dataset.X.shape == (40, 1)
        assert np.all(np.abs(dataset.X) <= 1.0)
        assert np.all(np.abs(dataset.U) <= 1.0)
        np.testing.assert_allclose(dataset.F, case1_objective(dataset.X, dataset.U))
        assert (dataset.train_idx.size, dataset.valid_idx.size, dataset.test_idx.size) == (28, 8, 4)

    def test_deterministic(self, reduced_config):
        """The same seed gives the same dataset."""
        a = generate_case1_dataset(reduced_config)
        b = generate_case1_dataset(reduced_config)
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.test_idx, b.test_idx)

    def test_frame_validates(self, reduced_config):
        """The dataset frame matches its file schema."""
        frame = case1_dataset_frame(generate_case1_dataset(reduced_config))
        case1_dataset_schema.validate(frame)
        assert set(frame["split_tag"]) == {"train", "valid", "test"}


class TestTrainableKinds:
    """Test model selection."""

    def test_linear_mpc_skipped(self):
        """The linear-MPC baseline is not trained."""
        config = RunConfig().with_overrides(models=["eplse", "linear-mpc"])
        assert trainable_kinds(config) == [ModelKind.EPLSE]

    def test_non_trainable_rejected(self):
        """Plain LSE is a building block, not a trainable approximator."""
        with pytest.raises(ValueError, match="not a trainable"):
            trainable_kinds(RunConfig().with_overrides(models=["lse"]))


class TestRunCase1:
    """Test the full Case-1 pipeline on a reduced configuration."""

    def test_artifacts(self, reduced_config):
        """Every model writes its files and gets a metrics row."""
        outcome = run_case1(reduced_config)
        out_dir = Path(reduced_config.run.output_dir)
        names = {path.name for path in outcome.artifacts}
        assert {"manifest.txt", "case1-dataset.csv", "case1-metrics.csv", "case1-bound.csv"} <= names
        for kind in ("fnn", "eplse"):
            for suffix in ("-loss.csv", "-best.ckpt"):
                assert (out_dir / f"{kind}{suffix}").exists()
            assert (out_dir / f"case1-surface-{kind}.csv").exists()
        metrics = pd.read_csv(out_dir / "case1-metrics.csv")
        assert list(metrics["model_kind"]) == ["fnn", "eplse"]
        assert set(outcome.failures) <= {"suboptimality_bound"}

    def test_model_failure_is_reported(self, reduced_config, monkeypatch):
        """A failing model is skipped and named in the outcome."""
        real = case1.train_case1_model

        def failing(config, kind, dataset, out_dir=None):
            if kind is ModelKind.FNN:
                raise TrainingError("diverged", {"epoch": 1})
            return real(config, kind, dataset, out_dir)

        monkeypatch.setattr(case1, "train_case1_model", failing)
        outcome = run_case1(reduced_config.with_overrides(models=["fnn"]))
        assert outcome.failures == ["fnn"]
        assert not outcome.ok

    def test_same_seed_same_files(self, reduced_config, tmp_path):
        """Two runs with the same seed write identical metrics and loss histories."""
        first = reduced_config.with_overrides(output_dir=str(tmp_path / "first"))
        second = reduced_config.with_overrides(output_dir=str(tmp_path / "second"))
        run_case1(first)
        run_case1(second)

        def read(config, name, drop=()):
            return pd.read_csv(Path(config.run.output_dir) / name).drop(columns=list(drop))

        pd.testing.assert_frame_equal(
            read(first, "case1-metrics.csv", ["mean_solve_seconds"]),
            read(second, "case1-metrics.csv", ["mean_solve_seconds"]),
            check_exact=True,
        )
        for kind in ("fnn", "eplse"):
            pd.testing.assert_frame_equal(
                read(first, f"{kind}-loss.csv"), read(second, f"{kind}-loss.csv"), check_exact=True
            )
        assert Path(first.run.output_dir, "eplse-best.ckpt").read_bytes() == Path(
            second.run.output_dir, "eplse-best.ckpt"
        ).read_bytes()

    @pytest.mark.slow
    def test_default_protocol(self, tmp_path):
        """Full-size Case 1: EPLSE finds the minimizer, PLSE misses the minimum and the bound holds."""
        outcome = run_case1(RunConfig().with_overrides(output_dir=str(tmp_path)))
        assert outcome.ok

        metrics = pd.read_csv(tmp_path / "case1-metrics.csv").set_index("model_kind")
        assert list(metrics.index) == ["fnn", "plse", "dlse", "eplse"]
        eplse, plse = metrics.loc["eplse"], metrics.loc["plse"]
        assert eplse["mean_minimizer_err"] <= 0.05
        assert eplse["mean_minvalue_err"] <= 0.10
        assert plse["mean_minvalue_err"] >= 5.0 * eplse["mean_minvalue_err"]

        bound = pd.read_csv(tmp_path / "case1-bound.csv")
        assert list(bound["suite"]) == ["suboptimality_bound"]
        assert bound["cases"].iloc[0] == 101
        assert bound["failures"].iloc[0] == 0
        assert bool(bound["passed"].iloc[0])

    @pytest.mark.slow
    def test_default_protocol_deterministic(self, tmp_path):
        """Two full-size runs agree on every metric and loss history except wall time."""
        for name in ("first", "second"):
            run_case1(RunConfig().with_overrides(output_dir=str(tmp_path / name)))

        def read(name, file, drop=()):
            return pd.read_csv(tmp_path / name / file).drop(columns=list(drop))

        pd.testing.assert_frame_equal(
            read("first", "case1-metrics.csv", ["mean_solve_seconds"]),
            read("second", "case1-metrics.csv", ["mean_solve_seconds"]),
            check_exact=True,
        )
        for kind in ("fnn", "plse", "dlse", "eplse"):
            pd.testing.assert_frame_equal(
                read("first", f"{kind}-loss.csv"), read("second", f"{kind}-loss.csv"), check_exact=True
            )

"""Tests for datasets, training configuration and the training loop."""

from dataclasses import dataclass

import numpy as np
import pandas as pd
import pytest

from pcm_amortized.approximators import ModelKind, NetworkShape, load_checkpoint
from pcm_amortized.numerics import ContractViolation, RngSeed
from pcm_amortized.pcm import (
    Dataset,
    EmptySplitError,
    TrainConfig,
    TrainingDivergedError,
    split_indices,
    split_sizes,
    train_supervised,
)
from pcm_amortized.solvers import Box

SHAPE = NetworkShape(x_dim=1, u_dim=1, num_terms=3, temperature=0.5, hidden=(5,), sub_hidden=(3,))
BOX = Box.uniform(-1.0, 1.0, 1)


class TestSplits:
    """Test train/valid/test partitioning."""

    def test_sizes(self):
        """Train and valid are rounded, test takes the rest."""
        assert split_sizes(100, (0.7, 0.2, 0.1)) == (70, 20, 10)
        assert split_sizes(1000, (0.6, 0.3, 0.1)) == (600, 300, 100)

    def test_partition(self):
        """Indices partition range(n) with no overlap."""
        train, valid, test = split_indices(50, (0.7, 0.2, 0.1), np.random.default_rng(0))
        joined = np.concatenate([train, valid, test])
        np.testing.assert_array_equal(np.sort(joined), np.arange(50))

    def test_dataset_rejects_overlap(self):
        """Split indices that do not partition the samples are rejected."""
        with pytest.raises(ContractViolation):
            Dataset(np.zeros(3), np.zeros(3), np.zeros(3), [0, 1], [1], [2])

    def test_empty_split(self):
        """Reading an empty split raises EmptySplitError."""
        dataset = Dataset(np.zeros(3), np.zeros(3), np.zeros(3), [0, 1, 2], [], [])
        with pytest.raises(EmptySplitError) as exc_info:
            dataset.split("test")
        assert exc_info.value.split == "test"

    def test_split_tags(self, tiny_dataset):
        """Every sample carries exactly one tag."""
        tags = tiny_dataset.split_tags()
        assert set(tags) == {"train", "valid", "test"}
        assert np.sum(tags == "train") == tiny_dataset.train_idx.size


class TestTrainConfig:
    """Test TrainConfig validation."""

    def test_defaults(self):
        """Default settings."""
        config = TrainConfig()
        assert config.lr == 1e-3
        assert config.batch_size == 16
        assert config.split == (0.7, 0.2, 0.1)

    @pytest.mark.parametrize(
        "kwargs",
        [{"lr": 0.0}, {"epochs": 0}, {"batch_size": 0}, {"split": (0.5, 0.5, 0.0)}, {"split": (0.7, 0.2, 0.2)}],
    )
    def test_invalid(self, kwargs):
        """Invalid settings raise ValueError."""
        with pytest.raises(ValueError):
            TrainConfig(**kwargs)


class TestTrainSupervised:
    """Test the training loop."""

    @pytest.mark.parametrize("kind", [ModelKind.FNN, ModelKind.PLSE_PLUS, ModelKind.DLSE, ModelKind.EPLSE])
    def test_history_and_best(self, kind, tiny_dataset):
        """One history row per epoch; the best epoch has the lowest validation loss."""
        config = TrainConfig(lr=1e-2, epochs=4, batch_size=8, seed=RngSeed(5))
        result = train_supervised(kind, tiny_dataset, config, shape=SHAPE, u_box=BOX)
        assert list(result.history["epoch"]) == [1, 2, 3, 4]
        assert result.best_valid_loss == pytest.approx(result.history["valid_loss"].min())
        assert result.history["valid_loss"].iloc[result.best_epoch - 1] == result.best_valid_loss
        assert result.model.kind is kind

    def test_deterministic(self, tiny_dataset):
        """The same seed reproduces the loss history exactly."""
        config = TrainConfig(lr=1e-2, epochs=3, batch_size=8, seed=RngSeed(9))
        first = train_supervised(ModelKind.PLSE_PLUS, tiny_dataset, config, shape=SHAPE, u_box=BOX)
        second = train_supervised(ModelKind.PLSE_PLUS, tiny_dataset, config, shape=SHAPE, u_box=BOX)
        pd.testing.assert_frame_equal(first.history, second.history)

    def test_training_lowers_loss(self, tiny_dataset):
        """Training a PLSE+ on a convex quadratic lowers the validation loss."""
        config = TrainConfig(lr=2e-2, epochs=30, batch_size=8, seed=RngSeed(1))
        result = train_supervised(ModelKind.PLSE_PLUS, tiny_dataset, config, shape=SHAPE, u_box=BOX)
        assert result.best_valid_loss < result.history["valid_loss"].iloc[0]

    def test_writes_artifacts(self, tiny_dataset, tmp_path):
        """Loss history and best checkpoint are written to the output directory."""
        config = TrainConfig(lr=1e-2, epochs=2, batch_size=16, seed=RngSeed(2))
        result = train_supervised(ModelKind.EPLSE, tiny_dataset, config, shape=SHAPE, u_box=BOX, output_dir=tmp_path)
        history = pd.read_csv(tmp_path / "eplse-loss.csv")
        assert list(history.columns) == ["epoch", "train_loss", "valid_loss"]
        network, header = load_checkpoint(result.checkpoint_path)
        assert header.kind is ModelKind.EPLSE
        np.testing.assert_array_equal(network.u_box.lower, BOX.lower)

    def test_requires_shape_for_kind(self, tiny_dataset):
        """Initializing by kind needs a shape and a box."""
        with pytest.raises(ValueError):
            train_supervised(ModelKind.FNN, tiny_dataset, TrainConfig(epochs=1))

    def test_empty_valid_split(self):
        """Training needs a validation split."""
        dataset = Dataset(np.zeros(4), np.zeros(4), np.zeros(4), [0, 1, 2, 3], [], [])
        with pytest.raises(EmptySplitError):
            train_supervised(ModelKind.FNN, dataset, TrainConfig(epochs=1), shape=SHAPE, u_box=BOX)

    def test_divergence(self, tiny_dataset):
        """A non-finite loss aborts training with the epoch and batch."""

        @dataclass(frozen=True)
        class Exploding:
            kind: ModelKind = ModelKind.FNN

            def parameters(self):
                return np.ones(2)

            def with_parameters(self, vector):
                return self

            def loss_and_grad(self, X, U, F):
                return float("nan"), np.zeros(2)

            def loss(self, X, U, F):
                return 0.0

        with pytest.raises(TrainingDivergedError) as exc_info:
            train_supervised(Exploding(), tiny_dataset, TrainConfig(epochs=2))
        assert exc_info.value.epoch == 1
        assert exc_info.value.batch == 0

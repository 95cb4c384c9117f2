"""Tests for checkpoint files."""

import numpy as np
import pytest

from pcm_amortized.approximators import (
    ModelKind,
    flatten_parameters,
    init_network,
    load_checkpoint,
    save_checkpoint,
    unflatten_parameters,
)
from pcm_amortized.numerics import ContractViolation


class TestCheckpoint:
    """Test save/load of trained approximators."""

    @pytest.mark.parametrize("kind", [ModelKind.FNN, ModelKind.PLSE_PLUS, ModelKind.DLSE])
    def test_parameters_bitwise(self, kind, small_shape, seed, tmp_path):
        """Loaded parameters equal the saved ones bitwise."""
        net = init_network(kind, small_shape, seed)
        perturbed = flatten_parameters(net) + 0.125
        net = unflatten_parameters(net, perturbed)
        path = save_checkpoint(tmp_path / "model.ckpt", net, kind, small_shape, seed)
        loaded, header = load_checkpoint(path)
        assert header.kind is kind
        np.testing.assert_array_equal(flatten_parameters(loaded), perturbed)

    def test_eplse_keeps_box(self, eplse_model, small_shape, seed, tmp_path):
        """EPLSE checkpoints carry the feasible box."""
        path = save_checkpoint(tmp_path / "eplse.ckpt", eplse_model, ModelKind.EPLSE, small_shape, seed)
        loaded, header = load_checkpoint(path)
        assert header.u_lower == [-1.0]
        np.testing.assert_array_equal(loaded.u_box.upper, eplse_model.u_box.upper)
        np.testing.assert_array_equal(flatten_parameters(loaded), flatten_parameters(eplse_model))

    def test_bad_magic(self, tmp_path):
        """A file without the magic line is rejected."""
        path = tmp_path / "bogus.ckpt"
        path.write_bytes(b"not a checkpoint\n{}\n")
        with pytest.raises(ContractViolation):
            load_checkpoint(path)

    def test_truncated(self, plse_plus_net, small_shape, seed, tmp_path):
        """A truncated parameter block is rejected."""
        path = save_checkpoint(tmp_path / "model.ckpt", plse_plus_net, ModelKind.PLSE_PLUS, small_shape, seed)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ContractViolation):
            load_checkpoint(path)

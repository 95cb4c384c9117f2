"""Tests for EPLSE evaluation and its loss gradient."""

import numpy as np
import pytest

from pcm_amortized.approximators import (
    ModelKind,
    flatten_parameters,
    init_network,
    plse_forward,
    unflatten_parameters,
)
from pcm_amortized.numerics import ContractViolation, finite_diff_grad, relative_error
from pcm_amortized.pcm import (
    EplseModel,
    eplse_eval,
    eplse_forward,
    eplse_loss_and_grad,
    predict_minimizer,
)
from pcm_amortized.sensitivity import GradientMode
from pcm_amortized.solvers import Box


class TestEplseModel:
    """Test EPLSE structure validation."""

    def test_requires_plus_constrained(self, eplse_model, small_shape, seed):
        """A plain PLSE minorant is rejected."""
        plain = init_network(ModelKind.PLSE, small_shape, seed)
        with pytest.raises(ContractViolation):
            EplseModel(plain, eplse_model.gap_net, eplse_model.u_box)

    def test_box_dimension(self, eplse_model):
        """The box must match the minorant's u dimension."""
        with pytest.raises(ContractViolation):
            EplseModel(eplse_model.pcm, eplse_model.gap_net, Box.uniform(-1.0, 1.0, 2))


class TestEplseForward:
    """Test the EPLSE value and its minimizer."""

    def test_gap_nonnegative(self, eplse_model):
        """EPLSE never drops below its PCM."""
        rng = np.random.default_rng(11)
        X = rng.uniform(-2, 2, size=(40, 1))
        U = rng.uniform(-1, 1, size=(40, 1))
        forward = eplse_forward(eplse_model, X, U)
        assert np.all(forward.gap_values >= 0.0)
        np.testing.assert_array_equal(forward.values, forward.pcm_values + forward.gap_values)

    def test_gap_vanishes_at_minimizer(self, eplse_model):
        """At u*(x) the gap term vanishes."""
        X = np.array([[-1.0], [0.0], [0.8]])
        U = np.stack([predict_minimizer(eplse_model, x).minimizer for x in X])
        forward = eplse_forward(eplse_model, X, U)
        assert np.all(forward.gap_values <= 1e-12)

    def test_minimizer_is_global(self, eplse_model, unit_box):
        """No grid point of u beats the predicted minimizer."""
        us = np.linspace(-1.0, 1.0, 401)[:, None]
        for x in (-1.5, 0.3):
            solve = predict_minimizer(eplse_model, np.array([x]))
            at_min, _ = eplse_eval(eplse_model, np.array([x]), solve.minimizer)
            values = eplse_forward(eplse_model, np.full((401, 1), x), us).values
            assert at_min <= values.min() + 1e-9

    def test_pcm_matches_plse(self, eplse_model):
        """The PCM part is the PLSE+ network value."""
        X, U = np.array([[0.4]]), np.array([[-0.2]])
        forward = eplse_forward(eplse_model, X, U)
        assert forward.pcm_values[0] == pytest.approx(plse_forward(eplse_model.pcm, X, U).values[0])

    def test_batch_length_mismatch(self, eplse_model):
        """x and u batches must have the same length."""
        with pytest.raises(ContractViolation):
            eplse_forward(eplse_model, np.zeros((2, 1)), np.zeros((3, 1)))


class TestEplseLossGrad:
    """Test the EPLSE training-loss gradient."""

    def _batch(self):
        rng = np.random.default_rng(8)
        return rng.uniform(-1, 1, size=(6, 1)), rng.uniform(-1, 1, size=(6, 1)), rng.normal(size=6)

    def test_gap_parameters_match_differences(self, eplse_model):
        """Gradient of the gap-network parameters matches central differences."""
        X, U, F = self._batch()
        loss, grads = eplse_loss_and_grad(eplse_model, X, U, F)
        vector = flatten_parameters(eplse_model)
        pcm_size = flatten_parameters(eplse_model.pcm).size

        def loss_of_gap(gap_vector):
            perturbed = np.concatenate([vector[:pcm_size], gap_vector])
            predicted = eplse_forward(unflatten_parameters(eplse_model, perturbed), X, U).values
            return float(np.mean((predicted - F) ** 2))

        reference = finite_diff_grad(loss_of_gap, vector[pcm_size:], 1e-6)
        assert relative_error(flatten_parameters(grads)[pcm_size:], reference) < 1e-5
        assert loss == pytest.approx(loss_of_gap(vector[pcm_size:]))

    def test_detached_keeps_gap_gradient(self, eplse_model):
        """Gradient mode only changes the PCM part."""
        X, U, F = self._batch()
        _, implicit = eplse_loss_and_grad(eplse_model, X, U, F, GradientMode.IMPLICIT)
        _, detached = eplse_loss_and_grad(eplse_model, X, U, F, GradientMode.DETACHED)
        np.testing.assert_allclose(
            flatten_parameters(implicit.gap_net), flatten_parameters(detached.gap_net), atol=1e-14
        )

    def test_gradient_shape(self, eplse_model):
        """Gradients are shaped like the model."""
        X, U, F = self._batch()
        _, grads = eplse_loss_and_grad(eplse_model, X, U, F)
        assert flatten_parameters(grads).shape == flatten_parameters(eplse_model).shape

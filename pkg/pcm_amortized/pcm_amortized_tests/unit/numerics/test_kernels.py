"""Tests for log-sum-exp, softmax weights and finite differences."""

import numpy as np
import pytest

from pcm_amortized.numerics import (
    NumericDomainError,
    finite_diff_grad,
    finite_diff_jacobian,
    logsumexp,
    relative_error,
    softmax_weights,
)


class TestLogSumExp:
    """Test the temperature-scaled log-sum-exp."""

    def test_single_element_is_exact(self):
        """A single value is returned unchanged for any temperature."""
        assert logsumexp(np.array([3.25]), 0.1) == 3.25
        assert logsumexp(np.array([-7.0]), 5.0) == -7.0

    def test_bounds(self):
        """Result lies within [max, max + T log n]."""
        rng = np.random.default_rng(0)
        for temperature in (0.01, 0.5, 4.0):
            values = rng.normal(size=7)
            result = logsumexp(values, temperature)
            assert values.max() <= result <= values.max() + temperature * np.log(7) + 1e-12

    def test_no_overflow(self):
        """Large inputs with a tiny temperature stay finite."""
        result = logsumexp(np.array([1000.0, 999.0]), 1e-3)
        assert np.isfinite(result)
        assert result == pytest.approx(1000.0)

    def test_batched_reduces_last_axis(self):
        """A 2D input reduces row-wise."""
        values = np.array([[0.0, 0.0], [1.0, 1.0]])
        np.testing.assert_allclose(logsumexp(values, 1.0), [np.log(2.0), 1.0 + np.log(2.0)])

    def test_empty_input_rejected(self):
        """Empty values raise a domain error."""
        with pytest.raises(NumericDomainError):
            logsumexp(np.array([]), 1.0)

    @pytest.mark.parametrize("temperature", [0.0, -1.0])
    def test_nonpositive_temperature_rejected(self, temperature):
        """Temperature must be positive."""
        with pytest.raises(NumericDomainError):
            logsumexp(np.array([1.0, 2.0]), temperature)


class TestSoftmaxWeights:
    """Test softmax weights as the log-sum-exp gradient."""

    def test_sum_to_one(self):
        """Weights are a probability vector."""
        weights = softmax_weights(np.array([1.0, -2.0, 0.5]), 0.7)
        assert weights.sum() == pytest.approx(1.0)
        assert np.all(weights >= 0)

    def test_matches_logsumexp_gradient(self):
        """Weights equal the central-difference gradient of logsumexp."""
        values = np.array([0.3, -1.2, 2.0])
        fd = finite_diff_grad(lambda v: logsumexp(v, 0.8), values, 1e-6)
        np.testing.assert_allclose(softmax_weights(values, 0.8), fd, atol=1e-8)


class TestFiniteDifferences:
    """Test central-difference oracles and the error metric."""

    def test_gradient_of_quadratic(self):
        """Central differences are exact for quadratics."""
        point = np.array([1.0, -2.0])
        grad = finite_diff_grad(lambda v: float(v @ v), point, 1e-3)
        np.testing.assert_allclose(grad, 2.0 * point, atol=1e-9)

    def test_scalar_point_promoted(self):
        """A scalar point gives a length-1 gradient."""
        grad = finite_diff_grad(lambda v: float(v[0] ** 3), 2.0, 1e-4)
        assert grad.shape == (1,)
        assert grad[0] == pytest.approx(12.0, rel=1e-6)

    def test_jacobian_shape_and_values(self):
        """Jacobian has shape (out, in)."""
        matrix = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        jac = finite_diff_jacobian(lambda v: matrix @ v, np.zeros(2), 1e-4)
        assert jac.shape == (3, 2)
        np.testing.assert_allclose(jac, matrix, atol=1e-9)

    def test_relative_error(self):
        """Relative error is normalized by the larger norm."""
        assert relative_error(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 0.0
        assert relative_error(np.array([2.0]), np.array([1.0])) == pytest.approx(0.5)

    def test_relative_error_floor(self):
        """Two tiny vectors are compared against the floor."""
        assert relative_error(np.array([1e-12]), np.array([0.0])) == pytest.approx(1e-4)

"""Tests for the Adam step and seeded random streams."""

import numpy as np
import pytest

from pcm_amortized.numerics import AdamState, ContractViolation, RngSeed, adam_step


class TestAdamStep:
    """Test the pure Adam update."""

    def test_first_step_moves_by_lr(self):
        """Bias correction makes the first step magnitude close to lr."""
        params = np.array([1.0, -1.0])
        grads = np.array([0.5, -2.0])
        new_params, state = adam_step(params, grads, AdamState.zeros(2), 0.1)
        np.testing.assert_allclose(new_params, params - 0.1 * np.sign(grads), atol=1e-6)
        assert state.step_count == 1

    def test_inputs_not_mutated(self):
        """Params and state are left untouched."""
        params = np.array([1.0])
        state = AdamState.zeros(1)
        adam_step(params, np.array([1.0]), state, 0.01)
        assert params[0] == 1.0
        assert state.step_count == 0
        assert state.first_moment[0] == 0.0

    def test_minimizes_quadratic(self):
        """Repeated steps drive a quadratic towards its minimum."""
        params = np.array([3.0, -4.0])
        state = AdamState.zeros(2)
        for _ in range(2000):
            params, state = adam_step(params, 2.0 * params, state, 0.05)
        assert np.linalg.norm(params) < 1e-2

    def test_shape_mismatch(self):
        """Mismatched shapes raise a contract violation."""
        with pytest.raises(ContractViolation):
            adam_step(np.zeros(2), np.zeros(3), AdamState.zeros(2), 0.1)

    def test_nonpositive_lr(self):
        """Learning rate must be positive."""
        with pytest.raises(ValueError):
            adam_step(np.zeros(1), np.zeros(1), AdamState.zeros(1), 0.0)

    def test_state_validation(self):
        """Moment shapes must agree."""
        with pytest.raises(ContractViolation):
            AdamState(np.zeros(2), np.zeros(3))


class TestRngSeed:
    """Test named independent streams."""

    def test_same_name_same_draws(self):
        """Identical seed and name reproduce draws bitwise."""
        a = RngSeed(7).stream("case1/x").normal(size=5)
        b = RngSeed(7).stream("case1/x").normal(size=5)
        np.testing.assert_array_equal(a, b)

    def test_different_names_differ(self):
        """Different stream names give different draws."""
        a = RngSeed(7).stream("case1/x").normal(size=5)
        b = RngSeed(7).stream("case1/u").normal(size=5)
        assert not np.array_equal(a, b)

    def test_child_is_independent(self):
        """A child seed's stream differs from the parent's stream of the same name."""
        root = RngSeed(3)
        a = root.stream("init").normal(size=4)
        b = root.child("fnn").stream("init").normal(size=4)
        assert not np.array_equal(a, b)

    def test_seed_range(self):
        """Negative seeds are rejected."""
        with pytest.raises(ValueError):
            RngSeed(-1)

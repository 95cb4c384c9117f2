"""Tests for implicit minimizer VJPs."""

import numpy as np
import pytest

from pcm_amortized.approximators import flatten_parameters
from pcm_amortized.numerics import ContractViolation
from pcm_amortized.sensitivity import GradientMode, minimizer_vjp, minimizer_vjp_batch
from pcm_amortized.solvers import Box, SolveResult, SolverOpts, solve_pcm

# log(exp(u + c1) + exp(-u + c2)) has u* = (c2 - c1) / 2.
SLOPES = np.array([[[1.0], [-1.0]]])
OFFSETS = np.array([[0.0, 1.0]])
MINIMIZER = np.array([[0.5]])
WIDE_BOX = Box([-5.0], [5.0])


class TestMinimizerVjpBatch:
    """Test coefficient adjoints against closed-form derivatives."""

    def test_offsets(self):
        """du*/dc = (-1/2, 1/2)."""
        adjoint = minimizer_vjp_batch(SLOPES, OFFSETS, 1.0, MINIMIZER, np.ones((1, 1)), WIDE_BOX)
        np.testing.assert_allclose(adjoint.offset_grads, [[-0.5, 0.5]], atol=1e-12)

    def test_slopes(self):
        """du*/da = (-3/4, -1/4) at a = (1, -1), c = (0, 1)."""
        adjoint = minimizer_vjp_batch(SLOPES, OFFSETS, 1.0, MINIMIZER, np.ones((1, 1)), WIDE_BOX)
        np.testing.assert_allclose(adjoint.slope_grads[0, :, 0], [-0.75, -0.25], atol=1e-12)

    def test_upstream_scales(self):
        """The VJP is linear in the upstream vector."""
        one = minimizer_vjp_batch(SLOPES, OFFSETS, 1.0, MINIMIZER, np.ones((1, 1)), WIDE_BOX)
        three = minimizer_vjp_batch(SLOPES, OFFSETS, 1.0, MINIMIZER, np.full((1, 1), 3.0), WIDE_BOX)
        np.testing.assert_allclose(three.offset_grads, 3.0 * one.offset_grads)

    def test_clamped_is_zero(self):
        """A minimizer held at a bound has zero sensitivity."""
        box = Box([0.75], [2.0])
        adjoint = minimizer_vjp_batch(SLOPES, OFFSETS, 1.0, np.array([[0.75]]), np.ones((1, 1)), box)
        assert adjoint.sensitivities[0].active_mask[0]
        np.testing.assert_array_equal(adjoint.slope_grads, 0.0)
        np.testing.assert_array_equal(adjoint.offset_grads, 0.0)

    def test_detached_is_zero(self):
        """Detached mode returns zero adjoints."""
        adjoint = minimizer_vjp_batch(
            SLOPES, OFFSETS, 1.0, MINIMIZER, np.ones((1, 1)), WIDE_BOX, GradientMode.DETACHED
        )
        np.testing.assert_array_equal(adjoint.offset_grads, 0.0)

    def test_unconverged_rows_zero(self):
        """Rows flagged unconverged get zero sensitivity."""
        adjoint = minimizer_vjp_batch(
            SLOPES, OFFSETS, 1.0, MINIMIZER, np.ones((1, 1)), WIDE_BOX, converged=np.array([False])
        )
        np.testing.assert_array_equal(adjoint.offset_grads, 0.0)

    def test_shape_mismatch(self):
        """Upstream must match the minimizers."""
        with pytest.raises(ContractViolation):
            minimizer_vjp_batch(SLOPES, OFFSETS, 1.0, MINIMIZER, np.ones((1, 2)), WIDE_BOX)


class TestMinimizerVjp:
    """Test the network-level VJP."""

    def test_requires_converged_solve(self, plse_plus_net, unit_box):
        """Unconverged solves are refused."""
        solve = SolveResult(np.zeros(1), 0.0, 500, False)
        with pytest.raises(ContractViolation):
            minimizer_vjp(plse_plus_net, np.zeros(1), solve, np.ones(1), unit_box)

    def test_detached_returns_zero_network(self, plse_plus_net, unit_box):
        """Detached mode gives a zero gradient shaped like the network."""
        solve = solve_pcm(plse_plus_net, np.zeros(1), unit_box, SolverOpts())
        grad = minimizer_vjp(plse_plus_net, np.zeros(1), solve, np.ones(1), unit_box, "detached")
        vector = flatten_parameters(grad)
        assert vector.shape == flatten_parameters(plse_plus_net).shape
        np.testing.assert_array_equal(vector, 0.0)

    def test_wrong_upstream_dim(self, plse_plus_net, unit_box):
        """Upstream must have the dimension of u."""
        solve = solve_pcm(plse_plus_net, np.zeros(1), unit_box, SolverOpts())
        with pytest.raises(ContractViolation):
            minimizer_vjp(plse_plus_net, np.zeros(1), solve, np.ones(2), unit_box)

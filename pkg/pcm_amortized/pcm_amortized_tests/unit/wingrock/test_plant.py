"""Tests for the wing-rock dynamics, NMPC objective and datasets."""

import numpy as np
import pytest

from pcm_amortized.numerics import ContractViolation, RngSeed
from pcm_amortized.wingrock import (
    NmpcProblem,
    PropagationError,
    WingRockConsts,
    dynamics_deriv,
    generate_nmpc_dataset,
    linearize_at_origin,
    nmpc_dataset_frame,
    nmpc_dataset_schema,
    nmpc_objective,
    nmpc_objective_xu,
    rollout,
    step_zoh,
    zoh_discretize,
)

LINEAR = WingRockConsts(mu2=0.0, b1=0.0, b2=0.0)


@pytest.fixture
def problem():
    return NmpcProblem()


class TestWingRockConsts:
    """Test plant coefficients."""

    def test_defaults(self):
        """Default coefficients."""
        consts = WingRockConsts()
        assert consts.as_dict() == {"omega": 0.2, "mu1": 0.05, "mu2": -0.2, "b1": -0.02, "b2": 0.3}

    def test_non_finite(self):
        """Coefficients must be finite."""
        with pytest.raises(ValueError):
            WingRockConsts(omega=float("nan"))


class TestNmpcProblem:
    """Test NMPC problem validation."""

    def test_boxes(self, problem):
        """The input box is repeated over the horizon; x stacks x0 and xd."""
        assert problem.u_box.dim == 5
        assert problem.x_box.dim == 4
        assert problem.x_box.upper[0] == pytest.approx(np.deg2rad(25.0))

    def test_r_must_be_positive(self):
        """R must be positive definite."""
        with pytest.raises(ValueError):
            NmpcProblem(R=np.array([[0.0]]))

    def test_q_must_be_symmetric(self):
        """Q must be symmetric."""
        with pytest.raises(ValueError):
            NmpcProblem(Q=np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_horizon(self):
        """Horizon must be positive."""
        with pytest.raises(ValueError):
            NmpcProblem(horizon=0)


class TestDynamics:
    """Test the plant model."""

    def test_origin_is_equilibrium(self):
        """Zero state and input stay at rest."""
        np.testing.assert_array_equal(dynamics_deriv(np.zeros(2), 0.0, WingRockConsts()), [0.0, 0.0])

    def test_equilibrium_input(self):
        """The equilibrium input cancels the restoring terms."""
        consts = WingRockConsts()
        phi = np.deg2rad(15.0)
        state = np.array([phi, 0.0])
        delta = consts.equilibrium_input(phi)
        np.testing.assert_allclose(dynamics_deriv(state, delta, consts), [0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(step_zoh(state, delta, 0.1, consts), state, atol=1e-14)

    def test_rk4_matches_zoh_for_linear_plant(self):
        """Without nonlinear terms RK4 reproduces the exact discretization."""
        Ad, Bd = zoh_discretize(*linearize_at_origin(LINEAR), 0.1)
        state, delta = np.array([0.3, -0.2]), 0.7
        expected = Ad @ state + Bd[:, 0] * delta
        np.testing.assert_allclose(step_zoh(state, delta, 0.1, LINEAR), expected, atol=1e-10)

    def test_batched(self):
        """States broadcast over a batch axis."""
        states = np.array([[0.1, 0.0], [0.0, 0.2]])
        out = step_zoh(states, np.array([0.0, 0.5]), 0.1, WingRockConsts())
        assert out.shape == (2, 2)
        np.testing.assert_allclose(out[1], step_zoh(states[1], 0.5, 0.1, WingRockConsts()))

    def test_non_finite_state(self):
        """Blown-up states raise PropagationError with the step."""
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(PropagationError) as exc_info:
                step_zoh(np.array([1e200, 1e200]), 0.0, 0.1, WingRockConsts(), step=3)
        assert exc_info.value.step == 3

    def test_invalid_dt(self):
        """dt must be positive."""
        with pytest.raises(ValueError):
            step_zoh(np.zeros(2), 0.0, 0.0, WingRockConsts())


class TestNmpcObjective:
    """Test the finite-horizon objective."""

    def test_zero_at_rest(self, problem):
        """Resting at the setpoint with no input costs nothing."""
        assert nmpc_objective(np.zeros(2), np.zeros(2), np.zeros(5), problem, WingRockConsts()) == 0.0

    def test_nonnegative(self, problem):
        """The objective is a sum of PSD quadratic forms."""
        rng = np.random.default_rng(0)
        values = nmpc_objective(
            rng.uniform(-0.4, 0.4, (20, 2)), rng.uniform(-0.4, 0.4, (20, 2)),
            rng.uniform(-1.75, 1.75, (20, 5)), problem, WingRockConsts(),
        )
        assert values.shape == (20,)
        assert np.all(values >= 0.0)

    def test_input_cost(self, problem):
        """Input effort is charged with R."""
        u = np.zeros(5)
        u[-1] = 1.0
        # The last input only affects the terminal state through one step.
        consts = WingRockConsts()
        states = rollout(np.zeros((1, 2)), u[None, :], problem, consts)[0]
        expected = 0.1 + states[-1] @ problem.QN @ states[-1]
        assert nmpc_objective(np.zeros(2), np.zeros(2), u, problem, consts) == pytest.approx(expected)

    def test_xu_parameterization(self, problem):
        """``x = (x0, xd)`` gives the same objective."""
        x0, xd, u = np.array([0.1, 0.0]), np.array([-0.2, 0.0]), np.full(5, 0.3)
        consts = WingRockConsts()
        direct = nmpc_objective(x0, xd, u, problem, consts)
        stacked = nmpc_objective_xu(np.concatenate([x0, xd])[None, :], u[None, :], problem, consts)
        assert stacked[0] == pytest.approx(direct)

    def test_rollout_shape_checked(self, problem):
        """Input sequences must match the horizon."""
        with pytest.raises(ContractViolation):
            rollout(np.zeros((1, 2)), np.zeros((1, 3)), problem, WingRockConsts())


class TestNmpcDataset:
    """Test NMPC dataset generation."""

    def test_shapes_and_bounds(self, problem):
        """Samples stay in their boxes and the file frame validates."""
        dataset = generate_nmpc_dataset(50, problem, WingRockConsts(), RngSeed(0))
        assert dataset.X.shape == (50, 4)
        assert dataset.U.shape == (50, 5)
        assert problem.u_box.contains(dataset.U)
        assert problem.x_box.contains(dataset.X)
        frame = nmpc_dataset_schema(5).validate(nmpc_dataset_frame(dataset))
        assert list(frame.columns)[-2:] == ["J", "split_tag"]

    def test_deterministic(self, problem):
        """The same seed yields the same samples."""
        a = generate_nmpc_dataset(10, problem, WingRockConsts(), RngSeed(4))
        b = generate_nmpc_dataset(10, problem, WingRockConsts(), RngSeed(4))
        np.testing.assert_array_equal(a.F, b.F)
        np.testing.assert_array_equal(a.test_idx, b.test_idx)

    def test_requires_samples(self, problem):
        """At least one sample is needed."""
        with pytest.raises(ValueError):
            generate_nmpc_dataset(0, problem, WingRockConsts(), RngSeed(0))

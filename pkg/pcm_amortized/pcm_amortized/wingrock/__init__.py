"""Wing-rock plant, NMPC objective, datasets and closed-loop simulation."""

from .dataset import generate_nmpc_dataset, nmpc_dataset_frame
from .dynamics import dynamics_deriv, linearize_at_origin, step_zoh, zoh_discretize
from .exceptions import InputConstraintViolation, PropagationError, WingRockError
from .linear_mpc import (
    LinearPrediction,
    QuadraticObjective,
    linear_mpc_baseline,
    linear_mpc_qp,
    stacked_prediction,
)
from .models import NmpcProblem, Trajectory, WingRockConsts
from .objective import nmpc_objective, nmpc_objective_xu, rollout
from .schemas import case2_metrics_schema, nmpc_dataset_schema, trajectory_schema
from .simulation import Controller, closed_loop_sim, surrogate_controller

__all__ = [
    "generate_nmpc_dataset",
    "nmpc_dataset_frame",
    "dynamics_deriv",
    "linearize_at_origin",
    "step_zoh",
    "zoh_discretize",
    "InputConstraintViolation",
    "PropagationError",
    "WingRockError",
    "LinearPrediction",
    "QuadraticObjective",
    "linear_mpc_baseline",
    "linear_mpc_qp",
    "stacked_prediction",
    "NmpcProblem",
    "Trajectory",
    "WingRockConsts",
    "nmpc_objective",
    "nmpc_objective_xu",
    "rollout",
    "case2_metrics_schema",
    "nmpc_dataset_schema",
    "trajectory_schema",
    "Controller",
    "closed_loop_sim",
    "surrogate_controller",
]

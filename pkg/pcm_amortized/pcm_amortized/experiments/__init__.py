"""Experiment runners behind the CLI subcommands and the Dagster assets."""

from .case1 import (
    case1_dataset_frame,
    case1_min_oracle,
    case1_objective,
    evaluate_case1_model,
    generate_case1_dataset,
    run_case1,
    train_case1_model,
)
from .case2 import (
    evaluate_case2_model,
    evaluate_controller,
    generate_case2_dataset,
    run_case2,
    simulate_controller,
    train_case2_model,
)
from .gradcheck import gradcheck_suites, run_gradcheck
from .manifest import package_versions, write_manifest
from .models import ExperimentOutcome, SuiteResult, report_frame
from .props import props_suites, run_props

__all__ = [
    "case1_dataset_frame",
    "case1_min_oracle",
    "case1_objective",
    "evaluate_case1_model",
    "generate_case1_dataset",
    "run_case1",
    "train_case1_model",
    "evaluate_case2_model",
    "evaluate_controller",
    "generate_case2_dataset",
    "run_case2",
    "simulate_controller",
    "train_case2_model",
    "gradcheck_suites",
    "run_gradcheck",
    "package_versions",
    "write_manifest",
    "ExperimentOutcome",
    "SuiteResult",
    "report_frame",
    "props_suites",
    "run_props",
]

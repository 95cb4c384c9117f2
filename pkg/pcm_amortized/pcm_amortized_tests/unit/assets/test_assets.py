"""Tests for the Dagster assets, jobs and resource."""

from pathlib import Path

import pandas as pd
import pytest
from dagster import materialize_to_memory

from pcm_amortized.assets import (
    case1_dataset_asset,
    case1_metrics_asset,
    case1_models_asset,
    case2_dataset_asset,
    case2_metrics_asset,
    case2_models_asset,
)
from pcm_amortized.definitions import defs
from pcm_amortized.resources import ExperimentResource

TINY_INI = """
[run]
seed = 2

[train]
epochs = 1
batch_size = 8

[network]
num_terms = 3
hidden = 4
sub_hidden = 3

[case1]
samples = 20
oracle_points = 1001
surface_points = 3

[case2]
samples = 20
tf = 0.2

[nmpc]
horizon = 2
"""


@pytest.fixture
def tiny_ini(tmp_path):
    path = tmp_path / "tiny.ini"
    path.write_text(TINY_INI, encoding="utf-8")
    return path


class TestExperimentResource:
    """Test the run-config resource."""

    def test_unset_fields_keep_file_values(self, tiny_ini):
        """Only set fields override the config file."""
        config = ExperimentResource(config_path=str(tiny_ini)).run_config()
        assert config.run.seed == 2
        assert config.case1.samples == 20

    def test_overrides(self, tiny_ini, tmp_path):
        """Set fields win over the file."""
        resource = ExperimentResource(
            config_path=str(tiny_ini), output_dir=str(tmp_path / "o"), seed=8, models="eplse, linear-mpc"
        )
        config = resource.run_config()
        assert config.run.seed == 8
        assert config.run.output_dir == str(tmp_path / "o")
        assert config.model_kinds == ["eplse", "linear-mpc"]


class TestDefinitions:
    """Test the code location."""

    def test_jobs_registered(self):
        """Both case jobs load."""
        assert defs.get_job_def("case1_job").name == "case1_job"
        assert defs.get_job_def("case2_job").name == "case2_job"


class TestMaterialize:
    """Materialize the asset graphs on tiny configurations."""

    def test_case1_assets(self, tiny_ini, tmp_path):
        """Dataset, models and metrics of Case 1."""
        out_dir = tmp_path / "case1"
        resource = ExperimentResource(config_path=str(tiny_ini), output_dir=str(out_dir), models="plse,eplse")
        result = materialize_to_memory(
            [case1_dataset_asset, case1_models_asset, case1_metrics_asset],
            resources={"experiment": resource},
        )
        assert result.success
        metrics = result.output_for_node("case1_metrics")
        assert isinstance(metrics, pd.DataFrame)
        assert list(metrics["model_kind"]) == ["plse", "eplse"]
        assert (out_dir / "case1-metrics.csv").exists()
        assert (out_dir / "manifest.txt").exists()

    def test_case2_assets(self, tiny_ini, tmp_path):
        """Dataset, models, baseline and trajectories of Case 2."""
        out_dir = tmp_path / "case2"
        resource = ExperimentResource(config_path=str(tiny_ini), output_dir=str(out_dir), models="eplse,linear-mpc")
        result = materialize_to_memory(
            [case2_dataset_asset, case2_models_asset, case2_metrics_asset],
            resources={"experiment": resource},
        )
        assert result.success
        metrics = result.output_for_node("case2_metrics")
        assert list(metrics["model_kind"]) == ["eplse", "linear-mpc"]
        assert Path(out_dir, "case2-trajectory-linear-mpc.csv").exists()

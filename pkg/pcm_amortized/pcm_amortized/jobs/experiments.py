from dagster import define_asset_job

from ..assets import (
    case1_dataset_asset,
    case1_metrics_asset,
    case1_models_asset,
    case2_dataset_asset,
    case2_metrics_asset,
    case2_models_asset,
)

case1_job = define_asset_job(
    name="case1_job",
    selection=[case1_dataset_asset, case1_models_asset, case1_metrics_asset],
    description="Scalar benchmark: dataset, training of every requested approximator and test metrics"
)

case2_job = define_asset_job(
    name="case2_job",
    selection=[case2_dataset_asset, case2_models_asset, case2_metrics_asset],
    description="Wing-rock NMPC: dataset, training, objective metrics and closed-loop trajectories"
)

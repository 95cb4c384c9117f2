from .case1 import case1_dataset_asset, case1_metrics_asset, case1_models_asset
from .case2 import case2_dataset_asset, case2_metrics_asset, case2_models_asset

__all__ = [
    "case1_dataset_asset",
    "case1_models_asset",
    "case1_metrics_asset",
    "case2_dataset_asset",
    "case2_models_asset",
    "case2_metrics_asset",
]

import os

from dagster import Definitions, load_assets_from_modules

from . import assets
from .jobs import case1_job, case2_job
from .resources import ExperimentResource

all_assets = load_assets_from_modules([assets])

defs = Definitions(
    assets=all_assets,
    jobs=[
        case1_job,
        case2_job,
    ],
    resources={
        # PCM_CONFIG is read after config.py has loaded the repository .env
        "experiment": ExperimentResource(config_path=os.environ.get("PCM_CONFIG")),
    },
)

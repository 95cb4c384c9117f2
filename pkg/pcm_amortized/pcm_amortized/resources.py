from typing import Optional

from dagster import ConfigurableResource
from pydantic import Field

from .config import RunConfig, load_run_config


class ExperimentResource(ConfigurableResource):
    """Run configuration shared by the experiment assets.

    Unset fields leave the config file (or the ``PCM_*`` environment
    defaults) in charge, the same way the CLI flags do.
    """
    config_path: Optional[str] = Field(
        default=None,
        description="INI run configuration; defaults apply when unset."
    )
    output_dir: Optional[str] = Field(
        default=None,
        description="Directory receiving CSVs, checkpoints and the manifest."
    )
    seed: Optional[int] = Field(
        default=None,
        description="Root seed of every random stream."
    )
    models: Optional[str] = Field(
        default=None,
        description="Comma-separated model kinds, e.g. fnn,plse,dlse,eplse,linear-mpc."
    )

    def run_config(self) -> RunConfig:
        models = None
        if self.models is not None:
            models = [m.strip() for m in self.models.split(",") if m.strip()]
        return load_run_config(self.config_path).with_overrides(
            output_dir=self.output_dir, models=models, seed=self.seed
        )

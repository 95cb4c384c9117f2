"""Pandera schemas for the CSV artifacts of training and evaluation."""

import logging
from pathlib import Path
from typing import Union

import pandas as pd
import pandera as pa

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

# ============================== loss history ============================== #
# ~~ one row per epoch, written next to every trained model

loss_history_schema = pa.DataFrameSchema({
    "epoch": pa.Column(int, pa.Check.ge(1), nullable=False),
    "train_loss": pa.Column(float, pa.Check.ge(0), nullable=False),
    "valid_loss": pa.Column(float, pa.Check.ge(0), nullable=False),
}, strict=True, ordered=True)

# ============================ minimizer metrics ============================ #

metrics_schema = pa.DataFrameSchema({
    "model_kind": pa.Column(str, nullable=False),
    "mean_minimizer_err": pa.Column(float, pa.Check.ge(0), nullable=True),
    "mean_minvalue_err": pa.Column(float, pa.Check.ge(0), nullable=True),
    "mean_solve_seconds": pa.Column(float, pa.Check.ge(0), nullable=True),
    "excluded_samples": pa.Column(int, pa.Check.ge(0), nullable=False),
}, strict=True, ordered=True)

# ============================= surface samples ============================= #

surface_schema = pa.DataFrameSchema({
    "x": pa.Column(float, nullable=False),
    "u": pa.Column(float, nullable=False),
    "f_hat": pa.Column(float, nullable=False),
}, strict=True, ordered=True)

# =============================== suite report ============================== #
# ~~ gradcheck and props subcommands

report_schema = pa.DataFrameSchema({
    "suite": pa.Column(str, nullable=False),
    "cases": pa.Column(int, pa.Check.ge(0), nullable=False),
    "failures": pa.Column(int, pa.Check.ge(0), nullable=False),
    "max_error": pa.Column(float, nullable=True),
    "tolerance": pa.Column(float, pa.Check.ge(0), nullable=False),
    "passed": pa.Column(bool, nullable=False),
}, strict=True, ordered=True)


def write_validated_csv(frame: pd.DataFrame, schema: pa.DataFrameSchema, path: Union[str, Path]) -> Path:
    """Validate ``frame`` against ``schema`` and write it with 17 significant digits.

    Raises:
        pandera.errors.SchemaErrors: If validation fails.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    validated = schema.validate(frame, lazy=True)
    validated.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(validated)} rows to {path}")
    return path

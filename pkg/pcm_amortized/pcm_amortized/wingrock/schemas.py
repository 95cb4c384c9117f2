"""Pandera schemas for the Case-2 CSV artifacts."""

import pandera as pa

# ================================ trajectory =============================== #

trajectory_schema = pa.DataFrameSchema({
    "t_s": pa.Column(float, pa.Check.ge(0), nullable=False),
    "phi_deg": pa.Column(float, nullable=False),
    "phidot_degps": pa.Column(float, nullable=False),
    "delta_g": pa.Column(float, nullable=True),
    "solve_s": pa.Column(float, pa.Check.ge(0), nullable=True),
}, strict=True, ordered=True)

# ============================= objective metrics ============================ #

case2_metrics_schema = pa.DataFrameSchema({
    "model_kind": pa.Column(str, nullable=False),
    "mean_objective": pa.Column(float, pa.Check.ge(0), nullable=True),
    "mean_solve_seconds": pa.Column(float, pa.Check.ge(0), nullable=True),
    "terminal_phi_err_deg": pa.Column(float, pa.Check.ge(0), nullable=True),
    "terminal_phidot_err_degps": pa.Column(float, pa.Check.ge(0), nullable=True),
    "excluded_samples": pa.Column(int, pa.Check.ge(0), nullable=False),
}, strict=True, ordered=True)


def nmpc_dataset_schema(horizon: int) -> pa.DataFrameSchema:
    """Schema of the NMPC dataset file for a horizon of ``horizon`` steps."""
    columns = {
        "x0_phi": pa.Column(float, nullable=False),
        "x0_phidot": pa.Column(float, nullable=False),
        "xd_phi": pa.Column(float, nullable=False),
        "xd_phidot": pa.Column(float, nullable=False),
    }
    for k in range(horizon):
        columns[f"u{k + 1}"] = pa.Column(float, nullable=False)
    columns["J"] = pa.Column(float, pa.Check.ge(0), nullable=False)
    columns["split_tag"] = pa.Column(str, pa.Check.isin(["train", "valid", "test"]), nullable=False)
    return pa.DataFrameSchema(columns, strict=True, ordered=True)

"""Pandera schema of the Case-1 dataset file."""

import pandera as pa

case1_dataset_schema = pa.DataFrameSchema({
    "x": pa.Column(float, nullable=False),
    "u": pa.Column(float, nullable=False),
    "f": pa.Column(float, nullable=False),
    "split_tag": pa.Column(str, pa.Check.isin(["train", "valid", "test"]), nullable=False),
}, strict=True, ordered=True)

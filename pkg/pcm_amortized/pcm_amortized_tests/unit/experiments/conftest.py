import pytest

from pcm_amortized.config import parse_run_config

REDUCED_INI = """
[run]
models = fnn, eplse
seed = 3

[train]
epochs = 2
batch_size = 8
log_every = 1

[network]
num_terms = 4
hidden = 6
sub_hidden = 4

[solver]
multistart_count = 2

[case1]
samples = 40
oracle_points = 2001
surface_points = 5
bound_x_points = 3
bound_u_points = 401

[case2]
samples = 20
tf = 0.3

[nmpc]
horizon = 2

[gradcheck]
configurations = 3
vjp_instances = 2
loss_checks = 1

[props]
minimizer_models = 2
minimizer_points = 2
minimizer_grid = 201
envelope_nets = 3
envelope_points = 50
gcm_grid = 101
gcm_minorants = 5
bound_x_points = 3
bound_u_points = 201
convexity_nets = 2
"""


@pytest.fixture
def reduced_config(tmp_path):
    """Small sizes everywhere; artifacts go to a temporary directory."""
    return parse_run_config(REDUCED_INI).with_overrides(output_dir=str(tmp_path / "run"))

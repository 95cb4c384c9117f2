"""Run configuration: environment defaults and INI config files.

Environment variables (optionally from a ``.env`` file at the repository
root) provide defaults for the output directory, seed and log level. A run
config file uses sections ``[run]``, ``[train]``, ``[train.<kind>]``,
``[solver]``, ``[network]``, ``[case1]``, ``[case2]``, ``[wingrock]``,
``[nmpc]``, ``[gradcheck]`` and ``[props]``; every key is optional and
unknown sections or keys are rejected.
"""

import configparser
import io
import logging
import os
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .approximators import Activation, ModelKind, NetworkShape
from .numerics import RngSeed
from .pcm import TrainConfig
from .sensitivity import GradientMode
from .solvers import Box, SolverOpts
from .wingrock import NmpcProblem, WingRockConsts

logger = logging.getLogger(__name__)

# Load environment variables from .env file (two levels up, the repository root)
dotenv_path = os.path.join(os.path.dirname(__file__), "..", "..", ".env")
load_dotenv(dotenv_path=dotenv_path)

PCM_OUTPUT_DIR = os.environ.get("PCM_OUTPUT_DIR", "./runs")
PCM_SEED = int(os.environ.get("PCM_SEED", "0"))
PCM_LOG_LEVEL = os.environ.get("PCM_LOG_LEVEL", "INFO").upper()

LINEAR_MPC = "linear-mpc"


class Experiment(str, Enum):
    """CLI subcommands."""

    CASE1 = "case1"
    CASE2 = "case2"
    GRADCHECK = "gradcheck"
    PROPS = "props"


def _split_list(v):
    if isinstance(v, str):
        return [item.strip() for item in v.split(",") if item.strip()]
    return v


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RunSection(_Section):
    """``[run]``: model selection, seed and output directory."""

    models: list[str] = Field(default_factory=lambda: ["fnn", "plse", "dlse", "eplse"])
    seed: int = Field(default=PCM_SEED, ge=0)
    output_dir: str = Field(default=PCM_OUTPUT_DIR)

    @field_validator("models", mode="before")
    @classmethod
    def split_models(cls, v):
        return _split_list(v)

    @field_validator("models")
    @classmethod
    def validate_models(cls, v: list[str]) -> list[str]:
        """Model kinds must be known; at least one is required."""
        allowed = {kind.value for kind in ModelKind} | {LINEAR_MPC}
        unknown = [m for m in v if m not in allowed]
        if unknown:
            raise ValueError(f"unknown model kinds {unknown}; allowed: {sorted(allowed)}")
        if not v:
            raise ValueError("at least one model kind is required")
        return v


class TrainSection(_Section):
    """``[train]`` and ``[train.<kind>]`` (the latter may set any subset)."""

    lr: Optional[float] = Field(default=None, gt=0)
    epochs: Optional[int] = Field(default=None, ge=1)
    batch_size: Optional[int] = Field(default=None, ge=1)
    split_train: Optional[float] = Field(default=None, gt=0, lt=1)
    split_valid: Optional[float] = Field(default=None, gt=0, lt=1)
    split_test: Optional[float] = Field(default=None, gt=0, lt=1)
    gradient_mode: Optional[GradientMode] = None
    log_every: Optional[int] = Field(default=None, ge=1)

    def merged(self, other: "TrainSection") -> "TrainSection":
        """``other``'s explicit values on top of this section."""
        return self.model_copy(update=other.model_dump(exclude_none=True))


TRAIN_DEFAULTS = TrainSection(
    lr=1e-3, epochs=200, batch_size=16, split_train=0.7, split_valid=0.2, split_test=0.1,
    gradient_mode=GradientMode.IMPLICIT, log_every=20,
)


class SolverSection(_Section):
    """``[solver]``: options of every box-constrained solve."""

    grad_tol: float = Field(default=1e-8, gt=0)
    max_iters: int = Field(default=500, ge=1)
    use_newton: bool = True
    armijo_c: float = Field(default=1e-4, gt=0, lt=1)
    armijo_shrink: float = Field(default=0.5, gt=0, lt=1)
    multistart_count: int = Field(default=8, ge=1)
    max_backtracks: int = Field(default=60, ge=1)


class NetworkSection(_Section):
    """``[network]``: approximator architecture."""

    num_terms: int = Field(default=20, ge=1)
    temperature: float = Field(default=1.0, gt=0)
    hidden: list[int] = Field(default_factory=lambda: [64, 64])
    sub_hidden: list[int] = Field(default_factory=lambda: [16, 16])
    activation: Activation = Activation.TANH

    @field_validator("hidden", "sub_hidden", mode="before")
    @classmethod
    def split_widths(cls, v):
        return _split_list(v)

    @field_validator("hidden", "sub_hidden")
    @classmethod
    def validate_widths(cls, v: list[int]) -> list[int]:
        """Hidden widths must be positive."""
        if not v or any(w < 1 for w in v):
            raise ValueError(f"widths must be nonempty and positive, got {v}")
        return v


class Case1Section(_Section):
    """``[case1]``: the scalar benchmark ``f(x, u) = x^2 + u^2 + sin(2 pi u)``."""

    samples: int = Field(default=2000, ge=10)
    x_lower: float = -1.0
    x_upper: float = 1.0
    u_lower: float = -1.0
    u_upper: float = 1.0
    oracle_points: int = Field(default=100_001, ge=2)
    surface_points: int = Field(default=101, ge=2)
    bound_x_points: int = Field(default=101, ge=1)
    bound_u_points: int = Field(default=1001, ge=2)
    bound_tolerance: float = Field(default=1e-3, ge=0)
    dlse_lr: float = Field(default=1e-1, gt=0)


class Case2Section(_Section):
    """``[case2]``: wing-rock NMPC dataset size and closed-loop scenario."""

    samples: int = Field(default=10_000, ge=10)
    tf: float = Field(default=15.0, gt=0)
    x0_phi_deg: float = 10.0
    x0_phidot_degps: float = 45.0
    xd_phi_deg: float = -25.0
    xd_phidot_degps: float = 0.0


class WingRockSection(_Section):
    """``[wingrock]``: plant coefficients."""

    omega: float = 0.2
    mu1: float = 0.05
    mu2: float = -0.2
    b1: float = -0.02
    b2: float = 0.3


class NmpcSection(_Section):
    """``[nmpc]``: horizon, sampling time, weights and boxes (degrees at this boundary)."""

    horizon: int = Field(default=5, ge=1)
    dt: float = Field(default=0.1, gt=0)
    q_phi: float = Field(default=1.0, ge=0)
    q_phidot: float = Field(default=0.1, ge=0)
    qn_phi: float = Field(default=1.0, ge=0)
    qn_phidot: float = Field(default=0.1, ge=0)
    r: float = Field(default=0.1, gt=0)
    input_lower: float = -1.75
    input_upper: float = 1.75
    x0_phi_deg: float = Field(default=25.0, ge=0)
    x0_phidot_degps: float = Field(default=50.0, ge=0)
    xd_phi_deg: float = Field(default=25.0, ge=0)


class GradcheckSection(_Section):
    """``[gradcheck]``: finite-difference suite sizes and tolerances."""

    configurations: int = Field(default=100, ge=1)
    step: float = Field(default=1e-5, gt=0)
    tolerance: float = Field(default=1e-5, gt=0)
    vjp_instances: int = Field(default=50, ge=1)
    vjp_step: float = Field(default=1e-4, gt=0)
    vjp_tolerance: float = Field(default=1e-3, gt=0)
    loss_checks: int = Field(default=10, ge=1)
    loss_tolerance: float = Field(default=1e-3, gt=0)


class PropsSection(_Section):
    """``[props]``: property suite sizes."""

    minimizer_models: int = Field(default=200, ge=1)
    minimizer_points: int = Field(default=10, ge=1)
    minimizer_grid: int = Field(default=1001, ge=2)
    minimizer_tolerance: float = Field(default=1e-6, ge=0)
    envelope_nets: int = Field(default=50, ge=1)
    envelope_points: int = Field(default=1000, ge=1)
    gcm_grid: int = Field(default=1001, ge=3)
    gcm_minorants: int = Field(default=100, ge=1)
    bound_x_points: int = Field(default=21, ge=1)
    bound_u_points: int = Field(default=1001, ge=2)
    bound_tolerance: float = Field(default=1e-3, ge=0)
    convexity_nets: int = Field(default=20, ge=1)


SECTIONS = {
    "run": RunSection,
    "train": TrainSection,
    "solver": SolverSection,
    "network": NetworkSection,
    "case1": Case1Section,
    "case2": Case2Section,
    "wingrock": WingRockSection,
    "nmpc": NmpcSection,
    "gradcheck": GradcheckSection,
    "props": PropsSection,
}


class RunConfig(_Section):
    """Fully resolved configuration of one CLI run."""

    run: RunSection = Field(default_factory=RunSection)
    train: TrainSection = Field(default_factory=TrainSection)
    train_overrides: dict[ModelKind, TrainSection] = Field(default_factory=dict)
    solver: SolverSection = Field(default_factory=SolverSection)
    network: NetworkSection = Field(default_factory=NetworkSection)
    case1: Case1Section = Field(default_factory=Case1Section)
    case2: Case2Section = Field(default_factory=Case2Section)
    wingrock: WingRockSection = Field(default_factory=WingRockSection)
    nmpc: NmpcSection = Field(default_factory=NmpcSection)
    gradcheck: GradcheckSection = Field(default_factory=GradcheckSection)
    props: PropsSection = Field(default_factory=PropsSection)

    # ---------------------------------------------------------- conversions

    @property
    def seed(self) -> RngSeed:
        return RngSeed(self.run.seed)

    @property
    def model_kinds(self) -> list[str]:
        return list(self.run.models)

    def with_overrides(
        self,
        output_dir: Optional[str] = None,
        models: Optional[list[str]] = None,
        seed: Optional[int] = None,
    ) -> "RunConfig":
        """Apply CLI flags on top of the file values."""
        update = {}
        if output_dir is not None:
            update["output_dir"] = output_dir
        if models is not None:
            update["models"] = models
        if seed is not None:
            update["seed"] = seed
        if not update:
            return self
        run = RunSection.model_validate({**self.run.model_dump(), **update})
        return self.model_copy(update={"run": run})

    def train_config(self, kind: Union[ModelKind, str], experiment_default_lr: Optional[float] = None) -> TrainConfig:
        """Training settings for ``kind``: defaults, ``[train]``, then ``[train.<kind>]``."""
        kind = ModelKind(kind)
        base = TRAIN_DEFAULTS
        if experiment_default_lr is not None:
            base = base.model_copy(update={"lr": experiment_default_lr})
        section = base.merged(self.train)
        if kind in self.train_overrides:
            section = section.merged(self.train_overrides[kind])
        return TrainConfig(
            lr=section.lr,
            epochs=section.epochs,
            batch_size=section.batch_size,
            seed=self.seed.child(f"train/{kind.value}"),
            split=(section.split_train, section.split_valid, section.split_test),
            gradient_mode=section.gradient_mode,
            log_every=section.log_every,
        )

    def split_fractions(self) -> tuple[float, float, float]:
        """Train/valid/test fractions of the dataset shared by all models."""
        section = TRAIN_DEFAULTS.merged(self.train)
        return (section.split_train, section.split_valid, section.split_test)

    def solver_opts(self) -> SolverOpts:
        return SolverOpts(**self.solver.model_dump())

    def network_shape(self, x_dim: int, u_dim: int) -> NetworkShape:
        return NetworkShape(
            x_dim=x_dim,
            u_dim=u_dim,
            num_terms=self.network.num_terms,
            temperature=self.network.temperature,
            hidden=tuple(self.network.hidden),
            sub_hidden=tuple(self.network.sub_hidden),
            activation=self.network.activation,
        )

    def wingrock_consts(self) -> WingRockConsts:
        return WingRockConsts(**self.wingrock.model_dump())

    def nmpc_problem(self) -> NmpcProblem:
        n = self.nmpc
        x0 = np.deg2rad([n.x0_phi_deg, n.x0_phidot_degps])
        xd_phi = np.deg2rad(n.xd_phi_deg)
        return NmpcProblem(
            horizon=n.horizon,
            dt=n.dt,
            Q=np.diag([n.q_phi, n.q_phidot]),
            QN=np.diag([n.qn_phi, n.qn_phidot]),
            R=np.array([[n.r]]),
            input_box=Box.uniform(n.input_lower, n.input_upper, 1),
            state_box_x0=Box(-x0, x0),
            setpoint_box=Box(np.array([-xd_phi, 0.0]), np.array([xd_phi, 0.0])),
        )

    def case1_boxes(self) -> tuple[Box, Box]:
        c = self.case1
        return Box.uniform(c.x_lower, c.x_upper, 1), Box.uniform(c.u_lower, c.u_upper, 1)

    # -------------------------------------------------------------- I/O

    def to_ini(self) -> str:
        """Resolved configuration as INI text (round-trips through :func:`load_run_config`)."""
        parser = configparser.ConfigParser(interpolation=None)
        for name in SECTIONS:
            section = getattr(self, name)
            parser[name] = {
                key: _format_value(value)
                for key, value in section.model_dump(mode="json", exclude_none=True).items()
            }
        for kind, section in self.train_overrides.items():
            parser[f"train.{kind.value}"] = {
                key: _format_value(value)
                for key, value in section.model_dump(mode="json", exclude_none=True).items()
            }
        buffer = io.StringIO()
        parser.write(buffer)
        return buffer.getvalue()


def _format_value(value) -> str:
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value).lower() if isinstance(value, bool) else str(value)


def parse_run_config(text: str) -> RunConfig:
    """Parse INI text into a validated :class:`RunConfig`.

    Raises:
        ValueError: On unknown sections or keys, or invalid values.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_string(text)
    data: dict = {}
    overrides: dict = {}
    for name in parser.sections():
        values = dict(parser[name])
        if name.startswith("train."):
            kind = name.split(".", 1)[1]
            try:
                overrides[ModelKind(kind)] = TrainSection.model_validate(values)
            except ValueError as e:
                raise ValueError(f"invalid section [{name}]: {e}") from e
            shared = sorted(key for key in values if key.startswith("split_"))
            if shared:
                raise ValueError(f"[{name}] cannot set {shared}; split fractions belong in [train]")
            continue
        if name not in SECTIONS:
            raise ValueError(f"unknown config section [{name}]; allowed: {sorted(SECTIONS)}")
        data[name] = values
    data["train_overrides"] = overrides
    return RunConfig.model_validate(data)


def load_run_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Read a config file, or return defaults when ``path`` is None."""
    if path is None:
        return RunConfig()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    config = parse_run_config(path.read_text(encoding="utf-8"))
    logger.info(f"Loaded run configuration from {path}")
    return config

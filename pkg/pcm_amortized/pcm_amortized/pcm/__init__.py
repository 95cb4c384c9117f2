"""The PCM method: EPLSE model, supervised training and minimizer metrics."""

from .eplse import (
    EplseForward,
    cached_minimizers,
    eplse_eval,
    eplse_forward,
    eplse_loss_and_grad,
    predict_minimizer,
)
from .exceptions import EmptySplitError, TrainingDivergedError, TrainingError
from .metrics import (
    evaluate_metrics,
    evaluate_objective_metrics,
    suboptimality_bound_check,
    surface_grid,
)
from .models import (
    BoundReport,
    Dataset,
    EplseModel,
    Metrics,
    ObjectiveMetrics,
    TrainConfig,
    TrainResult,
    split_indices,
    split_sizes,
)
from .schemas import (
    loss_history_schema,
    metrics_schema,
    report_schema,
    surface_schema,
    write_validated_csv,
)
from .surrogates import (
    DlseSurrogate,
    EplseSurrogate,
    FnnSurrogate,
    PlseSurrogate,
    Surrogate,
    TRAINABLE_KINDS,
    make_surrogate,
    wrap_network,
)
from .training import train_supervised

__all__ = [
    "EplseForward",
    "cached_minimizers",
    "eplse_eval",
    "eplse_forward",
    "eplse_loss_and_grad",
    "predict_minimizer",
    "EmptySplitError",
    "TrainingDivergedError",
    "TrainingError",
    "evaluate_metrics",
    "evaluate_objective_metrics",
    "suboptimality_bound_check",
    "surface_grid",
    "BoundReport",
    "Dataset",
    "EplseModel",
    "Metrics",
    "ObjectiveMetrics",
    "TrainConfig",
    "TrainResult",
    "split_indices",
    "split_sizes",
    "loss_history_schema",
    "metrics_schema",
    "report_schema",
    "surface_schema",
    "write_validated_csv",
    "DlseSurrogate",
    "EplseSurrogate",
    "FnnSurrogate",
    "PlseSurrogate",
    "Surrogate",
    "TRAINABLE_KINDS",
    "make_surrogate",
    "wrap_network",
    "train_supervised",
]

"""windfis: neuro-fuzzy wind speed forecasting.

A first-order Takagi-Sugeno fuzzy inference engine trained by hybrid
least-squares / gradient-descent learning, plus the time-series plumbing
(resampling, time-delay embedding, chronological splits, forecast metrics)
and a CSV pipeline CLI built on top of it.
"""

from .errors import (
    DataError,
    InvalidInputError,
    NumericError,
    UsageError,
    WindfisError,
)
from .membership import BellMf, GaussianMf, MfKind, ParamBounds
from .metrics import EvalReport, correlation_pct, evaluate_forecast, mae, regression_line
from .model_io import load_model, save_model
from .network import (
    AnfisModel,
    FiringTrace,
    InputSpec,
    Rule,
    build_grid_model,
    normalize_strengths,
)
from .series import (
    HORIZON_PRESETS,
    EmbeddedDataset,
    EmbeddingSpec,
    MeteoRecord,
    MeteoSeries,
    embed,
    embed_for_prediction,
    encode_date,
    horizon_to_steps,
    resample_10min,
    split_chronological,
)
from .synthetic import make_demo_series
from .training import (
    StopReason,
    TrainConfig,
    TrainReport,
    build_design_matrix,
    error_series,
    mse,
    premise_gradient,
    solve_consequents_lse,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AnfisModel",
    "BellMf",
    "DataError",
    "EmbeddedDataset",
    "EmbeddingSpec",
    "EvalReport",
    "FiringTrace",
    "GaussianMf",
    "HORIZON_PRESETS",
    "InputSpec",
    "InvalidInputError",
    "MeteoRecord",
    "MeteoSeries",
    "MfKind",
    "NumericError",
    "ParamBounds",
    "Rule",
    "StopReason",
    "TrainConfig",
    "TrainReport",
    "UsageError",
    "WindfisError",
    "build_design_matrix",
    "build_grid_model",
    "correlation_pct",
    "embed",
    "embed_for_prediction",
    "encode_date",
    "error_series",
    "evaluate_forecast",
    "horizon_to_steps",
    "load_model",
    "mae",
    "make_demo_series",
    "mse",
    "normalize_strengths",
    "premise_gradient",
    "regression_line",
    "resample_10min",
    "save_model",
    "solve_consequents_lse",
    "split_chronological",
    "train",
]

"""Forecast quality measures: MSE, MAE, correlation, and the fit line.

The correlation is reported as a percentage (100 times the Pearson
coefficient) to match the usual wind-forecasting convention; the squared
value is exposed alongside for readers who want a share-of-variance
interpretation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .training import error_series, mse

__all__ = ["EvalReport", "mae", "correlation_pct", "regression_line", "evaluate_forecast"]


def _pair(actual, predicted, min_len: int = 1):
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.size != p.size:
        raise InvalidInputError(f"length mismatch: {a.size} vs {p.size}")
    if a.size < min_len:
        raise InvalidInputError(f"need at least {min_len} samples, got {a.size}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(p))):
        raise InvalidInputError("inputs must be finite")
    return a, p


def mae(actual, predicted) -> float:
    """Mean absolute forecast error."""
    a, p = _pair(actual, predicted)
    return float(np.mean(np.abs(a - p)))


def correlation_pct(actual, predicted) -> float:
    """Pearson correlation between observed and forecast values, times 100."""
    a, p = _pair(actual, predicted, min_len=2)
    da = a - a.mean()
    dp = p - p.mean()
    denom = np.sqrt((da**2).sum() * (dp**2).sum())
    if denom == 0.0:
        raise InvalidInputError("correlation undefined: a vector is constant")
    # rounding can push |rho| a few ulp past 1; pin to the exact bound
    return float(np.clip(100.0 * (da @ dp) / denom, -100.0, 100.0))


def regression_line(actual, predicted) -> tuple[float, float]:
    """Least-squares (slope, intercept) predicting observed from forecast."""
    a, p = _pair(actual, predicted, min_len=2)
    dp = p - p.mean()
    var_p = (dp**2).sum()
    if var_p == 0.0:
        raise InvalidInputError("regression undefined: predictions are constant")
    slope = float((dp @ (a - a.mean())) / var_p)
    intercept = float(a.mean() - slope * p.mean())
    return slope, intercept


@dataclass(frozen=True)
class EvalReport:
    """Summary of one forecast evaluation."""

    mse: float
    mae: float
    r_pct: float
    regression_slope: float
    regression_intercept: float
    n: int

    @property
    def r_squared_pct(self) -> float:
        """Share of variance (percent) under the squared-correlation reading."""
        return self.r_pct**2 / 100.0


def evaluate_forecast(actual, predicted) -> EvalReport:
    """Compute every report field from one actual/predicted pair."""
    a, p = _pair(actual, predicted, min_len=2)
    slope, intercept = regression_line(a, p)
    return EvalReport(
        mse=mse(error_series(a, p)),
        mae=mae(a, p),
        r_pct=correlation_pct(a, p),
        regression_slope=slope,
        regression_intercept=intercept,
        n=int(a.size),
    )

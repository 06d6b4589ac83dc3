"""Report figures rendered to image files next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates
import matplotlib.pyplot as plt
import numpy as np

__all__ = ["forecast_figure", "correlation_figure"]


def forecast_figure(times, actual, predicted, path, title="Wind speed forecast"):
    """Observed and forecast wind speed over time; NaN gaps in the observed
    series simply break the line."""
    fig, ax = plt.subplots(figsize=(10, 4))
    actual = np.asarray(actual, dtype=float)
    if np.any(np.isfinite(actual)):
        ax.plot(times, actual, color="tab:blue", lw=1.0, label="observed")
    ax.plot(times, predicted, color="tab:orange", lw=1.0, label="forecast")
    ax.set_xlabel("time")
    ax.set_ylabel("wind speed (m/s)")
    ax.set_title(title)
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.4)
    ax.xaxis.set_major_formatter(mdates.DateFormatter("%m-%d %H:%M"))
    fig.autofmt_xdate()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def correlation_figure(actual, predicted, slope, intercept, r_pct, path,
                       title="Forecast vs observed"):
    """Scatter of forecast against observed with the least-squares fit line."""
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(predicted, actual, s=6, alpha=0.4, color="tab:blue",
               label="examples")
    span = np.array([predicted.min(), predicted.max()])
    ax.plot(span, slope * span + intercept, color="tab:red", lw=1.5,
            label=f"fit (r={r_pct:.2f}%)")
    ax.plot(span, span, color="gray", lw=0.8, ls="--", label="ideal")
    ax.set_xlabel("forecast wind speed (m/s)")
    ax.set_ylabel("observed wind speed (m/s)")
    ax.set_title(title)
    ax.legend(loc="upper left")
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

"""Fixed-cadence meteorological series and their supervised embeddings.

Raw station files arrive at one-minute cadence; modeling happens on
ten-minute bucket means.  A series may contain gaps: timestamps always
advance by whole multiples of the cadence, and any jump larger than one
step is an explicit hole.  Supervised examples are built by time-delay
embedding and never straddle a hole, on either the feature or the target
side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

from .errors import DataError, InvalidInputError

__all__ = [
    "MeteoRecord",
    "MeteoSeries",
    "EmbeddingSpec",
    "EmbeddedDataset",
    "resample_10min",
    "encode_date",
    "embed",
    "embed_for_prediction",
    "horizon_to_steps",
    "split_chronological",
    "HORIZON_PRESETS",
]

#: Forecast horizons used throughout: step counts at 10-minute cadence,
#: keyed by their conventional hour labels.  The 16 h entry is 100 steps
#: (nominally 16.67 h) on purpose; it is the established preset and is
#: preserved verbatim rather than silently corrected to 96.
HORIZON_PRESETS: dict[float, int] = {16.0: 100, 24.0: 144, 48.0: 288}


@dataclass(frozen=True)
class MeteoRecord:
    """One station reading: wind speed (m/s), temperature (degC), pressure (mb)."""

    timestamp: datetime
    wind_speed: float
    temperature: float
    pressure: float

    def __post_init__(self) -> None:
        values = (self.wind_speed, self.temperature, self.pressure)
        if not all(math.isfinite(v) for v in values):
            raise InvalidInputError(f"non-finite reading at {self.timestamp}")
        if self.wind_speed < 0:
            raise InvalidInputError(
                f"negative wind speed {self.wind_speed} at {self.timestamp}"
            )
        if self.pressure <= 0:
            raise InvalidInputError(
                f"non-positive pressure {self.pressure} at {self.timestamp}"
            )


@dataclass
class MeteoSeries:
    """Ordered records at a fixed cadence, with gaps as missing timestamps."""

    records: list[MeteoRecord]
    cadence: timedelta

    #: integer step index of each record relative to the first one
    _steps: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.cadence <= timedelta(0):
            raise InvalidInputError("cadence must be positive")
        steps = np.zeros(len(self.records), dtype=np.int64)
        for i in range(1, len(self.records)):
            delta = self.records[i].timestamp - self.records[i - 1].timestamp
            ratio = delta / self.cadence
            if delta <= timedelta(0) or ratio != int(ratio):
                raise InvalidInputError(
                    f"timestamps must increase by whole multiples of the cadence; "
                    f"offending record at {self.records[i].timestamp}"
                )
            steps[i] = steps[i - 1] + int(ratio)
        self._steps = steps

    def __len__(self) -> int:
        return len(self.records)

    def gaps(self) -> list[tuple[int, int]]:
        """(record index, missing step count) for every hole in the series."""
        jumps = np.diff(self._steps)
        return [(int(i) + 1, int(jumps[i]) - 1) for i in np.flatnonzero(jumps > 1)]

    def timestamps(self) -> list[datetime]:
        return [r.timestamp for r in self.records]

    def wind(self) -> np.ndarray:
        return np.array([r.wind_speed for r in self.records])

    def temperature(self) -> np.ndarray:
        return np.array([r.temperature for r in self.records])

    def pressure(self) -> np.ndarray:
        return np.array([r.pressure for r in self.records])


@dataclass(frozen=True)
class EmbeddingSpec:
    """Window geometry: lagged samples, their spacing, and the horizon, in steps."""

    lag_count: int = 1
    lag_spacing: int = 1
    horizon: int = 100

    def __post_init__(self) -> None:
        for name in ("lag_count", "lag_spacing", "horizon"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be >= 1")

    @property
    def span(self) -> int:
        """Steps covered by one example, oldest lag through target."""
        return (self.lag_count - 1) * self.lag_spacing + self.horizon

    def feature_names(self) -> list[str]:
        lags = [
            f"wind_lag{k * self.lag_spacing}"
            for k in range(self.lag_count - 1, -1, -1)
        ]
        return ["date", "pressure", "temperature", *lags]


@dataclass
class EmbeddedDataset:
    """Supervised matrix built from a series: one row per admissible anchor."""

    X: np.ndarray
    y: np.ndarray
    spec: EmbeddingSpec | None = None
    feature_names: list[str] | None = None
    target_times: list[datetime] | None = None

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float).ravel()
        if self.X.ndim != 2 or self.X.shape[0] != self.y.size:
            raise InvalidInputError("X must be 2-D with one target per row")
        if self.target_times is not None and len(self.target_times) != self.y.size:
            raise InvalidInputError("one target timestamp per example required")

    def __len__(self) -> int:
        return self.y.size

    @classmethod
    def from_arrays(cls, X, y, spec=None, feature_names=None) -> "EmbeddedDataset":
        return cls(X=X, y=y, spec=spec, feature_names=feature_names)

    def _slice(self, lo: int, hi: int) -> "EmbeddedDataset":
        times = self.target_times[lo:hi] if self.target_times is not None else None
        return EmbeddedDataset(
            X=self.X[lo:hi],
            y=self.y[lo:hi],
            spec=self.spec,
            feature_names=self.feature_names,
            target_times=times,
        )


def resample_10min(raw: MeteoSeries, min_records: int = 5) -> MeteoSeries:
    """Average 1-minute readings into aligned 10-minute buckets.

    Bucket boundaries sit at minutes 00, 10, 20, ...; a bucket holding fewer
    than ``min_records`` readings becomes a gap instead of a record.
    """
    if raw.cadence != timedelta(minutes=1):
        raise InvalidInputError(
            f"resampling expects 1-minute cadence, got {raw.cadence}"
        )
    if not 1 <= min_records <= 10:
        raise InvalidInputError("min_records must be in [1, 10]")

    out: list[MeteoRecord] = []
    bucket: list[MeteoRecord] = []
    bucket_start: datetime | None = None

    def flush() -> None:
        if bucket_start is not None and len(bucket) >= min_records:
            out.append(
                MeteoRecord(
                    timestamp=bucket_start,
                    wind_speed=float(np.mean([r.wind_speed for r in bucket])),
                    temperature=float(np.mean([r.temperature for r in bucket])),
                    pressure=float(np.mean([r.pressure for r in bucket])),
                )
            )

    for rec in raw.records:
        start = rec.timestamp.replace(minute=rec.timestamp.minute // 10 * 10)
        if start != bucket_start:
            flush()
            bucket_start = start
            bucket = []
        bucket.append(rec)
    flush()
    return MeteoSeries(records=out, cadence=timedelta(minutes=10))


def encode_date(ts: datetime) -> float:
    """Monotone within-year clock: day of year plus the fraction of the day.

    Captures both the seasonal position (integer part) and the time of day
    (fractional part); Jan 1 00:00 maps to exactly 1.0.
    """
    return ts.timetuple().tm_yday + (ts.hour + ts.minute / 60.0) / 24.0


def _admissible_anchors(series: MeteoSeries, spec: EmbeddingSpec) -> np.ndarray:
    """Anchor positions whose whole window (oldest lag .. target) is gap-free."""
    n = len(series)
    steps = series._steps
    back = (spec.lag_count - 1) * spec.lag_spacing
    idx = np.arange(back, n - spec.horizon)
    if idx.size == 0:
        return idx
    contiguous_back = steps[idx] - steps[idx - back] == back
    contiguous_fwd = steps[idx + spec.horizon] - steps[idx] == spec.horizon
    return idx[contiguous_back & contiguous_fwd]


def _feature_rows(series: MeteoSeries, spec: EmbeddingSpec, anchors: np.ndarray):
    wind = series.wind()
    date_col = np.array([encode_date(series.records[i].timestamp) for i in anchors])
    rows = [date_col, series.pressure()[anchors], series.temperature()[anchors]]
    for k in range(spec.lag_count - 1, -1, -1):
        rows.append(wind[anchors - k * spec.lag_spacing])
    return np.column_stack(rows)


def embed(series: MeteoSeries, spec: EmbeddingSpec) -> EmbeddedDataset:
    """Build the supervised dataset for training and evaluation.

    Feature row per anchor time t: [date(t), pressure(t), temperature(t),
    wind lags oldest-to-newest ending at wind(t)]; the target is the wind
    speed ``horizon`` steps ahead.  On a gap-free series of length L this
    yields exactly L - (lag_count-1)*lag_spacing - horizon examples.
    """
    required = spec.span + 1
    if len(series) < required:
        raise DataError(
            f"series too short to embed: need at least {required} points for "
            f"lag_count={spec.lag_count}, lag_spacing={spec.lag_spacing}, "
            f"horizon={spec.horizon}; got {len(series)}"
        )
    anchors = _admissible_anchors(series, spec)
    if anchors.size == 0:
        raise DataError(
            f"no gap-free window of {spec.span + 1} consecutive points exists"
        )
    X = _feature_rows(series, spec, anchors)
    y = series.wind()[anchors + spec.horizon]
    times = [series.records[i + spec.horizon].timestamp for i in anchors]
    return EmbeddedDataset(
        X=X, y=y, spec=spec, feature_names=spec.feature_names(), target_times=times
    )


def embed_for_prediction(series: MeteoSeries, spec: EmbeddingSpec):
    """Feature rows for every anchor with a valid lag window, targets optional.

    Returns (X, target_times, actual) where ``actual`` holds the observed
    target wind speed, or NaN when the window running out to the target is
    not gap-free (pure forecasting beyond or across missing data).  The rows
    with finite ``actual`` are exactly the rows ``embed`` would produce.
    """
    n = len(series)
    steps = series._steps
    back = (spec.lag_count - 1) * spec.lag_spacing
    idx = np.arange(back, n)
    if idx.size:
        idx = idx[steps[idx] - steps[idx - back] == back]
    if idx.size == 0:
        raise DataError(
            f"no anchor has a gap-free lag window of {back + 1} points"
        )
    X = _feature_rows(series, spec, idx)
    wind = series.wind()
    actual = np.full(idx.size, np.nan)
    has_target = idx + spec.horizon < n
    fwd = np.where(has_target, idx + spec.horizon, idx)
    contiguous = has_target & (steps[fwd] - steps[idx] == spec.horizon)
    actual[contiguous] = wind[fwd[contiguous]]
    times = [
        series.records[i].timestamp + spec.horizon * series.cadence for i in idx
    ]
    return X, times, actual


def horizon_to_steps(hours: float, cadence: timedelta) -> int:
    """Forecast horizon in cadence steps for a requested lead time in hours.

    At 10-minute cadence the conventional presets apply (16 h -> 100 steps,
    24 h -> 144, 48 h -> 288); any other request rounds hours*60/cadence.
    """
    if not hours > 0:
        raise InvalidInputError("hours must be positive")
    if cadence == timedelta(minutes=10):
        for preset_hours, steps in HORIZON_PRESETS.items():
            if math.isclose(hours, preset_hours):
                return steps
    steps = round(hours * 60.0 / (cadence.total_seconds() / 60.0))
    if steps < 1:
        raise InvalidInputError(f"{hours} h is below one cadence step")
    return steps


def split_chronological(
    ds: EmbeddedDataset, train_fraction: float
) -> tuple[EmbeddedDataset, EmbeddedDataset]:
    """First floor(fraction*n) examples for training, the rest for testing."""
    if not 0 < train_fraction < 1:
        raise InvalidInputError("train_fraction must be in (0, 1)")
    n = len(ds)
    n_train = int(math.floor(train_fraction * n))
    if n_train == 0 or n_train == n:
        raise DataError(
            f"dataset of {n} examples cannot be split {train_fraction:.2f} "
            "into two non-empty parts"
        )
    return ds._slice(0, n_train), ds._slice(n_train, n)

"""Command line pipeline: CSV ingestion, training, forecasting, evaluation.

Subcommands
    resample    1-minute station CSV -> 10-minute bucket means
    train       fit a model on a resampled CSV, write model + report files
    predict     forecast with a saved model, write timestamp/actual/predicted CSV
    evaluate    score a saved model on held-out data, print a summary line
    demo-data   write a seeded synthetic station CSV for trying the pipeline

Input CSV schema: ``timestamp,wind_speed,temperature,pressure`` with ISO-8601
minute-resolution timestamps; extra columns are ignored with a notice and
malformed rows are collected into a rejects report instead of being dropped
silently.  Report-producing commands also render figures (PNG) alongside
their delimited output unless ``--no-figures`` is given.

Exit status: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import logging
import math
import sys
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from . import metrics
from .errors import DataError, InvalidInputError, NumericError, UsageError, WindfisError
from .model_io import canonical_json, load_model, save_model
from .network import InputSpec, build_grid_model
from .series import (
    HORIZON_PRESETS,
    EmbeddingSpec,
    MeteoRecord,
    MeteoSeries,
    embed,
    embed_for_prediction,
    horizon_to_steps,
    resample_10min,
    split_chronological,
)
from .synthetic import make_demo_series
from .training import TrainConfig, train

log = logging.getLogger("windfis")

REQUIRED_COLUMNS = ("timestamp", "wind_speed", "temperature", "pressure")
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M"


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def _parse_timestamp(text: str) -> datetime:
    ts = datetime.fromisoformat(text.strip())
    if ts.second != 0 or ts.microsecond != 0 or ts.tzinfo is not None:
        raise ValueError("timestamps must be naive with minute resolution")
    return ts


def parse_csv(path) -> tuple[MeteoSeries, list[tuple[int, str]]]:
    """Read a station CSV into a sorted series plus a rejects report.

    Rejects are (1-based line number, reason) pairs.  More than 10% rejected
    rows, a missing required column, or an unreadable file is a hard error.
    """
    path = Path(path)
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except (StopIteration, csv.Error) as exc:
            raise DataError(f"{path}: empty or unparseable file") from exc
        columns = [h.strip() for h in header]
        missing = [c for c in REQUIRED_COLUMNS if c not in columns]
        if missing:
            raise DataError(f"{path}: missing required column(s) {missing}")
        extra = [c for c in columns if c not in REQUIRED_COLUMNS]
        if extra:
            log.info("%s: ignoring extra column(s) %s", path.name, extra)
        pick = {name: columns.index(name) for name in REQUIRED_COLUMNS}

        rows: list[MeteoRecord] = []
        rejects: list[tuple[int, str]] = []
        total = 0
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            total += 1
            try:
                record = MeteoRecord(
                    timestamp=_parse_timestamp(row[pick["timestamp"]]),
                    wind_speed=float(row[pick["wind_speed"]]),
                    temperature=float(row[pick["temperature"]]),
                    pressure=float(row[pick["pressure"]]),
                )
            except (IndexError, ValueError, InvalidInputError) as exc:
                rejects.append((line_no, str(exc)))
                continue
            rows.append(record)

    if total == 0:
        raise DataError(f"{path}: no data rows")
    if len(rejects) > 0.10 * total:
        raise DataError(
            f"{path}: {len(rejects)} of {total} rows rejected (>10%); "
            f"first: line {rejects[0][0]}: {rejects[0][1]}"
        )
    rows.sort(key=lambda r: r.timestamp)
    deduped: list[MeteoRecord] = []
    for rec in rows:
        if deduped and rec.timestamp == deduped[-1].timestamp:
            rejects.append((0, f"duplicate timestamp {rec.timestamp}"))
            continue
        deduped.append(rec)
    if not deduped:
        raise DataError(f"{path}: all rows rejected")
    cadence = _infer_cadence(deduped)
    try:
        series = MeteoSeries(records=deduped, cadence=cadence)
    except InvalidInputError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if rejects:
        log.warning("%s: rejected %d of %d rows", path.name, len(rejects), total)
    return series, rejects


def _infer_cadence(records: list[MeteoRecord]) -> timedelta:
    if len(records) < 2:
        return timedelta(minutes=1)
    minutes = 0
    for a, b in zip(records, records[1:]):
        delta = int((b.timestamp - a.timestamp).total_seconds() // 60)
        minutes = math.gcd(minutes, delta)
    return timedelta(minutes=max(minutes, 1))


def write_csv(path, series: MeteoSeries) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUIRED_COLUMNS)
        for rec in series.records:
            writer.writerow(
                [
                    rec.timestamp.strftime(TIMESTAMP_FORMAT),
                    repr(rec.wind_speed),
                    repr(rec.temperature),
                    repr(rec.pressure),
                ]
            )


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _horizon_label(steps: int) -> str:
    for hours, preset in HORIZON_PRESETS.items():
        if preset == steps:
            return f"{hours:.0f}h"
    return f"P={steps}"


def _resolve_embedding(args, cadence: timedelta) -> EmbeddingSpec:
    if args.steps is not None:
        steps = args.steps
    elif args.hours is not None:
        steps = horizon_to_steps(args.hours, cadence)
    else:
        steps = horizon_to_steps(float(args.horizon.rstrip("h")), cadence)
    return EmbeddingSpec(
        lag_count=args.lags, lag_spacing=args.lag_spacing, horizon=steps
    )


def _input_specs(X: np.ndarray, names: list[str], mf_count: int) -> list[InputSpec]:
    specs = []
    for j, name in enumerate(names):
        lo, hi = float(X[:, j].min()), float(X[:, j].max())
        if lo == hi:
            # constant feature: widen so the grid stays well defined
            log.warning("feature '%s' is constant; widening its range", name)
            lo, hi = lo - 0.5, hi + 0.5
        specs.append(InputSpec(name=name, lo=lo, hi=hi, mf_count=mf_count))
    return specs


def _fingerprint(X: np.ndarray, y: np.ndarray) -> str:
    digest = hashlib.sha256()
    digest.update(np.ascontiguousarray(X).tobytes())
    digest.update(np.ascontiguousarray(y).tobytes())
    return digest.hexdigest()[:16]


def _write_json(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc) + "\n")


def _eval_metrics(actual, predicted) -> dict:
    report = metrics.evaluate_forecast(actual, predicted)
    return {
        "n": report.n,
        "mse": report.mse,
        "mae": report.mae,
        "r_pct": report.r_pct,
        "r_squared_pct": report.r_squared_pct,
        "regression_slope": report.regression_slope,
        "regression_intercept": report.regression_intercept,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_resample(args) -> int:
    series, _ = parse_csv(args.input)
    if series.cadence != timedelta(minutes=1):
        raise DataError(
            f"{args.input}: expected 1-minute cadence, inferred {series.cadence}"
        )
    out = resample_10min(series, min_records=args.min_records)
    write_csv(args.output, out)
    print(
        f"resampled {len(series)} raw rows into {len(out)} ten-minute buckets "
        f"({len(out.gaps())} gap(s))"
    )
    return 0


def cmd_train(args) -> int:
    series, _ = parse_csv(args.data)
    spec = _resolve_embedding(args, series.cadence)
    dataset = embed(series, spec)
    # The grid spans the feature ranges of the whole dataset so that held-out
    # examples stay inside the fuzzy partition; only the training split sees
    # any target values.
    specs = _input_specs(dataset.X, dataset.feature_names, args.mf_count)
    train_ds, test_ds = split_chronological(dataset, args.train_fraction)

    model = build_grid_model(specs, family=args.family)
    cfg = TrainConfig(
        epochs=args.epochs,
        tolerance=args.tolerance,
        learning_rate=args.learning_rate,
        step_decay=args.step_decay,
        svd_cutoff=args.svd_cutoff,
    )
    log.info(
        "training %d-rule %s model, horizon %s, %d train / %d test examples",
        model.n_rules, args.family, _horizon_label(spec.horizon),
        len(train_ds), len(test_ds),
    )
    trained, report = train(
        model,
        train_ds,
        cfg,
        on_epoch=lambda e, _m, m: log.info("epoch %d: train mse %.6g", e + 1, m),
    )

    train_pred = trained.evaluate_batch(train_ds.X)
    test_pred = trained.evaluate_batch(test_ds.X)
    training_meta = {
        "epochs_run": len(report.mse_per_epoch),
        "final_mse": report.final_mse,
        "data_fingerprint": _fingerprint(dataset.X, dataset.y),
    }
    save_model(args.model, trained, embedding=spec, training_meta=training_meta)

    report_path = args.report or str(Path(args.model).with_suffix(".report.json"))
    report_doc = {
        "schema_version": 1,
        "config": {
            "horizon_steps": spec.horizon,
            "horizon_label": _horizon_label(spec.horizon),
            "lag_count": spec.lag_count,
            "lag_spacing": spec.lag_spacing,
            "mf_count": args.mf_count,
            "mf_family": args.family,
            "epochs": cfg.epochs,
            "tolerance": cfg.tolerance,
            "learning_rate": cfg.learning_rate,
            "step_decay": cfg.step_decay,
            "svd_cutoff": cfg.svd_cutoff,
            "train_fraction": args.train_fraction,
        },
        "data": {
            "examples": len(dataset),
            "train_examples": len(train_ds),
            "test_examples": len(test_ds),
            "fingerprint": training_meta["data_fingerprint"],
        },
        "training": {
            "mse_per_epoch": list(report.mse_per_epoch),
            "stop_reason": report.stop_reason.value,
            "wall_time_s": report.wall_time,
            "final_mse": report.final_mse,
        },
        "train_metrics": _eval_metrics(train_ds.y, train_pred),
        "test_metrics": _eval_metrics(test_ds.y, test_pred),
    }
    _write_json(report_path, report_doc)
    print(
        f"trained {trained.n_rules} rules in {len(report.mse_per_epoch)} epoch(s) "
        f"({report.stop_reason.value}); train mse "
        f"{report_doc['train_metrics']['mse']:.6g}, test mse "
        f"{report_doc['test_metrics']['mse']:.6g}"
    )
    print(f"model -> {args.model}")
    print(f"report -> {report_path}")
    return 0


def _check_features(model, spec: EmbeddingSpec) -> None:
    expected = spec.feature_names()
    if model.n_inputs != len(expected):
        raise DataError(
            f"model expects {model.n_inputs} features but the embedding "
            f"produces {len(expected)} ({', '.join(expected)})"
        )


def cmd_predict(args) -> int:
    model, spec, _meta = load_model(args.model)
    if spec is None:
        raise DataError(f"{args.model}: model file carries no embedding spec")
    series, _ = parse_csv(args.data)
    _check_features(model, spec)
    X, times, actual = embed_for_prediction(series, spec)
    predicted = model.evaluate_batch(X)

    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "actual", "predicted"])
        for ts, a, p in zip(times, actual, predicted):
            writer.writerow(
                [
                    ts.strftime(TIMESTAMP_FORMAT),
                    "" if np.isnan(a) else repr(float(a)),
                    repr(float(p)),
                ]
            )
    known = int(np.isfinite(actual).sum())
    print(
        f"wrote {len(times)} forecasts ({known} with observed targets) "
        f"-> {args.output}"
    )
    if not args.no_figures:
        from . import figures

        fig_path = str(Path(args.output).with_suffix(".png"))
        figures.forecast_figure(
            times, actual, predicted, fig_path,
            title=f"Wind speed forecast ({_horizon_label(spec.horizon)} ahead)",
        )
        print(f"figure -> {fig_path}")
    return 0


def cmd_evaluate(args) -> int:
    model, spec, meta = load_model(args.model)
    if spec is None:
        raise DataError(f"{args.model}: model file carries no embedding spec")
    series, _ = parse_csv(args.data)
    _check_features(model, spec)
    dataset = embed(series, spec)
    predicted = model.evaluate_batch(dataset.X)
    summary = _eval_metrics(dataset.y, predicted)

    label = _horizon_label(spec.horizon)
    epochs = (meta or {}).get("epochs_run") or "?"
    print(f"{label}  r={summary['r_pct']:.3f}  epochs={epochs}  mse={summary['mse']:.3f}")
    print(
        f"n={summary['n']}  mae={summary['mae']:.4f}  "
        f"fit: actual = {summary['regression_slope']:.4f}*predicted "
        f"+ {summary['regression_intercept']:.4f}"
    )

    if args.report:
        doc = {
            "schema_version": 1,
            "horizon_label": label,
            "horizon_steps": spec.horizon,
            "epochs_run": (meta or {}).get("epochs_run"),
            **summary,
        }
        _write_json(args.report, doc)
        print(f"report -> {args.report}")
        if not args.no_figures:
            from . import figures

            stem = Path(args.report)
            forecast_path = str(stem.with_suffix(".forecast.png"))
            scatter_path = str(stem.with_suffix(".scatter.png"))
            figures.forecast_figure(
                dataset.target_times, dataset.y, predicted, forecast_path,
                title=f"Wind speed forecast ({label} ahead)",
            )
            figures.correlation_figure(
                dataset.y, predicted, summary["regression_slope"],
                summary["regression_intercept"], summary["r_pct"], scatter_path,
            )
            print(f"figures -> {forecast_path}, {scatter_path}")
    return 0


def cmd_demo_data(args) -> int:
    series = make_demo_series(
        n_samples=args.samples, cadence_minutes=args.cadence, seed=args.seed
    )
    write_csv(args.output, series)
    print(
        f"wrote {len(series)} synthetic rows at {args.cadence}-minute cadence "
        f"(seed {args.seed}) -> {args.output}"
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing / entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures onto exit status 1
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="windfis",
        description="Neuro-fuzzy wind speed forecasting pipeline",
    )
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress details")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resample", parents=[], help="1-min CSV -> 10-min means")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--min-records", type=int, default=5,
                   help="readings required per bucket (default 5)")
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("train", help="fit a model on a resampled CSV")
    p.add_argument("data", help="10-minute cadence station CSV")
    p.add_argument("--model", required=True, help="output model file (JSON)")
    p.add_argument("--report", help="output report file (default: <model>.report.json)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--horizon", choices=["16h", "24h", "48h"], default="16h",
                       help="forecast horizon preset (default 16h)")
    group.add_argument("--hours", type=float, help="custom horizon in hours")
    group.add_argument("--steps", type=int, help="custom horizon in cadence steps")
    p.add_argument("--lags", type=int, default=1,
                   help="lagged wind samples per example (default 1)")
    p.add_argument("--lag-spacing", type=int, default=1,
                   help="spacing between lags in steps (default 1)")
    p.add_argument("--mf-count", type=int, default=3,
                   help="membership functions per input (default 3)")
    p.add_argument("--family", choices=["gaussian", "bell"], default="gaussian")
    p.add_argument("--epochs", type=int, default=6)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--learning-rate", type=float, default=0.01)
    p.add_argument("--step-decay", type=float, default=0.9)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--svd-cutoff", type=float, default=1e-9,
                   help="relative singular-value cutoff of the consequent "
                        "solve; raise (e.g. 0.03) to shrink noisy fits")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="forecast with a saved model")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("output", help="output CSV (timestamp,actual,predicted)")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a saved model on a CSV")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--report", help="write a JSON report (figures beside it)")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("demo-data", help="write a synthetic station CSV")
    p.add_argument("output")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--cadence", type=int, default=10, choices=[1, 10],
                   help="minutes between rows (default 10)")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed for the generated data (default 0)")
    p.set_defaults(func=cmd_demo_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(message)s",
        )
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except InvalidInputError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except WindfisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

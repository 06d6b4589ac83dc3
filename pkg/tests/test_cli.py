"""Command line pipeline: ingestion, subcommands, files, exit codes."""

import csv
import json
import re
from datetime import datetime, timedelta

import numpy as np
import pytest

import windfis as w
from windfis import cli
from windfis.errors import DataError
from tests.conftest import write_station_csv

START = datetime(2011, 2, 1, 0, 0)


def minute_csv(path, winds, start=START, step_minutes=1):
    stamps = [start + i * timedelta(minutes=step_minutes) for i in range(len(winds))]
    write_station_csv(path, stamps, winds, [20.0] * len(winds), [1010.0] * len(winds))
    return str(path)


class TestParseCsv:
    def test_well_formed(self, tmp_path):
        path = minute_csv(tmp_path / "ok.csv", [1.0, 2.0, 3.0])
        series, rejects = cli.parse_csv(path)
        assert len(series) == 3 and rejects == []

    def test_negative_wind_goes_to_rejects(self, tmp_path):
        path = tmp_path / "neg.csv"
        path.write_text(
            "timestamp,wind_speed,temperature,pressure\n"
            "2011-02-01T00:00,1.0,20.0,1010.0\n"
            "2011-02-01T00:01,-2.0,20.0,1010.0\n" * 1  # invariant violation
            + "2011-02-01T00:02,3.0,20.0,1010.0\n"
            + "2011-02-01T00:03,3.5,20.0,1010.0\n"
            + "2011-02-01T00:04,3.5,20.0,1010.0\n"
            + "2011-02-01T00:05,3.5,20.0,1010.0\n"
            + "2011-02-01T00:06,3.5,20.0,1010.0\n"
            + "2011-02-01T00:07,3.5,20.0,1010.0\n"
            + "2011-02-01T00:08,3.5,20.0,1010.0\n"
            + "2011-02-01T00:09,3.5,20.0,1010.0\n"
        )
        series, rejects = cli.parse_csv(path)
        assert len(series) == 9
        assert len(rejects) == 1 and rejects[0][0] == 3

    def test_rejects_plus_accepted_equals_total(self, tmp_path):
        path = tmp_path / "mix.csv"
        rows = [f"2011-02-01T00:{i:02d},{i}.0,20.0,1010.0" for i in range(20)]
        rows[4] = "2011-02-01T00:04,bad,20.0,1010.0"
        path.write_text(
            "timestamp,wind_speed,temperature,pressure\n" + "\n".join(rows) + "\n"
        )
        series, rejects = cli.parse_csv(path)
        assert len(series) + len(rejects) == 20

    def test_shuffled_rows_sorted_and_round_trip(self, tmp_path):
        path = tmp_path / "shuffled.csv"
        stamps = [START + i * timedelta(minutes=1) for i in range(6)]
        order = [3, 0, 5, 1, 4, 2]
        lines = [
            f"{stamps[i].strftime('%Y-%m-%dT%H:%M')},{float(i)!r},20.0,1010.0"
            for i in order
        ]
        path.write_text(
            "timestamp,wind_speed,temperature,pressure\n" + "\n".join(lines) + "\n"
        )
        series, _ = cli.parse_csv(path)
        winds = series.wind()
        assert np.array_equal(winds, np.arange(6.0))
        out = tmp_path / "rt.csv"
        cli.write_csv(out, series)
        series2, rejects2 = cli.parse_csv(out)
        assert rejects2 == []
        assert series2 == series

    def test_extra_columns_ignored(self, tmp_path):
        path = tmp_path / "extra.csv"
        path.write_text(
            "timestamp,wind_speed,temperature,pressure,humidity\n"
            "2011-02-01T00:00,1.0,20.0,1010.0,55\n"
            "2011-02-01T00:01,1.5,20.0,1010.0,56\n"
        )
        series, rejects = cli.parse_csv(path)
        assert len(series) == 2 and rejects == []

    def test_missing_column_is_hard_error(self, tmp_path):
        path = tmp_path / "nocol.csv"
        path.write_text("timestamp,wind_speed,temperature\n2011-02-01T00:00,1,20\n")
        with pytest.raises(DataError, match="pressure"):
            cli.parse_csv(path)

    def test_reject_fraction_over_ten_percent_is_hard_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        rows = [f"2011-02-01T00:{i:02d},x,20.0,1010.0" for i in range(5)]
        path.write_text(
            "timestamp,wind_speed,temperature,pressure\n" + "\n".join(rows) + "\n"
        )
        with pytest.raises(DataError, match="rejected"):
            cli.parse_csv(path)


class TestResampleCommand:
    def test_sixty_rows_to_six(self, tmp_path, capsys):
        src = minute_csv(tmp_path / "raw.csv", list(range(60)))
        out = tmp_path / "ten.csv"
        assert cli.main(["resample", src, str(out)]) == 0
        series, _ = cli.parse_csv(out)
        assert len(series) == 6
        assert "6 ten-minute buckets" in capsys.readouterr().out

    def test_constant_series_stays_constant(self, tmp_path):
        src = minute_csv(tmp_path / "raw.csv", [7.5] * 30)
        out = tmp_path / "ten.csv"
        cli.main(["resample", src, str(out)])
        series, _ = cli.parse_csv(out)
        assert all(r.wind_speed == 7.5 for r in series.records)

    def test_hand_means_on_twenty_rows(self, tmp_path):
        src = minute_csv(tmp_path / "raw.csv", list(range(20)))
        out = tmp_path / "ten.csv"
        cli.main(["resample", src, str(out)])
        series, _ = cli.parse_csv(out)
        assert [r.wind_speed for r in series.records] == [4.5, 14.5]

    def test_wrong_cadence_exits_2(self, tmp_path, capsys):
        src = minute_csv(tmp_path / "raw.csv", list(range(20)), step_minutes=10)
        assert cli.main(["resample", src, str(tmp_path / "o.csv")]) == 2


class TestTrainCommand:
    def test_planted_recovery(self, tmp_path, planted, capsys):
        model_path = tmp_path / "model.json"
        code = cli.main(
            ["train", planted.csv_path, "--model", str(model_path),
             "--steps", "5", "--mf-count", "2", "--train-fraction", "0.8"]
        )
        assert code == 0
        report = json.loads((tmp_path / "model.report.json").read_text())
        assert report["training"]["final_mse"] < 1e-8
        assert report["train_metrics"]["r_pct"] > 99.9

    def test_defaults_echoed_in_report(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5"])
        report = json.loads((tmp_path / "model.report.json").read_text())
        assert report["config"]["epochs"] == 6
        assert report["config"]["tolerance"] == 1e-5
        assert report["config"]["learning_rate"] == 0.01

    def test_preset_horizon_recorded_in_model_file(self, tmp_path):
        data = tmp_path / "demo.csv"
        cli.main(["demo-data", str(data), "--samples", "600", "--seed", "1"])
        model_path = tmp_path / "model.json"
        code = cli.main(
            ["train", str(data), "--model", str(model_path), "--horizon", "24h"]
        )
        assert code == 0
        doc = json.loads(model_path.read_text())
        assert doc["embedding"]["horizon"] == 144

    def test_insufficient_data_exits_2(self, tmp_path, capsys):
        src = minute_csv(tmp_path / "short.csv", [5.0] * 30, step_minutes=10)
        code = cli.main(
            ["train", src, "--model", str(tmp_path / "m.json"), "--horizon", "16h"]
        )
        assert code == 2


class TestPredictCommand:
    def test_planted_predictions_match_actuals(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--mf-count", "2"])
        out = tmp_path / "pred.csv"
        code = cli.main(["predict", str(model_path), planted.csv_path, str(out),
                         "--no-figures"])
        assert code == 0
        rows = list(csv.DictReader(open(out)))
        assert len(rows) == planted.length  # lag window of 1 admits every anchor
        errors = [
            abs(float(r["actual"]) - float(r["predicted"]))
            for r in rows if r["actual"] != ""
        ]
        assert len(errors) == planted.length - planted.horizon
        assert max(errors) < 1e-4

    def test_forecast_figure_written(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--mf-count", "2"])
        out = tmp_path / "pred.csv"
        assert cli.main(["predict", str(model_path), planted.csv_path, str(out)]) == 0
        assert (tmp_path / "pred.png").exists()

    def test_empty_admissible_window_is_error(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--lags", "4", "--mf-count", "2"])
        tiny = minute_csv(tmp_path / "tiny.csv", [5.0, 6.0], step_minutes=10)
        code = cli.main(["predict", str(model_path), tiny,
                         str(tmp_path / "p.csv"), "--no-figures"])
        assert code == 2

    def test_dimension_mismatch_names_expectation(self, tmp_path, planted, capsys):
        # model trained with 4 lags expects 7 features; hand-edit to drop one input
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--lags", "4", "--mf-count", "2"])
        doc = json.loads(model_path.read_text())
        doc["embedding"]["lag_count"] = 1
        model_path.write_text(json.dumps(doc))
        code = cli.main(["predict", str(model_path), planted.csv_path,
                         str(tmp_path / "p.csv"), "--no-figures"])
        assert code == 2
        assert "features" in capsys.readouterr().err


class TestEvaluateCommand:
    def test_summary_line_format(self, tmp_path, capsys):
        data = tmp_path / "demo.csv"
        cli.main(["demo-data", str(data), "--samples", "600", "--seed", "1"])
        model_path = tmp_path / "model.json"
        cli.main(["train", str(data), "--model", str(model_path), "--horizon", "24h"])
        capsys.readouterr()
        assert cli.main(["evaluate", str(model_path), str(data)]) == 0
        line = capsys.readouterr().out.splitlines()[0]
        assert re.fullmatch(
            r"24h  r=-?\d+\.\d{3}  epochs=\d+  mse=\d+\.\d{3}", line
        )

    def test_perfect_model_scores_perfectly(self, tmp_path, planted, capsys):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--mf-count", "2"])
        report_path = tmp_path / "eval.json"
        code = cli.main(["evaluate", str(model_path), planted.csv_path,
                         "--report", str(report_path), "--no-figures"])
        assert code == 0
        report = json.loads(report_path.read_text())
        assert report["r_pct"] == pytest.approx(100.0, abs=1e-6)
        assert report["mse"] < 1e-20

    def test_agrees_with_offline_recomputation(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--mf-count", "2"])
        pred_path = tmp_path / "pred.csv"
        cli.main(["predict", str(model_path), planted.csv_path, str(pred_path),
                  "--no-figures"])
        report_path = tmp_path / "eval.json"
        cli.main(["evaluate", str(model_path), planted.csv_path,
                  "--report", str(report_path), "--no-figures"])
        report = json.loads(report_path.read_text())
        rows = [r for r in csv.DictReader(open(pred_path)) if r["actual"] != ""]
        actual = np.array([float(r["actual"]) for r in rows])
        predicted = np.array([float(r["predicted"]) for r in rows])
        offline = w.evaluate_forecast(actual, predicted)
        assert abs(offline.mse - report["mse"]) <= 1e-12
        assert abs(offline.mae - report["mae"]) <= 1e-12
        assert abs(offline.r_pct - report["r_pct"]) <= 1e-12

    def test_figures_written_next_to_report(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--mf-count", "2"])
        report_path = tmp_path / "eval.json"
        assert cli.main(["evaluate", str(model_path), planted.csv_path,
                         "--report", str(report_path)]) == 0
        assert (tmp_path / "eval.forecast.png").exists()
        assert (tmp_path / "eval.scatter.png").exists()


class TestModelFileThroughCli:
    def test_round_trip_is_byte_identical(self, tmp_path, planted):
        model_path = tmp_path / "model.json"
        cli.main(["train", planted.csv_path, "--model", str(model_path),
                  "--steps", "5", "--mf-count", "2"])
        model, embedding, meta = w.load_model(model_path)
        resaved = tmp_path / "resaved.json"
        w.save_model(resaved, model, embedding=embedding, training_meta=meta)
        assert model_path.read_bytes() == resaved.read_bytes()


class TestExitCodes:
    def test_usage_error_is_1(self, capsys):
        assert cli.main(["train"]) == 1  # missing required arguments

    def test_unknown_subcommand_is_1(self, capsys):
        assert cli.main(["frobnicate"]) == 1

    def test_missing_file_is_2(self, tmp_path, capsys):
        assert cli.main(["resample", str(tmp_path / "none.csv"),
                         str(tmp_path / "o.csv")]) == 2


class TestDemoData:
    def test_seeded_determinism(self, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        cli.main(["demo-data", str(a), "--samples", "50", "--seed", "3"])
        cli.main(["demo-data", str(b), "--samples", "50", "--seed", "3"])
        cli.main(["demo-data", str(c), "--samples", "50", "--seed", "4"])
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

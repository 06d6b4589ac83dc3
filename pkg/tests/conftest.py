"""Shared fixtures: small models, station CSV writers, a planted-model CSV."""

from __future__ import annotations

from datetime import datetime, timedelta

import numpy as np
import pytest

import windfis as w
from windfis.series import encode_date

START = datetime(2010, 1, 1, 0, 0)


def write_station_csv(path, timestamps, wind, temperature, pressure) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("timestamp,wind_speed,temperature,pressure\n")
        for ts, ws, tc, pr in zip(timestamps, wind, temperature, pressure):
            fh.write(
                f"{ts.strftime('%Y-%m-%dT%H:%M')},"
                f"{float(ws)!r},{float(tc)!r},{float(pr)!r}\n"
            )


def random_small_model(rng, max_inputs=3, max_mfs=3, family=None):
    """Grid model with jittered membership parameters and random consequents."""
    n_inputs = int(rng.integers(1, max_inputs + 1))
    family = family or str(rng.choice(["gaussian", "bell"]))
    specs = []
    for j in range(n_inputs):
        lo = float(rng.uniform(-5, 0))
        hi = lo + float(rng.uniform(1, 8))
        specs.append(
            w.InputSpec(f"x{j}", lo, hi, mf_count=int(rng.integers(2, max_mfs + 1)))
        )
    model = w.build_grid_model(specs, family=family)
    params = model.premise_params()
    model.set_premise_params(params * rng.uniform(0.7, 1.3, params.size))
    model.set_consequent_vector(
        rng.normal(0, 2, model.n_rules * (model.n_inputs + 1))
    )
    return model, specs


class PlantedFixture:
    """A station CSV whose future wind is exactly a grid-model function of the
    current features, so one least-squares pass recovers it to round-off."""

    def __init__(self, tmpdir, length=600, horizon=5, mf_count=2, seed=5):
        self.length = length
        self.horizon = horizon
        self.mf_count = mf_count
        cad = timedelta(minutes=10)
        ts = [START + i * cad for i in range(length)]
        t = np.arange(length, dtype=float)
        pressure = 1005.0 + 5.0 * np.sin(2 * np.pi * t / 50.0)
        temperature = 20.0 + 4.0 * np.cos(2 * np.pi * t / 70.0)
        dates = np.array([encode_date(x) for x in ts])

        anchors = np.arange(0, length - horizon)
        rng = np.random.default_rng(seed)
        wind = np.empty(length)
        wind[0], wind[1] = 0.0, 15.0
        for i in range(2, horizon):
            wind[i] = 7.0 + 0.5 * np.sin(float(i))

        specs = [
            w.InputSpec("date", float(dates[anchors].min()),
                        float(dates[anchors].max()), mf_count),
            w.InputSpec("pressure", float(pressure[anchors].min()),
                        float(pressure[anchors].max()), mf_count),
            w.InputSpec("temperature", float(temperature[anchors].min()),
                        float(temperature[anchors].max()), mf_count),
            w.InputSpec("wind_lag0", 0.0, 15.0, mf_count),
        ]
        model = w.build_grid_model(specs, family="gaussian")
        n_rules = model.n_rules
        theta = np.zeros((n_rules, 5))
        theta[:, 0] = rng.uniform(-0.02, 0.02, n_rules)
        theta[:, 1] = rng.uniform(-0.002, 0.002, n_rules)
        theta[:, 2] = rng.uniform(-0.02, 0.02, n_rules)
        theta[:, 3] = rng.uniform(-0.1, 0.1, n_rules)
        theta[:, 4] = rng.uniform(6.5, 7.5, n_rules)
        model.set_consequent_vector(theta.ravel())
        for i in range(0, length - horizon):
            y, _ = model.evaluate([dates[i], pressure[i], temperature[i], wind[i]])
            wind[i + horizon] = y
        assert 0.3 < wind[horizon:].min() and wind[horizon:].max() < 14.7

        self.model = model
        self.csv_path = str(tmpdir / "planted.csv")
        write_station_csv(self.csv_path, ts, wind, temperature, pressure)


@pytest.fixture
def planted(tmp_path):
    return PlantedFixture(tmp_path)

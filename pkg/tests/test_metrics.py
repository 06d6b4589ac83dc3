"""Forecast metrics: MAE, percent correlation, regression line, report."""

import numpy as np
import pytest

import windfis as w
from windfis.errors import InvalidInputError

# 100 * (47/10) / sqrt(5 * 9/2), evaluated from the exact fractions of the
# centered cross and square sums of the two vectors below.
FROZEN_R_PCT = 99.08470001860921


class TestMae:
    def test_identical_vectors(self):
        assert w.mae([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_mean(self):
        assert w.mae([1.0, -1.0], [0.0, 0.0]) == 1.0

    def test_never_exceeds_rmse(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a = rng.normal(0, 3, 30)
            p = rng.normal(0, 3, 30)
            assert w.mae(a, p) <= np.sqrt(w.mse(w.error_series(a, p))) + 1e-12

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            w.mae([1.0], [1.0, 2.0])


class TestCorrelation:
    def test_perfect(self):
        assert w.correlation_pct([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 100.0

    def test_anti(self):
        assert w.correlation_pct([1.0, 2.0, 3.0], [-1.0, -2.0, -3.0]) == -100.0

    def test_frozen_hand_value(self):
        r = w.correlation_pct([1.0, 2.0, 3.0, 4.0], [1.1, 1.9, 3.2, 3.8])
        assert r == pytest.approx(FROZEN_R_PCT, abs=1e-12)

    def test_constant_vector_is_explicit_error(self):
        with pytest.raises(InvalidInputError):
            w.correlation_pct([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_affine_invariance(self):
        rng = np.random.default_rng(1)
        x = rng.normal(0, 2, 40)
        y = rng.normal(0, 2, 40)
        base = w.correlation_pct(x, y)
        for scale, shift in [(2.0, 0.0), (0.3, -7.0), (1e3, 42.0)]:
            assert abs(w.correlation_pct(scale * x + shift, y) - base) < 1e-9

    def test_bounded_and_tight_iff_affine(self):
        rng = np.random.default_rng(2)
        x = rng.normal(0, 1, 25)
        assert w.correlation_pct(3.0 * x - 1.0, x) == pytest.approx(100.0, abs=1e-9)
        assert w.correlation_pct(-0.5 * x + 2.0, x) == pytest.approx(-100.0, abs=1e-9)
        noisy = w.correlation_pct(x + rng.normal(0, 1, 25), x)
        assert -100.0 <= noisy <= 100.0 and abs(noisy) < 100.0


class TestRegressionLine:
    def test_identity(self):
        slope, intercept = w.regression_line([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert slope == pytest.approx(1.0) and intercept == pytest.approx(0.0)

    def test_shift(self):
        actual = np.array([1.0, 2.0, 3.0])
        slope, intercept = w.regression_line(actual, actual + 5.0)
        assert slope == pytest.approx(1.0, rel=1e-12)
        assert intercept == pytest.approx(-5.0, rel=1e-12)

    def test_frozen_hand_fit(self):
        slope, intercept = w.regression_line(
            [1.0, 2.0, 3.0, 4.0], [1.1, 1.9, 3.2, 3.8]
        )
        assert slope == pytest.approx(47.0 / 45.0, rel=1e-12)
        assert intercept == pytest.approx(-1.0 / 9.0, rel=1e-12)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(3)
        predicted = rng.normal(0, 2, 50)
        actual = 1.7 * predicted + rng.normal(0, 1, 50)
        slope, intercept = w.regression_line(actual, predicted)
        residual = actual - (slope * predicted + intercept)
        assert abs(residual @ (predicted - predicted.mean())) < 1e-9 * 50

    def test_constant_predictions_rejected(self):
        with pytest.raises(InvalidInputError):
            w.regression_line([1.0, 2.0], [3.0, 3.0])


class TestEvalReport:
    def test_cross_module_mse_identity(self):
        rng = np.random.default_rng(4)
        actual = rng.normal(5, 2, 64)
        predicted = actual + rng.normal(0, 0.5, 64)
        report = w.evaluate_forecast(actual, predicted)
        assert report.mse == pytest.approx(
            w.mse(w.error_series(actual, predicted)), abs=1e-12
        )
        assert report.n == 64

    def test_perfect_forecast_fixed_point(self):
        actual = np.array([3.0, 5.0, 4.0, 6.0])
        report = w.evaluate_forecast(actual, actual)
        assert report.r_pct == 100.0
        assert report.mse == 0.0 and report.mae == 0.0
        assert report.regression_slope == pytest.approx(1.0)
        assert report.regression_intercept == pytest.approx(0.0)

    def test_r_squared_exposed(self):
        report = w.evaluate_forecast(
            [1.0, 2.0, 3.0, 4.0], [1.1, 1.9, 3.2, 3.8]
        )
        assert report.r_squared_pct == pytest.approx(FROZEN_R_PCT**2 / 100.0)

import json
import math

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from quantile_spectra.exceptions import InvalidArgumentError, StabilityWarning
from quantile_spectra.oracle import GaussianProcessSpec
from quantile_spectra.simulation import (
    CoefficientFunction,
    QVARSpec,
    VARModel,
    benchmark_qvar,
    benchmark_var1,
    check_qvar_stability,
    simulate_qvar,
    simulate_toy,
    simulate_var1,
    spec_from_json,
    spec_to_json,
)


def lagged_correlation(x, y, lag):
    """Sample Corr(x_{t+lag}, y_t)."""
    if lag >= 0:
        return np.corrcoef(x[lag:], y[: len(y) - lag])[0, 1]
    return np.corrcoef(x[:lag], y[-lag:])[0, 1]


class TestCoefficientFunction(SimpleTestCase):
    def test_forms(self):
        self.assertEqual(CoefficientFunction.constant(0.3)(0.9), 0.3)
        self.assertAlmostEqual(float(CoefficientFunction.linear(0.0, 1.2)(0.75)), 0.3)
        self.assertAlmostEqual(
            float(CoefficientFunction.normal_quantile()(0.975)), 1.959964, places=6
        )

    def test_sup_abs(self):
        self.assertAlmostEqual(CoefficientFunction.linear(0.1, -1.2).sup_abs(), 0.7)
        self.assertEqual(CoefficientFunction.normal_quantile().sup_abs(), math.inf)
        self.assertTrue(CoefficientFunction().is_zero)

    def test_invalid(self):
        with self.assertRaises(InvalidArgumentError):
            CoefficientFunction("cubic", (1.0,))
        with self.assertRaises(InvalidArgumentError):
            CoefficientFunction("linear", (1.0,))


class TestQVAR(SimpleTestCase):
    def test_deterministic(self):
        spec = benchmark_qvar(1)
        first = simulate_qvar(spec, 256, seed=3)
        second = simulate_qvar(spec, 256, seed=3)
        np.testing.assert_array_equal(first.values, second.values)
        other = simulate_qvar(spec, 256, seed=4)
        self.assertFalse(np.array_equal(first.values, other.values))

    def test_burn_in_discards_the_start(self):
        spec = benchmark_qvar(2)
        long = simulate_qvar(spec, 110, burn_in=0, seed=5)
        short = simulate_qvar(spec, 100, burn_in=10, seed=5)
        np.testing.assert_array_equal(long.values[10:], short.values)

    def test_intercept_only_is_normal(self):
        normal = CoefficientFunction.normal_quantile()
        spec = QVARSpec(p=1, d=2, intercept=[normal, normal])
        series = simulate_qvar(spec, 4096, seed=1)
        for j in range(2):
            self.assertGreater(stats.kstest(series.values[:, j], "norm").pvalue, 0.001)
        self.assertLess(
            abs(lagged_correlation(series.values[:, 0], series.values[:, 1], 0)),
            4 / math.sqrt(4096),
        )

    def test_linearly_uncorrelated(self):
        """Random-coefficient feedback leaves no linear cross-correlation."""
        n = 4096
        series = simulate_qvar(benchmark_qvar(1), n, seed=2).values
        for lag in range(-3, 4):
            self.assertLess(
                abs(lagged_correlation(series[:, 0], series[:, 1], lag)),
                4 / math.sqrt(n),
            )

    def test_stability_check(self):
        self.assertTrue(check_qvar_stability(benchmark_qvar(1)))
        with self.assertWarns(StabilityWarning):
            self.assertFalse(check_qvar_stability(benchmark_qvar(1, slope=2.5)))
        normal = CoefficientFunction.normal_quantile()
        unbounded = QVARSpec(p=1, d=1, coeff=[[[normal]]])
        with self.assertWarns(StabilityWarning):
            self.assertFalse(check_qvar_stability(unbounded))

    def test_shape_validation(self):
        with self.assertRaises(InvalidArgumentError):
            QVARSpec(p=1, d=2, coeff=[[[0.0, 0.0]]])
        with self.assertRaises(InvalidArgumentError):
            QVARSpec(p=0, d=2)
        with self.assertRaises(InvalidArgumentError):
            simulate_qvar(benchmark_qvar(1), 1)
        with self.assertRaises(InvalidArgumentError):
            simulate_qvar(benchmark_qvar(1), 10, burn_in=-1)


class TestVAR1(SimpleTestCase):
    def test_lag_one_correlation(self):
        model = benchmark_var1(0.5)
        series = simulate_var1(model, 20000, seed=1).values
        expected = GaussianProcessSpec.var1(model.A).lag_correlations(0, 1, lags=1)
        self.assertAlmostEqual(
            lagged_correlation(series[:, 0], series[:, 1], 1), expected[2], delta=0.03
        )
        self.assertAlmostEqual(expected[2], 0.5)
        self.assertAlmostEqual(
            lagged_correlation(series[:, 0], series[:, 1], 0), 0.0, delta=0.03
        )

    def test_unstable_warns(self):
        with self.assertWarns(StabilityWarning):
            model = VARModel(((1.0, 0.0), (0.0, 0.5)))
        self.assertEqual(model.spectral_radius, 1.0)

    def test_deterministic(self):
        model = benchmark_var1(0.3, 0.2)
        np.testing.assert_array_equal(
            simulate_var1(model, 50, seed=9).values,
            simulate_var1(model, 50, seed=9).values,
        )

    def test_needs_two_observations(self):
        self.assertEqual(simulate_var1(benchmark_var1(0.3), 2, seed=1).n, 2)
        with self.assertRaises(InvalidArgumentError):
            simulate_var1(benchmark_var1(0.3), 1)


class TestToyProcesses(SimpleTestCase):
    def test_square_now(self):
        series = simulate_toy("eps_square_now", 500, seed=4)
        self.assertEqual(series.names, ("x", "y"))
        np.testing.assert_array_equal(series.values[:, 1], series.values[:, 0] ** 2)

    def test_square_lag(self):
        series = simulate_toy("eps_square_lag1", 500, seed=4).values
        np.testing.assert_array_equal(series[1:, 1], series[:-1, 0] ** 2)
        now = simulate_toy("eps_square_now", 501, seed=4).values
        np.testing.assert_array_equal(series[:, 0], now[1:, 0])

    def test_independent_noise(self):
        series = simulate_toy("independent_noise", 4096, seed=4).values
        self.assertFalse(np.array_equal(series[:, 0], series[:, 1]))
        self.assertLess(abs(np.corrcoef(series.T)[0, 1]), 4 / math.sqrt(4096))

    def test_unknown_kind(self):
        with self.assertRaises(InvalidArgumentError):
            simulate_toy("random_walk", 10)


class TestModelJSON(SimpleTestCase):
    def test_qvar_round_trip(self):
        spec = benchmark_qvar(2)
        self.assertEqual(spec_from_json(spec_to_json(spec)), spec)
        self.assertEqual(spec_from_json(json.dumps(spec_to_json(spec))), spec)

    def test_var1_round_trip(self):
        model = benchmark_var1(0.4, 0.1)
        self.assertEqual(spec_from_json(spec_to_json(model)), model)

    def test_one_based_indexes(self):
        spec = spec_from_json(
            {
                "type": "qvar",
                "p": 2,
                "d": 2,
                "coeff": [
                    {"lag": 2, "row": 1, "col": 2, "form": "constant", "params": [0.4]}
                ],
            }
        )
        self.assertEqual(spec.coeff[1][0][1], CoefficientFunction.constant(0.4))
        self.assertTrue(spec.coeff[0][0][1].is_zero)
        self.assertTrue(spec.intercept[0].is_zero)

    def test_errors(self):
        for data in (
            "{not json",
            [1, 2],
            {"type": "arma"},
            {"type": "qvar", "d": 2},
            {"type": "qvar", "p": 1, "d": 2, "coeff": [{"lag": 2, "row": 1, "col": 1}]},
            {"type": "qvar", "p": 1, "d": 2, "intercept": [{"row": 3}]},
            {"type": "var1", "A": [[0.5, 0.1]]},
        ):
            with self.assertRaises(InvalidArgumentError, msg=repr(data)):
                spec_from_json(data)

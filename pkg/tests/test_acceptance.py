"""
Monte-Carlo checks of the estimators against closed-form truths.

These take minutes; run them with ``manage.py test --tag=slow``.
"""
import math
import time

import numpy as np
from django.test import SimpleTestCase, tag

from quantile_spectra import coherency_covariance, default_bandwidth, quantile_coherency
from quantile_spectra.experiments import (
    coherency_estimate,
    coverage_study,
    estimate_spectrum,
    pointwise_band,
    replication_seeds,
    rmse_study,
)
from quantile_spectra.oracle import (
    GaussianProcessSpec,
    gaussian_quantile_coherency,
    gaussian_quantile_spectrum,
)
from quantile_spectra.pipeline import RunConfig, run_pipeline
from quantile_spectra.simulation import benchmark_qvar, simulate_qvar, simulate_toy
from tests.utils import correlated_noise, random_series

N = 2048
S = N // 8
OMEGA = 2 * math.pi * S / N


def mean_interior_coherency(series, levels, k1=0, k2=0):
    """Average of Re R^{12} over the Fourier frequencies strictly inside (0, pi)."""
    coherency = quantile_coherency(estimate_spectrum(series, levels)).coherency
    return float(coherency[0, 1, k1, k2, 1:-1].real.mean())


def rho_seed(rho):
    return int(round(rho * 10))


def real_band(kind, levels, k1, k2):
    def interval(series):
        band = pointwise_band(series, levels, S, kind)
        return band.lo_re[0, 1, k1, k2, 0], band.hi_re[0, 1, k1, k2, 0]

    return interval


@tag("slow")
class TestWhiteNoiseTruth(SimpleTestCase):
    def test_median_coherency(self):
        n = 8192
        for rho in (0.0, 0.3, 0.6):
            estimates = [
                mean_interior_coherency(correlated_noise(rho, n, seed), [0.5])
                for seed in replication_seeds(rho_seed(rho), 50)
            ]
            self.assertAlmostEqual(
                float(np.mean(estimates)), 2 * math.asin(rho) / math.pi, delta=0.03
            )

    def test_variance_estimate(self):
        """The plug-in Cov(L12, L12) matches the spread of the estimates."""
        spec = GaussianProcessSpec.white_noise(0.6)
        estimates, variances = [], []
        for seed in replication_seeds(5, 500):
            spectrum = estimate_spectrum(correlated_noise(0.6, N, seed), [0.5])
            estimates.append(
                quantile_coherency(spectrum.at_fourier([S])).coherency[0, 1, 0, 0, 0]
            )
            c_same, _ = coherency_covariance(spectrum, 0, 1, 0, 0, at=[S])
            variances.append(c_same.real)
        estimates = np.array(estimates)
        empirical = estimates.real.var() + estimates.imag.var()
        ratio = np.mean(variances) / empirical
        self.assertGreaterEqual(ratio, 0.7)
        self.assertLessEqual(ratio, 1.4)
        truth = gaussian_quantile_coherency(spec, OMEGA, 0.5, 0.5, 0, 1).real
        self.assertAlmostEqual(estimates.real.mean(), truth, delta=0.02)


@tag("slow")
class TestToyProcesses(SimpleTestCase):
    def test_square_has_no_central_dependence(self):
        series = simulate_toy("eps_square_now", 8192, seed=1)
        for levels, k1, k2 in (([0.25, 0.5], 1, 0), ([0.5], 0, 0), ([0.5, 0.75], 0, 1)):
            self.assertAlmostEqual(
                mean_interior_coherency(series, levels, k1, k2), 0.0, delta=0.05
            )

    def test_square_has_tail_dependence(self):
        """P(e <= q(0.1), e**2 <= q(0.9)) = 0.05, so the coherency is -4/9."""
        series = simulate_toy("eps_square_now", 8192, seed=2)
        self.assertAlmostEqual(
            mean_interior_coherency(series, [0.1, 0.9], 0, 1), -4 / 9, delta=0.05
        )

    def test_independent_noise_covers_zero(self):
        result = coverage_study(
            lambda seed: simulate_toy("independent_noise", N, seed),
            real_band("coherency", [0.5], 0, 0),
            0.0,
            replications=200,
            seed=3,
        )
        self.assertGreaterEqual(result.coverage, 0.91)
        self.assertLessEqual(result.coverage, 0.99)


@tag("slow")
class TestCoverage(SimpleTestCase):
    spec = GaussianProcessSpec.white_noise(0.6)
    levels = [0.25, 0.75]

    def simulate(self, seed):
        return correlated_noise(0.6, N, seed)

    def test_spectrum_band(self):
        truth = gaussian_quantile_spectrum(self.spec, OMEGA, 0.25, 0.75, 0, 1).real
        result = coverage_study(
            self.simulate, real_band("spectrum", self.levels, 0, 1), truth, 200, 4
        )
        self.assertGreaterEqual(result.coverage, 0.91)
        self.assertLessEqual(result.coverage, 0.99)

    def test_coherency_band(self):
        truth = gaussian_quantile_coherency(self.spec, OMEGA, 0.25, 0.75, 0, 1).real
        result = coverage_study(
            self.simulate, real_band("coherency", self.levels, 0, 1), truth, 200, 4
        )
        self.assertGreaterEqual(result.coverage, 0.91)
        self.assertLessEqual(result.coverage, 0.99)

    def test_median_coherency_band(self):
        result = coverage_study(
            self.simulate,
            real_band("coherency", [0.5], 0, 0),
            2 * math.asin(0.6) / math.pi,
            200,
            6,
        )
        self.assertGreaterEqual(result.coverage, 0.91)
        self.assertLessEqual(result.coverage, 0.99)


@tag("slow")
class TestQVARConsistency(SimpleTestCase):
    levels = [0.05, 0.95]

    def test_rmse_decreases(self):
        spec = benchmark_qvar(1)
        long_n = 2**18
        long = simulate_qvar(spec, long_n, seed=1000)
        truth = coherency_estimate(
            long, self.levels, long_n // 8, 0, 1, b_n=default_bandwidth(long_n)
        )

        errors = []
        for n in (512, 2048, 8192):
            errors.append(
                rmse_study(
                    lambda seed, n=n: simulate_qvar(spec, n, seed=seed),
                    lambda series: coherency_estimate(
                        series, self.levels, series.n // 8, 0, 1
                    ),
                    truth,
                    replications=30,
                    seed=n,
                )
            )
        self.assertGreater(errors[0], errors[1])
        self.assertGreater(errors[1], errors[2])

        # The lag one feedback flips the sign of the real part between low
        # frequencies and frequencies near pi.
        low = coherency_estimate(long, self.levels, long_n // 32, 0, 1)
        high = coherency_estimate(long, self.levels, long_n // 2 - long_n // 32, 0, 1)
        self.assertLess(low * high, 0)

    def test_no_dependence_at_the_median(self):
        series = simulate_qvar(benchmark_qvar(1), 8192, seed=17)
        coherency = quantile_coherency(estimate_spectrum(series, [0.5])).coherency
        self.assertLess(np.abs(coherency[0, 1, 0, 0, 1:].real).mean(), 0.08)


@tag("slow")
class TestPerformance(SimpleTestCase):
    def test_full_pipeline(self):
        config = RunConfig(
            series=random_series(2**16, 2, seed=1),
            quantiles=[0.05, 0.25, 0.5, 0.75, 0.95],
            workers=1,
        )
        started = time.perf_counter()
        result = run_pipeline(config)
        elapsed = time.perf_counter() - started
        self.assertIsNotNone(result.coherency_band)
        self.assertLess(elapsed, 5.0)

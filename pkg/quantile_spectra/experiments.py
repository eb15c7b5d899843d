"""
Monte-Carlo studies of the estimators: empirical coverage of pointwise
confidence bands and root mean squared errors over seeded replications.

Replication seeds are spawned from a single ``numpy.random.SeedSequence`` so a
study is reproducible from its seed alone.

"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from quantile_spectra.conf import app_settings
from quantile_spectra.core import KernelSpec
from quantile_spectra.derived import quantile_coherency
from quantile_spectra.inference import ci_coherency, ci_spectrum
from quantile_spectra.periodogram import ccr_periodogram_matrix, quantile_dft
from quantile_spectra.ranks import clip_matrix, rank_matrix
from quantile_spectra.smoother import default_bandwidth, smooth_periodogram

__all__ = [
    "CoverageResult",
    "coherency_estimate",
    "coverage_study",
    "estimate_spectrum",
    "pointwise_band",
    "replication_seeds",
    "rmse_study",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoverageResult:
    coverage: float
    hits: int
    replications: int
    lower: np.ndarray
    upper: np.ndarray


def replication_seeds(seed, replications):
    """Independent 64-bit seeds, one per replication."""
    states = np.random.SeedSequence(seed).generate_state(replications, np.uint64)
    return [int(state) for state in states]


def _map(function, seeds, workers):
    if workers is None:
        workers = app_settings.WORKERS
    if workers == 1:
        return [function(seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=None if workers == -1 else workers) as executor:
        return list(executor.map(function, seeds))


def estimate_spectrum(series, levels, b_n=None, kernel=None):
    """The normalized smoothed spectrum on the half Fourier grid."""
    kernel = KernelSpec.from_name(kernel or app_settings.KERNEL)
    if b_n is None:
        b_n = default_bandwidth(series.n)
    clipped = clip_matrix(rank_matrix(series), levels)
    perio = ccr_periodogram_matrix(quantile_dft(clipped, workers=1))
    return smooth_periodogram(perio, kernel, b_n, workers=1).normalize()


def pointwise_band(
    series, levels, s, kind="spectrum", alpha=None, b_n=None, kernel=None
):
    """The confidence band of ``kind`` (spectrum or coherency) at Fourier index s."""
    spectrum = estimate_spectrum(series, levels, b_n, kernel)
    if kind == "spectrum":
        return ci_spectrum(spectrum, alpha, at=[s], workers=1)
    return ci_coherency(spectrum, alpha, at=[s], workers=1)


def coverage_study(simulate, interval, truth, replications, seed, workers=None):
    """
    Empirical coverage of ``truth`` by ``interval(simulate(seed_r))`` over
    the replications.

    ``simulate`` maps a seed to a ``TimeSeriesMatrix`` and ``interval`` maps a
    series to a ``(lower, upper)`` pair.
    """

    def replicate(replication_seed):
        return interval(simulate(replication_seed))

    bounds = _map(replicate, replication_seeds(seed, replications), workers)
    lower = np.array([bound[0] for bound in bounds], dtype=float)
    upper = np.array([bound[1] for bound in bounds], dtype=float)
    hits = int(np.sum((lower <= truth) & (truth <= upper)))
    coverage = hits / replications
    logger.debug("Coverage %d/%d.", hits, replications)
    return CoverageResult(coverage, hits, replications, lower, upper)


def rmse_study(simulate, estimate, truth, replications, seed, workers=None):
    """Root mean squared error of ``estimate(simulate(seed_r))`` around ``truth``."""

    def replicate(replication_seed):
        return estimate(simulate(replication_seed))

    estimates = np.array(
        _map(replicate, replication_seeds(seed, replications), workers), dtype=float
    )
    return float(np.sqrt(np.mean((estimates - truth) ** 2)))


def coherency_estimate(series, levels, s, k1, k2, j1=0, j2=1, b_n=None):
    """Real part of the estimated quantile coherency at Fourier index s."""
    spectrum = estimate_spectrum(series, levels, b_n).at_fourier([s])
    return float(quantile_coherency(spectrum).coherency[j1, j2, k1, k2, 0].real)

import math
import os
import tempfile

import numpy as np

from quantile_spectra import (
    KernelSpec,
    SmoothedSpectrum,
    TimeSeriesMatrix,
    ccr_periodogram_matrix,
    clip_matrix,
    quantile_dft,
    rank_matrix,
    smooth_periodogram,
)
from quantile_spectra.simulation import VARModel, simulate_var1

WHITE_NOISE = VARModel(((0.0, 0.0), (0.0, 0.0)))


def random_series(n, d, seed=0):
    """Standard normal entries, independent across rows and columns."""
    return TimeSeriesMatrix(np.random.default_rng(seed).standard_normal((n, d)))


def correlated_noise(rho, n, seed):
    """Bivariate Gaussian white noise with correlation rho."""
    noise = simulate_var1(WHITE_NOISE, n, burn_in=0, seed=seed).values
    mixed = np.column_stack(
        [noise[:, 0], rho * noise[:, 0] + math.sqrt(1 - rho**2) * noise[:, 1]]
    )
    return TimeSeriesMatrix(mixed)


def periodogram(series, levels):
    clipped = clip_matrix(rank_matrix(series), levels)
    return ccr_periodogram_matrix(quantile_dft(clipped))


def smoothed(series, levels, b_n, kernel="epanechnikov", eval_omegas=None):
    return smooth_periodogram(periodogram(series, levels), kernel, b_n, eval_omegas)


def synthetic_spectrum(values, levels, n=64, b_n=0.3, normalized=True):
    """A spectrum with given values on the Fourier indexes 0, ..., E - 1."""
    values = np.asarray(values, dtype=complex)
    indexes = np.arange(values.shape[-1])
    return SmoothedSpectrum(
        values=values,
        levels=tuple(levels),
        kernel=KernelSpec.from_name("epanechnikov"),
        bandwidth=b_n,
        n=n,
        normalizers=np.ones(len(indexes)),
        eval_omegas=2 * math.pi * indexes / n,
        fourier_indexes=indexes,
        normalized=normalized,
    )


class TempDirMixin:
    def setUp(self):
        super().setUp()
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = directory.name

    def write(self, name, content):
        path = os.path.join(self.directory, name)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        return path

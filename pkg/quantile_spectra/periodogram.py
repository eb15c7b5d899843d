"""
Quantile discrete Fourier transforms and the rank-based copula
cross-periodogram (CCR-periodogram).

Only the Fourier indices s = 0, ..., n - 1 are stored. Values at negative
frequencies follow from ``d(-omega) = conj(d(omega))``.

"""
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from quantile_spectra.conf import app_settings

__all__ = [
    "CCRPeriodogram",
    "QuantileDFT",
    "ccr_periodogram_matrix",
    "quantile_dft",
]


@dataclass(frozen=True, eq=False)
class QuantileDFT:
    """``coeffs[j, k, s]`` is the DFT of the clipped series (j, tau_k) at s."""

    coeffs: np.ndarray
    levels: tuple

    @property
    def d(self):
        return self.coeffs.shape[0]

    @property
    def K(self):
        return self.coeffs.shape[1]

    @property
    def n(self):
        return self.coeffs.shape[2]


@dataclass(frozen=True, eq=False)
class CCRPeriodogram:
    values: np.ndarray
    levels: tuple

    @property
    def d(self):
        return self.values.shape[0]

    @property
    def K(self):
        return self.values.shape[2]

    @property
    def n(self):
        return self.values.shape[4]

    def __add__(self, other):
        if not isinstance(other, CCRPeriodogram):
            return NotImplemented
        return CCRPeriodogram(self.values + other.values, self.levels)


def quantile_dft(clipped, workers=None):
    """
    Fourier transform every clipped series over time.

    No tapering or padding: the transform length is n itself.
    """
    if workers is None:
        workers = app_settings.WORKERS
    bits = np.asarray(clipped.bits, dtype=float)
    coeffs = scipy.fft.fft(bits, axis=0, workers=workers)
    # The zero frequency is the exact count of ones; a constant indicator has
    # no energy elsewhere.
    coeffs[0] = bits.sum(axis=0)
    constant = np.all(bits == bits[0], axis=0)
    coeffs[1:, constant] = 0
    # (t, j, k) -> (j, k, s)
    coeffs = np.ascontiguousarray(np.moveaxis(coeffs, 0, -1))
    return QuantileDFT(coeffs, tuple(clipped.levels))


def ccr_periodogram_matrix(dfts):
    """
    The matrix of CCR-periodograms.

    ``values[j1, j2, k1, k2, s] = d[j1, k1, s] * conj(d[j2, k2, s]) / (2*pi*n)``
    """
    coeffs = dfts.coeffs
    n = dfts.n
    values = (
        coeffs[:, np.newaxis, :, np.newaxis, :]
        * np.conj(coeffs)[np.newaxis, :, np.newaxis, :, :]
        / (2 * math.pi * n)
    )
    return CCRPeriodogram(values, dfts.levels)

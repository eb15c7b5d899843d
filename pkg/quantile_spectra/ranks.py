"""
Rank transform and clipped indicator series.

Ties get the maximum rank of their group, so ``ranks / n`` is the empirical
distribution function evaluated at the data.

"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from quantile_spectra.conf import app_settings
from quantile_spectra.core import TimeSeriesMatrix, validate_quantile_grid
from quantile_spectra.exceptions import InvalidArgumentError, InvalidDataError

__all__ = [
    "ClippedTensor",
    "RankMatrix",
    "clip_matrix",
    "clip_series",
    "max_ranks",
    "rank_matrix",
]


@dataclass(frozen=True, eq=False)
class RankMatrix:
    ranks: np.ndarray
    names: tuple = ()

    @property
    def n(self):
        return self.ranks.shape[0]

    @property
    def d(self):
        return self.ranks.shape[1]


@dataclass(frozen=True, eq=False)
class ClippedTensor:
    """Indicators ``I{R_{t,j} <= n*tau_k}`` indexed ``(t, j, k)``."""

    bits: np.ndarray
    levels: tuple

    @property
    def n(self):
        return self.bits.shape[0]

    @property
    def d(self):
        return self.bits.shape[1]

    @property
    def K(self):
        return self.bits.shape[2]


def max_ranks(column):
    """Return ``#{s : x_s <= x_t}`` for every t, ties sharing the maximum rank."""
    column = np.asarray(column, dtype=float)
    if column.ndim != 1:
        raise InvalidDataError("max_ranks() expects a one dimensional column.")
    if not np.all(np.isfinite(column)):
        raise InvalidDataError(
            "Non-finite entry at position %d." % np.argmax(~np.isfinite(column))
        )
    return stats.rankdata(column, method="max").astype(np.int64)


def rank_matrix(series):
    """Column-wise maximum ranks of a ``TimeSeriesMatrix``."""
    if not isinstance(series, TimeSeriesMatrix):
        series = TimeSeriesMatrix(series)
    ranks = stats.rankdata(series.values, method="max", axis=0).astype(np.int64)
    ranks.flags.writeable = False
    return RankMatrix(ranks, series.names)


def _threshold(n, tau, tolerance):
    # n*tau for levels such as 0.05 can land one ulp below an integer.
    return n * tau + tolerance * n


def clip_series(ranks, n, tau, tolerance=None):
    """Return the 0/1 series ``I{ranks[t] <= n*tau}``."""
    if not 0.0 < tau < 1.0:
        raise InvalidArgumentError("tau must be strictly between 0 and 1.")
    if tolerance is None:
        tolerance = app_settings.CLIP_TOLERANCE
    ranks = np.asarray(ranks)
    return (ranks <= _threshold(n, tau, tolerance)).astype(np.int8)


def clip_matrix(ranks, levels, tolerance=None):
    """
    Clip every column of a ``RankMatrix`` at every quantile level.

    Returns a ``ClippedTensor`` whose bits are monotone in the level index.
    """
    grid = validate_quantile_grid(levels)
    if tolerance is None:
        tolerance = app_settings.CLIP_TOLERANCE
    n = ranks.n
    thresholds = _threshold(n, grid.levels, tolerance)
    bits = (ranks.ranks[:, :, np.newaxis] <= thresholds).astype(np.int8)
    bits.flags.writeable = False
    return ClippedTensor(bits, tuple(grid))

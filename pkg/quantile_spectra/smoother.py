"""
Frequency-domain kernel smoothing of the CCR-periodogram.

The smoothed estimator at a Fourier frequency is

    G(omega_k) = (2*pi/n) * sum_{s=1}^{n-1} W_n(omega_k - omega_s) I(omega_s)

with the periodized kernel ``W_n``. The s = 0 ordinate is always excluded,
including when omega_k is 0 itself; such outputs are flagged on the result.

On the Fourier grid the sum is a circular convolution over the Fourier index
and is evaluated by FFT. Any other evaluation frequency uses an explicit
weight matrix summed over ascending s.

"""
import functools
import logging
import math
import warnings
from collections import namedtuple
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import scipy.fft
from scipy import sparse

from quantile_spectra.conf import app_settings
from quantile_spectra.core import FrequencyGrid, KernelSpec
from quantile_spectra.exceptions import (
    BandwidthError,
    DegenerateNormalizerWarning,
    InvalidArgumentError,
)

__all__ = [
    "Normalizer",
    "SmoothedSpectrum",
    "SmoothingPlan",
    "default_bandwidth",
    "smooth_periodogram",
    "smoothing_normalizer",
    "smoothing_plan",
    "wrapped_kernel_weights",
]

logger = logging.getLogger(__name__)

Normalizer = namedtuple("Normalizer", ["value", "degenerate"])


def default_bandwidth(n, constant=None, exponent=None):
    """The "auto" bandwidth ``constant * n**exponent`` (0.4 * n**(-1/4))."""
    if constant is None:
        constant = app_settings.BANDWIDTH_CONSTANT
    if exponent is None:
        exponent = app_settings.BANDWIDTH_EXPONENT
    return min(1.0, constant * n**exponent)


def check_bandwidth(b_n):
    if not 0.0 < b_n <= 1.0:
        raise BandwidthError(
            "The bandwidth must satisfy 0 < b_n <= 1, got %r." % b_n
        )
    return float(b_n)


def wrapped_kernel_weights(kernel, b_n, u):
    """
    The periodized kernel ``W_n(u) = sum_j W((u + 2*pi*j) / b_n) / b_n``.

    ``u`` is first reduced to [-pi, pi); since W is supported on [-pi, pi]
    and b_n <= 1 only the wraps j in {-1, 0, 1} can contribute.
    """
    kernel = KernelSpec.from_name(kernel)
    b_n = check_bandwidth(b_n)
    u = np.asarray(u, dtype=float)
    reduced = np.mod(u + math.pi, 2 * math.pi) - math.pi
    total = sum(kernel((reduced + 2 * math.pi * j) / b_n) for j in (-1, 0, 1))
    return total / b_n


class SmoothingPlan:
    """
    Weights of a (kernel, bandwidth, n) triple shared by every smoothing and
    covariance computation at that sample size.

    ``circular[m]`` holds ``W_n(2*pi*m/n)``; the FFTs of the weights and of
    the squared weights are precomputed.
    """

    def __init__(self, kernel, b_n, n):
        self.kernel = KernelSpec.from_name(kernel)
        self.b_n = check_bandwidth(b_n)
        self.n = int(n)

        circular = wrapped_kernel_weights(
            self.kernel, self.b_n, 2 * math.pi * np.arange(self.n) / self.n
        )
        circular.flags.writeable = False
        self.circular = circular
        self.weights_fft = scipy.fft.fft(circular)
        self.squared_fft = scipy.fft.fft(circular**2)
        self._pair_matrix = None

    def normalizers(self, indexes):
        """``W_n^k`` for Fourier indexes k; the s = 0 term is left out."""
        indexes = np.mod(np.asarray(indexes, dtype=np.int64), self.n)
        total = self.circular.sum()
        return 2 * math.pi / self.n * (total - self.circular[indexes])

    def convolve(self, values, weights_fft, workers):
        """Circular convolution over the last axis with s = 0 excluded."""
        values = np.array(values, dtype=complex, copy=True)
        values[..., 0] = 0
        spectrum = scipy.fft.fft(values, axis=-1, workers=workers)
        return scipy.fft.ifft(spectrum * weights_fft, axis=-1, workers=workers)

    @property
    def pair_matrix(self):
        """
        Sparse ``(n, n)`` matrix of ``W_n(omega_k - omega_s) W_n(omega_k + omega_s)``
        over s = 1, ..., n - 1.

        Only rows k near 0 or near pi have entries, where the windows around k
        and -k overlap.
        """
        if self._pair_matrix is None:
            n = self.n
            offsets = np.flatnonzero(self.circular)
            # Row k pairs the offsets m = k - s and m' = k + s, so 2k = m + m' mod n.
            first, second = np.meshgrid(offsets, offsets, indexing="ij")
            first, second = first.ravel(), second.ravel()
            total = np.mod(first + second, n)
            if n % 2:
                rows = [np.mod(total * ((n + 1) // 2), n)]
                pairs = [(first, second)]
            else:
                even = total % 2 == 0
                first, second, half = first[even], second[even], total[even] // 2
                rows = [half, half + n // 2]
                pairs = [(first, second)] * 2

            all_rows, all_columns, all_values = [], [], []
            for k, (m, partner) in zip(rows, pairs):
                s = np.mod(k - m, n)
                keep = s != 0
                all_rows.append(k[keep])
                all_columns.append(s[keep])
                all_values.append(self.circular[m[keep]] * self.circular[partner[keep]])
            self._pair_matrix = sparse.csr_matrix(
                (
                    np.concatenate(all_values),
                    (np.concatenate(all_rows), np.concatenate(all_columns)),
                ),
                shape=(n, n),
            )
        return self._pair_matrix


@functools.lru_cache(maxsize=8)
def smoothing_plan(kernel, b_n, n):
    return SmoothingPlan(kernel, b_n, n)


def smoothing_normalizer(kernel, b_n, n, k, floor=None):
    """
    ``W_n^k = (2*pi/n) * sum_{s=1}^{n-1} W_n(omega_k - omega_s)``.

    The second field of the result flags a degenerate (near zero) value.
    """
    if floor is None:
        floor = app_settings.NORMALIZER_FLOOR
    s = np.arange(1, n)
    weights = wrapped_kernel_weights(kernel, b_n, 2 * math.pi * (k - s) / n)
    value = float(2 * math.pi / n * weights.sum())
    return Normalizer(value, value < floor)


@dataclass(frozen=True, eq=False)
class SmoothedSpectrum:
    """
    Smoothed CCR-periodograms indexed ``(j1, j2, k1, k2, e)`` over the
    evaluation frequencies ``eval_omegas``.

    ``fourier_indexes`` is set when every evaluation frequency is a Fourier
    frequency. ``normalized`` marks values already divided by ``normalizers``.
    """

    values: np.ndarray
    levels: tuple
    kernel: KernelSpec
    bandwidth: float
    n: int
    normalizers: np.ndarray
    eval_omegas: np.ndarray
    fourier_indexes: Optional[np.ndarray] = None
    normalized: bool = False
    zero_frequency: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.zero_frequency is None:
            object.__setattr__(self, "zero_frequency", self.eval_omegas == 0.0)

    @property
    def d(self):
        return self.values.shape[0]

    @property
    def K(self):
        return self.values.shape[2]

    def normalize(self):
        """Return ``G / W_n^k``, the estimator the confidence bands are built on."""
        if self.normalized:
            return self
        return replace(self, values=self.values / self.normalizers, normalized=True)

    def full_grid(self):
        """
        Values on s = 0, ..., n - 1, rebuilt by conjugation from s <= n/2.

        The spectrum has to cover the Fourier indexes 0, ..., floor(n/2).
        """
        if self.fourier_indexes is None:
            raise InvalidArgumentError(
                "The spectrum was not evaluated on Fourier frequencies."
            )
        position = {int(s): i for i, s in enumerate(self.fourier_indexes)}
        missing = [s for s in range(self.n // 2 + 1) if s not in position]
        if missing:
            raise InvalidArgumentError(
                "The spectrum does not cover the Fourier indexes 0..%d (missing %d)."
                % (self.n // 2, missing[0])
            )
        half = self.values[..., [position[s] for s in range(self.n // 2 + 1)]]
        mirrored = np.conj(half[..., 1 : (self.n + 1) // 2][..., ::-1])
        return np.concatenate([half, mirrored], axis=-1)

    def at_fourier(self, indexes):
        """The spectrum restricted to the given Fourier indexes (any of 0..n-1)."""
        indexes = np.mod(np.atleast_1d(np.asarray(indexes, dtype=np.int64)), self.n)
        plan = smoothing_plan(self.kernel, self.bandwidth, self.n)
        normalizers = plan.normalizers(indexes)
        values = self.full_grid()[..., indexes]
        return replace(
            self,
            values=values,
            normalizers=normalizers,
            eval_omegas=2 * math.pi * indexes / self.n,
            fourier_indexes=indexes,
            zero_frequency=None,
        )


def _resolve_evaluation(n, eval_omegas):
    """Return (omegas, fourier indexes or None)."""
    if eval_omegas is None:
        indexes = np.arange(n // 2 + 1)
        return 2 * math.pi * indexes / n, indexes
    if isinstance(eval_omegas, FrequencyGrid):
        return np.asarray(eval_omegas.omegas), np.asarray(eval_omegas.indexes)

    omegas = np.atleast_1d(np.asarray(eval_omegas, dtype=float))
    scaled = omegas * n / (2 * math.pi)
    indexes = np.rint(scaled)
    if np.all(np.abs(scaled - indexes) < 1e-9) and np.all(
        (indexes >= 0) & (indexes < n)
    ):
        indexes = indexes.astype(np.int64)
        return 2 * math.pi * indexes / n, indexes
    return omegas, None


def smooth_periodogram(perio, kernel, b_n, eval_omegas=None, workers=None, floor=None):
    """
    Smooth the CCR-periodogram with the periodized kernel.

    ``eval_omegas`` defaults to the Fourier frequencies s = 0, ..., floor(n/2);
    a ``FrequencyGrid`` or arbitrary frequencies (radians) are accepted.
    """
    kernel = KernelSpec.from_name(kernel)
    b_n = check_bandwidth(b_n)
    if workers is None:
        workers = app_settings.WORKERS
    if floor is None:
        floor = app_settings.NORMALIZER_FLOOR

    n, d, K = perio.n, perio.d, perio.K
    omegas, indexes = _resolve_evaluation(n, eval_omegas)
    plan = smoothing_plan(kernel, b_n, n)

    # (j1, j2, k1, k2, s) -> (p1, p2, s) with p = j*K + k.
    P = d * K
    cells = np.moveaxis(perio.values, 1, 2).reshape(P, P, n)
    upper = np.triu_indices(P)
    rows = cells[upper]

    if indexes is not None:
        smoothed = plan.convolve(rows, plan.weights_fft, workers)[:, indexes]
        normalizers = plan.normalizers(indexes)
    else:
        s = np.arange(1, n)
        weights = wrapped_kernel_weights(
            kernel, b_n, omegas[:, np.newaxis] - 2 * math.pi * s / n
        )
        smoothed = rows[:, 1:] @ weights.T
        normalizers = 2 * math.pi / n * weights.sum(axis=1)
    smoothed *= 2 * math.pi / n

    result = np.empty((P, P, len(omegas)), dtype=complex)
    result[upper] = smoothed
    result[upper[1], upper[0]] = np.conj(smoothed)
    diagonal = np.arange(P)
    result[diagonal, diagonal] = result[diagonal, diagonal].real

    degenerate = normalizers < floor
    if np.any(degenerate):
        message = "Degenerate smoothing normalizer (< %g) at %d frequencies." % (
            floor,
            int(degenerate.sum()),
        )
        logger.warning(message)
        warnings.warn(message, DegenerateNormalizerWarning, stacklevel=2)
    if np.any(omegas == 0.0):
        logger.info("The estimate at omega = 0 excludes the s = 0 ordinate.")

    values = np.moveaxis(result.reshape(d, K, d, K, len(omegas)), 2, 1)
    return SmoothedSpectrum(
        values=np.ascontiguousarray(values),
        levels=tuple(perio.levels),
        kernel=kernel,
        bandwidth=b_n,
        n=n,
        normalizers=normalizers,
        eval_omegas=omegas,
        fourier_indexes=indexes,
    )

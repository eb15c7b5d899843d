"""
Pointwise confidence bands for the quantile spectrum and quantile coherency.

Both bands are built from plug-in estimates of the covariances of the
normalized estimator ``G~ = G / W_n^k``::

    Cov(H^{ab}, H^{cd})(k) = (2*pi / (n * W_n^k))**2 * [
        sum_s W_n(omega_k - omega_s)**2 G~^{ac}(omega_s) G~^{bd}(-omega_s)
      + sum_s W_n(omega_k - omega_s) W_n(omega_k + omega_s)
              G~^{ad}(omega_s) G~^{bc}(-omega_s)
    ]

with s running over 1, ..., n - 1. Values at negative frequencies are
conjugates. The coherency band propagates these through the linearization of
``G~^{12} / sqrt(G~^{11} G~^{22})``.

Bias is not corrected: the default bandwidth undersmooths.

"""
import logging
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from quantile_spectra.conf import app_settings
from quantile_spectra.derived import diagonal_spectra
from quantile_spectra.exceptions import (
    DegenerateDenominatorError,
    InvalidLevelError,
    VarianceClampWarning,
)
from quantile_spectra.smoother import smoothing_plan

__all__ = [
    "ConfidenceBand",
    "ci_coherency",
    "ci_spectrum",
    "coherency_covariance",
    "normal_multiplier",
    "smoothed_covariance",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConfidenceBand:
    """
    Centers and bounds of the real and imaginary parts, indexed
    ``(j1, j2, k1, k2, e)`` over the Fourier indexes ``fourier_indexes``.
    """

    center_re: np.ndarray
    lo_re: np.ndarray
    hi_re: np.ndarray
    center_im: np.ndarray
    lo_im: np.ndarray
    hi_im: np.ndarray
    alpha: float
    kind: str
    fourier_indexes: np.ndarray
    omegas: np.ndarray


def normal_multiplier(alpha):
    """The two-sided standard normal quantile ``Phi^{-1}(1 - alpha/2)``."""
    if not 0.0 < alpha < 1.0:
        raise InvalidLevelError(
            "alpha must be strictly between 0 and 1, got %r." % alpha
        )
    return float(stats.norm.ppf(1.0 - alpha / 2.0))


def _workers(workers):
    if workers is None:
        workers = app_settings.WORKERS
    if workers == -1:
        workers = os.cpu_count() or 1
    return max(1, int(workers))


class _CovarianceContext:
    """
    The full-grid normalized spectrum together with the weights of its
    smoothing plan, evaluated at the Fourier indexes ``at``.

    The prefactor is ``(2*pi / (n * W_n^k))**2``: both smoothed factors of a
    covariance carry one power, which puts the sums on the scale of the
    normalized estimator.
    """

    def __init__(self, spec, at=None, fft_workers=1):
        spec = spec.normalize()
        self.spec = spec
        self.grid = spec.full_grid()
        self.n = spec.n
        self.plan = smoothing_plan(spec.kernel, spec.bandwidth, spec.n)
        if at is None:
            at = spec.fourier_indexes
        self.at = np.mod(np.atleast_1d(np.asarray(at, dtype=np.int64)), self.n)
        normalizers = self.plan.normalizers(self.at)
        self.prefactor = (2 * math.pi / (self.n * normalizers)) ** 2
        self.pairs = self.plan.pair_matrix[self.at]
        self.fft_workers = fft_workers

    def values(self, first, second):
        """``G~[j_first, j_second, k_first, k_second]`` at the indexes ``at``."""
        (j1, k1), (j2, k2) = first, second
        return self.grid[j1, j2, k1, k2][..., self.at]

    def covariance(self, a, b, c, d):
        """Cov(H^{ab}, H^{cd}) for arrays of (component, level) points."""
        grid = self.grid
        ac = grid[a[0], c[0], a[1], c[1]]
        bd = grid[b[0], d[0], b[1], d[1]]
        ad = grid[a[0], d[0], a[1], d[1]]
        bc = grid[b[0], c[0], b[1], c[1]]

        first = self.plan.convolve(
            ac * np.conj(bd), self.plan.squared_fft, self.fft_workers
        )[..., self.at]
        products = ad * np.conj(bc)
        products[..., 0] = 0
        second = (self.pairs @ np.atleast_2d(products).T).T
        second = second.reshape(first.shape)
        return self.prefactor * (first + second)


def _points(point):
    j, k = point
    return np.atleast_1d(np.asarray(j)), np.atleast_1d(np.asarray(k))


def smoothed_covariance(spec_norm, a, b, c, d, at=None):
    """
    Estimate Cov(H^{ab}, H^{cd}) at the Fourier indexes ``at``.

    ``a``, ``b``, ``c`` and ``d`` are (component, quantile index) pairs. The
    kernel and bandwidth are those the spectrum was smoothed with; it has to
    cover the Fourier indexes 0, ..., floor(n/2).
    """
    context = _CovarianceContext(spec_norm, at)
    result = context.covariance(_points(a), _points(b), _points(c), _points(d))
    return result[0]


def _clamped_sd(variance, tolerance, label):
    lowest = variance.min(initial=0.0)
    if lowest < -tolerance:
        message = "Clamped a negative %s variance estimate of %g to 0." % (
            label,
            lowest,
        )
        logger.warning(message)
        warnings.warn(message, VarianceClampWarning, stacklevel=3)
    return np.sqrt(np.maximum(variance, 0.0))


def _upper_cells(d, K):
    P = d * K
    p1, p2 = np.triu_indices(P)
    return (p1 // K, p1 % K), (p2 // K, p2 % K)


def _chunks(count, size):
    return [slice(start, min(start + size, count)) for start in range(0, count, size)]


def _run_chunks(function, count, workers, chunk_size):
    chunks = _chunks(count, chunk_size)
    if workers == 1 or len(chunks) == 1:
        return [function(chunk) for chunk in chunks]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, chunks))


def _assemble(spec, first, second, upper_values, conjugate_lower):
    """Scatter per-cell rows into ``(d, d, K, K, E)`` arrays."""
    d, K = spec.d, spec.K
    shape = (d, d, K, K, upper_values.shape[-1])
    result = np.empty(shape, dtype=upper_values.dtype)
    (j1, k1), (j2, k2) = first, second
    result[j1, j2, k1, k2] = upper_values
    result[j2, j1, k2, k1] = np.conj(upper_values) if conjugate_lower else upper_values
    return result


def _band(spec, context, centers, re_sd, im_sd, multiplier, alpha, kind):
    first, second = _upper_cells(spec.d, spec.K)
    center = _assemble(spec, first, second, centers, True)
    re_half = _assemble(spec, first, second, multiplier * re_sd, False)
    im_half = _assemble(spec, first, second, multiplier * im_sd, False)
    center_re, center_im = center.real.copy(), center.imag.copy()
    return ConfidenceBand(
        center_re=center_re,
        lo_re=center_re - re_half,
        hi_re=center_re + re_half,
        center_im=center_im,
        lo_im=center_im - im_half,
        hi_im=center_im + im_half,
        alpha=alpha,
        kind=kind,
        fourier_indexes=context.at,
        omegas=2 * math.pi * context.at / spec.n,
    )


def ci_spectrum(spec, alpha=None, at=None, workers=None, chunk_size=None):
    """
    Pointwise (1 - alpha) bands for the real and imaginary parts of the
    quantile spectrum, centered at the normalized estimator.

    For j1 = j2 and tau1 = tau2 the estimator is real and the imaginary band
    has zero width.
    """
    if alpha is None:
        alpha = app_settings.ALPHA
    if chunk_size is None:
        chunk_size = app_settings.CHUNK_SIZE
    multiplier = normal_multiplier(alpha)
    workers = _workers(workers)
    context = _CovarianceContext(spec, at)
    first, second = _upper_cells(spec.d, spec.K)
    same = (first[0] == second[0]) & (first[1] == second[1])

    def compute(chunk):
        a = (first[0][chunk], first[1][chunk])
        b = (second[0][chunk], second[1][chunk])
        cov_same = context.covariance(a, b, a, b).real
        cov_conj = context.covariance(a, b, b, a).real
        re_var = np.where(
            same[chunk, np.newaxis], cov_same, 0.5 * (cov_same + cov_conj)
        )
        im_var = np.where(same[chunk, np.newaxis], 0.0, 0.5 * (cov_same - cov_conj))
        return re_var, im_var

    parts = _run_chunks(compute, len(same), workers, chunk_size)
    re_var = np.concatenate([part[0] for part in parts])
    im_var = np.concatenate([part[1] for part in parts])

    tolerance = app_settings.VARIANCE_WARNING_TOLERANCE
    re_sd = _clamped_sd(re_var, tolerance, "spectrum (real part)")
    im_sd = _clamped_sd(im_var, tolerance, "spectrum (imaginary part)")
    centers = context.grid[first[0], second[0], first[1], second[1]][:, context.at]
    return _band(spec, context, centers, re_sd, im_sd, multiplier, alpha, "spectrum")


def _coherency_covariances(context, one, two):
    """(Cov(L12, L12), Cov(L12, L21)) for arrays of point pairs."""
    cov = context.covariance
    f11 = context.values(one, one).real
    f22 = context.values(two, two).real
    f12 = context.values(one, two)

    for point, diagonal in ((one, f11), (two, f22)):
        bad = np.argwhere(~(diagonal > 0))
        if len(bad):
            cell, e = bad[0]
            raise DegenerateDenominatorError(
                int(point[0][cell]),
                context.spec.levels[int(point[1][cell])],
                2 * math.pi * context.at[e] / context.n,
            )

    c_11_11 = cov(one, one, one, one)
    c_22_22 = cov(two, two, two, two)
    c_11_22 = cov(one, one, two, two)
    bracket = (
        c_11_11 / f11**2 + 2 * (c_11_22 / (f11 * f22)).real + c_22_22 / f22**2
    )

    c_same = (
        cov(one, two, one, two)
        - (f12 * cov(one, one, one, two) / f11).real
        - (f12 * cov(two, two, one, two) / f22).real
        + 0.25 * np.abs(f12) ** 2 * bracket
    ) / (f11 * f22)
    c_conj = (
        cov(one, two, two, one)
        - f12 * cov(one, two, two, two) / f22
        - f12 * cov(one, two, one, one) / f11
        + 0.25 * f12**2 * bracket
    ) / (f11 * f22)
    return c_same, c_conj


def coherency_covariance(spec_norm, j1, j2, k1, k2, at=None):
    """
    Plug-in estimates of Cov(L12, L12) and Cov(L12, L21) for the coherency
    of (j1, tau_k1) and (j2, tau_k2) at the Fourier indexes ``at``.
    """
    context = _CovarianceContext(spec_norm, at)
    one = _points((j1, k1))
    two = _points((j2, k2))
    c_same, c_conj = _coherency_covariances(context, one, two)
    return c_same[0], c_conj[0]


def ci_coherency(spec, alpha=None, at=None, clip=False, workers=None, chunk_size=None):
    """
    Pointwise (1 - alpha) bands for the real and imaginary parts of the
    quantile coherency.

    For j1 = j2 and tau1 = tau2 the coherency is 1 and both bands are
    degenerate. With ``clip`` the real bands are cut to [-1, 1].
    """
    if alpha is None:
        alpha = app_settings.ALPHA
    if chunk_size is None:
        chunk_size = app_settings.CHUNK_SIZE
    multiplier = normal_multiplier(alpha)
    workers = _workers(workers)
    context = _CovarianceContext(spec, at)
    first, second = _upper_cells(spec.d, spec.K)
    same = (first[0] == second[0]) & (first[1] == second[1])

    def compute(chunk):
        one = (first[0][chunk], first[1][chunk])
        two = (second[0][chunk], second[1][chunk])
        c_same, c_conj = _coherency_covariances(context, one, two)
        c_same = c_same.real
        c_conj = c_conj.real
        re_var = np.where(same[chunk, np.newaxis], 0.0, 0.5 * (c_same + c_conj))
        im_var = np.where(same[chunk, np.newaxis], 0.0, 0.5 * (c_same - c_conj))
        return re_var, im_var

    parts = _run_chunks(compute, len(same), workers, chunk_size)
    re_var = np.concatenate([part[0] for part in parts])
    im_var = np.concatenate([part[1] for part in parts])

    tolerance = app_settings.VARIANCE_WARNING_TOLERANCE
    re_sd = _clamped_sd(re_var, tolerance, "coherency (real part)")
    im_sd = _clamped_sd(im_var, tolerance, "coherency (imaginary part)")

    grid = context.grid
    diagonal = diagonal_spectra(
        grid[..., context.at], spec.levels, 2 * math.pi * context.at / spec.n
    )
    f11 = diagonal[first[0], first[1]]
    f22 = diagonal[second[0], second[1]]
    centers = grid[first[0], second[0], first[1], second[1]][:, context.at] / np.sqrt(
        f11 * f22
    )
    band = _band(spec, context, centers, re_sd, im_sd, multiplier, alpha, "coherency")
    if clip:
        np.clip(band.lo_re, -1.0, 1.0, out=band.lo_re)
        np.clip(band.hi_re, -1.0, 1.0, out=band.hi_re)
    return band


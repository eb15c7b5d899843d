"""
Closed-form and brute-force reference quantities.

Stationary Gaussian processes have quantile spectra that follow from their
lag correlations through the Gaussian copula, which makes them the reference
the estimators are checked against. ``direct_ccr_reference`` recomputes a
CCR-periodogram ordinate by explicit summation, without any fast transform.

"""
import functools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import integrate, linalg, special

from quantile_spectra.conf import app_settings
from quantile_spectra.core import KernelSpec, TimeSeriesMatrix
from quantile_spectra.exceptions import (
    BoundaryQuantileError,
    InvalidArgumentError,
    NumericalSingularityError,
    StabilityError,
)
from quantile_spectra.ranks import clip_series, max_ranks

__all__ = [
    "GaussianProcessSpec",
    "bias_matrix",
    "coherency_matrix",
    "direct_ccr_reference",
    "frechet_bounds",
    "gaussian_copula_cdf",
    "gaussian_quantile_coherency",
    "gaussian_quantile_spectrum",
    "iid_quantile_coherency",
    "kernel_moment",
    "quantile_autocovariances",
    "traditional_coherency",
    "var1_spectrum",
]

logger = logging.getLogger(__name__)


def _check_level(tau, name="tau"):
    if not 0.0 < tau < 1.0:
        raise BoundaryQuantileError(
            "%s must be strictly between 0 and 1, got %r." % (name, tau)
        )
    return float(tau)


def gaussian_copula_cdf(tau1, tau2, rho):
    """
    The Gaussian copula ``C(tau1, tau2; rho) = P(U1 <= tau1, U2 <= tau2)``.

    Uses the one dimensional representation

        Phi(h) Phi(k) + 1/(2*pi) * int_0^{arcsin rho}
            exp(-(h**2 - 2*h*k*sin(t) + k**2) / (2*cos(t)**2)) dt

    with ``h = Phi^{-1}(tau1)`` and ``k = Phi^{-1}(tau2)``, integrated by
    adaptive quadrature.
    """
    tau1, tau2, rho = float(tau1), float(tau2), float(rho)
    if not (0.0 <= tau1 <= 1.0 and 0.0 <= tau2 <= 1.0):
        raise BoundaryQuantileError("Copula arguments must lie in [0, 1].")
    if not -1.0 <= rho <= 1.0:
        raise InvalidArgumentError("rho must lie in [-1, 1], got %r." % rho)

    if tau1 in (0.0, 1.0) or tau2 in (0.0, 1.0):
        return tau1 * tau2
    if rho == 0.0:
        return tau1 * tau2
    if rho == 1.0:
        return min(tau1, tau2)
    if rho == -1.0:
        return max(tau1 + tau2 - 1.0, 0.0)

    h = special.ndtri(tau1)
    k = special.ndtri(tau2)

    def integrand(theta):
        cos = math.cos(theta)
        exponent = (h * h - 2 * h * k * math.sin(theta) + k * k) / (2 * cos * cos)
        return math.exp(-exponent)

    value, _ = integrate.quad(
        integrand, 0.0, math.asin(rho), epsabs=1e-13, epsrel=1e-13, limit=200
    )
    result = tau1 * tau2 + value / (2 * math.pi)
    return min(max(result, max(tau1 + tau2 - 1.0, 0.0)), min(tau1, tau2))


def _denominator(tau1, tau2):
    return math.sqrt(tau1 * (1 - tau1)) * math.sqrt(tau2 * (1 - tau2))


def iid_quantile_coherency(rho, tau1, tau2):
    """Quantile coherency of bivariate Gaussian white noise with correlation rho."""
    tau1 = _check_level(tau1, "tau1")
    tau2 = _check_level(tau2, "tau2")
    return (gaussian_copula_cdf(tau1, tau2, rho) - tau1 * tau2) / _denominator(
        tau1, tau2
    )


def frechet_bounds(tau1, tau2):
    """
    Bounds on the quantile coherency of serially independent series, induced
    by the extreme copulas ``max(tau1 + tau2 - 1, 0)`` and ``min(tau1, tau2)``.
    """
    tau1 = _check_level(tau1, "tau1")
    tau2 = _check_level(tau2, "tau2")
    denominator = _denominator(tau1, tau2)
    lower = (max(tau1 + tau2 - 1.0, 0.0) - tau1 * tau2) / denominator
    upper = (min(tau1, tau2) - tau1 * tau2) / denominator
    return lower, upper


def var1_spectrum(A, omega):
    """
    Spectral density matrix of ``X_t = A X_{t-1} + e_t`` with identity
    innovation covariance::

        f(omega) = (2*pi)**-1 (I - A e^{-i omega})**-1 (I - A' e^{i omega})**-1
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    identity = np.eye(A.shape[0])
    try:
        left = linalg.inv(identity - A * np.exp(-1j * omega))
        right = linalg.inv(identity - A.T * np.exp(1j * omega))
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalSingularityError(
            "The transfer matrix is singular at omega=%r: %s" % (omega, e)
        ) from e
    return left @ right / (2 * math.pi)


def traditional_coherency(f, j1=0, j2=1):
    """``f[j1, j2] / sqrt(f[j1, j1] * f[j2, j2])`` of a spectral density matrix."""
    f = np.asarray(f)
    return complex(f[j1, j2] / math.sqrt(f[j1, j1].real * f[j2, j2].real))


def coherency_matrix(f):
    """The full coherency matrix of a spectral density matrix."""
    f = np.asarray(f)
    diagonal = np.sqrt(np.real(np.diag(f)))
    return f / np.outer(diagonal, diagonal)


@dataclass(frozen=True)
class GaussianProcessSpec:
    """
    A stationary Gaussian process: bivariate white noise with correlation
    ``rho``, or a VAR(1) with coefficient matrix ``A`` and identity innovation
    covariance.

    Build one with ``GaussianProcessSpec.white_noise()`` or
    ``GaussianProcessSpec.var1()``.
    """

    kind: str
    rho: float = 0.0
    A: Optional[Tuple[Tuple[float, ...], ...]] = None
    tolerance: Optional[float] = None
    lags: int = 0

    @classmethod
    def white_noise(cls, rho):
        rho = float(rho)
        if not -1.0 < rho < 1.0:
            raise InvalidArgumentError("rho must lie in (-1, 1), got %r." % rho)
        return cls(kind="white_noise", rho=rho)

    @classmethod
    def var1(cls, A, tolerance=None, min_lags=None, max_lags=None):
        """
        Validate ``A`` and fix the lag truncation: the smallest L >= min_lags
        with ``||A**L||_2 < tolerance``, capped at max_lags.
        """
        if tolerance is None:
            tolerance = app_settings.LAG_TOLERANCE
        if min_lags is None:
            min_lags = app_settings.MIN_LAGS
        if max_lags is None:
            max_lags = app_settings.MAX_LAGS

        matrix = np.atleast_2d(np.asarray(A, dtype=float))
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidArgumentError("A must be a square matrix.")
        radius = max(abs(linalg.eigvals(matrix)))
        if radius >= 1.0:
            raise StabilityError(
                "The VAR(1) is not stationary: spectral radius %g >= 1." % radius
            )

        lags, power = 0, np.eye(matrix.shape[0])
        while lags < max_lags and (
            lags < min_lags or linalg.norm(power, 2) >= tolerance
        ):
            power = power @ matrix
            lags += 1
        if linalg.norm(power, 2) >= tolerance:
            logger.warning(
                "Lag truncation capped at %d with ||A^L|| = %g.",
                lags,
                linalg.norm(power, 2),
            )
        return cls(
            kind="var1",
            A=tuple(tuple(row) for row in matrix.tolist()),
            tolerance=tolerance,
            lags=lags,
        )

    @property
    def matrix(self):
        if self.A is None:
            return None
        return np.array(self.A, dtype=float)

    @property
    def d(self):
        return 2 if self.A is None else len(self.A)

    def lag_correlations(self, j1, j2, lags=None):
        """``Corr(X_{t+k, j1}, X_{t, j2})`` for k = -L, ..., L."""
        if lags is None:
            lags = self.lags
        if self.kind == "white_noise":
            correlations = np.zeros(2 * lags + 1)
            correlations[lags] = 1.0 if j1 == j2 else self.rho
            return correlations

        A = self.matrix
        c0 = linalg.solve_discrete_lyapunov(A, np.eye(A.shape[0]))
        scale = math.sqrt(c0[j1, j1] * c0[j2, j2])
        correlations = np.empty(2 * lags + 1)
        ck = c0
        correlations[lags] = c0[j1, j2] / scale
        for k in range(1, lags + 1):
            ck = A @ ck
            # c_k = Cov(X_{t+k}, X_t) and c_{-k} = c_k'.
            correlations[lags + k] = ck[j1, j2] / scale
            correlations[lags - k] = ck[j2, j1] / scale
        return correlations


@functools.lru_cache(maxsize=256)
def _autocovariances(spec, tau1, tau2, j1, j2, lags):
    correlations = spec.lag_correlations(j1, j2, lags)
    gammas = np.array(
        [gaussian_copula_cdf(tau1, tau2, rho) - tau1 * tau2 for rho in correlations]
    )
    gammas.flags.writeable = False
    return gammas


def quantile_autocovariances(spec, tau1, tau2, j1, j2, lags=None):
    """
    ``gamma_k = C(tau1, tau2; rho_k) - tau1 * tau2`` for k = -L, ..., L, the
    covariances of ``I{X_{t+k, j1} <= q_j1(tau1)}`` and ``I{X_{t, j2} <= q_j2(tau2)}``.
    """
    tau1 = _check_level(tau1, "tau1")
    tau2 = _check_level(tau2, "tau2")
    if lags is None:
        lags = spec.lags
    return _autocovariances(spec, tau1, tau2, int(j1), int(j2), int(lags))


def gaussian_quantile_spectrum(spec, omega, tau1, tau2, j1, j2, lags=None):
    """
    ``f(omega) = (2*pi)**-1 sum_{|k| <= L} gamma_k e^{-i k omega}``.

    ``omega`` may be an array.
    """
    gammas = quantile_autocovariances(spec, tau1, tau2, j1, j2, lags)
    lags = (len(gammas) - 1) // 2
    k = np.arange(-lags, lags + 1)
    omega = np.asarray(omega, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(omega, k))
    result = phases @ gammas / (2 * math.pi)
    return complex(result) if result.ndim == 0 else result


def gaussian_quantile_coherency(spec, omega, tau1, tau2, j1, j2):
    numerator = gaussian_quantile_spectrum(spec, omega, tau1, tau2, j1, j2)
    first = gaussian_quantile_spectrum(spec, omega, tau1, tau1, j1, j1)
    second = gaussian_quantile_spectrum(spec, omega, tau2, tau2, j2, j2)
    return numerator / np.sqrt(np.real(first) * np.real(second))


def kernel_moment(kernel, power):
    """``int v**power W(v) dv``."""
    return KernelSpec.from_name(kernel).moment(power)


def _derivative(function, omega, order, step):
    """The central difference of the given order, refined once by Richardson."""

    def central(h):
        total = 0.0
        for i in range(order + 1):
            total += (-1) ** i * math.comb(order, i) * function(
                omega + (order / 2 - i) * h
            )
        return total / h**order

    return (4 * central(step / 2) - central(step)) / 3


def bias_matrix(
    spec, omega, tau1, tau2, b_n, kernel, k_order=None, j1=0, j2=0, step=None
):
    """
    The leading smoothing bias

        sum_{l=2}^{k_order} b_n**l / l! * int v**l W(v) dv * f^{(l)}(omega)

    of the smoothed estimator for the oracle spectrum ``f``.
    """
    kernel = KernelSpec.from_name(kernel)
    if k_order is None:
        k_order = kernel.order
    if k_order < 1:
        raise InvalidArgumentError("k_order must be >= 1.")
    if step is None:
        step = app_settings.DIFFERENCE_STEP

    def spectrum(w):
        return gaussian_quantile_spectrum(spec, w, tau1, tau2, j1, j2)

    bias = 0j
    for order in range(2, k_order + 1):
        moment = kernel.moment(order)
        if moment == 0.0:
            continue
        bias += (
            b_n**order
            / math.factorial(order)
            * moment
            * _derivative(spectrum, omega, order, step)
        )
    return bias


def direct_ccr_reference(X, omega, tau1, tau2, j1, j2, tolerance=None):
    """
    A CCR-periodogram ordinate computed by explicit summation::

        d_j(omega) = sum_t I{R_{t,j} <= n*tau} e^{-i omega t}
        I(omega) = d_j1(omega; tau1) * conj(d_j2(omega; tau2)) / (2*pi*n)
    """
    if not isinstance(X, TimeSeriesMatrix):
        X = TimeSeriesMatrix(X)
    n = X.n
    t = np.arange(n)
    phases = np.exp(-1j * omega * t)

    def dft(j, tau):
        bits = clip_series(max_ranks(X.values[:, j]), n, tau, tolerance)
        return complex(np.sum(bits * phases))

    return dft(j1, tau1) * dft(j2, tau2).conjugate() / (2 * math.pi * n)

"""
Orchestration of the estimation stages and conversion of their results into
output records.

``run_pipeline`` runs ranks, clipping, transform, periodogram, smoothing,
derived quantities and confidence bands, in that order. Errors raised by a
stage are re-raised as ``StageError`` labelled with the stage.

"""
import contextlib
import logging
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from quantile_spectra import io
from quantile_spectra.conf import app_settings
from quantile_spectra.core import KernelSpec, TimeSeriesMatrix, validate_quantile_grid
from quantile_spectra.derived import quantile_coherency, spectral_decompositions
from quantile_spectra.exceptions import (
    InvalidArgumentError,
    QuantileSpectraError,
    StageError,
)
from quantile_spectra.inference import ci_coherency, ci_spectrum, normal_multiplier
from quantile_spectra.oracle import (
    frechet_bounds,
    gaussian_quantile_coherency,
    gaussian_quantile_spectrum,
)
from quantile_spectra.periodogram import ccr_periodogram_matrix, quantile_dft
from quantile_spectra.ranks import clip_matrix, rank_matrix
from quantile_spectra.smoother import (
    check_bandwidth,
    default_bandwidth,
    smooth_periodogram,
)

__all__ = [
    "QUANTITIES",
    "PipelineResult",
    "RunConfig",
    "frechet_table",
    "oracle_records",
    "pipeline_metadata",
    "run_pipeline",
    "spectra_records",
]

logger = logging.getLogger(__name__)

QUANTITIES = (
    "f",
    "coherency",
    "coherence",
    "cospectrum",
    "quadrature",
    "amplitude",
    "phase",
)


@dataclass
class RunConfig:
    """
    Everything ``run_pipeline`` needs. Either ``input`` (a CSV path) or
    ``series`` is required; unset tunables fall back to the settings.

    ``omegas`` is ``"fourier"`` for the frequencies 2*pi*s/n with
    s = 0, ..., floor(n/2), or a list of frequencies in radians.
    """

    input: Optional[str] = None
    series: Optional[TimeSeriesMatrix] = None
    columns: Optional[Sequence[str]] = None
    quantiles: Optional[Sequence[float]] = None
    kernel: Optional[str] = None
    bandwidth: Union[str, float] = "auto"
    alpha: Optional[float] = None
    omegas: Union[str, Sequence[float]] = "fourier"
    out: Optional[str] = None
    format: str = "csv"
    seed: Optional[int] = None
    workers: Optional[int] = None
    clip_coherency: bool = False
    extra_metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quantiles is None:
            self.quantiles = list(app_settings.QUANTILE_LEVELS)
        if self.kernel is None:
            self.kernel = app_settings.KERNEL
        if self.alpha is None:
            self.alpha = app_settings.ALPHA

    def resolve_bandwidth(self, n):
        if self.bandwidth == "auto":
            return default_bandwidth(n)
        try:
            value = float(self.bandwidth)
        except (TypeError, ValueError):
            raise InvalidArgumentError(
                "The bandwidth must be 'auto' or a number, got %r." % (self.bandwidth,)
            ) from None
        return check_bandwidth(value)

    def validate(self):
        """Checks that need no data, run before anything is computed."""
        validate_quantile_grid(self.quantiles)
        KernelSpec.from_name(self.kernel)
        normal_multiplier(self.alpha)
        if self.format not in io.FORMATS:
            raise InvalidArgumentError("Unknown output format '%s'." % self.format)
        if self.input is None and self.series is None:
            raise InvalidArgumentError("Either an input file or a series is required.")
        if self.bandwidth != "auto":
            self.resolve_bandwidth(2)


class PipelineResult(NamedTuple):
    """
    The smoothed spectrum and coherency at the output frequencies, and the
    confidence bands (``None`` off the Fourier grid).
    """

    spectrum: object
    coherency: object
    spectrum_band: object
    coherency_band: object


@contextlib.contextmanager
def _stage(name):
    started = time.perf_counter()
    try:
        yield
    except StageError:
        raise
    except QuantileSpectraError as e:
        raise StageError(name, e) from e
    logger.debug("Stage %s took %.3fs.", name, time.perf_counter() - started)


def _output_frequencies(n, omegas):
    """Return (fourier indexes, None) or (None, omegas) for the requested output."""
    if isinstance(omegas, str):
        if omegas != "fourier":
            raise InvalidArgumentError(
                "omegas must be 'fourier' or a list of frequencies, got %r." % omegas
            )
        return np.arange(n // 2 + 1), None
    values = np.atleast_1d(np.asarray(omegas, dtype=float))
    scaled = values * n / (2 * math.pi)
    indexes = np.rint(scaled)
    if np.all(np.abs(scaled - indexes) < 1e-9):
        return np.mod(indexes.astype(np.int64), n), None
    return None, values


def run_pipeline(config):
    """
    Estimate the quantile spectra, coherency and confidence bands for the
    configured series.
    """
    with _stage("config"):
        config.validate()
        series = config.series
        if series is None:
            series = io.load_csv(config.input, config.columns)
        elif config.columns:
            series = series.select(config.columns)
        n = series.n
        b_n = config.resolve_bandwidth(n)
        indexes, off_grid = _output_frequencies(n, config.omegas)
    logger.debug(
        "Running on n=%d, d=%d, K=%d with b_n=%g.",
        n,
        series.d,
        len(config.quantiles),
        b_n,
    )

    with _stage("ranks"):
        ranks = rank_matrix(series)
    with _stage("clip"):
        clipped = clip_matrix(ranks, config.quantiles)
    with _stage("fft"):
        dfts = quantile_dft(clipped, workers=config.workers)
    with _stage("periodogram"):
        perio = ccr_periodogram_matrix(dfts)
    with _stage("smooth"):
        half = smooth_periodogram(perio, config.kernel, b_n, workers=config.workers)
        if off_grid is None:
            spectrum = half.at_fourier(indexes)
        else:
            spectrum = smooth_periodogram(
                perio, config.kernel, b_n, off_grid, workers=config.workers
            )
        spectrum = spectrum.normalize()
    with _stage("derived"):
        coherency = quantile_coherency(spectrum)

    spectrum_band = coherency_band = None
    if off_grid is None:
        with _stage("inference"):
            spectrum_band = ci_spectrum(
                half, config.alpha, at=indexes, workers=config.workers
            )
            coherency_band = ci_coherency(
                half,
                config.alpha,
                at=indexes,
                clip=config.clip_coherency,
                workers=config.workers,
            )
    else:
        logger.info("Confidence bands are only computed on Fourier frequencies.")

    config.extra_metadata.setdefault("names", list(series.names))
    return PipelineResult(spectrum, coherency, spectrum_band, coherency_band)


def _band_values(band, j1, j2, k1, k2, e):
    if band is None:
        return None, None, None, None
    return (
        float(band.lo_re[j1, j2, k1, k2, e]),
        float(band.hi_re[j1, j2, k1, k2, e]),
        float(band.lo_im[j1, j2, k1, k2, e]),
        float(band.hi_im[j1, j2, k1, k2, e]),
    )


def _quantity_values(result):
    decomposition = spectral_decompositions(result.spectrum)
    coherency = result.coherency
    values = result.spectrum.values
    zeros = np.zeros(values.shape)
    return {
        "f": (values.real, values.imag, result.spectrum_band),
        "coherency": (
            coherency.coherency.real,
            coherency.coherency.imag,
            result.coherency_band,
        ),
        "coherence": (coherency.coherence, zeros, None),
        "cospectrum": (decomposition.cospectrum, zeros, None),
        "quadrature": (decomposition.quadrature, zeros, None),
        "amplitude": (decomposition.amplitude, zeros, None),
        "phase": (decomposition.phase, zeros, None),
    }


def _records(quantities, levels, omegas):
    """Yield records ordered by (quantity, j1, j2, k1, k2, s)."""
    for quantity, (real, imag, band) in quantities:
        d, K = real.shape[0], real.shape[2]
        for j1 in range(d):
            for j2 in range(d):
                for k1 in range(K):
                    for k2 in range(K):
                        for e, omega in enumerate(omegas):
                            yield io.SpectraRecord(
                                float(omega),
                                float(omega) / (2 * math.pi),
                                float(levels[k1]),
                                float(levels[k2]),
                                j1 + 1,
                                j2 + 1,
                                quantity,
                                float(real[j1, j2, k1, k2, e]),
                                float(imag[j1, j2, k1, k2, e]),
                                *_band_values(band, j1, j2, k1, k2, e)
                            )


def spectra_records(result, quantities=QUANTITIES):
    """
    Yield one ``SpectraRecord`` per (quantity, j1, j2, tau1, tau2, omega).

    Components are reported 1-based. ``f`` is the normalized spectrum.
    """
    values = _quantity_values(result)
    spectrum = result.spectrum
    order = [(quantity, values[quantity]) for quantity in quantities]
    return _records(order, spectrum.levels, spectrum.eval_omegas)


def pipeline_metadata(config, result, version):
    spectrum = result.spectrum
    metadata = {
        "n": spectrum.n,
        "d": spectrum.d,
        "quantiles": [float(level) for level in spectrum.levels],
        "kernel": spectrum.kernel.name,
        "b_n": spectrum.bandwidth,
        "normalizers": [
            {"omega": float(omega), "value": float(value)}
            for omega, value in zip(spectrum.eval_omegas, spectrum.normalizers)
        ],
        "alpha": config.alpha,
        "seed": config.seed,
        "version": version,
    }
    metadata.update(config.extra_metadata)
    return metadata


def oracle_records(spec, n, levels, omegas="fourier"):
    """
    Yield ``f`` and ``coherency`` records of a Gaussian process oracle on the
    frequency grid ``analyze`` uses for a series of length n.
    """
    grid = validate_quantile_grid(levels)
    indexes, off_grid = _output_frequencies(n, omegas)
    if off_grid is None:
        off_grid = 2 * math.pi * indexes / n
    d, K = spec.d, len(grid)
    f = np.empty((d, d, K, K, len(off_grid)), dtype=complex)
    coherency = np.empty_like(f)
    for j1 in range(d):
        for j2 in range(d):
            for k1, tau1 in enumerate(grid):
                for k2, tau2 in enumerate(grid):
                    f[j1, j2, k1, k2] = gaussian_quantile_spectrum(
                        spec, off_grid, tau1, tau2, j1, j2
                    )
                    coherency[j1, j2, k1, k2] = gaussian_quantile_coherency(
                        spec, off_grid, tau1, tau2, j1, j2
                    )
    quantities = [
        ("f", (f.real, f.imag, None)),
        ("coherency", (coherency.real, coherency.imag, None)),
    ]
    return _records(quantities, tuple(grid), off_grid)


def frechet_table(levels):
    """The coherency bounds of serially independent series for every level pair."""
    grid = validate_quantile_grid(levels)
    return [
        {"tau1": tau1, "tau2": tau2, "lower": lower, "upper": upper}
        for tau1 in grid
        for tau2 in grid
        for lower, upper in [frechet_bounds(tau1, tau2)]
    ]

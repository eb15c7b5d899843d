from quantile_spectra.core import (
    FrequencyGrid,
    KernelSpec,
    QuantileGrid,
    TimeSeriesMatrix,
    make_fourier_grid,
    validate_quantile_grid,
)
from quantile_spectra.derived import (
    CoherencyField,
    SpectralDecomposition,
    quantile_coherency,
    spectral_decompositions,
)
from quantile_spectra.exceptions import QuantileSpectraError
from quantile_spectra.inference import (
    ConfidenceBand,
    ci_coherency,
    ci_spectrum,
    coherency_covariance,
    smoothed_covariance,
)
from quantile_spectra.periodogram import (
    CCRPeriodogram,
    QuantileDFT,
    ccr_periodogram_matrix,
    quantile_dft,
)
from quantile_spectra.ranks import clip_matrix, clip_series, max_ranks, rank_matrix
from quantile_spectra.smoother import (
    SmoothedSpectrum,
    default_bandwidth,
    smooth_periodogram,
    smoothing_normalizer,
)

__version__ = "0.1"

# Only export the public API. Simulators, oracles and the pipeline live in
# their own modules.
__all__ = [
    "CCRPeriodogram",
    "CoherencyField",
    "ConfidenceBand",
    "FrequencyGrid",
    "KernelSpec",
    "QuantileDFT",
    "QuantileGrid",
    "QuantileSpectraError",
    "SmoothedSpectrum",
    "SpectralDecomposition",
    "TimeSeriesMatrix",
    "ccr_periodogram_matrix",
    "ci_coherency",
    "ci_spectrum",
    "clip_matrix",
    "clip_series",
    "coherency_covariance",
    "default_bandwidth",
    "make_fourier_grid",
    "max_ranks",
    "quantile_coherency",
    "quantile_dft",
    "rank_matrix",
    "smooth_periodogram",
    "smoothed_covariance",
    "smoothing_normalizer",
    "spectral_decompositions",
    "validate_quantile_grid",
]

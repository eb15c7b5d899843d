"""
Quantile coherency and the derived spectral quantities: cospectrum,
quadrature spectrum, amplitude and phase.
"""
import math
from dataclasses import dataclass

import numpy as np

from quantile_spectra.conf import app_settings
from quantile_spectra.exceptions import (
    DegenerateDenominatorError,
    InternalConsistencyError,
)

__all__ = [
    "CoherencyField",
    "SpectralDecomposition",
    "diagonal_spectra",
    "quantile_coherency",
    "spectral_decompositions",
]


@dataclass(frozen=True, eq=False)
class CoherencyField:
    coherency: np.ndarray
    coherence: np.ndarray
    source: object


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    cospectrum: np.ndarray
    quadrature: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray


def diagonal_spectra(values, levels, omegas):
    """
    The real diagonal ``G[j, j, k, k, e]`` as a ``(d, K, E)`` array.

    Raises ``DegenerateDenominatorError`` for the first nonpositive entry.
    """
    d, K = values.shape[0], values.shape[2]
    diagonal = np.empty((d, K, values.shape[-1]))
    for j in range(d):
        for k in range(K):
            diagonal[j, k] = values[j, j, k, k].real
    bad = np.argwhere(~(diagonal > 0))
    if len(bad):
        j, k, e = bad[0]
        raise DegenerateDenominatorError(j, levels[k], float(omegas[e]))
    return diagonal


def quantile_coherency(spec, tolerance=None):
    """
    ``R = G[j1, j2, k1, k2] / sqrt(G[j1, j1, k1, k1] * G[j2, j2, k2, k2])``.

    The same estimate results from the normalized spectrum since the
    normalizer cancels.
    """
    if tolerance is None:
        tolerance = app_settings.COHERENCE_TOLERANCE
    values = spec.values
    diagonal = diagonal_spectra(values, spec.levels, spec.eval_omegas)

    # sqrt(a * b) rather than sqrt(a) * sqrt(b): exact on the diagonal and
    # symmetric in its arguments.
    denominator = np.sqrt(
        diagonal[:, np.newaxis, :, np.newaxis, :]
        * diagonal[np.newaxis, :, np.newaxis, :, :]
    )
    coherency = values / denominator

    coherence = np.abs(coherency) ** 2
    if spec.kernel.nonnegative:
        excess = coherence.max(initial=0.0) - 1.0
        if excess > tolerance:
            raise InternalConsistencyError(
                "Quantile coherence exceeds 1 by %g." % excess
            )
        coherence = np.minimum(coherence, 1.0)
    return CoherencyField(coherency, coherence, spec)


def spectral_decompositions(spec):
    """
    Cartesian and polar decompositions of a smoothed spectrum.

    The phase is the principal argument in (-pi, pi], with phase 0 where the
    spectrum vanishes.
    """
    values = spec.values
    amplitude = np.abs(values)
    phase = np.arctan2(values.imag, values.real)
    # arctan2 returns -pi for a negative real part with a negative zero
    # imaginary part.
    phase = np.where(phase == -math.pi, math.pi, phase)
    phase = np.where(amplitude == 0, 0.0, phase)
    return SpectralDecomposition(
        cospectrum=values.real.copy(),
        quadrature=-values.imag,
        amplitude=amplitude,
        phase=phase,
    )

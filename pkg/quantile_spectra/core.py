"""
Shared value types and grids.

All spectral tensors in this package are indexed ``(j1, j2, k1, k2, s)``: two
component indices, two quantile-level indices and the Fourier index ``s`` of
``omega_s = 2*pi*s/n``. Only non-negative Fourier indices are ever stored.

"""
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import integrate

from quantile_spectra.exceptions import (
    BoundaryQuantileError,
    ColumnError,
    InvalidArgumentError,
    InvalidDataError,
    QuantileOrderingError,
)

__all__ = [
    "KERNEL_NAMES",
    "FrequencyGrid",
    "KernelSpec",
    "QuantileGrid",
    "TimeSeriesMatrix",
    "make_fourier_grid",
    "validate_quantile_grid",
]


def _frozen_array(values, dtype=float):
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class TimeSeriesMatrix:
    """``n`` observations (rows) of ``d`` component series (columns)."""

    values: np.ndarray
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, np.newaxis]
        if values.ndim != 2:
            raise InvalidDataError("A time series matrix must be two dimensional.")
        n, d = values.shape
        if n < 2 or d < 1:
            raise InvalidDataError(
                "A time series matrix needs n >= 2 rows and d >= 1 columns, got "
                "%d x %d." % (n, d)
            )
        if not np.all(np.isfinite(values)):
            row, column = np.argwhere(~np.isfinite(values))[0]
            raise InvalidDataError(
                "Non-finite entry at row %d, column %d." % (row, column)
            )

        names = tuple(self.names) or tuple("X%d" % (j + 1) for j in range(d))
        if len(names) != d:
            raise InvalidDataError(
                "Got %d column names for %d columns." % (len(names), d)
            )

        object.__setattr__(self, "values", _frozen_array(values))
        object.__setattr__(self, "names", tuple(str(name) for name in names))

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]

    def select(self, columns):
        """Return a new matrix restricted to the named columns (in that order)."""
        for name in columns:
            if name not in self.names:
                raise ColumnError(name, self.names)
        indexes = [self.names.index(name) for name in columns]
        return TimeSeriesMatrix(self.values[:, indexes], tuple(columns))


@dataclass(frozen=True, eq=False)
class QuantileGrid:
    levels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "levels", _frozen_array(self.levels))

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels.tolist())

    def __getitem__(self, k):
        return float(self.levels[k])

    def __eq__(self, other):
        if not isinstance(other, QuantileGrid):
            return NotImplemented
        return tuple(self) == tuple(other)

    def __hash__(self):
        return hash(tuple(self))


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Fourier frequencies ``2*pi*s/n`` for the stored indices ``s``."""

    n: int
    indexes: np.ndarray
    omegas: np.ndarray = field(init=False)

    def __post_init__(self):
        indexes = np.asarray(self.indexes, dtype=np.int64)
        object.__setattr__(self, "indexes", _frozen_array(indexes, np.int64))
        object.__setattr__(
            self, "omegas", _frozen_array(2 * math.pi * indexes / self.n)
        )

    def __len__(self):
        return len(self.indexes)

    def half(self):
        """The non-redundant part s = 0, ..., floor(n/2)."""
        return FrequencyGrid(self.n, np.arange(self.n // 2 + 1))


def make_fourier_grid(n):
    """Return the Fourier grid ``omega_s = 2*pi*s/n`` for s = 0, ..., n - 1."""
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise InvalidArgumentError(
            "The sample size must be an integer >= 2, got %r." % n
        )
    return FrequencyGrid(int(n), np.arange(int(n)))


def validate_quantile_grid(levels):
    """
    Validate a list of quantile levels.

    The levels have to be strictly inside (0, 1) and strictly increasing.
    Passing an already validated ``QuantileGrid`` returns an equal grid.
    """
    if isinstance(levels, QuantileGrid):
        levels = levels.levels
    values = [float(level) for level in levels]
    if not values:
        raise InvalidArgumentError("At least one quantile level is required.")

    for level in values:
        if not 0.0 < level < 1.0:
            raise BoundaryQuantileError(
                "Quantile level %r is not strictly between 0 and 1." % level
            )
    for previous, level in zip(values, values[1:]):
        if not previous < level:
            raise QuantileOrderingError(
                "Quantile levels must be strictly increasing, got %r after %r."
                % (level, previous)
            )
    return QuantileGrid(values)


def _epanechnikov(v):
    v = np.asarray(v, dtype=float)
    return np.where(
        np.abs(v) <= math.pi, 3.0 / (4.0 * math.pi) * (1.0 - (v / math.pi) ** 2), 0.0
    )


def _rectangular(v):
    v = np.asarray(v, dtype=float)
    return np.where(np.abs(v) <= math.pi, 1.0 / (2.0 * math.pi), 0.0)


_KERNELS = {
    "epanechnikov": (_epanechnikov, 2),
    "rectangular": (_rectangular, 2),
}

KERNEL_NAMES = tuple(sorted(_KERNELS))


@dataclass(frozen=True)
class KernelSpec:
    """
    An even, real-valued smoothing kernel supported on [-pi, pi].

    Use ``KernelSpec.from_name()`` to build one; the order is looked up.
    """

    name: str
    order: int = 2
    support: Tuple[float, float] = (-math.pi, math.pi)

    def __post_init__(self):
        if self.name not in _KERNELS:
            raise InvalidArgumentError(
                "Unknown kernel '%s'. Choices are: %s"
                % (self.name, ", ".join(sorted(_KERNELS)))
            )
        if self.order < 2:
            raise InvalidArgumentError("Kernel order must be >= 2.")
        # Integrating to one over the support is part of the kernel contract.
        mass = self.moment(0)
        if abs(mass - 1.0) > 1e-10:
            raise InvalidArgumentError(
                "Kernel '%s' integrates to %r, not 1." % (self.name, mass)
            )

    @classmethod
    def from_name(cls, name):
        if isinstance(name, cls):
            return name
        try:
            _, order = _KERNELS[name]
        except KeyError:
            raise InvalidArgumentError(
                "Unknown kernel '%s'. Choices are: %s"
                % (name, ", ".join(sorted(_KERNELS)))
            )
        return cls(name=name, order=order)

    @property
    def nonnegative(self):
        """Whether the kernel is >= 0 on a fine grid over its support."""
        low, high = self.support
        return bool(np.all(self(np.linspace(low, high, 2049)) >= 0.0))

    def __call__(self, v):
        function, _ = _KERNELS[self.name]
        return function(v)

    def moment(self, power):
        """The kernel moment ``int v**power W(v) dv`` by adaptive quadrature."""
        low, high = self.support
        value, _ = integrate.quad(
            lambda v: v**power * float(self(v)), low, high, epsabs=1e-13, epsrel=1e-13
        )
        return value

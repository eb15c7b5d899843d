"""
Exceptions and warnings raised by django-quantile-spectra.

Every error derives from ``QuantileSpectraError`` which is itself a
``ValueError``, so callers that only care about bad input can keep catching
``ValueError``.

"""


class QuantileSpectraError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(QuantileSpectraError):
    pass


class BoundaryQuantileError(QuantileSpectraError):
    """A quantile level is not strictly inside (0, 1)."""


class QuantileOrderingError(QuantileSpectraError):
    """Quantile levels are not strictly increasing."""


class InvalidDataError(QuantileSpectraError):
    pass


class BandwidthError(QuantileSpectraError):
    pass


class InvalidLevelError(QuantileSpectraError):
    """A confidence level alpha outside of (0, 1)."""


class StabilityError(QuantileSpectraError):
    pass


class NumericalSingularityError(QuantileSpectraError):
    pass


class InternalConsistencyError(QuantileSpectraError):
    pass


class DegenerateDenominatorError(QuantileSpectraError):
    """
    A diagonal spectrum used as a denominator is not strictly positive.

    The offending component, quantile level and frequency are available as
    attributes.
    """

    def __init__(self, component, tau, omega):
        self.component = component
        self.tau = tau
        self.omega = omega
        super().__init__(
            "Nonpositive diagonal spectrum for component %s at tau=%r, omega=%r."
            % (component, tau, omega)
        )


class ColumnError(QuantileSpectraError, KeyError):
    def __init__(self, column, available):
        self.column = column
        self.available = list(available)
        super().__init__(
            "Column '%s' not found. Choices are: %s"
            % (column, ", ".join(self.available))
        )

    def __str__(self):
        # KeyError quotes its argument, keep the readable message instead.
        return self.args[0]


class ParseError(QuantileSpectraError):
    def __init__(self, message, row, column):
        self.row = row
        self.column = column
        super().__init__("%s (row %d, column '%s')" % (message, row, column))


class StageError(QuantileSpectraError):
    """An error raised by one of the pipeline stages, labelled by the stage."""

    def __init__(self, stage, error):
        self.stage = stage
        self.error = error
        super().__init__("[%s] %s" % (stage, error))


class StabilityWarning(UserWarning):
    pass


class DegenerateNormalizerWarning(UserWarning):
    pass


class VarianceClampWarning(UserWarning):
    pass

"""
Seeded simulators: quantile vector autoregressions (QVAR), Gaussian VAR(1)
processes and three bivariate toy processes.

Every simulator is a pure function of its model, n, burn-in and seed. Random
numbers come from numpy's counter-based Philox generator and normal variates
are obtained by inverting the normal CDF at uniforms, so draws are
reproducible across platforms.

"""
import json
import logging
import warnings
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import linalg, special

from quantile_spectra.conf import app_settings
from quantile_spectra.core import TimeSeriesMatrix
from quantile_spectra.exceptions import InvalidArgumentError, StabilityWarning

__all__ = [
    "CoefficientFunction",
    "QVARSpec",
    "TOY_KINDS",
    "VARModel",
    "benchmark_qvar",
    "benchmark_var1",
    "check_qvar_stability",
    "simulate_qvar",
    "simulate_toy",
    "simulate_var1",
    "spec_from_json",
    "spec_to_json",
]

logger = logging.getLogger(__name__)

TOY_KINDS = ("eps_square_now", "eps_square_lag1", "independent_noise")

_FORMS = {"constant": 1, "linear": 2, "normal_quantile": 0}

_RESOLUTION = 2**53


def _generator(seed):
    return np.random.Generator(np.random.Philox(seed))


def _open_uniforms(rng, size):
    """Uniforms on the open interval (0, 1), on a grid of step 2**-53."""
    counts = rng.integers(0, _RESOLUTION, size=size, dtype=np.int64)
    return (counts + 0.5) / _RESOLUTION


def _normals(rng, size):
    return special.ndtri(_open_uniforms(rng, size))


@dataclass(frozen=True)
class CoefficientFunction:
    """
    A coefficient function of one variable u in [0, 1].

    ``constant(c)`` is c, ``linear(a, b)`` is ``a + b * (u - 0.5)`` and
    ``normal_quantile`` is the standard normal quantile function.
    """

    form: str = "constant"
    params: Tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if self.form not in _FORMS:
            raise InvalidArgumentError(
                "Unknown coefficient form '%s'. Choices are: %s"
                % (self.form, ", ".join(_FORMS))
            )
        params = tuple(float(value) for value in self.params)
        if len(params) != _FORMS[self.form]:
            raise InvalidArgumentError(
                "A %s coefficient takes %d parameters, got %d."
                % (self.form, _FORMS[self.form], len(params))
            )
        object.__setattr__(self, "params", params)

    @classmethod
    def constant(cls, value=0.0):
        return cls("constant", (value,))

    @classmethod
    def linear(cls, intercept, slope):
        return cls("linear", (intercept, slope))

    @classmethod
    def normal_quantile(cls):
        return cls("normal_quantile", ())

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.form == "constant":
            return np.full(u.shape, self.params[0])
        if self.form == "linear":
            intercept, slope = self.params
            return intercept + slope * (u - 0.5)
        return special.ndtri(u)

    @property
    def is_zero(self):
        return self.form == "constant" and self.params[0] == 0.0

    def sup_abs(self):
        """``sup_u |theta(u)|`` over [0, 1]."""
        if self.form == "constant":
            return abs(self.params[0])
        if self.form == "linear":
            intercept, slope = self.params
            return abs(intercept) + abs(slope) / 2
        return np.inf


_ZERO = CoefficientFunction()


@dataclass(frozen=True)
class QVARSpec:
    """
    ``X_t = sum_j Theta_j(U_t) X_{t-j} + theta_0(U_t)``.

    ``coeff[j][l][m]`` is entry (l, m) of the lag j + 1 matrix. Row l of every
    coefficient matrix and of the intercept is evaluated at the same uniform
    ``U_{t,l}``.
    """

    p: int
    d: int
    coeff: Tuple = field(default=None)
    intercept: Tuple = field(default=None)

    def __post_init__(self):
        if self.p < 1 or self.d < 1:
            raise InvalidArgumentError("A QVAR needs p >= 1 and d >= 1.")
        coeff = self.coeff
        if coeff is None:
            coeff = [[[_ZERO] * self.d for _ in range(self.d)] for _ in range(self.p)]
        coeff = tuple(
            tuple(tuple(_coefficient(entry) for entry in row) for row in matrix)
            for matrix in coeff
        )
        if len(coeff) != self.p or any(
            len(matrix) != self.d or any(len(row) != self.d for row in matrix)
            for matrix in coeff
        ):
            raise InvalidArgumentError(
                "Expected %d coefficient matrices of size %d x %d."
                % (self.p, self.d, self.d)
            )
        intercept = self.intercept
        if intercept is None:
            intercept = [_ZERO] * self.d
        intercept = tuple(_coefficient(entry) for entry in intercept)
        if len(intercept) != self.d:
            raise InvalidArgumentError("Expected %d intercept functions." % self.d)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "intercept", intercept)

    def bounds(self):
        """``M[j, l, m] = sup_u |theta_j(u)[l, m]|``."""
        return np.array(
            [
                [[entry.sup_abs() for entry in row] for row in matrix]
                for matrix in self.coeff
            ]
        )


def _coefficient(entry):
    if isinstance(entry, CoefficientFunction):
        return entry
    if isinstance(entry, dict):
        return CoefficientFunction(
            entry.get("form", "constant"), entry.get("params", ())
        )
    return CoefficientFunction.constant(entry)


@dataclass(frozen=True)
class VARModel:
    """``X_t = A X_{t-1} + e_t`` with standard normal innovations."""

    A: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        matrix = np.atleast_2d(np.asarray(self.A, dtype=float))
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidArgumentError("A must be a square matrix.")
        object.__setattr__(self, "A", tuple(tuple(row) for row in matrix.tolist()))
        radius = self.spectral_radius
        if radius >= 1.0:
            message = (
                "VAR(1) spectral radius %g >= 1, the process is not stationary."
                % radius
            )
            logger.warning(message)
            warnings.warn(message, StabilityWarning, stacklevel=3)

    @property
    def matrix(self):
        return np.array(self.A, dtype=float)

    @property
    def d(self):
        return len(self.A)

    @property
    def spectral_radius(self):
        return float(max(abs(linalg.eigvals(self.matrix))))


def check_qvar_stability(spec):
    """
    Check the sufficient condition ``sum_j ||M_j||_2 < 1`` for a stationary
    QVAR, where ``M_j`` bounds the absolute coefficients of lag j.

    Warns and returns False when the condition fails or cannot be verified.
    """
    bounds = spec.bounds()
    if not np.all(np.isfinite(bounds)):
        message = "QVAR stability cannot be verified for unbounded coefficients."
        logger.warning(message)
        warnings.warn(message, StabilityWarning, stacklevel=2)
        return False
    total = sum(linalg.norm(matrix, 2) for matrix in bounds)
    if total >= 1.0:
        message = (
            "QVAR sufficient stability condition fails: sum of norms %g >= 1."
            % total
        )
        logger.warning(message)
        warnings.warn(message, StabilityWarning, stacklevel=2)
        return False
    return True


def _check_sizes(n, burn_in, minimum=2):
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise InvalidArgumentError("n must be an integer >= %d, got %r." % (minimum, n))
    if burn_in is None:
        burn_in = app_settings.BURN_IN
    if isinstance(burn_in, bool) or int(burn_in) != burn_in or burn_in < 0:
        raise InvalidArgumentError("burn_in must be a non-negative integer.")
    return int(n), int(burn_in)


def simulate_qvar(spec, n, burn_in=None, seed=0):
    """
    Simulate a QVAR from zero initial values and discard the first
    ``burn_in`` observations.

    Stability is not checked here; see ``check_qvar_stability()``. The
    result is a ``TimeSeriesMatrix``, so ``n`` has to be at least 2.
    """
    n, burn_in = _check_sizes(n, burn_in)
    total = n + burn_in
    p, d = spec.p, spec.d
    uniforms = _open_uniforms(_generator(seed), (total, d))

    # Coefficients for every time point: theta[t, j, l, m] uses U[t, l].
    theta = np.zeros((total, p, d, d))
    for j, matrix in enumerate(spec.coeff):
        for row, entries in enumerate(matrix):
            for column, entry in enumerate(entries):
                if not entry.is_zero:
                    theta[:, j, row, column] = entry(uniforms[:, row])
    intercept = np.column_stack(
        [entry(uniforms[:, row]) for row, entry in enumerate(spec.intercept)]
    )

    values = np.zeros((total + p, d))
    for t in range(total):
        current = intercept[t].copy()
        for j in range(p):
            current += theta[t, j] @ values[p + t - j - 1]
        values[p + t] = current
    return TimeSeriesMatrix(values[p + burn_in :])


def simulate_var1(model, n, burn_in=None, seed=0):
    """Simulate a Gaussian VAR(1) from zero initial values (``n >= 2``)."""
    n, burn_in = _check_sizes(n, burn_in)
    total = n + burn_in
    A = model.matrix
    innovations = _normals(_generator(seed), (total, model.d))

    values = np.zeros((total, model.d))
    previous = np.zeros(model.d)
    for t in range(total):
        previous = A @ previous + innovations[t]
        values[t] = previous
    return TimeSeriesMatrix(values[burn_in:])


def simulate_toy(kind, n, seed=0):
    """
    The bivariate toy processes ``(e_t, e_t**2)``, ``(e_t, e_{t-1}**2)`` and a
    pair of independent standard normal series.

    The lagged variant draws n + 1 innovations from the same stream as
    ``eps_square_now`` and drops the first pair.
    """
    n, _ = _check_sizes(n, 0)
    if kind == "eps_square_now":
        eps = _normals(_generator(seed), n)
        values = np.column_stack([eps, eps**2])
    elif kind == "eps_square_lag1":
        eps = _normals(_generator(seed), n + 1)
        values = np.column_stack([eps[1:], eps[:-1] ** 2])
    elif kind == "independent_noise":
        first, second = np.random.SeedSequence(seed).spawn(2)
        values = np.column_stack(
            [_normals(_generator(first), n), _normals(_generator(second), n)]
        )
    else:
        raise InvalidArgumentError(
            "Unknown toy process '%s'. Choices are: %s" % (kind, ", ".join(TOY_KINDS))
        )
    return TimeSeriesMatrix(values, ("x", "y"))


def benchmark_qvar(p=1, slope=1.2):
    """
    Bivariate QVAR(p) with normal-quantile intercepts and ``slope * (u - 0.5)``
    on the off-diagonal of the lag p matrix; all other coefficients vanish.
    """
    if p < 1:
        raise InvalidArgumentError("p must be >= 1.")
    off = CoefficientFunction.linear(0.0, slope)
    coeff = [[[_ZERO, _ZERO], [_ZERO, _ZERO]] for _ in range(p)]
    coeff[p - 1] = [[_ZERO, off], [off, _ZERO]]
    normal = CoefficientFunction.normal_quantile()
    return QVARSpec(p=p, d=2, coeff=coeff, intercept=[normal, normal])


def benchmark_var1(a, b=0.0):
    """VAR(1) with ``A = [[b, a], [a, b]]``."""
    return VARModel(((b, a), (a, b)))


def spec_from_json(data):
    """
    Build a ``QVARSpec`` or ``VARModel`` from its JSON form (a string or the
    decoded object)::

        {"type": "qvar", "p": 1, "d": 2,
         "coeff": [{"lag": 1, "row": 1, "col": 2, "form": "linear",
                    "params": [0, 1.2]}, ...],
         "intercept": [{"row": 1, "form": "normal_quantile", "params": []}, ...]}
        {"type": "var1", "A": [[0, 0.5], [0.5, 0]]}

    Lags, rows and columns are 1-based; unlisted coefficients are 0.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except ValueError as e:
            raise InvalidArgumentError("Invalid model JSON: %s" % e) from e
    if not isinstance(data, dict):
        raise InvalidArgumentError("A model spec must be a JSON object.")

    kind = data.get("type")
    try:
        if kind == "var1":
            return VARModel(tuple(tuple(row) for row in data["A"]))
        if kind == "qvar":
            p, d = int(data["p"]), int(data["d"])
            coeff = [[[_ZERO] * d for _ in range(d)] for _ in range(p)]
            for entry in data.get("coeff", []):
                lag, row, col = entry["lag"], entry["row"], entry["col"]
                if not (1 <= lag <= p and 1 <= row <= d and 1 <= col <= d):
                    raise InvalidArgumentError(
                        "Coefficient index (lag=%s, row=%s, col=%s) out of range."
                        % (lag, row, col)
                    )
                coeff[lag - 1][row - 1][col - 1] = _coefficient(entry)
            intercept = [_ZERO] * d
            for entry in data.get("intercept", []):
                row = entry["row"]
                if not 1 <= row <= d:
                    raise InvalidArgumentError("Intercept row %s out of range." % row)
                intercept[row - 1] = _coefficient(entry)
            return QVARSpec(p=p, d=d, coeff=coeff, intercept=intercept)
    except (KeyError, TypeError) as e:
        raise InvalidArgumentError("Malformed model spec: %r" % e) from e
    raise InvalidArgumentError(
        "Unknown model type %r, expected 'qvar' or 'var1'." % (kind,)
    )


def spec_to_json(spec):
    """The JSON object of a ``QVARSpec`` or ``VARModel``; zero entries are omitted."""
    if isinstance(spec, VARModel):
        return {"type": "var1", "A": [list(row) for row in spec.A]}
    coeff = []
    for lag, matrix in enumerate(spec.coeff, 1):
        for row, entries in enumerate(matrix, 1):
            for col, entry in enumerate(entries, 1):
                if not entry.is_zero:
                    coeff.append(
                        {
                            "lag": lag,
                            "row": row,
                            "col": col,
                            "form": entry.form,
                            "params": list(entry.params),
                        }
                    )
    intercept = [
        {"row": row, "form": entry.form, "params": list(entry.params)}
        for row, entry in enumerate(spec.intercept, 1)
        if not entry.is_zero
    ]
    return {
        "type": "qvar",
        "p": spec.p,
        "d": spec.d,
        "coeff": coeff,
        "intercept": intercept,
    }

import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from quantile_spectra import (
    KernelSpec,
    QuantileGrid,
    TimeSeriesMatrix,
    core,
    make_fourier_grid,
    validate_quantile_grid,
)
from quantile_spectra.exceptions import (
    BoundaryQuantileError,
    InvalidArgumentError,
    InvalidDataError,
    QuantileOrderingError,
    QuantileSpectraError,
)


class TestTimeSeriesMatrix(SimpleTestCase):
    def test_shape_and_names(self):
        series = TimeSeriesMatrix([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], ("a", "b"))
        self.assertEqual(series.n, 3)
        self.assertEqual(series.d, 2)
        self.assertEqual(series.names, ("a", "b"))

    def test_default_names(self):
        series = TimeSeriesMatrix(np.zeros((4, 3)))
        self.assertEqual(series.names, ("X1", "X2", "X3"))

    def test_one_dimensional(self):
        """A flat array is a single column."""
        series = TimeSeriesMatrix([1.0, 2.0, 3.0])
        self.assertEqual((series.n, series.d), (3, 1))

    def test_read_only(self):
        series = TimeSeriesMatrix(np.zeros((4, 2)))
        with self.assertRaises(ValueError):
            series.values[0, 0] = 1.0

    def test_select(self):
        series = TimeSeriesMatrix(np.arange(10.0).reshape(5, 2), ("a", "b"))
        selected = series.select(["b"])
        self.assertEqual(selected.names, ("b",))
        np.testing.assert_array_equal(selected.values[:, 0], [1, 3, 5, 7, 9])

    def test_non_finite(self):
        with self.assertRaises(InvalidDataError):
            TimeSeriesMatrix([[1.0, 2.0], [math.nan, 4.0]])
        with self.assertRaises(InvalidDataError):
            TimeSeriesMatrix([[1.0, math.inf], [3.0, 4.0]])

    def test_too_short(self):
        with self.assertRaises(InvalidDataError):
            TimeSeriesMatrix([[1.0, 2.0]])

    def test_name_count(self):
        with self.assertRaises(InvalidDataError):
            TimeSeriesMatrix(np.zeros((3, 2)), ("a",))

    def test_errors_are_value_errors(self):
        """Callers catching ValueError see every package error."""
        self.assertTrue(issubclass(InvalidDataError, QuantileSpectraError))
        self.assertTrue(issubclass(QuantileSpectraError, ValueError))


class TestQuantileGrid(SimpleTestCase):
    def test_valid(self):
        grid = validate_quantile_grid([0.05, 0.5, 0.95])
        self.assertIsInstance(grid, QuantileGrid)
        self.assertEqual(list(grid), [0.05, 0.5, 0.95])
        self.assertEqual(len(grid), 3)
        self.assertEqual(grid[1], 0.5)

    def test_boundary(self):
        for levels in ([0.0, 0.5], [0.5, 1.0], [-0.1], [1.5]):
            with self.assertRaises(BoundaryQuantileError):
                validate_quantile_grid(levels)

    def test_ordering(self):
        with self.assertRaises(QuantileOrderingError):
            validate_quantile_grid([0.5, 0.25])
        with self.assertRaises(QuantileOrderingError):
            validate_quantile_grid([0.5, 0.5])

    def test_empty(self):
        with self.assertRaises(InvalidArgumentError):
            validate_quantile_grid([])

    def test_idempotent(self):
        grid = validate_quantile_grid([0.1, 0.9])
        self.assertEqual(validate_quantile_grid(grid), grid)
        self.assertEqual(hash(validate_quantile_grid(grid)), hash(grid))

    @given(
        st.lists(
            st.floats(min_value=1e-6, max_value=1 - 1e-6),
            min_size=1,
            max_size=10,
            unique=True,
        )
    )
    def test_sorted_levels_validate(self, levels):
        grid = validate_quantile_grid(sorted(levels))
        self.assertEqual(list(grid), sorted(levels))


class TestFourierGrid(SimpleTestCase):
    def test_frequencies(self):
        grid = make_fourier_grid(8)
        self.assertEqual(len(grid), 8)
        self.assertEqual(grid.omegas[0], 0.0)
        self.assertAlmostEqual(grid.omegas[2], math.pi / 2)

    def test_half(self):
        np.testing.assert_array_equal(make_fourier_grid(9).half().indexes, range(5))
        np.testing.assert_array_equal(make_fourier_grid(8).half().indexes, range(5))

    def test_too_small(self):
        with self.assertRaises(InvalidArgumentError):
            make_fourier_grid(1)
        with self.assertRaises(InvalidArgumentError):
            make_fourier_grid(2.5)


class TestKernelSpec(SimpleTestCase):
    def test_mass(self):
        for name in ("epanechnikov", "rectangular"):
            self.assertAlmostEqual(KernelSpec.from_name(name).moment(0), 1.0, places=10)

    def test_epanechnikov_second_moment(self):
        kernel = KernelSpec.from_name("epanechnikov")
        self.assertAlmostEqual(kernel.moment(2), math.pi**2 / 5, delta=1e-9)

    def test_odd_moments_vanish(self):
        kernel = KernelSpec.from_name("epanechnikov")
        self.assertAlmostEqual(kernel.moment(1), 0.0, places=12)
        self.assertAlmostEqual(kernel.moment(3), 0.0, places=12)

    def test_support(self):
        kernel = KernelSpec.from_name("epanechnikov")
        np.testing.assert_array_equal(kernel([-4.0, 4.0]), [0.0, 0.0])
        self.assertAlmostEqual(float(kernel(0.0)), 3 / (4 * math.pi))

    def test_nonnegative(self):
        for name in ("epanechnikov", "rectangular"):
            self.assertTrue(KernelSpec.from_name(name).nonnegative)

    def test_negative_lobes(self):
        """(1 + 2 cos v) / (2 pi) has unit mass and dips below zero near +-pi."""

        def cosine(v):
            v = np.asarray(v, dtype=float)
            inside = np.abs(v) <= math.pi
            return np.where(inside, (1 + 2 * np.cos(v)) / (2 * math.pi), 0.0)

        with mock.patch.dict(core._KERNELS, {"cosine": (cosine, 2)}):
            self.assertFalse(KernelSpec.from_name("cosine").nonnegative)

    def test_unknown(self):
        with self.assertRaises(InvalidArgumentError):
            KernelSpec.from_name("gaussian")

    def test_from_instance(self):
        kernel = KernelSpec.from_name("rectangular")
        self.assertIs(KernelSpec.from_name(kernel), kernel)

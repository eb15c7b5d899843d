import json
import os

import numpy as np
from django.test import SimpleTestCase

from quantile_spectra import TimeSeriesMatrix
from quantile_spectra.exceptions import ColumnError, InvalidArgumentError, ParseError
from quantile_spectra.io import (
    RECORD_FIELDS,
    SpectraRecord,
    load_csv,
    read_records,
    write_outputs,
    write_series,
)
from tests.utils import TempDirMixin


class TestLoadCSV(TempDirMixin, SimpleTestCase):
    def test_all_columns(self):
        path = self.write("data.csv", "a,b\n1,2\n3,4\n5,6\n")
        series = load_csv(path)
        self.assertEqual(series.names, ("a", "b"))
        np.testing.assert_array_equal(series.values, [[1, 2], [3, 4], [5, 6]])

    def test_column_selection(self):
        path = self.write("data.csv", "a, b ,c\n1,2,3\n4,5,6\n")
        series = load_csv(path, ["c", "b"])
        self.assertEqual(series.names, ("c", "b"))
        np.testing.assert_array_equal(series.values, [[3, 2], [6, 5]])

    def test_missing_column(self):
        path = self.write("data.csv", "a,b\n1,2\n3,4\n")
        with self.assertRaises(ColumnError) as context:
            load_csv(path, ["z"])
        self.assertEqual(context.exception.column, "z")
        self.assertIn("a, b", str(context.exception))

    def test_invalid_cells(self):
        for cell in ("NaN", "", "abc", "inf"):
            path = self.write("data.csv", "a,b\n1,2\n3,%s\n5,6\n" % cell)
            with self.assertRaises(ParseError, msg=cell) as context:
                load_csv(path)
            self.assertEqual(context.exception.row, 3)
            self.assertEqual(context.exception.column, "b")

    def test_unselected_cells_are_ignored(self):
        path = self.write("data.csv", "a,b\n1,x\n3,y\n")
        np.testing.assert_array_equal(load_csv(path, ["a"]).values, [[1], [3]])

    def test_ragged_row(self):
        path = self.write("data.csv", "a,b\n1,2\n3\n")
        with self.assertRaises(ParseError):
            load_csv(path)

    def test_empty_file(self):
        with self.assertRaises(ParseError):
            load_csv(self.write("data.csv", ""))

    def test_series_round_trip(self):
        series = TimeSeriesMatrix([[0.1, -2.5], [1e-300, 3.0]], ("x", "y"))
        path = write_series(series, os.path.join(self.directory, "series.csv"))
        loaded = load_csv(path)
        self.assertEqual(loaded.names, ("x", "y"))
        np.testing.assert_array_equal(loaded.values, series.values)


class TestWriteOutputs(TempDirMixin, SimpleTestCase):
    records = [
        SpectraRecord(0.5, 0.5 / (2 * np.pi), 0.25, 0.75, 1, 2, "f", 0.1, -0.2),
        SpectraRecord(
            0.5,
            0.5 / (2 * np.pi),
            0.25,
            0.75,
            1,
            2,
            "coherency",
            0.3,
            0.0,
            ci_lo_re=0.1,
            ci_hi_re=0.5,
            ci_lo_im=-0.1,
            ci_hi_im=0.1,
        ),
    ]

    def test_csv(self):
        path, metadata_path = write_outputs(
            self.records, "csv", self.directory, {"n": 4}
        )
        self.assertEqual(path, os.path.join(self.directory, "spectra.csv"))
        with open(path, encoding="utf-8", newline="") as f:
            lines = f.read().split("\n")
        self.assertEqual(lines[0], ",".join(RECORD_FIELDS))
        self.assertTrue(
            lines[1].endswith(",1,2,f,0.10000000000000001,-0.20000000000000001,,,,")
        )
        self.assertEqual(lines[-1], "")
        self.assertEqual(read_records(path), self.records)
        with open(metadata_path, encoding="utf-8") as f:
            self.assertEqual(json.load(f), {"n": 4})

    def test_json(self):
        path, _ = write_outputs(self.records, "json", self.directory)
        self.assertTrue(path.endswith("spectra.json"))
        with open(path, encoding="utf-8") as f:
            rows = json.load(f)
        self.assertEqual(rows[0]["quantity"], "f")
        self.assertIsNone(rows[0]["ci_lo_re"])
        self.assertEqual(rows[1]["ci_hi_im"], 0.1)
        self.assertEqual(read_records(path), self.records)

    def test_no_records(self):
        path, _ = write_outputs([], "csv", self.directory)
        with open(path, encoding="utf-8") as f:
            self.assertEqual(f.read(), ",".join(RECORD_FIELDS) + "\n")
        path, _ = write_outputs(iter([]), "json", self.directory)
        with open(path, encoding="utf-8") as f:
            self.assertEqual(json.load(f), [])

    def test_creates_directory_and_basename(self):
        directory = os.path.join(self.directory, "nested", "out")
        path, metadata_path = write_outputs(
            self.records, "csv", directory, basename="oracle"
        )
        self.assertEqual(os.path.basename(path), "oracle.csv")
        self.assertTrue(os.path.exists(metadata_path))

    def test_unknown_format(self):
        with self.assertRaises(InvalidArgumentError):
            write_outputs(self.records, "xml", self.directory)

"""
Reading time series from CSV files and writing spectra records.

Records are written as UTF-8 CSV with LF line endings and numbers printed
with 17 significant digits, or as a JSON array of record objects. Every
output file set includes a ``metadata.json`` sidecar.

"""
import csv
import json
import logging
import math
import os
from typing import NamedTuple, Optional

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from quantile_spectra.core import TimeSeriesMatrix
from quantile_spectra.exceptions import ColumnError, InvalidArgumentError, ParseError

__all__ = [
    "FORMATS",
    "RECORD_FIELDS",
    "SpectraRecord",
    "load_csv",
    "read_records",
    "write_outputs",
    "write_series",
]

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


class SpectraRecord(NamedTuple):
    omega: float
    freq_cycles: float
    tau1: float
    tau2: float
    j1: int
    j2: int
    quantity: str
    re: float
    im: float
    ci_lo_re: Optional[float] = None
    ci_hi_re: Optional[float] = None
    ci_lo_im: Optional[float] = None
    ci_hi_im: Optional[float] = None


RECORD_FIELDS = SpectraRecord._fields

_INTEGER_FIELDS = {"j1", "j2"}


def _format_number(value):
    if value is None:
        return ""
    return "%.17g" % value


def load_csv(path, columns=None):
    """
    Load the named columns (all columns by default) of a CSV file whose first
    row is a header.

    Empty, non-numeric and non-finite cells raise ``ParseError`` with the
    1-based line number of the file and the column name.
    """
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = [name.strip() for name in next(reader)]
        except StopIteration:
            raise ParseError("Missing header", 1, "") from None

        if columns is None:
            columns = header
        positions = []
        for column in columns:
            if column not in header:
                raise ColumnError(column, header)
            positions.append(header.index(column))

        rows = []
        for line, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    "Expected %d fields, got %d" % (len(header), len(row)),
                    line,
                    "",
                )
            parsed = []
            for position in positions:
                cell = row[position].strip()
                try:
                    value = float(cell)
                except ValueError:
                    value = math.nan
                if not math.isfinite(value):
                    raise ParseError(
                        "Invalid numeric value %r" % cell, line, header[position]
                    )
                parsed.append(value)
            rows.append(parsed)

    logger.debug("Loaded %d rows of %d columns from %s.", len(rows), len(columns), path)
    values = np.array(rows, dtype=float).reshape(len(rows), len(columns))
    return TimeSeriesMatrix(values, tuple(columns))


def write_series(series, path):
    """Write a ``TimeSeriesMatrix`` as CSV with its column names as header."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(series.names)
        for row in series.values:
            writer.writerow([_format_number(value) for value in row])
    return path


def _write_csv(records, path):
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RECORD_FIELDS)
        for record in records:
            writer.writerow(
                [
                    value if name in _INTEGER_FIELDS or name == "quantity"
                    else _format_number(value)
                    for name, value in zip(RECORD_FIELDS, record)
                ]
            )
            count += 1
    return count


def _write_json(records, path):
    count = 0
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        f.write("[")
        for record in records:
            f.write(",\n" if count else "\n")
            json.dump(record._asdict(), f)
            count += 1
        f.write("\n]\n" if count else "]\n")
    return count


def write_outputs(records, format, directory, metadata=None, basename="spectra"):
    """
    Write records to ``<directory>/<basename>.<format>`` and the metadata to
    ``<directory>/metadata.json``; returns both paths.

    Records are written in the order given.
    """
    if format not in FORMATS:
        raise InvalidArgumentError(
            "Unknown output format '%s'. Choices are: %s" % (format, ", ".join(FORMATS))
        )
    os.makedirs(directory, exist_ok=True)

    path = os.path.join(directory, "%s.%s" % (basename, format))
    writer = _write_csv if format == "csv" else _write_json
    count = writer(records, path)

    metadata_path = os.path.join(directory, "metadata.json")
    with open(metadata_path, "w", newline="\n", encoding="utf-8") as f:
        json.dump(metadata or {}, f, cls=DjangoJSONEncoder, indent=2, sort_keys=True)
        f.write("\n")

    logger.info("Wrote %d records to %s.", count, path)
    return path, metadata_path


def read_records(path):
    """Read records back from a file written by ``write_outputs()``."""

    def convert(name, value):
        if value is None or value == "":
            return None
        if name in _INTEGER_FIELDS:
            return int(value)
        if name == "quantity":
            return value
        return float(value)

    if path.endswith(".json"):
        with open(path, encoding="utf-8") as f:
            rows = json.load(f)
        return [
            SpectraRecord(*(convert(name, row[name]) for name in RECORD_FIELDS))
            for row in rows
        ]
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        return [
            SpectraRecord(*(convert(name, row[name]) for name in RECORD_FIELDS))
            for row in reader
        ]

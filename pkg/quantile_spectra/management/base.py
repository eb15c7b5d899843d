"""Shared options and error handling of the management commands."""
import argparse
import json

from django.core.management.base import BaseCommand, CommandError

from quantile_spectra.conf import app_settings
from quantile_spectra.core import KERNEL_NAMES
from quantile_spectra.exceptions import QuantileSpectraError
from quantile_spectra.io import FORMATS


def float_list(value):
    """Parse ``"0.1,0.5,0.9"`` into a list of floats."""
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "Expected a comma separated list of numbers, got %r." % value
        )


def omegas_option(value):
    if value == "fourier":
        return value
    return float_list(value)


def bandwidth_option(value):
    if value == "auto":
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "The bandwidth must be 'auto' or a number, got %r." % value
        )


def matrix_option(value):
    try:
        return json.loads(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError("Invalid matrix %r: %s" % (value, e))


class SpectraCommand(BaseCommand):
    """
    Base class translating package errors into ``CommandError``.

    Subclasses implement ``run()`` instead of ``handle()``.
    """

    requires_system_checks = []

    def add_grid_arguments(self, parser):
        parser.add_argument(
            "--quantiles",
            type=float_list,
            default=None,
            help="Comma separated quantile levels (default: %s)."
            % ",".join(str(level) for level in app_settings.QUANTILE_LEVELS),
        )
        parser.add_argument(
            "--omegas",
            type=omegas_option,
            default="fourier",
            help="'fourier' or a comma separated list of frequencies in radians.",
        )
        parser.add_argument("--format", choices=FORMATS, default="csv")
        parser.add_argument("--out", required=True, help="Output directory.")

    def add_kernel_arguments(self, parser):
        parser.add_argument("--kernel", choices=KERNEL_NAMES, default=None)
        parser.add_argument("--bandwidth", type=bandwidth_option, default="auto")
        parser.add_argument("--alpha", type=float, default=None)

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except QuantileSpectraError as e:
            raise CommandError(str(e)) from e

    def run(self, **options):
        raise NotImplementedError(
            "subclasses of SpectraCommand must provide a run() method"
        )

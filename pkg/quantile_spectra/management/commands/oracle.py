from quantile_spectra import __version__
from quantile_spectra.conf import app_settings
from quantile_spectra.io import write_outputs
from quantile_spectra.management.base import SpectraCommand, matrix_option
from quantile_spectra.oracle import GaussianProcessSpec
from quantile_spectra.pipeline import frechet_table, oracle_records


class Command(SpectraCommand):
    help = (
        "Tabulate the quantile spectra and coherency of a Gaussian white noise "
        "or VAR(1) process on the grid analyze uses for n observations."
    )

    def add_arguments(self, parser):
        parser.add_argument(
            "--process", choices=("white_noise", "var1"), default="white_noise"
        )
        parser.add_argument(
            "--rho", type=float, default=0.0, help="Correlation of the white noise."
        )
        parser.add_argument(
            "--A",
            dest="A",
            type=matrix_option,
            default=None,
            help='VAR(1) coefficient matrix as JSON, e.g. "[[0, 0.5], [0.5, 0]]".',
        )
        parser.add_argument("--n", type=int, required=True)
        self.add_grid_arguments(parser)

    def run(self, **options):
        if options["process"] == "var1":
            if options["A"] is None:
                spec = GaussianProcessSpec.var1([[0.0, 0.5], [0.5, 0.0]])
            else:
                spec = GaussianProcessSpec.var1(options["A"])
        else:
            spec = GaussianProcessSpec.white_noise(options["rho"])

        levels = options["quantiles"] or list(app_settings.QUANTILE_LEVELS)
        metadata = {
            "n": options["n"],
            "d": spec.d,
            "process": options["process"],
            "rho": spec.rho if spec.kind == "white_noise" else None,
            "A": [list(row) for row in spec.A] if spec.A else None,
            "lags": spec.lags,
            "quantiles": levels,
            "frechet_bounds": frechet_table(levels),
            "version": __version__,
        }
        path, _ = write_outputs(
            oracle_records(spec, options["n"], levels, options["omegas"]),
            options["format"],
            options["out"],
            metadata,
            basename="oracle",
        )
        if options["verbosity"] > 0:
            self.stdout.write("Wrote %s" % path)

from quantile_spectra import __version__
from quantile_spectra.io import write_outputs
from quantile_spectra.management.base import SpectraCommand
from quantile_spectra.pipeline import (
    RunConfig,
    pipeline_metadata,
    run_pipeline,
    spectra_records,
)


class Command(SpectraCommand):
    help = (
        "Estimate quantile spectra, coherency and confidence bands of the columns "
        "of a CSV file."
    )

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="CSV file with a header.")
        parser.add_argument(
            "--columns",
            type=lambda value: [name.strip() for name in value.split(",")],
            default=None,
            help="Comma separated column names (default: all).",
        )
        self.add_grid_arguments(parser)
        self.add_kernel_arguments(parser)
        parser.add_argument(
            "--seed",
            type=int,
            default=None,
            help="Seed of the simulated input, recorded in the metadata.",
        )
        parser.add_argument("--workers", type=int, default=None)
        parser.add_argument(
            "--clip-coherency",
            action="store_true",
            help="Clip the real coherency bands to [-1, 1].",
        )

    def run(self, **options):
        config = RunConfig(
            input=options["input"],
            columns=options["columns"],
            quantiles=options["quantiles"],
            kernel=options["kernel"],
            bandwidth=options["bandwidth"],
            alpha=options["alpha"],
            omegas=options["omegas"],
            out=options["out"],
            format=options["format"],
            seed=options["seed"],
            workers=options["workers"],
            clip_coherency=options["clip_coherency"],
        )
        result = run_pipeline(config)
        path, _ = write_outputs(
            spectra_records(result),
            config.format,
            config.out,
            pipeline_metadata(config, result, __version__),
        )
        if options["verbosity"] > 0:
            self.stdout.write("Wrote %s" % path)

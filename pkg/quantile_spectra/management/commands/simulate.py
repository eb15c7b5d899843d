import json

from django.core.management.base import CommandError

from quantile_spectra.io import write_series
from quantile_spectra.management.base import SpectraCommand
from quantile_spectra.simulation import (
    TOY_KINDS,
    QVARSpec,
    benchmark_qvar,
    benchmark_var1,
    check_qvar_stability,
    simulate_qvar,
    simulate_toy,
    simulate_var1,
    spec_from_json,
)

PRESETS = ("qvar1", "qvar2", "qvar3", "var1") + TOY_KINDS


class Command(SpectraCommand):
    help = "Simulate a QVAR, a Gaussian VAR(1) or a toy process into a CSV file."

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--model", help="Model spec JSON file.")
        source.add_argument("--preset", choices=PRESETS)
        parser.add_argument(
            "--a",
            type=float,
            default=0.5,
            help="Off-diagonal coefficient of the var1 preset.",
        )
        parser.add_argument(
            "--b",
            type=float,
            default=0.0,
            help="Diagonal coefficient of the var1 preset.",
        )
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--burn-in", type=int, default=None)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", required=True, help="Output CSV file.")

    def run(self, **options):
        n, seed, burn_in = options["n"], options["seed"], options["burn_in"]
        preset = options["preset"]
        if preset in TOY_KINDS:
            series = simulate_toy(preset, n, seed)
        else:
            if preset == "var1":
                model = benchmark_var1(options["a"], options["b"])
            elif preset:
                model = benchmark_qvar(int(preset[-1]))
            else:
                try:
                    with open(options["model"], encoding="utf-8") as f:
                        data = json.load(f)
                except (OSError, ValueError) as e:
                    raise CommandError("Cannot read model spec: %s" % e) from e
                model = spec_from_json(data)

            if isinstance(model, QVARSpec):
                check_qvar_stability(model)
                series = simulate_qvar(model, n, burn_in, seed)
            else:
                series = simulate_var1(model, n, burn_in, seed)

        write_series(series, options["out"])
        if options["verbosity"] > 0:
            self.stdout.write(
                "Wrote %d x %d series to %s" % (series.n, series.d, options["out"])
            )

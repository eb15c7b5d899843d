"""
Run the management commands without a Django project::

    python -m quantile_spectra analyze --input data.csv --out results/

A minimal settings object is configured when ``DJANGO_SETTINGS_MODULE`` is not
set.
"""
import os
import sys


def main(argv=None):
    import django
    from django.conf import settings
    from django.core.management import execute_from_command_line

    if not os.environ.get("DJANGO_SETTINGS_MODULE") and not settings.configured:
        settings.configure(
            INSTALLED_APPS=["quantile_spectra"],
            LOGGING={
                "version": 1,
                "disable_existing_loggers": False,
                "handlers": {"console": {"class": "logging.StreamHandler"}},
                "loggers": {
                    "quantile_spectra": {"handlers": ["console"], "level": "WARNING"}
                },
            },
        )
        django.setup()
    execute_from_command_line(argv if argv is not None else sys.argv)


if __name__ == "__main__":
    main()

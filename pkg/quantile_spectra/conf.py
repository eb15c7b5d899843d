"""
Settings for django-quantile-spectra are all namespaced in the
``QUANTILE_SPECTRA`` setting. For example your project's ``settings.py`` file
might look like this:

    QUANTILE_SPECTRA = {
        "QUANTILE_LEVELS": [0.1, 0.5, 0.9],
        "WORKERS": 4,
    }

Access settings through ``app_settings``, e.g. ``app_settings.KERNEL``. Any key
that isn't set falls back to the defaults below.

"""
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.core.signals import setting_changed

DEFAULTS = {
    "QUANTILE_LEVELS": [0.05, 0.25, 0.5, 0.75, 0.95],
    "KERNEL": "epanechnikov",
    "BANDWIDTH_CONSTANT": 0.4,
    "BANDWIDTH_EXPONENT": -0.25,
    "ALPHA": 0.05,
    "BURN_IN": 1024,
    # Threads used by scipy.fft and the covariance chunks, -1 means all cores.
    "WORKERS": 1,
    "CHUNK_SIZE": 16,
    "CLIP_TOLERANCE": 1e-12,
    "COHERENCE_TOLERANCE": 1e-10,
    "NORMALIZER_FLOOR": 1e-6,
    "VARIANCE_WARNING_TOLERANCE": 1e-8,
    "LAG_TOLERANCE": 1e-12,
    "MIN_LAGS": 64,
    "MAX_LAGS": 100000,
    "DIFFERENCE_STEP": 1e-3,
}

_INTEGER_KEYS = {"BURN_IN", "WORKERS", "CHUNK_SIZE", "MIN_LAGS", "MAX_LAGS"}


def _check(key, value):
    if key == "QUANTILE_LEVELS":
        if not isinstance(value, (list, tuple)) or not value:
            raise ImproperlyConfigured(
                "QUANTILE_SPECTRA['QUANTILE_LEVELS'] must be a non-empty list."
            )
    elif key == "KERNEL":
        if not isinstance(value, str):
            raise ImproperlyConfigured("QUANTILE_SPECTRA['KERNEL'] must be a string.")
    elif key in _INTEGER_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ImproperlyConfigured(
                "QUANTILE_SPECTRA['%s'] must be an integer." % key
            )
    elif isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ImproperlyConfigured("QUANTILE_SPECTRA['%s'] must be a number." % key)


class AppSettings:
    """
    Lazy view of ``settings.QUANTILE_SPECTRA`` merged over ``DEFAULTS``.

    Values are validated on first access and cached until ``reload()``.
    """

    def __init__(self, defaults=None):
        self.defaults = defaults or DEFAULTS
        self._cached = set()
        self._user_settings = None

    @property
    def user_settings(self):
        if self._user_settings is None:
            self._user_settings = getattr(settings, "QUANTILE_SPECTRA", {})
            unknown = set(self._user_settings) - set(self.defaults)
            if unknown:
                raise ImproperlyConfigured(
                    "Unknown QUANTILE_SPECTRA settings: %s"
                    % ", ".join(sorted(unknown))
                )
        return self._user_settings

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError("Invalid QUANTILE_SPECTRA setting: '%s'" % attr)

        try:
            value = self.user_settings[attr]
        except KeyError:
            value = self.defaults[attr]
        _check(attr, value)

        # Cache the result.
        self._cached.add(attr)
        setattr(self, attr, value)
        return value

    def reload(self):
        for attr in self._cached:
            delattr(self, attr)
        self._cached.clear()
        self._user_settings = None


app_settings = AppSettings()


def reload_app_settings(*args, **kwargs):
    if kwargs["setting"] == "QUANTILE_SPECTRA":
        app_settings.reload()


setting_changed.connect(reload_app_settings)

"""Engine settings.

Defaults can be overridden from the Django settings module::

    RG_ENGINE = {
        "INTEGRATOR": {"METHOD": "rk4", "STEP": 1e-3},
        "EPS_GRID": [0.02, 0.01],
    }

Nested dicts are merged key by key with the defaults.
"""
import copy
from typing import Any, Dict

from django.conf import settings
from django.core.signals import setting_changed

DEFAULTS: "Dict[str, Any]" = {
    "INTEGRATOR": {
        "METHOD": "rk45",
        "ATOL": 1e-10,
        "RTOL": 1e-9,
        "STEP": 1e-2,
        "MAX_STEPS": 10**6,
    },
    "PHASE_METHOD": "dop853",
    "HORIZON": 5.0,
    "EPS_GRID": [0.04, 0.02, 0.01, 0.005],
    "SAMPLES_PER_UNIT_TIME": 20,
    "STABILITY_TOL": 1e-8,
    "NEWTON_TOL": 1e-13,
    "NEWTON_MAX_ITER": 60,
    "COLLISION_TOL": 1e-6,
    "FD_STEP": 1e-5,
    "CHART_TOL": 1e-10,
    "ESCAPE_RADIUS": 1e6,
    "FLOAT_FREQUENCY_TOL": 1e-12,
}


def _merge(defaults, overrides):
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            raise KeyError(f"Unknown RG_ENGINE setting: {key}")
        if isinstance(defaults[key], dict):
            merged[key] = _merge(defaults[key], value)
        else:
            merged[key] = value
    return merged


class EngineSettings:
    """Attribute access to the merged ``RG_ENGINE`` settings."""

    def __init__(self, defaults=None):
        self.defaults = defaults or DEFAULTS
        self._cached = None

    @property
    def values(self) -> "Dict[str, Any]":
        if self._cached is None:
            overrides = {}
            if settings.configured:
                overrides = getattr(settings, "RG_ENGINE", {}) or {}
            self._cached = _merge(self.defaults, overrides)
        return self._cached

    def __getattr__(self, attr):
        if attr.startswith("_") or attr == "defaults":
            raise AttributeError(attr)
        try:
            return self.values[attr]
        except KeyError:
            raise AttributeError(f"Invalid RG_ENGINE setting: '{attr}'")

    def reload(self):
        self._cached = None


engine_settings = EngineSettings()


def reload_engine_settings(*args, **kwargs):
    if kwargs.get("setting") == "RG_ENGINE":
        engine_settings.reload()


setting_changed.connect(reload_engine_settings)

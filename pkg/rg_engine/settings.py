"""Settings for running the management commands outside a Django project.

``python -m rg_engine <command>`` and the ``rg-engine`` script use this
module; projects that install the app configure ``RG_ENGINE`` themselves.
"""
import os

SECRET_KEY = "rg-engine-command-line"

DEBUG = False

INSTALLED_APPS = [
    "rest_framework",
    "rg_engine",
]

DATABASES = {}

USE_TZ = True

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "rg_engine": {
            "handlers": ["console"],
            "level": "DEBUG" if os.environ.get("RG_ENGINE_DEBUG") else "WARNING",
        },
    },
}

RG_ENGINE = {}

"""
Django settings for the rg_engine test project.

The tests use no database; ``DATABASES`` stays empty.
"""

import os
from pathlib import Path
import sys

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

REPO_DIR = BASE_DIR.parent

SAMPLE_SYSTEMS_DIR = REPO_DIR / 'sample_systems'

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = 'django-insecure-rg-engine-test-project'

DEBUG = True

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'rg_engine',
    'app',
]

DATABASES = {}

TEST_RUNNER = 'django.test.runner.DiscoverRunner'

USE_TZ = True


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {'class': 'logging.StreamHandler', 'formatter': 'plain'},
    },
    'loggers': {
        'rg_engine': {
            'handlers': ['console'],
            'level': 'DEBUG' if os.environ.get('RG_ENGINE_DEBUG') else 'ERROR',
        },
    },
}


# Engine

RG_ENGINE = {}

"""
Django settings for the resilience_rg project.

There is no web surface: the project is driven through
``python manage.py resilience <subcommand>``. Settings hold the app registry,
logging and the numeric defaults shared by every module.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals (signing); nothing here is secret.
SECRET_KEY = os.getenv('SECRET_KEY', 'resilience-rg-local')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'rest_framework',
    'bath.apps.BathConfig',
    'hypercube.apps.HypercubeConfig',
    'rg.apps.RgConfig',
    'probability.apps.ProbabilityConfig',
    'coulombgas.apps.CoulombgasConfig',
    'stabilizer.apps.StabilizerConfig',
    'experiments.apps.ExperimentsConfig',
]

# Serializers are used for config validation only
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}

# No model in this project is database-backed; the test runner only needs a
# valid default alias.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

USE_TZ = True
TIME_ZONE = 'UTC'


def _optional_int(value):
    return int(value) if value not in (None, '') else None


# Numeric defaults. Every operation accepts these as explicit keywords too.
RESILIENCE = {
    'ROOT_SEED': _optional_int(os.getenv('RESILIENCE_RG_SEED')),
    'QUAD_TOL': float(os.getenv('RESILIENCE_QUAD_TOL', '1e-8')),
    'QUAD_LIMIT': int(os.getenv('RESILIENCE_QUAD_LIMIT', '200')),
    'BLOWUP': float(os.getenv('RESILIENCE_BLOWUP', '1e3')),
    'MARGINAL_TOL': float(os.getenv('RESILIENCE_MARGINAL_TOL', '1e-9')),
    'KT_FLOOR': 1e-12,
    'RG_ELL_MAX': 10.0,
    'RG_STEP': 1e-3,
    'MAX_WICK_PAIRS': 6,
    'MAX_CELLS': 10**6,
    'MAX_ENUM_SIDE': 6,
    'MAX_ENUM_PAIRS': 2,
    'WORKERS': int(os.getenv('RESILIENCE_WORKERS', '1')),
    'MC_CHUNK': 100_000,
}

# ✅ Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'INFO',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': os.getenv('DJANGO_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
        **{
            app: {
                'handlers': ['console'],
                'level': os.getenv('RESILIENCE_LOG_LEVEL', 'INFO'),
                'propagate': False,
            }
            for app in (
                'bath', 'hypercube', 'rg', 'probability',
                'coulombgas', 'stabilizer', 'experiments', 'utils',
            )
        },
    },
}

"""
Django settings for the FOI development-index project.

Only the parts of Django the command-line pipeline needs are enabled: no
URLs, no templates, no middleware. Pipeline defaults live in ``FOI`` and can
be overridden through the environment (``FOI_THRESHOLD`` etc.) or
``foi/foi_config.json``.
"""

import sys, os
from os.path import abspath, basename, dirname, join, normpath
from foi.loader import load_credential, load_float, load_int

########## PATH CONFIGURATION
# Absolute filesystem path to the Django project directory:
DJANGO_ROOT = dirname(dirname(abspath(__file__)))

# Absolute filesystem path to the top-level project folder:
SITE_ROOT = dirname(DJANGO_ROOT)

# Site name:
SITE_NAME = basename(DJANGO_ROOT)

# Add our project to our pythonpath, this way we don't need to type our project
# name in our dotted import paths:
sys.path.append(DJANGO_ROOT)
########## END PATH CONFIGURATION

SECRET_KEY = load_credential('SECRET_KEY', 'foi-local-only-not-a-secret')

DEBUG = False

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
]

# apps
SECONDS_APPS = [
    'core',
    'indicator_store',
    'rescaling',
    'pillar_index',
    'classifier',
    'factor_analysis',
    'report_cli',
]

# package
THIRD_APPS = [
    'rest_framework',
]

INSTALLED_APPS += SECONDS_APPS + THIRD_APPS

# Nothing is persisted; the sqlite file only satisfies contrib apps.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': join(SITE_ROOT, 'foi.sqlite3'),
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}


########## FOI PIPELINE CONFIGURATION
FOI = {
    'THRESHOLD': load_float('FOI_THRESHOLD', 4.0),
    'EPSILON': load_float('FOI_EPSILON', 0.05),
    'MISSING_POLICY': load_credential('FOI_MISSING_POLICY', 'available_mean'),
    'FACTORS_K': load_int('FOI_FACTORS_K', 2),
    'VARIMAX_TOL': load_float('FOI_VARIMAX_TOL', 1e-12),
    'VARIMAX_MAX_ITER': load_int('FOI_VARIMAX_MAX_ITER', 1000),
    'DEFAULT_MANIFEST': load_credential(
        'FOI_DEFAULT_MANIFEST', normpath(join(SITE_ROOT, 'indicator_store', 'data', 'default_manifest.json'))),
    'REFERENCE_FIXTURE': load_credential(
        'FOI_REFERENCE_FIXTURE', normpath(join(SITE_ROOT, 'report_cli', 'fixtures', 'reference_tables.json'))),
}
########## END FOI PIPELINE CONFIGURATION


########## LOGGING CONFIGURATION
# stdout carries command output only; every log record goes to stderr.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
        'null': {
            'class': 'logging.NullHandler',
        },
    },
    'loggers': {
        'foi': {
            'handlers': ['console'],
            'level': 'INFO',
        },
    },
}

for _app in SECONDS_APPS:
    LOGGING['loggers'][_app] = {
        'handlers': ['console'],
        'level': 'WARNING',
        'propagate': False,
    }
########## END LOGGING CONFIGURATION

"""
Django settings for HereditaryLab project.

Generated by 'django-admin startproject' using Django 5.1.4.

The project has no web surface: it hosts the `hereditary` app, whose
management commands run kernel checks, model builds and ergodic probes.

For more information on this file, see
https://docs.djangoproject.com/en/5.1/topics/settings/
"""

from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = "django-insecure-hereditary-lab-local-only"

DEBUG = False

ALLOWED_HOSTS: list[str] = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "hereditary",
]

# Reports are produced by management commands only, no database is used.
DATABASES: dict = {}


# Serializers are used for validation and report shaping only.
REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": ("rest_framework.renderers.JSONRenderer",),
    "UNAUTHENTICATED_USER": None,
}


# Run configuration defaults
# Every value may be overridden by a YAML file (--config) and then by flags.

HEREDITARY = {
    "truncation": 4096,
    "psd_tol": 1e-10,
    "model_tol": 1e-8,
    "rank_tol": 1e-8,
    "m_grid": [1, 2, 4, 8, 16, 32, 64, 128, 256, 512],
    "n_grid": [
        10, 16, 25, 40, 63, 100, 158, 251, 398, 631,
        1000, 1585, 2512, 3981, 6310, 10000,
    ],
    "circle_samples": 4096,
    "seed": 0,
    "out": None,
    "csv_dir": None,
    "report_schema": BASE_DIR / "report_schema.yml",
}


# Logging
# https://docs.djangoproject.com/en/5.1/topics/logging/

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "{levelname} {name}: {message}", "style": "{"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "hereditary": {"handlers": ["console"], "level": "WARNING"},
    },
}


# Internationalization
# https://docs.djangoproject.com/en/5.1/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

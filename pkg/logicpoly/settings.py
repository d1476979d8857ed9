"""
Django settings for the logicpoly project.

Generated by 'django-admin startproject' using Django 5.2.7.
"""

from pathlib import Path
import os
from dotenv import load_dotenv
import dj_database_url
import environ

# Load environment variables
env = environ.Env()
environ.Env.read_env()
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY
SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-fallback-for-development')
DEBUG = os.environ.get('DEBUG', 'False') == 'True'
ALLOWED_HOSTS = os.environ.get('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

# Application definition
INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "geometry",
    "gadgets",
    "reduction",
    "sweep",
    "stacked",
    "workbench",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "whitenoise.middleware.WhiteNoiseMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "logicpoly.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "logicpoly.wsgi.application"

# Database
DATABASES = {
    'default': dj_database_url.parse(
        env('DATABASE_URL', default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}")
    )
}

# ----------------------------------------------------------------------
# 🔺 LOGICPOLY TUNABLES
# ----------------------------------------------------------------------
LOGICPOLY = {
    'BRUTE_MIN_MAX_VERTICES': env.int('LOGICPOLY_BRUTE_MIN_MAX_VERTICES', default=14),
    'BRUTE_MIN_WORKERS': env.int('LOGICPOLY_BRUTE_MIN_WORKERS', default=4),
    'CHAIN_LENGTH': env.int('LOGICPOLY_CHAIN_LENGTH', default=None),
    'EPS_HALVING_LIMIT': env.int('LOGICPOLY_EPS_HALVING_LIMIT', default=64),
    'OUTPUT_ROOT': Path(os.environ.get('LOGICPOLY_OUTPUT_ROOT', BASE_DIR / 'runs')),
    'FULL_SCALE_TESTS': os.environ.get('LOGICPOLY_FULL_SCALE_TESTS', 'False') == 'True',
}

# ----------------------------------------------------------------------
# 📝 LOGGING
# ----------------------------------------------------------------------
LOG_LEVEL = os.environ.get('LOGICPOLY_LOG_LEVEL', 'INFO')

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
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False}
        for app in ('geometry', 'gadgets', 'reduction', 'sweep', 'stacked', 'workbench')
    },
}

# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True

# Static files
STATIC_URL = "static/"
STATIC_ROOT = BASE_DIR / 'staticfiles'

# Default primary key field type
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

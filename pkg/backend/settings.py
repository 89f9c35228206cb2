from pathlib import Path
import os

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-rigidification-local-only')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = ['localhost', '127.0.0.1']


# Application definition

INSTALLED_APPS = [
    # Third-party apps
    'rest_framework',
    # Local apps
    'simplicial',
]

MIDDLEWARE = []

# Nothing is persisted; reports are written to stdout or --output files.
DATABASES = {}


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}


# Caps used by `manage.py rigid` when a flag is not given
RIGIDIFICATION = {
    'DIM_CAP': int(os.getenv('RIGID_DIM_CAP', 3)),
    'SIZE_CAP': int(os.getenv('RIGID_SIZE_CAP', 6)),
    'BUDGET': int(os.getenv('RIGID_BUDGET', 200000)),
    'SEED': int(os.getenv('RIGID_SEED', 0)),
    'JOBS': int(os.getenv('RIGID_JOBS', 1)),
    'HC_NERVE_MAX_DIM': 3,
    # check-cosk samples a dimension once it holds SPHERE_LIMIT spheres
    'SPHERE_SAMPLE': int(os.getenv('RIGID_SPHERE_SAMPLE', 500)),
    'SPHERE_LIMIT': int(os.getenv('RIGID_SPHERE_LIMIT', 100000)),
}


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
    'loggers': {
        'simplicial': {
            'handlers': ['console'],
            'level': os.getenv('RIGID_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}

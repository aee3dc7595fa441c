from foi.settings.base import *

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

# logging
for _app in SECONDS_APPS + ['foi']:
    LOGGING['loggers'][_app] = {
        'handlers': ['null'],
        'level': 'WARNING',
        'propagate': False,
    }

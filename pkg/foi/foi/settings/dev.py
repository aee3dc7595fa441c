from foi.settings.base import *

DEBUG = True

# logging
for _app in SECONDS_APPS:
    LOGGING['loggers'][_app]['level'] = load_credential('FOI_LOG_LEVEL', 'INFO')

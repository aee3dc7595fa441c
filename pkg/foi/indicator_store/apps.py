from django.apps import AppConfig


class IndicatorStoreConfig(AppConfig):
    name = 'indicator_store'

from django.apps import AppConfig


class RescalingConfig(AppConfig):
    name = 'rescaling'

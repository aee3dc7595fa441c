from django.apps import AppConfig


class PillarIndexConfig(AppConfig):
    name = 'pillar_index'

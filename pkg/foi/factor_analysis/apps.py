from django.apps import AppConfig


class FactorAnalysisConfig(AppConfig):
    name = 'factor_analysis'

from django.apps import AppConfig


class ReportCliConfig(AppConfig):
    name = 'report_cli'

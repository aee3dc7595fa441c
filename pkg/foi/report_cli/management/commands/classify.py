from report_cli.commands import FoiCommand, add_classification_arguments, add_panel_arguments
from report_cli.reports import IndexReport
from report_cli.tools import run_pipeline


class Command(FoiCommand):
    help = 'Place every country of a panel into one of the eight interval-halving clusters.'

    def add_foi_arguments(self, parser):
        add_panel_arguments(parser)
        add_classification_arguments(parser)

    def run(self, flags):
        result = run_pipeline(flags.panel, flags.manifest, flags.epoch, flags)
        self.emit(IndexReport(result.scores, result.assignments), flags)

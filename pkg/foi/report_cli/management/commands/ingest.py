from indicator_store.store import default_manifest, load_manifest, load_panel, validate_panel
from report_cli.commands import FoiCommand, add_panel_arguments
from report_cli.reports import ValidationReportView


class Command(FoiCommand):
    help = 'Load a country panel and report its missing-value coverage.'

    def add_foi_arguments(self, parser):
        add_panel_arguments(parser)

    def run(self, flags):
        manifest = load_manifest(flags.manifest) if flags.manifest else default_manifest()
        panel = load_panel(flags.panel, manifest, epoch=flags.epoch)
        self.emit(ValidationReportView(panel, validate_panel(panel)), flags)

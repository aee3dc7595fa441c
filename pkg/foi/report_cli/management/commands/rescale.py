from indicator_store.store import default_manifest, load_manifest, load_panel
from report_cli.commands import FoiCommand, add_panel_arguments
from report_cli.reports import PanelView
from rescaling.scale import rescale_panel


class Command(FoiCommand):
    help = 'Min-max rescale every indicator of a panel onto the 1-7 scale.'

    def add_foi_arguments(self, parser):
        add_panel_arguments(parser)

    def run(self, flags):
        manifest = load_manifest(flags.manifest) if flags.manifest else default_manifest()
        panel = load_panel(flags.panel, manifest, epoch=flags.epoch)
        self.emit(PanelView(rescale_panel(panel, manifest)), flags)

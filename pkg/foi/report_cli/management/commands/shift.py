from classifier.tools import assignments_from_clusters, classify_epoch, shift_report
from core.exceptions import InputError
from report_cli.commands import FoiCommand, add_classification_arguments, add_panel_arguments
from report_cli.reference import reference_fixture
from report_cli.reports import ShiftReportView
from report_cli.tools import run_pipeline

CLUSTERS = 'clusters'
INDICES = 'indices'


class Command(FoiCommand):
    help = 'Compare cluster memberships of two epochs.'

    def add_foi_arguments(self, parser):
        add_panel_arguments(parser, required=False)
        parser.add_argument('--to-panel', default=None, help='panel CSV of the later epoch')
        parser.add_argument('--to-epoch', type=int, default=None)
        parser.add_argument('--reference', choices=(CLUSTERS, INDICES), default=None,
                            help='use the published memberships, or classify the published indices')
        add_classification_arguments(parser)

    def run(self, flags):
        if flags.reference:
            fixture = reference_fixture()
            epochs = (fixture.epochs[0], fixture.epochs[-1])
            if flags.reference == CLUSTERS:
                before, after = (assignments_from_clusters(fixture.clusters(epoch)) for epoch in epochs)
            else:
                before, after = (classify_epoch(fixture.scores(epoch), flags.threshold, flags.epsilon)
                                 for epoch in epochs)
        elif flags.panel and flags.to_panel:
            epochs = (flags.epoch, flags.to_epoch)
            before = run_pipeline(flags.panel, flags.manifest, flags.epoch, flags).assignments
            after = run_pipeline(flags.to_panel, flags.manifest, flags.to_epoch, flags).assignments
        else:
            raise InputError('shift needs --panel and --to-panel, or --reference', module='report_cli')
        self.emit(ShiftReportView(shift_report(before, after, epochs=epochs)), flags)

from core.exceptions import InputError
from report_cli.commands import FoiCommand, add_classification_arguments, add_panel_arguments
from report_cli.reference import reference_fixture
from report_cli.reports import FactorProfileView, IndexReport
from report_cli.tools import classify_complete, factor_profile, run_pipeline, scores_from_json_file


class Command(FoiCommand):
    help = 'Write the index and cluster report from a panel, an exported scores file or the reference tables.'

    def add_foi_arguments(self, parser):
        add_panel_arguments(parser, required=False)
        parser.add_argument('--scores-json', default=None, help='scores previously exported with --format json')
        parser.add_argument('--reference-epoch', type=int, default=None, help='the published indices of an epoch')
        parser.add_argument('--factor-profile', action='store_true',
                            help='mean published factor values per published cluster instead of the index report')
        add_classification_arguments(parser)

    def run(self, flags):
        if flags.factor_profile:
            if flags.panel or flags.scores_json:
                raise InputError('--factor-profile reads the reference tables; use it with --reference-epoch only',
                                 module='report_cli')
            self.emit(FactorProfileView(factor_profile(flags.reference_epoch)), flags)
            return

        sources = [flags.panel, flags.scores_json, flags.reference_epoch]
        if sum(source is not None for source in sources) != 1:
            raise InputError('export needs exactly one of --panel, --scores-json, --reference-epoch',
                             module='report_cli')
        if flags.panel:
            result = run_pipeline(flags.panel, flags.manifest, flags.epoch, flags)
            report = IndexReport(result.scores, result.assignments)
        else:
            if flags.scores_json:
                scores = scores_from_json_file(flags.scores_json)
            else:
                scores = reference_fixture().scores(flags.reference_epoch)
            assignments, _ = classify_complete(scores, flags.threshold, flags.epsilon)
            report = IndexReport(scores, assignments)
        self.emit(report, flags)

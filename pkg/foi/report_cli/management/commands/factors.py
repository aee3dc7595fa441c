from collections import OrderedDict

from factor_analysis.tools import load_groups, load_variable_matrix, run_groups
from factor_analysis.types import MISSING_MODES, PAIRWISE
from report_cli.commands import FoiCommand
from report_cli.reports import CSV, FactorReport
from report_cli.tools import export_report


class Command(FoiCommand):
    help = 'Exploratory factor analysis: PCA extraction, varimax rotation, KMO, Bartlett, factor scores.'

    def add_foi_arguments(self, parser):
        parser.add_argument('--panel', required=True, help='country x variable CSV')
        parser.add_argument('--groups', default=None,
                            help='JSON mapping of group name to variable ids (default: one group of every column)')
        parser.add_argument('--factors-k', type=int, default=None)
        parser.add_argument('--kaiser', action='store_true', help='retain factors with eigenvalue > 1')
        parser.add_argument('--no-kaiser-normalize', action='store_true')
        parser.add_argument('--missing', choices=MISSING_MODES, default=PAIRWISE)
        parser.add_argument('--scores-out', default=None, help='also write the factor score table as CSV')

    def run(self, flags):
        data = load_variable_matrix(flags.panel)
        if flags.groups:
            groups = load_groups(flags.groups)
        else:
            groups = OrderedDict([('factor', list(data.variables))])
        models = run_groups(
            data, groups,
            k=None if flags.kaiser else flags.factors_k,
            kaiser_select=flags.kaiser,
            missing=flags.missing,
            kaiser_normalize=not flags.no_kaiser_normalize,
        )
        report = FactorReport(models)
        if flags.scores_out:
            export_report(report, CSV, flags.scores_out)
        self.emit(report, flags)

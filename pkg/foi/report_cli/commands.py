"""
Shared plumbing for the FOI management commands.
"""
import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import FoiError
from core.mbunch import flags_from_options
from pillar_index.scores import MISSING_POLICIES
from .reports import FORMATS, TABLE
from .tools import export_report

logger = logging.getLogger(__name__)


def add_panel_arguments(parser, required=True):
    parser.add_argument('--panel', required=required, help='country panel CSV')
    parser.add_argument('--manifest', default=None, help='indicator manifest JSON (default: bundled manifest)')
    parser.add_argument('--epoch', type=int, default=None)


def add_classification_arguments(parser):
    parser.add_argument('--threshold', type=float, default=None,
                        help='High iff index >= threshold (default {})'.format(settings.FOI['THRESHOLD']))
    parser.add_argument('--epsilon', type=float, default=None,
                        help='borderline band around the threshold (default {})'.format(settings.FOI['EPSILON']))
    parser.add_argument('--missing-policy', choices=MISSING_POLICIES, default=None)


class FoiCommand(BaseCommand):
    """
    Base for every FOI subcommand. Subclasses implement ``add_foi_arguments`` and ``run``.
    ``FoiError`` leaves the command as ``CommandError`` carrying the error's exit code.
    """

    def add_arguments(self, parser):
        self.add_foi_arguments(parser)
        parser.add_argument('--format', choices=FORMATS, default=TABLE)
        parser.add_argument('--out', default=None, help='write the report here instead of standard output')

    def add_foi_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        flags = flags_from_options(
            options,
            threshold=settings.FOI['THRESHOLD'],
            epsilon=settings.FOI['EPSILON'],
            missing_policy=settings.FOI['MISSING_POLICY'],
            factors_k=settings.FOI['FACTORS_K'],
        )
        try:
            self.run(flags)
        except FoiError as e:
            logger.debug('%s failed: %r', self.__module__, e)
            raise CommandError(str(e), returncode=e.exit_code)

    def run(self, flags):
        raise NotImplementedError

    def emit(self, results, flags):
        text = export_report(results, flags.format, flags.out)
        if not flags.out:
            self.stdout.write(text, ending='')

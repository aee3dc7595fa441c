from django.core.management.base import CommandError

from report_cli.commands import FoiCommand
from report_cli.reference import reference_fixture
from report_cli.reports import VerifyReportView
from report_cli.tools import verify_reference


class Command(FoiCommand):
    help = 'Classify the published indices and compare with the published cluster memberships.'

    def add_foi_arguments(self, parser):
        parser.add_argument('--epoch', type=int, default=None, help='default: every epoch in the fixture')
        parser.add_argument('--threshold', type=float, default=None)
        parser.add_argument('--epsilon', type=float, default=None)
        parser.add_argument('--strict-verify', action='store_true', help='exit with status 3 on any mismatch')

    def run(self, flags):
        fixture = reference_fixture()
        epochs = [flags.epoch] if flags.epoch is not None else list(fixture.epochs)
        reports = [verify_reference(epoch, flags.threshold, flags.epsilon, fixture=fixture) for epoch in epochs]
        self.emit(VerifyReportView(reports), flags)

        status = max(report.exit_status(flags.strict_verify) for report in reports)
        if status:
            mismatches = sum(len(report.mismatches) for report in reports)
            raise CommandError('{} membership mismatches against the reference tables'.format(mismatches),
                               returncode=status)

import json
import os
import shutil
import tempfile
from io import StringIO

import pandas as pd
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.exceptions import ExportError, FixtureError, InputError
from pillar_index.scores import FoiScores
from .reference import load_reference_fixture, reference_fixture
from .reports import CSV, JSON, TABLE, IndexReport
from .tools import export_report, factor_profile, load_scores_json, run_pipeline, verify_reference

DATA_DIR = os.path.join(settings.SITE_ROOT, 'indicator_store', 'data')
PANEL_2020 = os.path.join(DATA_DIR, 'demo_panel_2020.csv')
PANEL_2010 = os.path.join(DATA_DIR, 'demo_panel_2010.csv')
FACTOR_PANEL = os.path.join(DATA_DIR, 'demo_factor_panel.csv')
FACTOR_GROUPS = os.path.join(DATA_DIR, 'demo_factor_groups.json')


def run(*args, **options):
    stdout, stderr = StringIO(), StringIO()
    call_command(*args, stdout=stdout, stderr=stderr, **options)
    return stdout.getvalue()


class ReferenceFixtureTestCase(SimpleTestCase):

    def setUp(self):
        self.fixture = reference_fixture()

    def test_tables(self):
        self.assertEqual(len(self.fixture.countries), 34)
        self.assertEqual(self.fixture.epochs, (2010, 2020))
        self.assertEqual(self.fixture.name('SVK'), 'Slovak Republic')
        che = self.fixture.scores(2020).get('CHE')
        self.assertEqual((che.f_index, che.f_rank, che.i_index, che.i_rank), (5.2, 2, 5.6, 1))
        self.assertEqual(self.fixture.clusters(2010)['GBR'], 5)

    def test_printed_rank_extremes(self):
        scores = self.fixture.scores(2020)
        self.assertEqual(scores.get('LUX').o_rank, 1)
        self.assertEqual(scores.get('CHE').i_rank, 1)
        self.assertEqual(scores.get('USA').o_rank, 2)

    def test_factor_values_keep_empty_cells(self):
        countries, columns, grid = self.fixture.factor_table()
        self.assertEqual(columns, ['F1', 'F2', 'O1', 'O2', 'I1', 'I2'])
        row = grid[countries.index('CHE')]
        self.assertEqual(int(pd.isna(row).sum()), 4)
        self.assertAlmostEqual(row[5], 1.11049)

    def test_unknown_epoch(self):
        with self.assertRaises(InputError):
            self.fixture.scores(2015)

    def test_checksum_mismatch(self):
        directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, directory)
        source = settings.FOI['REFERENCE_FIXTURE']
        target = os.path.join(directory, 'reference_tables.json')
        shutil.copy(source.rsplit('.', 1)[0] + '.sha256', os.path.join(directory, 'reference_tables.sha256'))
        with open(source, encoding='utf-8') as f:
            text = f.read()
        with open(target, 'w', encoding='utf-8') as f:
            f.write(text.replace('"CHE": {"F": [5.2, 2]', '"CHE": {"F": [5.3, 2]'))
        with self.assertRaises(FixtureError):
            load_reference_fixture(target)

        shutil.copy(source, target)
        self.assertEqual(load_reference_fixture(target).countries, self.fixture.countries)

    def test_missing_checksum(self):
        directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, directory)
        target = os.path.join(directory, 'reference_tables.json')
        shutil.copy(settings.FOI['REFERENCE_FIXTURE'], target)
        with self.assertRaises(FixtureError):
            load_reference_fixture(target)


class VerifyReferenceTestCase(SimpleTestCase):

    def test_2020(self):
        report = verify_reference(2020)
        self.assertEqual((report.matches, report.total), (30, 34))
        self.assertEqual(report.hard, ['CZE'])
        self.assertEqual(report.borderline, ['ESP', 'POL', 'SVN'])
        self.assertEqual(report.exit_status(), 0)
        self.assertEqual(report.exit_status(strict=True), 3)

    def test_2010(self):
        report = verify_reference(2010)
        self.assertEqual((report.matches, report.total), (26, 34))
        self.assertEqual(report.hard, ['CHL', 'DEU', 'GBR', 'ISR', 'JPN', 'PRT'])
        self.assertEqual(report.borderline, ['MEX', 'NZL'])

    def test_epsilon_changes_flags_only(self):
        narrow = verify_reference(2010, epsilon=0.0)
        wide = verify_reference(2010, epsilon=0.15)
        self.assertEqual(narrow.matches, wide.matches)
        self.assertEqual([m.country for m in narrow.mismatches], [m.country for m in wide.mismatches])
        self.assertEqual(narrow.borderline, ['MEX', 'NZL'])
        self.assertEqual(wide.borderline, ['CHL', 'ISR', 'MEX', 'NZL'])

    def test_repeated_runs_agree(self):
        self.assertEqual(verify_reference(2020), verify_reference(2020))


class PipelineTestCase(SimpleTestCase):

    def test_demo_panel(self):
        result = run_pipeline(PANEL_2020, epoch=2020)
        self.assertEqual(len(result.scores.rows), 34)
        self.assertEqual(len(result.assignments), 34)
        self.assertEqual(result.unclassified, ())
        for pillar in ('F', 'O', 'I'):
            ranks = sorted(row.rank(pillar) for row in result.scores.rows)
            self.assertEqual(ranks, list(range(1, 35)))

    def test_missing_manifest(self):
        with self.assertRaises(InputError):
            run_pipeline(PANEL_2020, manifest_json=os.path.join(DATA_DIR, 'no_such_manifest.json'))

    def test_strict_policy_leaves_countries_unclassified(self):
        result = run_pipeline(PANEL_2020, epoch=2020, flags={'missing_policy': 'strict'})
        absent = sorted(row.country for row in result.scores.rows
                        if any(row.is_absent(pillar) for pillar in ('F', 'O', 'I')))
        self.assertEqual(list(result.unclassified), absent)
        self.assertEqual(len(result.assignments), 34 - len(absent))


class ExportTestCase(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.directory)

    def test_table_cells(self):
        text = export_report(IndexReport(reference_fixture().scores(2020)), TABLE)
        line = next(line for line in text.splitlines() if line.startswith('CHE'))
        self.assertIn('5.2 (2)', line)
        self.assertIn('5.4 (3)', line)
        self.assertIn('5.6 (1)', line)

    def test_json_round_trip(self):
        result = run_pipeline(PANEL_2020, epoch=2020)
        text = export_report(result, JSON)
        scores = load_scores_json(text)
        self.assertEqual(scores, result.scores)
        self.assertEqual(len(json.loads(text)['assignments']), 34)

    def test_csv_full_precision(self):
        result = run_pipeline(PANEL_2020, epoch=2020)
        path = os.path.join(self.directory, 'scores.csv')
        export_report(result, CSV, path)
        frame = pd.read_csv(path)
        self.assertEqual(frame['f_index'].tolist(), [row.f_index for row in result.scores.rows])
        self.assertEqual(frame['f_rank'].tolist(), [row.f_rank for row in result.scores.rows])

    def test_missing_cells_are_empty(self):
        scores = FoiScores.from_triples(2020, {'AAA': (4.25, float('nan'), 3.0)})
        text = export_report(scores, CSV)
        self.assertEqual(text.splitlines()[1], 'AAA,4.25,,,,3.0,')

    def test_unwritable_destination(self):
        with self.assertRaises(ExportError):
            export_report(reference_fixture().scores(2020), CSV, os.path.join(self.directory, 'no', 'such.csv'))

    def test_unknown_format(self):
        with self.assertRaises(InputError):
            export_report(reference_fixture().scores(2020), 'xlsx')

    def test_invalid_scores_json(self):
        for text in ['not json', '{"epoch": 2020, "rows": [{"country": "AAA", "f_index": 9.5}]}']:
            with self.assertRaises(InputError):
                load_scores_json(text)


class FactorProfileTestCase(SimpleTestCase):

    def setUp(self):
        self.profile = factor_profile()

    def test_clusters_and_sizes(self):
        self.assertEqual(self.profile.epoch, 2020)
        self.assertEqual(self.profile.clusters, (1, 3, 4, 6, 7, 8))
        self.assertEqual(self.profile.sizes, (8, 5, 4, 1, 4, 12))
        self.assertEqual(self.profile.factors, ('F1', 'F2', 'O1', 'O2', 'I1', 'I2'))

    def test_leading_clusters(self):
        self.assertEqual(self.profile.leading_cluster('I1'), 8)
        self.assertEqual(self.profile.leading_cluster('O1'), 4)

    def test_empty_cells_are_skipped(self):
        self.assertEqual(self.profile.count(8, 'F1'), 11)
        self.assertEqual(self.profile.count(8, 'I1'), 12)
        self.assertEqual(self.profile.count(1, 'I1'), 6)
        self.assertAlmostEqual(self.profile.mean(8, 'I1'), 0.73169, places=4)
        self.assertAlmostEqual(self.profile.mean(4, 'O1'), 1.26770, places=4)

    def test_single_member_cluster_is_that_member(self):
        self.assertAlmostEqual(self.profile.mean(6, 'F1'), 1.60548, places=10)
        self.assertAlmostEqual(self.profile.mean(6, 'F2'), -1.44948, places=10)

    def test_epoch_without_factor_values(self):
        with self.assertRaises(InputError):
            factor_profile(2010)

    def test_json(self):
        data = json.loads(export_report(self.profile, JSON))
        by_id = {cluster['cluster_id']: cluster for cluster in data['clusters']}
        self.assertEqual(by_id[8]['counts']['F1'], 11)
        self.assertEqual(by_id[6]['size'], 1)
        self.assertNotIn(2, by_id)


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.directory)

    def assertDeterministic(self, *args, **options):
        first = run(*args, **options)
        second = run(*args, **options)
        self.assertEqual(first, second)
        self.assertTrue(first)
        return first

    def test_ingest(self):
        output = self.assertDeterministic('ingest', panel=PANEL_2020, epoch=2020)
        self.assertIn('34 countries x 25 indicators', output)

    def test_rescale(self):
        output = self.assertDeterministic('rescale', panel=PANEL_2020, format=CSV)
        frame = pd.read_csv(StringIO(output))
        values = frame.drop(columns='country')
        self.assertEqual(float(values.min().min()), 1.0)
        self.assertEqual(float(values.max().max()), 7.0)

    def test_indices(self):
        output = self.assertDeterministic('indices', panel=PANEL_2020, epoch=2020, format=JSON)
        self.assertEqual(len(json.loads(output)['rows']), 34)

    def test_classify(self):
        output = self.assertDeterministic('classify', panel=PANEL_2010, epoch=2010, threshold=4.0, epsilon=0.05)
        self.assertEqual(len(output.splitlines()), 35)

    def test_shift_reference_clusters(self):
        output = self.assertDeterministic('shift', reference='clusters')
        movers = output.split('\n\n')[1].splitlines()
        self.assertTrue(movers[1].startswith('ISR'))
        self.assertIn('+2', movers[1])
        self.assertIn('emerged clusters: 4', output)

    def test_shift_panels(self):
        output = self.assertDeterministic('shift', panel=PANEL_2010, epoch=2010, to_panel=PANEL_2020, to_epoch=2020,
                                          format=JSON)
        self.assertEqual(json.loads(output)['epochs'], [2010, 2020])

    def test_shift_needs_inputs(self):
        with self.assertRaises(CommandError) as context:
            run('shift')
        self.assertEqual(context.exception.returncode, 1)

    def test_factors(self):
        scores_path = os.path.join(self.directory, 'factor_scores.csv')
        output = self.assertDeterministic('factors', panel=FACTOR_PANEL, groups=FACTOR_GROUPS, scores_out=scores_path)
        self.assertIn('[F] k=2', output)
        frame = pd.read_csv(scores_path, keep_default_na=False, dtype=str)
        self.assertEqual(list(frame.columns), ['country', 'F1', 'F2', 'O1', 'O2', 'I1', 'I2'])
        che = frame[frame['country'] == 'CHE'].iloc[0]
        self.assertEqual((che['F1'], che['F2']), ('', ''))
        self.assertNotEqual(che['O1'], '')

    def test_factors_numerical_failure(self):
        path = os.path.join(self.directory, 'flat.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('country,a,b,c\nAAA,1,2,5\nBBB,2,2,3\nCCC,3,2,4\nDDD,4,2,1\n')
        with self.assertRaises(CommandError) as context:
            run('factors', panel=path)
        self.assertEqual(context.exception.returncode, 2)
        self.assertIn('"b"', str(context.exception))

    def test_verify(self):
        output = self.assertDeterministic('verify', epoch=2020)
        self.assertIn('30/34', output)
        self.assertIn('CZE', output)

    def test_verify_strict(self):
        with self.assertRaises(CommandError) as context:
            run('verify', strict_verify=True)
        self.assertEqual(context.exception.returncode, 3)

    def test_export(self):
        path = os.path.join(self.directory, 'scores.json')
        run('indices', panel=PANEL_2020, epoch=2020, format=JSON, out=path)
        output = self.assertDeterministic('export', scores_json=path)
        self.assertEqual(len(output.splitlines()), 35)
        reference = self.assertDeterministic('export', reference_epoch=2020)
        self.assertIn('5.2 (2)', reference)

    def test_export_needs_one_source(self):
        with self.assertRaises(CommandError) as context:
            run('export')
        self.assertEqual(context.exception.returncode, 1)

    def test_missing_manifest_file(self):
        with self.assertRaises(CommandError) as context:
            run('indices', panel=PANEL_2020, manifest=os.path.join(DATA_DIR, 'no_such_manifest.json'))
        self.assertEqual(context.exception.returncode, 1)
        self.assertIn('indicator_store', str(context.exception))

    def test_export_factor_profile(self):
        output = self.assertDeterministic('export', factor_profile=True)
        self.assertIn('I1', output)
        data = json.loads(run('export', factor_profile=True, format=JSON))
        self.assertEqual(data['epoch'], 2020)
        self.assertEqual([cluster['cluster_id'] for cluster in data['clusters']], [1, 3, 4, 6, 7, 8])

    def test_factor_profile_rejects_a_panel(self):
        with self.assertRaises(CommandError) as context:
            run('export', factor_profile=True, panel=PANEL_2020)
        self.assertEqual(context.exception.returncode, 1)

    def test_ingest_row_longer_than_header(self):
        path = os.path.join(self.directory, 'panel.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('country,a,b\nAAA,1,2\nBBB,1,2,3\n')
        with self.assertRaises(CommandError) as context:
            run('ingest', panel=path, epoch=2020)
        self.assertEqual(context.exception.returncode, 1)
        self.assertIn('row 3', str(context.exception))

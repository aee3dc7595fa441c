import json
import os
import shutil
import tempfile

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.exceptions import DuplicateCountryError, InputError, ManifestError, ParseError, SchemaError
from .serializers import IndicatorSpecSerializer, ValidationReportSerializer
from .store import default_manifest, load_manifest, load_panel, manifest_from_data, validate_panel, write_panel
from .types import IndicatorPanel, LOWER_IS_BETTER

DATA_DIR = os.path.join(settings.SITE_ROOT, 'indicator_store', 'data')


def spec(id, pillar='F', direction='higher_is_better', **extra):
    data = {'id': id, 'name': id.replace('_', ' '), 'pillar': pillar, 'direction': direction, 'source': 'test'}
    data.update(extra)
    return data


class StoreTestCase(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.directory)
        self.manifest = manifest_from_data([spec('a'), spec('b', pillar='O')])

    def write(self, name, text):
        path = os.path.join(self.directory, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path


class ManifestTestCase(StoreTestCase):

    def test_default_manifest(self):
        manifest = default_manifest()
        self.assertEqual(len(manifest.specs), 25)
        self.assertEqual(manifest.component_counts(), {'F': 9, 'O': 5, 'I': 10})
        self.assertEqual(manifest.components('F')['rd_potential'], ['rd_expenditure', 'patent_applications'])
        for indicator in ('ageing_of_society', 'ecological_footprint', 'exchange_rate_variance', 'tax_burden'):
            self.assertEqual(manifest.spec(indicator).direction, LOWER_IS_BETTER)
            self.assertTrue(manifest.spec(indicator).note)

    def test_invalid_pillar(self):
        with self.assertRaises(ManifestError) as context:
            manifest_from_data([spec('a', pillar='X')])
        self.assertIn('pillar', str(context.exception))

    def test_missing_direction(self):
        data = spec('a')
        del data['direction']
        with self.assertRaises(ManifestError):
            manifest_from_data([data])

    def test_duplicate_id(self):
        with self.assertRaises(ManifestError):
            manifest_from_data([spec('a'), spec('a', pillar='O')])

    def test_component_spanning_pillars(self):
        with self.assertRaises(ManifestError):
            manifest_from_data([spec('a', component='shared'), spec('b', pillar='I', component='shared')])

    def test_not_an_array(self):
        with self.assertRaises(ManifestError):
            manifest_from_data({'id': 'a'})

    def test_load_manifest_errors(self):
        with self.assertRaises(InputError):
            load_manifest(os.path.join(self.directory, 'absent.json'))
        with self.assertRaises(ManifestError):
            load_manifest(self.write('broken.json', '[{"id": '))

    def test_serializer_omits_empty_optionals(self):
        data = IndicatorSpecSerializer(default_manifest().spec('work_ethic')).data
        self.assertNotIn('component', data)
        self.assertEqual(data['pillar'], 'F')
        data = IndicatorSpecSerializer(default_manifest().spec('rd_expenditure')).data
        self.assertEqual(data['component'], 'rd_potential')

    def test_manifest_file_round_trip(self):
        manifest = default_manifest()
        path = self.write('manifest.json', json.dumps(IndicatorSpecSerializer(manifest.specs, many=True).data))
        self.assertEqual(load_manifest(path), manifest)


class LoadPanelTestCase(StoreTestCase):

    def test_one_missing_cell(self):
        path = self.write('panel.csv', 'country,a,b\nAAA,1.5,2\nBBB,,3\nCCC,4,5.25\n')
        panel = load_panel(path, self.manifest, epoch=2020)
        self.assertEqual(panel.countries, ('AAA', 'BBB', 'CCC'))
        self.assertEqual(int(panel.missing.sum()), 1)
        self.assertAlmostEqual(validate_panel(panel).coverage, 5 / 6)
        self.assertEqual(panel.cell('CCC', 'b'), 5.25)

    def test_columns_follow_manifest(self):
        path = self.write('panel.csv', 'country,b,a\nAAA,2,1\n')
        panel = load_panel(path, self.manifest)
        self.assertEqual(panel.indicators, ('a', 'b'))
        self.assertEqual(panel.row('AAA').tolist(), [1.0, 2.0])

    def test_absent_manifest_column_is_missing(self):
        panel = load_panel(self.write('panel.csv', 'country,a\nAAA,1\nBBB,2\n'), self.manifest)
        self.assertTrue(np.isnan(panel.column('b')).all())
        self.assertEqual(validate_panel(panel).warnings, ('indicator "b" is entirely missing',))

    def test_unknown_column(self):
        with self.assertRaises(SchemaError) as context:
            load_panel(self.write('panel.csv', 'country,a,xyz\nAAA,1,2\n'), self.manifest)
        self.assertEqual(context.exception.column, 'xyz')
        self.assertIn('xyz', str(context.exception))

    def test_duplicate_country(self):
        with self.assertRaises(DuplicateCountryError):
            load_panel(self.write('panel.csv', 'country,a,b\nAAA,1,2\nAAA,3,4\n'), self.manifest)

    def test_duplicate_column(self):
        with self.assertRaises(SchemaError):
            load_panel(self.write('panel.csv', 'country,a,a\nAAA,1,2\n'), self.manifest)

    def test_non_numeric_cell(self):
        with self.assertRaises(ParseError) as context:
            load_panel(self.write('panel.csv', 'country,a,b\nAAA,1,2\nBBB,3,n/a\n'), self.manifest)
        self.assertEqual((context.exception.row, context.exception.column), (3, 'b'))

    def test_row_longer_than_header(self):
        with self.assertRaises(ParseError) as context:
            load_panel(self.write('panel.csv', 'country,a,b\nAAA,1,2\nBBB,3,4,5\n'), self.manifest)
        self.assertEqual(context.exception.row, 3)
        self.assertEqual(context.exception.exit_code, 1)

    def test_row_shorter_than_header(self):
        with self.assertRaises(ParseError) as context:
            load_panel(self.write('panel.csv', 'country,a,b\nAAA,1,2\nBBB,3\n'), self.manifest)
        self.assertEqual((context.exception.row, context.exception.column), (3, 'b'))
        self.assertIn('"b"', str(context.exception))

    def test_non_utf8_bytes(self):
        path = os.path.join(self.directory, 'panel.csv')
        with open(path, 'wb') as f:
            f.write(b'country,a,b\nAAA,1,2\nB\xffB,3,4\n')
        with self.assertRaises(ParseError) as context:
            load_panel(path, self.manifest)
        self.assertEqual(context.exception.row, 3)
        self.assertTrue(str(context.exception).startswith('indicator_store: '))

    def test_byte_order_mark(self):
        path = os.path.join(self.directory, 'panel.csv')
        with open(path, 'wb') as f:
            f.write('country,a,b\nAAA,1,2\n'.encode('utf-8-sig'))
        panel = load_panel(path, self.manifest)
        self.assertEqual(panel.row('AAA').tolist(), [1.0, 2.0])

    def test_first_column_must_be_country(self):
        with self.assertRaises(SchemaError):
            load_panel(self.write('panel.csv', 'iso,a,b\nAAA,1,2\n'), self.manifest)

    def test_missing_file(self):
        with self.assertRaises(InputError):
            load_panel(os.path.join(self.directory, 'absent.csv'), self.manifest)

    def test_demo_panel(self):
        manifest = default_manifest()
        panel = load_panel(os.path.join(DATA_DIR, 'demo_panel_2020.csv'), manifest, epoch=2020)
        self.assertEqual(panel.shape, (34, 25))
        self.assertEqual(len(set(spec.component_id for spec in manifest.specs)), 24)
        report = validate_panel(panel)
        self.assertEqual(report.missing_cells, 10)
        self.assertEqual(report.country_missing['SVK'], 2)
        self.assertEqual(report.warnings, ())

    def test_write_then_load_is_identity(self):
        manifest = default_manifest()
        panel = load_panel(os.path.join(DATA_DIR, 'demo_panel_2010.csv'), manifest, epoch=2010)
        path = os.path.join(self.directory, 'copy.csv')
        write_panel(panel, path)
        self.assertTrue(load_panel(path, manifest, epoch=2010).same_grid(panel))


class ValidatePanelTestCase(SimpleTestCase):

    def panel(self, values, countries=None):
        values = np.array(values, dtype=float)
        countries = countries or ['C{:02d}'.format(i) for i in range(values.shape[0])]
        indicators = ['x{:02d}'.format(j) for j in range(values.shape[1])]
        return IndicatorPanel(epoch=None, countries=countries, indicators=indicators, values=values)

    def test_full_panel(self):
        report = validate_panel(self.panel(np.ones((3, 4)), countries=['AUT', 'BEL', 'CAN']))
        self.assertEqual(report.coverage, 1.0)
        self.assertEqual(report.warnings, ())

    def test_one_empty_column(self):
        values = np.ones((5, 24))
        values[:, 7] = np.nan
        report = validate_panel(self.panel(values, countries=['AUT', 'BEL', 'CAN', 'DNK', 'FIN']))
        self.assertAlmostEqual(report.coverage, 23 / 24)
        self.assertEqual(report.warnings, ('indicator "x07" is entirely missing',))

    def test_scattered_counts(self):
        nan = np.nan
        report = validate_panel(self.panel([[1, nan, 3], [nan, nan, 6], [7, 8, 9]]))
        self.assertEqual(list(report.country_missing.values()), [1, 2, 0])
        self.assertEqual(list(report.indicator_missing.values()), [1, 2, 0])
        self.assertEqual(ValidationReportSerializer(report).data['missing_cells'], 3)

    def test_non_iso_codes_warn(self):
        report = validate_panel(self.panel(np.ones((1, 1)), countries=['uk']))
        self.assertEqual(len(report.warnings), 1)

    @hypothesis_settings(max_examples=200)
    @given(st.integers(2, 6), st.integers(1, 5), st.data())
    def test_blanking_lowers_coverage(self, rows, columns, data):
        values = np.arange(rows * columns, dtype=float).reshape(rows, columns)
        i = data.draw(st.integers(0, rows - 1))
        j = data.draw(st.integers(0, columns - 1))
        before = validate_panel(self.panel(values)).coverage
        values[i, j] = np.nan
        self.assertLess(validate_panel(self.panel(values)).coverage, before)

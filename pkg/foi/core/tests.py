import math
import os
from decimal import Decimal
from unittest import mock

from django.core.exceptions import ImproperlyConfigured
from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from foi.loader import load_credential, load_float, load_int
from .exceptions import (
    CountryMismatchError, DomainError, EmptyColumnError, FoiError, InputError, InsufficientPairsError, ParseError,
    SchemaError,
)
from .mbunch import flags_from_options
from .utils import format_index, from_optional, readonly, render_table, round_half_up, to_optional


class RoundingTestCase(SimpleTestCase):

    def test_half_up(self):
        self.assertEqual(round_half_up(3.95), Decimal('4.0'))
        self.assertEqual(round_half_up(4.05), Decimal('4.1'))
        self.assertEqual(round_half_up(4.04), Decimal('4.0'))
        self.assertEqual(round_half_up(5.125, places=2), Decimal('5.13'))

    def test_format_index(self):
        self.assertEqual(format_index(5.24, 2), '5.2 (2)')
        self.assertEqual(format_index(5.55), '5.6')
        self.assertEqual(format_index(7), '7.0')
        self.assertEqual(format_index(math.nan, 3), '-')
        self.assertEqual(format_index(None), '-')

    @given(st.integers(10, 70))
    def test_printed_values_are_stable(self, tenths):
        self.assertEqual(format_index(tenths / 10), '{}.{}'.format(tenths // 10, tenths % 10))


class ConversionTestCase(SimpleTestCase):

    def test_optional(self):
        self.assertIsNone(to_optional(math.nan))
        self.assertIsNone(to_optional(None))
        self.assertEqual(to_optional(3), 3.0)
        self.assertTrue(math.isnan(from_optional(None)))
        self.assertEqual(from_optional(2), 2.0)

    def test_readonly_copies(self):
        source = [[1.0, 2.0]]
        array = readonly(source)
        self.assertFalse(array.flags.writeable)
        with self.assertRaises(ValueError):
            array[0, 0] = 5.0

    def test_render_table(self):
        lines = render_table(['country', 'F'], [['CHE', '5.2 (2)'], ['LUXEMBOURG', 3]]).splitlines()
        self.assertEqual(lines[0].split(), ['country', 'F'])
        self.assertTrue(lines[1].startswith('CHE '))
        self.assertTrue(lines[1].endswith('5.2 (2)'))
        self.assertEqual(lines[1].index('5.2'), lines[2].index('3'))
        self.assertEqual(lines[0].index('F'), lines[1].index('5.2'))

    def test_render_table_without_rows(self):
        self.assertEqual(render_table(['country', 'F'], []), 'country  F\n')


class FlagsTestCase(SimpleTestCase):

    def test_defaults_fill_omitted_options(self):
        flags = flags_from_options({'threshold': None, 'epsilon': 0.1, 'format': 'json'}, threshold=4.0, epsilon=0.05)
        self.assertEqual((flags.threshold, flags.epsilon, flags.format), (4.0, 0.1, 'json'))

    def test_option_without_default_keeps_none(self):
        flags = flags_from_options({'out': None})
        self.assertIsNone(flags.out)


class ExceptionTestCase(SimpleTestCase):

    def test_exit_codes(self):
        self.assertEqual(InputError().exit_code, 1)
        self.assertEqual(SchemaError('xyz').exit_code, 1)
        self.assertEqual(DomainError().exit_code, 2)
        self.assertEqual(InsufficientPairsError('a', 'b', 2).exit_code, 2)

    def test_messages_name_module(self):
        self.assertEqual(str(SchemaError('xyz')), 'indicator_store: unknown indicator column "xyz"')
        self.assertEqual(str(EmptyColumnError('tax_burden')), 'rescaling: every value of indicator "tax_burden" is missing')
        self.assertEqual(str(InputError('bad', module='report_cli')), 'report_cli: bad')
        self.assertEqual(str(FoiError()), 'foi: FOI pipeline error.')

    def test_details(self):
        error = ParseError(4, 'gdp', 'n/a')
        self.assertEqual((error.row, error.column, error.value), (4, 'gdp', 'n/a'))
        self.assertEqual(CountryMismatchError({'USA', 'AUS'}).difference, ['AUS', 'USA'])


class LoaderTestCase(SimpleTestCase):

    def test_environment_first(self):
        with mock.patch.dict(os.environ, {'FOI_TEST_THRESHOLD': '4.5'}):
            self.assertEqual(load_float('FOI_TEST_THRESHOLD', 4.0), 4.5)
            self.assertEqual(load_credential('FOI_TEST_THRESHOLD'), '4.5')

    def test_default(self):
        self.assertEqual(load_int('FOI_TEST_UNSET_KEY', 2), 2)

    def test_missing_without_default(self):
        with self.assertRaises(ImproperlyConfigured):
            load_credential('FOI_TEST_UNSET_KEY')

    def test_not_a_number(self):
        with mock.patch.dict(os.environ, {'FOI_TEST_K': 'two'}):
            with self.assertRaises(ImproperlyConfigured):
                load_int('FOI_TEST_K', 2)

import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings as hypothesis_settings, strategies as st

from core.exceptions import EmptyColumnError
from indicator_store.store import manifest_from_data
from indicator_store.types import HIGHER_IS_BETTER, IndicatorPanel, LOWER_IS_BETTER
from .scale import DEGENERATE_VALUE, SCALE_MAX, SCALE_MIN, min_max_rescale, rescale_panel

values = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
columns = st.lists(st.one_of(values, st.just(np.nan)), min_size=1, max_size=40).filter(
    lambda column: not all(np.isnan(column)))
directions = st.sampled_from([HIGHER_IS_BETTER, LOWER_IS_BETTER])


class MinMaxRescaleTestCase(SimpleTestCase):

    def test_worked_values(self):
        self.assertEqual(min_max_rescale([10, 40, 70], HIGHER_IS_BETTER).tolist(), [1.0, 4.0, 7.0])
        self.assertEqual(min_max_rescale([10, 40, 70], LOWER_IS_BETTER).tolist(), [7.0, 4.0, 1.0])
        self.assertEqual(min_max_rescale([5, 5, 5], HIGHER_IS_BETTER).tolist(), [4.0, 4.0, 4.0])
        self.assertEqual(DEGENERATE_VALUE, 4.0)

    def test_missing_stays_missing(self):
        rescaled = min_max_rescale([np.nan, 2.0, 4.0], HIGHER_IS_BETTER)
        self.assertTrue(np.isnan(rescaled[0]))
        self.assertEqual(rescaled[1:].tolist(), [1.0, 7.0])

    def test_single_present_value(self):
        self.assertEqual(min_max_rescale([np.nan, 3.5], LOWER_IS_BETTER)[1], DEGENERATE_VALUE)

    def test_empty_column(self):
        with self.assertRaises(EmptyColumnError):
            min_max_rescale([np.nan, np.nan], HIGHER_IS_BETTER)

    @hypothesis_settings(max_examples=1000)
    @given(columns, directions)
    def test_bounds_and_endpoints(self, column, direction):
        column = np.array(column)
        rescaled = min_max_rescale(column, direction)
        present = ~np.isnan(column)
        self.assertTrue(np.array_equal(present, ~np.isnan(rescaled)))
        self.assertTrue(((rescaled[present] >= SCALE_MIN) & (rescaled[present] <= SCALE_MAX)).all())
        low, high = column[present].min(), column[present].max()
        if low == high:
            self.assertTrue((rescaled[present] == DEGENERATE_VALUE).all())
            return
        best, worst = (high, low) if direction == HIGHER_IS_BETTER else (low, high)
        self.assertTrue((rescaled[column == best] == SCALE_MAX).all())
        self.assertTrue((rescaled[column == worst] == SCALE_MIN).all())

    @hypothesis_settings(max_examples=1000)
    @given(columns, directions)
    def test_monotonic(self, column, direction):
        column = np.array(column)
        rescaled = min_max_rescale(column, direction)
        present = np.flatnonzero(~np.isnan(column))
        for a in present:
            for b in present:
                if column[a] < column[b]:
                    if direction == HIGHER_IS_BETTER:
                        self.assertLessEqual(rescaled[a], rescaled[b])
                    else:
                        self.assertGreaterEqual(rescaled[a], rescaled[b])

    @hypothesis_settings(max_examples=1000)
    @given(columns)
    def test_direction_reversal(self, column):
        higher = min_max_rescale(column, HIGHER_IS_BETTER)
        lower = min_max_rescale(column, LOWER_IS_BETTER)
        present = ~np.isnan(higher)
        np.testing.assert_allclose(higher[present] + lower[present], SCALE_MIN + SCALE_MAX, atol=1e-9)

    @hypothesis_settings(max_examples=1000)
    @given(columns, directions, st.floats(min_value=0.1, max_value=100), st.floats(min_value=-1e3, max_value=1e3))
    def test_positive_affine_invariance(self, column, direction, scale, shift):
        column = np.array(column)
        present = ~np.isnan(column)
        spread = column[present].max() - column[present].min()
        assume(spread == 0 or spread > 1)
        moved = column * scale + shift
        moved_present = moved[present]
        assume((spread == 0) == (moved_present.max() == moved_present.min()))
        np.testing.assert_allclose(
            min_max_rescale(moved, direction), min_max_rescale(column, direction), atol=1e-6, equal_nan=True)

    @hypothesis_settings(max_examples=300)
    @given(columns, directions, st.randoms(use_true_random=False))
    def test_permutation_equivariance(self, column, direction, random):
        column = np.array(column)
        order = list(range(len(column)))
        random.shuffle(order)
        np.testing.assert_array_equal(
            min_max_rescale(column[order], direction), min_max_rescale(column, direction)[order])


class RescalePanelTestCase(SimpleTestCase):

    def setUp(self):
        self.manifest = manifest_from_data([
            {'id': 'gdp', 'name': 'gdp', 'pillar': 'I', 'direction': HIGHER_IS_BETTER, 'source': ''},
            {'id': 'tax', 'name': 'tax', 'pillar': 'O', 'direction': LOWER_IS_BETTER, 'source': ''},
        ])

    def panel(self, values):
        return IndicatorPanel(epoch=2020, countries=['AAA', 'BBB', 'CCC'], indicators=['gdp', 'tax'], values=values)

    def test_rescale_panel(self):
        rescaled = rescale_panel(self.panel([[10, 30], [40, 20], [70, np.nan]]), self.manifest)
        self.assertEqual(rescaled.epoch, 2020)
        self.assertEqual(rescaled.column('gdp').tolist(), [1.0, 4.0, 7.0])
        self.assertEqual(rescaled.column('tax')[:2].tolist(), [1.0, 7.0])
        self.assertTrue(np.isnan(rescaled.cell('CCC', 'tax')))

    def test_empty_column_names_indicator(self):
        with self.assertRaises(EmptyColumnError) as context:
            rescale_panel(self.panel([[10, np.nan], [40, np.nan], [70, np.nan]]), self.manifest)
        self.assertEqual(context.exception.indicator, 'tax')
        self.assertIn('"tax"', str(context.exception))

    def test_constant_column_logs_warning(self):
        with self.assertLogs('rescaling.scale', level='WARNING') as logs:
            rescaled = rescale_panel(self.panel([[5, 1], [5, 2], [5, 3]]), self.manifest)
        self.assertEqual(rescaled.column('gdp').tolist(), [4.0, 4.0, 4.0])
        self.assertIn('gdp', logs.output[0])

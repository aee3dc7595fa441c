import math
import os

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from core.exceptions import (DomainError, InputError, InsufficientPairsError, NotPositiveDefiniteError,
                             SingularMatrixError, UndefinedStatisticError, ZeroVarianceError)
from .extraction import factor_scores, kaiser_count, pca_extract, variance_explained
from .rotation import varimax_criterion, varimax_rotate
from .serializers import FactorModelSerializer
from .statistics import bartlett_test, correlation_matrix, kmo_statistic
from .synthetic import congruence, match_factors, simple_structure_loadings, synthesize_known_factors
from .tools import load_groups, load_variable_matrix, run_factor_analysis, run_groups
from .types import LISTWISE, CorrelationMatrix, VariableMatrix

DATA_DIR = os.path.join(settings.SITE_ROOT, 'indicator_store', 'data')
nan = float('nan')


def equicorrelated(p, rho):
    return (1 - rho) * np.eye(p) + rho * np.ones((p, p))


def random_correlation(p, seed):
    data = synthesize_known_factors(p, min(2, p), 200, seed=seed)
    return correlation_matrix(data)


class CorrelationTestCase(SimpleTestCase):

    def test_perfect_linear_relation(self):
        data = VariableMatrix(countries=['A', 'B', 'C', 'D'], variables=['x', 'y', 'z'],
                              values=[[1, 2, 4], [2, 4, 3], [3, 6, 2], [4, 8, 1]])
        r = correlation_matrix(data)
        self.assertAlmostEqual(r.values[0, 1], 1.0, places=12)
        self.assertAlmostEqual(r.values[0, 2], -1.0, places=12)
        self.assertTrue(np.allclose(r.values, r.values.T))

    def test_pairwise_counts(self):
        data = VariableMatrix(countries=list('ABCDE'), variables=['x', 'y', 'z'],
                              values=[[1, 2, 5], [2, nan, 3], [3, 1, 4], [4, 5, nan], [5, 3, 1]])
        r = correlation_matrix(data)
        self.assertEqual(int(r.pair_counts[0, 1]), 4)
        self.assertEqual(int(r.pair_counts[1, 2]), 3)
        self.assertEqual(r.min_pair_count, 3)
        listwise = correlation_matrix(data, missing=LISTWISE)
        self.assertEqual(listwise.min_pair_count, 3)

    def test_zero_variance(self):
        data = VariableMatrix(countries=list('ABCD'), variables=['x', 'flat'], values=[[1, 2], [2, 2], [3, 2], [4, 2]])
        with self.assertRaises(ZeroVarianceError) as context:
            correlation_matrix(data)
        self.assertEqual(context.exception.variable, 'flat')

    def test_insufficient_pairs(self):
        data = VariableMatrix(countries=list('ABCD'), variables=['x', 'y'],
                              values=[[1, nan], [2, 3], [3, 1], [nan, 2]])
        with self.assertRaises(InsufficientPairsError) as context:
            correlation_matrix(data)
        self.assertEqual(context.exception.count, 2)

    def test_unknown_missing_mode(self):
        data = synthesize_known_factors(4, 2, 10)
        with self.assertRaises(InputError):
            correlation_matrix(data, missing='impute')


class BartlettTestCase(SimpleTestCase):

    def test_degrees_of_freedom(self):
        for p, df in [(15, 105), (7, 21), (18, 153)]:
            result = bartlett_test(np.eye(p), 34)
            self.assertEqual(result.df, df)

    def test_identity_is_zero(self):
        result = bartlett_test(np.eye(5), 34)
        self.assertEqual(result.chi_square, 0.0)
        self.assertAlmostEqual(result.p_value, 1.0)

    def test_two_variables(self):
        result = bartlett_test(equicorrelated(2, 0.5), 34)
        self.assertAlmostEqual(result.chi_square, 31.5 * -math.log(0.75), places=10)
        self.assertEqual(result.df, 1)
        self.assertLess(result.p_value, 0.001)

    def test_accepts_correlation_matrix(self):
        r = random_correlation(6, seed=3)
        self.assertEqual(bartlett_test(r, r.min_pair_count).n, 200)

    def test_n_not_above_p(self):
        with self.assertRaises(DomainError):
            bartlett_test(np.eye(5), 5)

    def test_not_positive_definite(self):
        r = np.array([[1, 0.9, -0.9], [0.9, 1, 0.9], [-0.9, 0.9, 1]])
        with self.assertRaises(NotPositiveDefiniteError):
            bartlett_test(r, 34)


class KmoTestCase(SimpleTestCase):

    @given(st.floats(min_value=-0.95, max_value=0.95).filter(lambda rho: abs(rho) > 1e-3))
    def test_two_variables_is_one_half(self, rho):
        result = kmo_statistic(equicorrelated(2, rho))
        self.assertAlmostEqual(result.overall, 0.5, delta=1e-12)
        self.assertTrue(np.allclose(result.msa, 0.5, atol=1e-12))

    def test_equicorrelated(self):
        result = kmo_statistic(equicorrelated(4, 0.6))
        self.assertAlmostEqual(result.overall, 121 / 146, places=12)

    def test_identity_is_undefined(self):
        with self.assertRaises(UndefinedStatisticError):
            kmo_statistic(np.eye(3))

    def test_singular(self):
        with self.assertRaises(SingularMatrixError):
            kmo_statistic(np.ones((3, 3)))

    def test_bounds(self):
        result = kmo_statistic(random_correlation(8, seed=11))
        self.assertTrue(0 <= result.overall <= 1)
        self.assertTrue(np.all((result.msa >= 0) & (result.msa <= 1)))


class PcaTestCase(SimpleTestCase):

    def test_eigenvalues_descending_and_sum_to_p(self):
        r = random_correlation(7, seed=1)
        pcs = pca_extract(r, 2)
        self.assertAlmostEqual(pcs.eigenvalues.sum(), 7.0, places=10)
        self.assertTrue(np.all(np.diff(pcs.eigenvalues) <= 0))
        self.assertEqual(pcs.loadings.shape, (7, 2))
        self.assertFalse(pcs.ties)

    def test_full_extraction_reconstructs_r(self):
        r = random_correlation(5, seed=2)
        pcs = pca_extract(r, 5)
        self.assertTrue(np.allclose(pcs.loadings @ pcs.loadings.T, r.values, atol=1e-8))

    def test_loadings_are_scaled_eigenvectors(self):
        r = random_correlation(6, seed=4)
        pcs = pca_extract(r, 3)
        self.assertTrue(np.allclose((pcs.loadings ** 2).sum(axis=0), pcs.eigenvalues[:3], atol=1e-10))

    def test_sign_orientation(self):
        pcs = pca_extract(random_correlation(6, seed=5), 3)
        for j in range(3):
            column = pcs.loadings[:, j]
            self.assertGreater(column[np.argmax(np.abs(column))], 0)

    def test_invalid_k(self):
        for k in (0, 4):
            with self.assertRaises(DomainError):
                pca_extract(np.eye(3), k)

    def test_ties_flagged(self):
        self.assertTrue(pca_extract(np.eye(4), 2).ties)

    def test_kaiser_count(self):
        self.assertEqual(kaiser_count([2.1, 1.0, 0.5]), 1)
        self.assertEqual(kaiser_count([3.0, 1.2, 1.0001, 0.2]), 3)

    def test_variance_explained(self):
        loadings = np.array([[0.8, 0.0], [0.6, 0.0], [0.0, 0.5]])
        self.assertAlmostEqual(variance_explained(loadings, 3), (0.64 + 0.36 + 0.25) / 3)


def rotation_matrix(angle):
    return np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])


class VarimaxTestCase(SimpleTestCase):

    def setUp(self):
        self.loadings = pca_extract(random_correlation(9, seed=8), 3).loadings

    def test_rotation_is_orthogonal(self):
        result = varimax_rotate(self.loadings)
        self.assertTrue(np.allclose(result.rotation.T @ result.rotation, np.eye(3), atol=1e-10))

    def test_rotated_is_loadings_times_rotation(self):
        for normalize in (True, False):
            result = varimax_rotate(self.loadings, kaiser_normalize=normalize)
            self.assertTrue(np.allclose(self.loadings @ result.rotation, result.loadings, atol=1e-8))

    def test_communalities_preserved(self):
        result = varimax_rotate(self.loadings)
        self.assertTrue(np.allclose((result.loadings ** 2).sum(axis=1), (self.loadings ** 2).sum(axis=1),
                                    atol=1e-10))

    def test_criterion_non_decreasing(self):
        result = varimax_rotate(self.loadings)
        self.assertTrue(result.converged)
        for before, after in zip(result.history, result.history[1:]):
            self.assertGreaterEqual(after, before - 1e-12 * abs(before))

    def test_sign_orientation_last(self):
        result = varimax_rotate(self.loadings)
        for j in range(3):
            column = result.loadings[:, j]
            self.assertGreater(column[np.argmax(np.abs(column))], 0)

    def test_non_convergence_is_flagged(self):
        loadings = np.random.default_rng(21).uniform(-1, 1, size=(6, 3))
        result = varimax_rotate(loadings, kaiser_normalize=False, max_iter=1)
        self.assertFalse(result.converged)
        self.assertEqual(result.sweeps, 1)
        self.assertEqual(len(result.history), 2)

    def test_single_factor_untouched(self):
        loadings = np.array([[0.7], [0.5], [0.9]])
        result = varimax_rotate(loadings)
        self.assertTrue(np.allclose(result.loadings, loadings))
        self.assertTrue(result.converged)

    def test_zero_communality_with_normalisation(self):
        loadings = np.array([[0.7, 0.1], [0.0, 0.0], [0.2, 0.8]])
        with self.assertRaises(DomainError) as context:
            varimax_rotate(loadings, variables=['a', 'b', 'c'])
        self.assertIn('"b"', str(context.exception))
        varimax_rotate(loadings, kaiser_normalize=False)

    def test_two_factor_optimum_matches_grid_search(self):
        rng = np.random.default_rng(2024)
        angles = np.arange(0.0, np.pi / 2, 1e-5)
        cos, sin = np.cos(angles)[:, None], np.sin(angles)[:, None]
        for trial in range(100):
            p = int(rng.integers(5, 21))
            loadings = rng.uniform(-1, 1, size=(p, 2))
            with self.subTest(trial=trial):
                result = varimax_rotate(loadings, kaiser_normalize=False)
                x, y = loadings[:, 0][None, :], loadings[:, 1][None, :]
                first, second = (x * cos + y * sin) ** 2, (-x * sin + y * cos) ** 2
                grid = ((first ** 2).mean(axis=1) - first.mean(axis=1) ** 2
                        + (second ** 2).mean(axis=1) - second.mean(axis=1) ** 2)
                criterion = varimax_criterion(result.loadings)
                self.assertGreaterEqual(criterion, grid.max() - 1e-9)
                self.assertLess(abs(criterion - grid.max()), 1e-6)

    def test_recovers_planted_rotation(self):
        planted = simple_structure_loadings(8, 2, strength=0.9)
        mixed = planted @ rotation_matrix(0.4)
        result = varimax_rotate(mixed, kaiser_normalize=False)
        aligned, _, congruences = match_factors(planted, result.loadings)
        self.assertTrue(np.allclose(aligned, planted, atol=1e-8))
        self.assertTrue(all(value > 0.999999 for value in congruences))

    def test_flipping_a_variable_flips_only_its_row(self):
        result = varimax_rotate(self.loadings)
        leading = set(np.argmax(np.abs(result.loadings), axis=0).tolist())
        row = next(i for i in range(self.loadings.shape[0]) if i not in leading)
        flipped = self.loadings.copy()
        flipped[row] *= -1
        other = varimax_rotate(flipped)
        self.assertTrue(np.allclose(other.rotation, result.rotation, atol=1e-10))
        self.assertTrue(np.allclose(other.loadings[row], -result.loadings[row], atol=1e-10))
        rest = np.arange(self.loadings.shape[0]) != row
        self.assertTrue(np.allclose(other.loadings[rest], result.loadings[rest], atol=1e-10))
        self.assertAlmostEqual(other.criterion, result.criterion, places=12)

    def test_simple_structure_is_a_fixed_point(self):
        loadings = simple_structure_loadings(6, 2, strength=0.8)
        for normalize in (True, False):
            result = varimax_rotate(loadings, kaiser_normalize=normalize)
            self.assertTrue(result.converged)
            self.assertAlmostEqual(result.history[-1], result.history[0], places=12)
            self.assertTrue(np.allclose(result.loadings, loadings, atol=1e-12))
            self.assertTrue(np.allclose(result.rotation, np.eye(2), atol=1e-12))


class FactorScoresTestCase(SimpleTestCase):

    def test_complete_rows_have_zero_mean(self):
        data = synthesize_known_factors(6, 2, 40, seed=5)
        values = np.array(data.values)
        values[3, 1] = nan
        data = VariableMatrix(countries=data.countries, variables=data.variables, values=values)
        r = correlation_matrix(data)
        loadings = varimax_rotate(pca_extract(r, 2).loadings).loadings
        scores = factor_scores(data, r, loadings)
        self.assertTrue(np.isnan(scores[3]).all())
        complete = data.complete_rows
        self.assertFalse(np.isnan(scores[complete]).any())
        self.assertTrue(np.allclose(scores[complete].mean(axis=0), 0.0, atol=1e-10))

    def test_scores_track_generating_factors(self):
        data, factors = synthesize_known_factors(12, 2, 400, noise=0.3, seed=11, return_factors=True)
        model = run_factor_analysis(data, k=2)
        for j in range(2):
            correlations = [abs(np.corrcoef(factors[:, j], model.scores[:, m])[0, 1]) for m in range(2)]
            self.assertGreater(max(correlations), 0.95)

    def test_constant_shift_leaves_scores_unchanged(self):
        data = synthesize_known_factors(8, 2, 60, seed=12)
        values = np.array(data.values)
        values[:, 3] += 100.0
        shifted = VariableMatrix(countries=data.countries, variables=data.variables, values=values)
        first = run_factor_analysis(data, k=2)
        second = run_factor_analysis(shifted, k=2)
        self.assertTrue(np.allclose(first.scores, second.scores, atol=1e-6))

    def test_sign_flipped_variable_keeps_criterion(self):
        data = synthesize_known_factors(8, 2, 60, seed=13)
        values = np.array(data.values)
        values[:, 5] *= -1
        flipped = VariableMatrix(countries=data.countries, variables=data.variables, values=values)
        first = run_factor_analysis(data, k=2)
        second = run_factor_analysis(flipped, k=2)
        self.assertAlmostEqual(first.criterion_history[-1], second.criterion_history[-1], places=10)
        self.assertTrue(np.allclose(np.abs(first.rotated), np.abs(second.rotated), atol=1e-8))

    def test_too_few_complete_rows_give_missing_scores(self):
        data = synthesize_known_factors(4, 2, 200, seed=14)
        values = np.array(data.values)
        for i in range(values.shape[0]):
            values[i, i % 4] = nan
        data = VariableMatrix(countries=data.countries, variables=data.variables, values=values)
        self.assertEqual(int(data.complete_rows.sum()), 0)
        with self.assertLogs('factor_analysis.extraction', level='WARNING') as logs:
            model = run_factor_analysis(data, k=2)
        self.assertIn('complete rows', logs.output[0])
        self.assertEqual(model.scores.shape, (200, 2))
        self.assertTrue(np.isnan(model.scores).all())
        self.assertEqual(model.bartlett.n, 100)
        self.assertTrue(0 < model.kmo < 1)
        self.assertEqual(model.rotated.shape, (4, 2))


class SyntheticTestCase(SimpleTestCase):

    def test_deterministic(self):
        first = synthesize_known_factors(10, 2, 50, noise=0.4, seed=9)
        second = synthesize_known_factors(10, 2, 50, noise=0.4, seed=9)
        other = synthesize_known_factors(10, 2, 50, noise=0.4, seed=10)
        self.assertTrue(np.array_equal(first.values, second.values))
        self.assertFalse(np.array_equal(first.values, other.values))

    def test_invalid_dimensions(self):
        for p, k, n in [(0, 1, 10), (3, 4, 10), (3, 0, 10), (3, 2, 1)]:
            with self.assertRaises(DomainError):
                synthesize_known_factors(p, k, n)
        with self.assertRaises(DomainError):
            synthesize_known_factors(4, 2, 10, loadings=np.ones((3, 2)))

    def test_simple_structure(self):
        loadings = simple_structure_loadings(6, 2, strength=0.7)
        self.assertEqual(loadings[:3, 0].tolist(), [0.7] * 3)
        self.assertEqual(loadings[3:, 1].tolist(), [0.7] * 3)
        self.assertEqual(np.count_nonzero(loadings), 6)

    def test_congruence(self):
        self.assertAlmostEqual(congruence([1, 2, 3], [2, 4, 6]), 1.0)
        self.assertAlmostEqual(congruence([1, 0], [0, 1]), 0.0)
        with self.assertRaises(DomainError):
            congruence([0, 0], [1, 1])

    def test_recovery(self):
        planted = simple_structure_loadings(15, 2, strength=0.8)
        data = synthesize_known_factors(15, 2, 500, loadings=planted, noise=0.3, seed=7)
        model = run_factor_analysis(data, k=2)
        _, _, congruences = match_factors(planted, model.rotated)
        for value in congruences:
            self.assertGreaterEqual(value, 0.95)


class RunFactorAnalysisTestCase(SimpleTestCase):

    def setUp(self):
        self.data = load_variable_matrix(os.path.join(DATA_DIR, 'demo_factor_panel.csv'))
        self.groups = load_groups(os.path.join(DATA_DIR, 'demo_factor_groups.json'))

    def test_groups(self):
        self.assertEqual(list(self.groups), ['F', 'O', 'I'])
        self.assertEqual([len(variables) for variables in self.groups.values()], [8, 6, 6])

    def test_models_per_group(self):
        models = run_groups(self.data, self.groups, k=2)
        self.assertEqual([model.bartlett.df for model in models.values()], [28, 15, 15])
        self.assertEqual([model.bartlett.n for model in models.values()], [33, 32, 32])
        for model in models.values():
            self.assertEqual(model.rotated.shape[1], 2)
            self.assertTrue(0 < model.kmo < 1)
            self.assertTrue(model.converged)
            self.assertAlmostEqual(model.variance_explained, model.factor_variance.sum())
            self.assertTrue(np.allclose(model.unrotated @ model.rotation, model.rotated, atol=1e-8))

    def test_missing_variables_give_missing_scores(self):
        models = run_groups(self.data, self.groups, k=2)
        absent = {'F': {'CHE'}, 'O': {'SVN', 'TUR'}, 'I': {'CHL', 'TUR'}}
        for group, model in models.items():
            missing = {country for country, row in zip(model.countries, model.scores) if np.isnan(row).all()}
            self.assertEqual(missing, absent[group])

    def test_kaiser_selection(self):
        model = run_factor_analysis(self.data.select(self.groups['F']), kaiser_select=True)
        self.assertEqual(model.k, max(1, kaiser_count(model.eigenvalues)))

    def test_default_k_from_settings(self):
        model = run_factor_analysis(self.data.select(self.groups['O']))
        self.assertEqual(model.k, settings.FOI['FACTORS_K'])

    def test_serializer(self):
        model = run_factor_analysis(self.data.select(self.groups['O']), name='O')
        data = FactorModelSerializer(model).data
        self.assertEqual(data['factors'], ['O1', 'O2'])
        self.assertEqual(set(data['rotated']), set(self.groups['O']))
        self.assertIsNone(data['scores']['TUR'][0])
        self.assertEqual(data['bartlett']['df'], 15)

    def test_bad_groups_file(self):
        with self.assertRaises(InputError):
            load_groups(os.path.join(DATA_DIR, 'missing_groups.json'))

    def test_unknown_group_variable(self):
        with self.assertRaises(InputError):
            self.data.select(['legal_efficiency', 'no_such_variable'])

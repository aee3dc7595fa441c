import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.exceptions import CountryMismatchError, DomainError
from pillar_index.scores import FoiScores
from report_cli.reference import reference_fixture
from .serializers import ClusterAssignmentSerializer, ShiftReportSerializer
from .tools import assignments_from_clusters, classify, classify_epoch, shift_report
from .types import ClusterAssignment, cluster_choices, cluster_types

index_values = st.floats(min_value=1.0, max_value=7.0, allow_nan=False)


class ClusterRegistryTestCase(SimpleTestCase):

    def test_eight_clusters_in_level_order(self):
        self.assertEqual(sorted(cluster_types), list(range(1, 9)))
        self.assertEqual(cluster_types[1].levels, ('L', 'L', 'L'))
        self.assertEqual(cluster_types[4].levels, ('L', 'H', 'H'))
        self.assertEqual(cluster_types[7].levels, ('H', 'H', 'L'))
        self.assertEqual(cluster_types[8].levels, ('H', 'H', 'H'))

    def test_labels(self):
        labels = dict(cluster_choices)
        self.assertEqual(labels[1], 'Traditional')
        self.assertEqual(labels[3], 'Dualistic')
        self.assertEqual(labels[4], 'Open market-based')
        self.assertEqual(labels[7], 'Government-led / Bureaucratic')
        self.assertEqual(labels[8], 'Human capital-based')
        for cluster_id in (2, 5, 6):
            self.assertEqual(labels[cluster_id], '-')

    def test_middle_income_trap_clusters(self):
        trapped = [cluster_id for cluster_id, cluster in cluster_types.items() if cluster.in_middle_income_trap()]
        self.assertEqual(sorted(trapped), [1, 3])

    def test_levels_must_match_cluster(self):
        with self.assertRaises(ValueError):
            ClusterAssignment(country='XXX', levels=('L', 'L', 'L'), cluster_id=8, label='Human capital-based')


class ClassifyTestCase(SimpleTestCase):

    def test_switzerland_2020(self):
        assignment = classify(5.2, 5.4, 5.6, country='CHE')
        self.assertEqual(assignment.cluster_id, 8)
        self.assertEqual(assignment.label, 'Human capital-based')
        self.assertEqual(assignment.pattern, 'HHH')
        self.assertEqual(assignment.borderline, frozenset())

    def test_midpoint_is_high_and_borderline(self):
        assignment = classify(4.0, 4.0, 4.0)
        self.assertEqual(assignment.cluster_id, 8)
        self.assertEqual(assignment.borderline, frozenset({'F', 'O', 'I'}))

    def test_japan_2020(self):
        assignment = classify(4.7, 3.7, 4.1, country='JPN')
        self.assertEqual(assignment.cluster_id, 6)
        self.assertEqual(assignment.label, '-')

    def test_epsilon_only_changes_borderline(self):
        narrow = classify(4.03, 3.96, 5.0, epsilon=0.01)
        wide = classify(4.03, 3.96, 5.0, epsilon=0.05)
        self.assertEqual(narrow.cluster_id, wide.cluster_id)
        self.assertEqual(narrow.borderline, frozenset())
        self.assertEqual(wide.borderline, frozenset({'F', 'O'}))

    def test_custom_threshold(self):
        self.assertEqual(classify(4.5, 4.5, 4.5, threshold=5.0).cluster_id, 1)

    def test_outside_scale_is_domain_error(self):
        for triple in [(0.99, 4, 4), (4, 7.01, 4), (4, 4, float('nan')), (4, None, 4)]:
            with self.assertRaises(DomainError):
                classify(*triple)

    @given(index_values, index_values, index_values)
    def test_total_on_scale(self, f, o, i):
        assignment = classify(f, o, i)
        self.assertIn(assignment.cluster_id, cluster_types)
        expected = 1 + 4 * (f >= 4.0) + 2 * (o >= 4.0) + (i >= 4.0)
        self.assertEqual(assignment.cluster_id, expected)

    def test_serializer(self):
        data = ClusterAssignmentSerializer(classify(4.0, 3.0, 4.02, country='AAA')).data
        self.assertEqual(data['country'], 'AAA')
        self.assertEqual(data['cluster_id'], 6)
        self.assertEqual(data['levels'], 'HLH')
        self.assertEqual(data['borderline'], ['F', 'I'])
        self.assertFalse(data['middle_income_trap'])

    def test_serializer_description(self):
        data = ClusterAssignmentSerializer(classify(5.2, 5.4, 5.6, country='CHE')).data
        self.assertEqual(data['cluster_id'], 8)
        self.assertEqual(data['description'], cluster_types[8].description)
        self.assertTrue(data['description'])


class ClassifyEpochTestCase(SimpleTestCase):

    def setUp(self):
        self.reference = reference_fixture()

    def test_empty_scores(self):
        self.assertEqual(classify_epoch(FoiScores(epoch=2020, rows=[])), [])

    def test_ordered_by_country_code(self):
        scores = FoiScores.from_triples(2020, {'ZZZ': (5, 5, 5), 'AAA': (2, 2, 2), 'MMM': (4, 2, 6)})
        assignments = classify_epoch(scores)
        self.assertEqual([a.country for a in assignments], ['AAA', 'MMM', 'ZZZ'])
        self.assertEqual([a.cluster_id for a in assignments], [1, 6, 8])

    def test_printed_2020_values(self):
        assignments = {a.country: a for a in classify_epoch(self.reference.scores(2020))}
        cluster_4 = sorted(country for country, a in assignments.items() if a.cluster_id == 4)
        self.assertEqual(cluster_4, ['AUS', 'GBR', 'LUX', 'USA'])
        self.assertEqual(assignments['HUN'].cluster_id, 3)

    def test_printed_2020_values_against_memberships(self):
        reference = self.reference.clusters(2020)
        computed = {a.country: a.cluster_id for a in classify_epoch(self.reference.scores(2020))}
        mismatches = sorted(country for country in reference if computed[country] != reference[country])
        self.assertEqual(mismatches, ['CZE', 'ESP', 'POL', 'SVN'])


class ShiftReportTestCase(SimpleTestCase):

    def setUp(self):
        reference = reference_fixture()
        self.before = assignments_from_clusters(reference.clusters(2010))
        self.after = assignments_from_clusters(reference.clusters(2020))
        self.report = shift_report(self.before, self.after, epochs=(2010, 2020))

    def test_israel_top_upward_mover(self):
        top = self.report.upward[0]
        self.assertEqual((top.country, top.from_cluster, top.to_cluster, top.delta_h), ('ISR', 3, 8, 2))

    def test_estonia_moves_to_cluster_7(self):
        estonia = self.report.transition('EST')
        self.assertEqual((estonia.from_cluster, estonia.to_cluster, estonia.delta_h), (3, 7, 1))

    def test_mover_order(self):
        self.assertEqual([t.country for t in self.report.upward],
                         ['ISR', 'EST', 'GBR', 'IRL', 'ISL', 'MEX', 'NLD', 'NZL'])
        self.assertEqual([t.country for t in self.report.downward],
                         ['AUS', 'AUT', 'BEL', 'CHL', 'CZE', 'ESP', 'JPN', 'LUX', 'POL', 'USA'])
        self.assertEqual(self.report.lateral, ())
        self.assertEqual(len(self.report.stayers), 16)

    def test_emerged_and_vanished_clusters(self):
        self.assertEqual(self.report.emerged_clusters, (4,))
        self.assertEqual(self.report.vanished_clusters, (5,))

    def test_middle_income_trap_moves(self):
        self.assertEqual(self.report.trap_entries, ('BEL',))
        self.assertEqual(self.report.trap_exits, ('EST', 'ISR'))

    def test_matrix_margins_are_cluster_sizes(self):
        rows, columns = self.report.cluster_sizes()
        self.assertEqual(rows.tolist(), [5, 0, 9, 0, 1, 1, 6, 12])
        self.assertEqual(columns.tolist(), [8, 0, 5, 4, 0, 1, 4, 12])
        self.assertEqual(int(self.report.matrix.sum()), 34)

    def test_same_epoch_is_diagonal(self):
        report = shift_report(self.after, self.after)
        matrix = report.matrix
        self.assertTrue(np.array_equal(matrix, np.diag(np.diag(matrix))))
        self.assertEqual(len(report.stayers), 34)
        self.assertEqual((report.upward, report.downward), ((), ()))

    def test_lateral_mover(self):
        before = [ClusterAssignment.for_cluster('AAA', 2)]
        after = [ClusterAssignment.for_cluster('AAA', 5)]
        report = shift_report(before, after)
        self.assertEqual([t.country for t in report.lateral], ['AAA'])
        self.assertEqual(report.stayers, ())

    def test_country_mismatch(self):
        with self.assertRaises(CountryMismatchError) as context:
            shift_report(self.before[1:], self.after[:-1])
        self.assertEqual(context.exception.difference, ['AUS', 'USA'])

    def test_serializer(self):
        data = ShiftReportSerializer(self.report).data
        self.assertEqual(data['epochs'], [2010, 2020])
        self.assertEqual(data['upward'][0]['country'], 'ISR')
        self.assertEqual(len(data['matrix']), 8)
        self.assertIn('CHE', data['stayers'])

    @hypothesis_settings(max_examples=50)
    @given(st.dictionaries(st.sampled_from(['AAA', 'BBB', 'CCC', 'DDD', 'EEE']), st.integers(1, 8), min_size=1),
           st.lists(st.integers(1, 8), min_size=5, max_size=5))
    def test_margins_property(self, first, second_ids):
        second = dict(zip(sorted(first), second_ids))
        report = shift_report(assignments_from_clusters(first), assignments_from_clusters(second))
        rows, columns = report.cluster_sizes()
        for cluster_id in cluster_types:
            self.assertEqual(rows[cluster_id - 1], list(first.values()).count(cluster_id))
            self.assertEqual(columns[cluster_id - 1], list(second.values()).count(cluster_id))
        self.assertEqual(len(report.upward) + len(report.downward) + len(report.lateral) + len(report.stayers),
                         len(first))

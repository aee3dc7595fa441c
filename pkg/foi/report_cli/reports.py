"""
Renderers behind ``--format``: every report knows its plain-text table,
its pandas frame (csv) and its JSON payload.
"""
import json
from collections import OrderedDict

import pandas as pd

from classifier.serializers import ClusterAssignmentSerializer, ShiftReportSerializer
from classifier.types import cluster_types
from core.utils import format_index, is_missing, render_table
from factor_analysis.serializers import FactorModelSerializer
from indicator_store.serializers import PanelSerializer, ValidationReportSerializer
from indicator_store.store import panel_frame
from indicator_store.types import PILLARS
from pillar_index.serializers import FoiScoresSerializer
from .serializers import FactorProfileSerializer, VerifyReportSerializer

TABLE = 'table'
CSV = 'csv'
JSON = 'json'
FORMATS = (TABLE, CSV, JSON)


def _number(value, pattern='{:.2f}'):
    return '-' if is_missing(value) else pattern.format(value)


class BaseReport(object):

    def table(self):
        raise NotImplementedError

    def frame(self):
        raise NotImplementedError

    def payload(self):
        raise NotImplementedError

    def render(self, fmt):
        if fmt == TABLE:
            return self.table()
        if fmt == CSV:
            return self.frame().to_csv(index=False, na_rep='')
        if fmt == JSON:
            return json.dumps(self.payload(), indent=2) + '\n'
        raise ValueError(fmt)


class ValidationReportView(BaseReport):

    def __init__(self, panel, report):
        self.panel = panel
        self.report = report

    def table(self):
        lines = ['epoch {}: {} countries x {} indicators, coverage {:.4f}, {} missing cells'.format(
            self.panel.epoch if self.panel.epoch is not None else '-', len(self.panel.countries),
            len(self.panel.indicators), self.report.coverage, self.report.missing_cells), '']
        text = '\n'.join(lines) + '\n'
        text += render_table(['indicator', 'missing'], list(self.report.indicator_missing.items()))
        missing_countries = [(c, n) for c, n in self.report.country_missing.items() if n]
        if missing_countries:
            text += '\n' + render_table(['country', 'missing'], missing_countries)
        if self.report.warnings:
            text += '\nwarnings:\n' + ''.join('- {}\n'.format(warning) for warning in self.report.warnings)
        return text

    def frame(self):
        return pd.DataFrame({
            'indicator': list(self.report.indicator_missing),
            'missing': list(self.report.indicator_missing.values()),
        })

    def payload(self):
        data = ValidationReportSerializer(self.report).data
        data['epoch'] = self.panel.epoch
        return data


class PanelView(BaseReport):

    def __init__(self, panel):
        self.panel = panel

    def table(self):
        rows = [[country] + [_number(value) for value in self.panel.row(country)] for country in self.panel.countries]
        return render_table(['country'] + list(self.panel.indicators), rows)

    def frame(self):
        return panel_frame(self.panel)

    def payload(self):
        return PanelSerializer(self.panel).data


class IndexReport(BaseReport):
    """Per-country indices with ranks, optionally with the cluster assignment."""

    def __init__(self, scores, assignments=None):
        self.scores = scores
        self.assignments = OrderedDict((a.country, a) for a in assignments) if assignments is not None else None

    def _assignment_cells(self, country):
        assignment = self.assignments.get(country)
        if assignment is None:
            return ['-', '-', '-', '-']
        borderline = ','.join(pillar for pillar in PILLARS if pillar in assignment.borderline) or '-'
        return [assignment.pattern, assignment.cluster_id, assignment.label, borderline]

    def table(self):
        header = ['country'] + list(PILLARS)
        if self.assignments is not None:
            header += ['levels', 'cluster', 'label', 'borderline']
        rows = []
        for row in self.scores.rows:
            cells = [row.country] + [format_index(row.index(pillar), row.rank(pillar)) for pillar in PILLARS]
            if self.assignments is not None:
                cells += self._assignment_cells(row.country)
            rows.append(cells)
        return render_table(header, rows)

    def frame(self):
        records = []
        for row in self.scores.rows:
            record = OrderedDict(country=row.country)
            for pillar in PILLARS:
                record['{}_index'.format(pillar.lower())] = row.index(pillar)
                record['{}_rank'.format(pillar.lower())] = row.rank(pillar)
            if self.assignments is not None:
                assignment = self.assignments.get(row.country)
                record['levels'] = assignment.pattern if assignment else None
                record['cluster_id'] = assignment.cluster_id if assignment else None
                record['label'] = assignment.label if assignment else None
            records.append(record)
        frame = pd.DataFrame.from_records(records, columns=list(records[0]) if records else ['country'])
        for column in frame.columns:
            if column.endswith('_rank') or column == 'cluster_id':
                frame[column] = frame[column].astype('Int64')
        return frame

    def payload(self):
        data = FoiScoresSerializer(self.scores).data
        if self.assignments is not None:
            data['assignments'] = ClusterAssignmentSerializer(list(self.assignments.values()), many=True).data
        return data


class ShiftReportView(BaseReport):

    def __init__(self, report):
        self.report = report

    def table(self):
        report = self.report
        first, second = ('-' if epoch is None else epoch for epoch in report.epochs)
        movers = list(report.upward) + list(report.downward) + list(report.lateral)
        text = 'cluster shifts {} -> {}: {} moved, {} stayed\n\n'.format(first, second, len(movers),
                                                                      len(report.stayers))
        text += render_table(['country', 'from', 'to', 'delta_h'],
                             [[t.country, t.from_cluster, t.to_cluster, '{:+d}'.format(t.delta_h)] for t in movers])

        ids = sorted(cluster_types)
        text += '\n' + render_table(['from\\to'] + ids,
                                    [[cluster_id] + report.matrix[cluster_id - 1].tolist() for cluster_id in ids])

        def listing(values):
            return ', '.join(map(str, values)) or '-'

        text += '\nstayers: {}\n'.format(listing(t.country for t in report.stayers))
        text += 'emerged clusters: {}\n'.format(listing(report.emerged_clusters))
        text += 'vanished clusters: {}\n'.format(listing(report.vanished_clusters))
        text += 'middle-income trap entries: {}\n'.format(listing(report.trap_entries))
        text += 'middle-income trap exits: {}\n'.format(listing(report.trap_exits))
        return text

    def frame(self):
        return pd.DataFrame(
            [[t.country, t.from_cluster, t.to_cluster, t.delta_h] for t in self.report.transitions],
            columns=['country', 'from_cluster', 'to_cluster', 'delta_h'],
        )

    def payload(self):
        return ShiftReportSerializer(self.report).data


class FactorReport(BaseReport):
    """One factor model per variable group; csv is the country x factor score table."""

    def __init__(self, models):
        self.models = models

    def table(self):
        blocks = []
        for group, model in self.models.items():
            bartlett = model.bartlett
            summary = ('[{}] k={} KMO {:.3f}, Bartlett chi-square {:.3f} df {} p {:.4g}, '
                       'variance explained {:.1%}{}\n').format(
                group, model.k, model.kmo, bartlett.chi_square, bartlett.df, bartlett.p_value,
                model.variance_explained, '' if model.converged else ', rotation NOT converged')
            rows = [[variable] + ['{:.3f}'.format(value) for value in model.rotated[i]]
                    + ['{:.3f}'.format(model.communalities[i])]
                    for i, variable in enumerate(model.variables)]
            blocks.append(summary + render_table(['variable'] + model.factor_names() + ['communality'], rows))
        frame = self.frame()
        rows = [[record[0]] + [_number(value, '{:.5f}') for value in record[1:]]
                for record in frame.itertuples(index=False, name=None)]
        blocks.append(render_table(list(frame.columns), rows))
        return '\n'.join(blocks)

    def frame(self):
        columns = OrderedDict()
        countries = []
        for model in self.models.values():
            for country in model.countries:
                if country not in countries:
                    countries.append(country)
        for model in self.models.values():
            position = {country: i for i, country in enumerate(model.countries)}
            for j, name in enumerate(model.factor_names()):
                columns[name] = [model.scores[position[c], j] if c in position else float('nan') for c in countries]
        frame = pd.DataFrame(columns)
        frame.insert(0, 'country', countries)
        return frame

    def payload(self):
        return OrderedDict((group, FactorModelSerializer(model).data) for group, model in self.models.items())


class VerifyReportView(BaseReport):

    def __init__(self, reports):
        self.reports = list(reports)

    def table(self):
        blocks = []
        for report in self.reports:
            text = 'epoch {}: {}/{} memberships reproduced (threshold {}, epsilon {})\n'.format(
                report.epoch, report.matches, report.total, report.threshold, report.epsilon)
            if report.mismatches:
                text += render_table(
                    ['country', 'computed', 'reference', 'kind'],
                    [[m.country, m.computed, m.reference, 'borderline' if m.borderline else 'hard']
                     for m in report.mismatches])
            blocks.append(text)
        return '\n'.join(blocks)

    def frame(self):
        return pd.DataFrame(
            [[r.epoch, m.country, m.computed, m.reference, m.borderline] for r in self.reports for m in r.mismatches],
            columns=['epoch', 'country', 'computed', 'reference', 'borderline'],
        )

    def payload(self):
        return VerifyReportSerializer(self.reports, many=True).data


class FactorProfileView(BaseReport):
    """Cluster x factor means of the published factor values."""

    def __init__(self, profile):
        self.profile = profile

    def table(self):
        profile = self.profile
        text = 'mean factor values by cluster, epoch {}\n'.format(profile.epoch)
        text += ''.join('  {}: {}\n'.format(factor, profile.names.get(factor, factor)) for factor in profile.factors)
        rows = [[cluster_id, profile.label(cluster_id), profile.sizes[i]]
                + [_number(value, '{:+.3f}') for value in profile.means[i]]
                for i, cluster_id in enumerate(profile.clusters)]
        return text + '\n' + render_table(['cluster', 'label', 'n'] + list(profile.factors), rows)

    def frame(self):
        frame = pd.DataFrame(self.profile.means, columns=list(self.profile.factors))
        frame.insert(0, 'size', list(self.profile.sizes))
        frame.insert(0, 'label', [self.profile.label(cluster_id) for cluster_id in self.profile.clusters])
        frame.insert(0, 'cluster_id', list(self.profile.clusters))
        return frame

    def payload(self):
        return FactorProfileSerializer(self.profile).data

# -*- encoding: utf-8 -*-
import json
import logging
from typing import Tuple

import attr
import numpy as np
import pandas as pd
from django.conf import settings

from classifier.tools import classify_epoch
from classifier.types import ClusterAssignment, cluster_types
from core.exceptions import ExportError, InputError
from core.mbunch import MBunch
from core.utils import from_optional
from indicator_store.store import default_manifest, load_manifest, load_panel, validate_panel
from indicator_store.types import IndicatorPanel, PILLARS, ValidationReport
from pillar_index.scores import CountryScore, FoiScores, compute_pillar_scores, rank_countries
from pillar_index.serializers import FoiScoresInputSerializer
from rescaling.scale import RescaledPanel, rescale_panel
from .reference import reference_fixture
from .reports import FORMATS, BaseReport, FactorProfileView, IndexReport, ShiftReportView, VerifyReportView

logger = logging.getLogger(__name__)


@attr.s(frozen=True, auto_attribs=True, eq=False)
class PipelineResult:
    panel: IndicatorPanel
    validation: ValidationReport
    rescaled: RescaledPanel
    scores: FoiScores
    assignments: Tuple[ClusterAssignment, ...] = attr.ib(converter=tuple)
    # countries without a complete F/O/I triple (strict policy)
    unclassified: Tuple[str, ...] = attr.ib(converter=tuple, default=())


@attr.s(frozen=True, auto_attribs=True)
class Mismatch:
    country: str
    computed: int
    reference: int
    borderline: bool


@attr.s(frozen=True, auto_attribs=True)
class VerifyReport:
    epoch: int
    threshold: float
    epsilon: float
    total: int
    matches: int
    mismatches: Tuple[Mismatch, ...] = attr.ib(converter=tuple)

    @property
    def hard(self):
        return [m.country for m in self.mismatches if not m.borderline]

    @property
    def borderline(self):
        return [m.country for m in self.mismatches if m.borderline]

    def exit_status(self, strict=False):
        return 3 if strict and self.mismatches else 0


def _flag(flags, key, setting):
    value = (flags or {}).get(key)
    return settings.FOI[setting] if value is None else value


def classify_complete(scores, threshold=None, epsilon=None):
    """Classify every country with a full F/O/I triple; the others are returned as unclassified."""
    complete = [row for row in scores.rows if not any(row.is_absent(pillar) for pillar in PILLARS)]
    unclassified = sorted(set(scores.countries) - {row.country for row in complete})
    for country in unclassified:
        logger.warning('%s has an absent pillar index and is not classified', country)
    assignments = classify_epoch(FoiScores(epoch=scores.epoch, rows=complete), threshold=threshold, epsilon=epsilon)
    return assignments, unclassified


def run_pipeline(panel_csv, manifest_json=None, epoch=None, flags=None):
    """panel CSV -> validated panel -> rescaled panel -> ranked indices -> cluster assignments."""
    flags = MBunch(flags or {})
    manifest = load_manifest(manifest_json) if manifest_json else default_manifest()
    panel = load_panel(panel_csv, manifest, epoch=epoch)
    validation = validate_panel(panel)
    rescaled = rescale_panel(panel, manifest)
    scores = rank_countries(compute_pillar_scores(
        rescaled, manifest, missing_policy=_flag(flags, 'missing_policy', 'MISSING_POLICY')))

    assignments, unclassified = classify_complete(
        scores, threshold=_flag(flags, 'threshold', 'THRESHOLD'), epsilon=_flag(flags, 'epsilon', 'EPSILON'))
    return PipelineResult(panel=panel, validation=validation, rescaled=rescaled, scores=scores,
                          assignments=assignments, unclassified=unclassified)


def _mismatch_is_borderline(assignment, reference_id, threshold, epsilon):
    """Every pillar whose level disagrees with the reference lies within epsilon of the threshold."""
    reference = ClusterAssignment.for_cluster(assignment.country, reference_id)
    disagreeing = [pillar for pillar in PILLARS if assignment.level(pillar) != reference.level(pillar)]
    return all(abs(assignment.indices[PILLARS.index(pillar)] - threshold) <= epsilon for pillar in disagreeing)


def verify_reference(epoch, threshold=None, epsilon=None, fixture=None):
    """Classify the printed indices of ``epoch`` and diff them against the printed memberships."""
    threshold = settings.FOI['THRESHOLD'] if threshold is None else threshold
    epsilon = settings.FOI['EPSILON'] if epsilon is None else epsilon
    fixture = fixture or reference_fixture()

    reference = fixture.clusters(epoch)
    assignments = classify_epoch(fixture.scores(epoch), threshold=threshold, epsilon=epsilon)
    mismatches = [
        Mismatch(
            country=a.country,
            computed=a.cluster_id,
            reference=reference[a.country],
            borderline=_mismatch_is_borderline(a, reference[a.country], threshold, epsilon),
        )
        for a in assignments if a.cluster_id != reference[a.country]
    ]
    report = VerifyReport(epoch=int(epoch), threshold=threshold, epsilon=epsilon, total=len(assignments),
                          matches=len(assignments) - len(mismatches), mismatches=mismatches)
    logger.info('verify %s: %d/%d match, hard %s, borderline %s',
                epoch, report.matches, report.total, report.hard, report.borderline)
    return report


@attr.s(frozen=True, auto_attribs=True, eq=False)
class FactorProfile:
    """Mean published factor value per cluster. Empty cells are skipped, not zero-filled."""
    epoch: int
    factors: Tuple[str, ...] = attr.ib(converter=tuple)
    names: dict
    clusters: Tuple[int, ...] = attr.ib(converter=tuple)
    sizes: Tuple[int, ...] = attr.ib(converter=tuple)
    # clusters x factors; NaN where no member has a value
    means: np.ndarray
    # members with a value, clusters x factors
    counts: np.ndarray

    def label(self, cluster_id):
        return cluster_types[cluster_id].label

    def mean(self, cluster_id, factor):
        return float(self.means[self.clusters.index(cluster_id), self.factors.index(factor)])

    def count(self, cluster_id, factor):
        return int(self.counts[self.clusters.index(cluster_id), self.factors.index(factor)])

    def leading_cluster(self, factor):
        column = self.means[:, self.factors.index(factor)]
        return self.clusters[int(np.nanargmax(column))]


def factor_profile(epoch=None, fixture=None):
    """Join the published factor values with the published memberships of ``epoch``."""
    fixture = fixture or reference_fixture()
    factor_epoch = int(fixture.factor_values['epoch'])
    epoch = factor_epoch if epoch is None else int(epoch)
    if epoch != factor_epoch:
        raise InputError('factor values are published for epoch {} only'.format(factor_epoch), module='report_cli')

    countries, factors, grid = fixture.factor_table()
    memberships = fixture.clusters(epoch)
    frame = pd.DataFrame(grid, columns=factors)
    frame['cluster_id'] = [memberships[country] for country in countries]
    grouped = frame.groupby('cluster_id', sort=True)
    means = grouped[factors].mean()
    return FactorProfile(
        epoch=epoch,
        factors=factors,
        names=dict(fixture.factor_values['names']),
        clusters=[int(cluster_id) for cluster_id in means.index],
        sizes=[int(size) for size in grouped.size()],
        means=means.to_numpy(dtype=float),
        counts=grouped[factors].count().to_numpy(),
    )


def as_report(results):
    if isinstance(results, BaseReport):
        return results
    if isinstance(results, PipelineResult):
        return IndexReport(results.scores, results.assignments)
    if isinstance(results, FoiScores):
        return IndexReport(results)
    if isinstance(results, VerifyReport):
        return VerifyReportView([results])
    if isinstance(results, FactorProfile):
        return FactorProfileView(results)
    if hasattr(results, 'transitions'):
        return ShiftReportView(results)
    raise TypeError('cannot export {!r}'.format(type(results).__name__))


def export_report(results, fmt, destination=None):
    """Render ``results`` as table / csv / json; write to ``destination`` when given. Returns the text."""
    if fmt not in FORMATS:
        raise InputError('unknown format "{}"; expected one of {}'.format(fmt, ', '.join(FORMATS)),
                         module='report_cli')
    text = as_report(results).render(fmt)
    if destination:
        try:
            with open(destination, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
        except OSError as e:
            raise ExportError('cannot write {}: {}'.format(destination, e.strerror or e))
        logger.info('wrote %s report to %s', fmt, destination)
    return text


def load_scores_json(text):
    """Rebuild ``FoiScores`` from an exported json report."""
    try:
        data = json.loads(text)
    except ValueError as e:
        raise InputError('scores json is not valid JSON: {}'.format(e), module='report_cli')
    serializer = FoiScoresInputSerializer(data=data)
    if not serializer.is_valid():
        raise InputError('scores json does not validate: {}'.format(serializer.errors), module='report_cli')

    rows = []
    for row in data['rows']:
        rows.append(CountryScore(
            country=row['country'],
            f_index=from_optional(row['f_index']),
            o_index=from_optional(row['o_index']),
            i_index=from_optional(row['i_index']),
            f_rank=row.get('f_rank'),
            o_rank=row.get('o_rank'),
            i_rank=row.get('i_rank'),
        ))
    return FoiScores(epoch=data['epoch'], rows=rows)


def scores_from_json_file(path):
    try:
        with open(path, encoding='utf-8') as f:
            return load_scores_json(f.read())
    except FileNotFoundError:
        raise InputError('scores file "{}" not found'.format(path), module='report_cli')

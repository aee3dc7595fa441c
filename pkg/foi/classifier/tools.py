# -*- encoding: utf-8 -*-
import logging
import math

import numpy as np
from django.conf import settings

from core.exceptions import CountryMismatchError, DomainError
from indicator_store.types import PILLARS
from rescaling.scale import SCALE_MAX, SCALE_MIN
from .types import HIGH, LOW, ClusterAssignment, ShiftReport, Transition, cluster_by_levels, cluster_types

logger = logging.getLogger(__name__)

CLUSTER_COUNT = len(cluster_types)


def _defaults(threshold, epsilon):
    if threshold is None:
        threshold = settings.FOI['THRESHOLD']
    if epsilon is None:
        epsilon = settings.FOI['EPSILON']
    return threshold, epsilon


def classify(f, o, i, threshold=None, epsilon=None, country=''):
    """
    Interval halving: a pillar is High iff its index >= threshold (scale midpoint 4 by default).
    Pillars within epsilon of the threshold are flagged borderline.
    """
    threshold, epsilon = _defaults(threshold, epsilon)
    indices = (f, o, i)
    for pillar, value in zip(PILLARS, indices):
        if value is None or math.isnan(value):
            raise DomainError('{} index of "{}" is absent'.format(pillar, country), module='classifier')
        if not SCALE_MIN <= value <= SCALE_MAX:
            raise DomainError('{} index {} of "{}" is outside [{}, {}]'.format(
                pillar, value, country, SCALE_MIN, SCALE_MAX), module='classifier')

    levels = tuple(HIGH if value >= threshold else LOW for value in indices)
    borderline = {pillar for pillar, value in zip(PILLARS, indices) if abs(value - threshold) <= epsilon}
    cluster = cluster_by_levels[levels]
    return ClusterAssignment(
        country=country,
        levels=levels,
        cluster_id=cluster.cluster_id,
        label=cluster.label,
        borderline=borderline,
        indices=tuple(float(value) for value in indices),
    )


def classify_epoch(scores, threshold=None, epsilon=None):
    rows = sorted(scores.rows, key=lambda row: row.country)
    return [
        classify(row.f_index, row.o_index, row.i_index, threshold=threshold, epsilon=epsilon, country=row.country)
        for row in rows
    ]


def assignments_from_clusters(cluster_ids):
    """{country: cluster id} -> assignments, for memberships known without indices."""
    return [ClusterAssignment.for_cluster(country, cluster_ids[country]) for country in sorted(cluster_ids)]


def _mover_order(transition):
    return -abs(transition.delta_h), transition.country


def shift_report(a, b, epochs=(None, None)):
    before = {assignment.country: assignment for assignment in a}
    after = {assignment.country: assignment for assignment in b}
    difference = set(before) ^ set(after)
    if difference:
        raise CountryMismatchError(difference)

    transitions = []
    matrix = np.zeros((CLUSTER_COUNT, CLUSTER_COUNT), dtype=int)
    for country in sorted(before):
        old, new = before[country], after[country]
        transitions.append(Transition(
            country=country,
            from_cluster=old.cluster_id,
            to_cluster=new.cluster_id,
            delta_h=new.high_count - old.high_count,
        ))
        matrix[old.cluster_id - 1, new.cluster_id - 1] += 1

    upward = sorted((t for t in transitions if t.delta_h > 0), key=_mover_order)
    downward = sorted((t for t in transitions if t.delta_h < 0), key=_mover_order)
    lateral = [t for t in transitions if t.moved and t.delta_h == 0]
    stayers = [t for t in transitions if not t.moved]

    sizes_before, sizes_after = matrix.sum(axis=1), matrix.sum(axis=0)
    emerged = [cluster_id for cluster_id in sorted(cluster_types)
               if sizes_before[cluster_id - 1] == 0 and sizes_after[cluster_id - 1] > 0]
    vanished = [cluster_id for cluster_id in sorted(cluster_types)
                if sizes_before[cluster_id - 1] > 0 and sizes_after[cluster_id - 1] == 0]

    trap_entries = [c for c in sorted(before) if not before[c].in_middle_income_trap and after[c].in_middle_income_trap]
    trap_exits = [c for c in sorted(before) if before[c].in_middle_income_trap and not after[c].in_middle_income_trap]

    logger.info('shift %s -> %s: %d moved, %d up, %d down',
                epochs[0], epochs[1], len(transitions) - len(stayers), len(upward), len(downward))
    return ShiftReport(
        epochs=tuple(epochs),
        transitions=transitions,
        matrix=matrix,
        upward=upward,
        downward=downward,
        lateral=lateral,
        stayers=stayers,
        emerged_clusters=emerged,
        vanished_clusters=vanished,
        trap_entries=trap_entries,
        trap_exits=trap_exits,
    )

import logging
import math
from typing import Optional, Tuple

import attr
import numpy as np

from core.exceptions import InputError, MissingPillarError
from indicator_store.types import PILLARS

logger = logging.getLogger(__name__)

AVAILABLE_MEAN = 'available_mean'
STRICT = 'strict'
MISSING_POLICIES = (AVAILABLE_MEAN, STRICT)


@attr.s(frozen=True, auto_attribs=True)
class CountryScore:
    country: str
    f_index: float
    o_index: float
    i_index: float
    f_rank: Optional[int] = None
    o_rank: Optional[int] = None
    i_rank: Optional[int] = None

    def index(self, pillar):
        return getattr(self, '{}_index'.format(pillar.lower()))

    def rank(self, pillar):
        return getattr(self, '{}_rank'.format(pillar.lower()))

    def is_absent(self, pillar):
        return math.isnan(self.index(pillar))


@attr.s(frozen=True, auto_attribs=True)
class FoiScores:
    """Per-country F/O/I triple for one epoch. Absent indices (strict policy) are NaN."""
    epoch: Optional[int]
    rows: Tuple[CountryScore, ...] = attr.ib(converter=tuple)

    @property
    def countries(self):
        return tuple(row.country for row in self.rows)

    def get(self, country):
        for row in self.rows:
            if row.country == country:
                return row
        raise KeyError(country)

    def indices(self, pillar):
        return np.array([row.index(pillar) for row in self.rows], dtype=float)

    @classmethod
    def from_triples(cls, epoch, triples):
        """{country: (f, o, i)} -> unranked scores."""
        return cls(epoch=epoch, rows=[
            CountryScore(country=country, f_index=float(f), o_index=float(o), i_index=float(i))
            for country, (f, o, i) in triples.items()
        ])


def component_matrix(rescaled, manifest, pillar):
    """
    countries x components of one pillar. Specs sharing a component are folded
    into the mean of their available parts first.
    """
    components = manifest.components(pillar)
    matrix = np.full((len(rescaled.countries), len(components)), np.nan)
    for j, spec_ids in enumerate(components.values()):
        parts = np.column_stack([rescaled.column(spec_id) for spec_id in spec_ids])
        present = ~np.isnan(parts)
        counts = present.sum(axis=1)
        sums = np.where(present, parts, 0.0).sum(axis=1)
        with np.errstate(invalid='ignore', divide='ignore'):
            matrix[:, j] = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return matrix


def compute_pillar_scores(rescaled, manifest, missing_policy=AVAILABLE_MEAN):
    if missing_policy not in MISSING_POLICIES:
        raise InputError('unknown missing policy "{}"'.format(missing_policy), module='pillar_index')
    for pillar in PILLARS:
        if not manifest.specs_for(pillar):
            raise InputError('manifest has no component in pillar {}'.format(pillar), module='pillar_index')

    pillar_values = {}
    for pillar in PILLARS:
        matrix = component_matrix(rescaled, manifest, pillar)
        present = ~np.isnan(matrix)
        counts = present.sum(axis=1)
        values = np.full(len(rescaled.countries), np.nan)
        for i, country in enumerate(rescaled.countries):
            if missing_policy == STRICT:
                if counts[i] == matrix.shape[1]:
                    values[i] = matrix[i].mean()
                else:
                    logger.info('%s pillar %s absent under strict policy', country, pillar)
            else:
                if counts[i] == 0:
                    raise MissingPillarError(country, pillar)
                values[i] = matrix[i, present[i]].mean()
        pillar_values[pillar] = values

    rows = [
        CountryScore(
            country=country,
            f_index=float(pillar_values['F'][i]),
            o_index=float(pillar_values['O'][i]),
            i_index=float(pillar_values['I'][i]),
        )
        for i, country in enumerate(rescaled.countries)
    ]
    return FoiScores(epoch=rescaled.epoch, rows=rows)


def _ranks(countries, values):
    """Rank 1 = highest value; ties by ascending country code; NaN stays unranked."""
    ranked = sorted(
        (index for index, value in enumerate(values) if not math.isnan(value)),
        key=lambda index: (-values[index], countries[index]),
    )
    ranks = [None] * len(values)
    for position, index in enumerate(ranked, start=1):
        ranks[index] = position
    return ranks


def rank_countries(scores):
    countries = scores.countries
    ranks = {pillar: _ranks(countries, scores.indices(pillar).tolist()) for pillar in PILLARS}
    rows = [
        attr.evolve(row, f_rank=ranks['F'][i], o_rank=ranks['O'][i], i_rank=ranks['I'][i])
        for i, row in enumerate(scores.rows)
    ]
    return attr.evolve(scores, rows=rows)

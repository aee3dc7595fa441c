from collections import OrderedDict
from typing import Optional, Tuple

import attr
import numpy as np

from core.exceptions import DuplicateCountryError, ManifestError
from core.utils import readonly

PILLARS = ('F', 'O', 'I')

HIGHER_IS_BETTER = 'higher_is_better'
LOWER_IS_BETTER = 'lower_is_better'
DIRECTIONS = (HIGHER_IS_BETTER, LOWER_IS_BETTER)


@attr.s(frozen=True, auto_attribs=True)
class IndicatorSpec:
    id: str
    name: str
    pillar: str = attr.ib(validator=attr.validators.in_(PILLARS))
    direction: str = attr.ib(validator=attr.validators.in_(DIRECTIONS))
    source: str = ''
    # specs sharing a component are averaged before pillar aggregation
    component: Optional[str] = None
    note: str = ''

    @property
    def component_id(self):
        return self.component or self.id


@attr.s(frozen=True, auto_attribs=True)
class IndicatorManifest:
    specs: Tuple[IndicatorSpec, ...] = attr.ib(converter=tuple)

    def __attrs_post_init__(self):
        seen = set()
        for spec in self.specs:
            if spec.id in seen:
                raise ManifestError('duplicate indicator id "{}"'.format(spec.id))
            seen.add(spec.id)
        pillar_of = {}
        for spec in self.specs:
            known = pillar_of.setdefault(spec.component_id, spec.pillar)
            if known != spec.pillar:
                raise ManifestError('component "{}" spans pillars {} and {}'.format(
                    spec.component_id, known, spec.pillar))

    @property
    def columns(self):
        return tuple(spec.id for spec in self.specs)

    def spec(self, indicator_id):
        for spec in self.specs:
            if spec.id == indicator_id:
                return spec
        raise KeyError(indicator_id)

    def specs_for(self, pillar):
        return tuple(spec for spec in self.specs if spec.pillar == pillar)

    def components(self, pillar):
        """component id -> spec ids, in manifest order."""
        grouped = OrderedDict()
        for spec in self.specs_for(pillar):
            grouped.setdefault(spec.component_id, []).append(spec.id)
        return grouped

    def component_counts(self):
        return {pillar: len(self.components(pillar)) for pillar in PILLARS}


@attr.s(frozen=True, auto_attribs=True, eq=False)
class IndicatorPanel:
    """
    country x indicator grid for one epoch. MISSING cells are NaN.
    """
    epoch: Optional[int]
    countries: Tuple[str, ...] = attr.ib(converter=tuple)
    indicators: Tuple[str, ...] = attr.ib(converter=tuple)
    values: np.ndarray = attr.ib(converter=readonly)

    def __attrs_post_init__(self):
        seen = set()
        for country in self.countries:
            if country in seen:
                raise DuplicateCountryError(country)
            seen.add(country)
        if self.values.shape != (len(self.countries), len(self.indicators)):
            raise ValueError('grid shape {} does not match {} countries x {} indicators'.format(
                self.values.shape, len(self.countries), len(self.indicators)))

    @property
    def shape(self):
        return self.values.shape

    @property
    def missing(self):
        return np.isnan(self.values)

    def column(self, indicator_id):
        return self.values[:, self.indicators.index(indicator_id)]

    def row(self, country):
        return self.values[self.countries.index(country), :]

    def cell(self, country, indicator_id):
        return float(self.values[self.countries.index(country), self.indicators.index(indicator_id)])

    def same_grid(self, other):
        return (self.countries == other.countries and self.indicators == other.indicators
                and np.array_equal(self.values, other.values, equal_nan=True))


@attr.s(frozen=True, auto_attribs=True)
class ValidationReport:
    indicator_missing: 'OrderedDict[str, int]'
    country_missing: 'OrderedDict[str, int]'
    coverage: float
    warnings: Tuple[str, ...] = attr.ib(converter=tuple)

    @property
    def missing_cells(self):
        return sum(self.indicator_missing.values())

"""
Published index, membership and factor-value tables.

The tables live in ``fixtures/reference_tables.json`` next to a SHA-256
sidecar; a fixture that does not match its checksum is refused.
"""
import hashlib
import json
import logging
from functools import lru_cache

import attr
import numpy as np
from django.conf import settings
from rest_framework import serializers

from core.exceptions import FixtureError, InputError
from core.utils import from_optional
from indicator_store.types import PILLARS
from pillar_index.scores import CountryScore, FoiScores

logger = logging.getLogger(__name__)


class FactorValuesSerializer(serializers.Serializer):
    epoch = serializers.IntegerField()
    columns = serializers.ListField(child=serializers.CharField())
    names = serializers.DictField(child=serializers.CharField())
    rows = serializers.DictField(child=serializers.ListField(child=serializers.FloatField(allow_null=True)))


class ReferenceTablesSerializer(serializers.Serializer):
    countries = serializers.DictField(child=serializers.CharField())
    indices = serializers.DictField(
        child=serializers.DictField(
            child=serializers.DictField(
                child=serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2))))
    clusters = serializers.DictField(
        child=serializers.DictField(child=serializers.IntegerField(min_value=1, max_value=8)))
    factor_values = FactorValuesSerializer()


@attr.s(frozen=True, auto_attribs=True)
class ReferenceFixture:
    names: dict
    indices: dict
    memberships: dict
    factor_values: dict

    @property
    def countries(self):
        return tuple(self.names)

    @property
    def epochs(self):
        return tuple(sorted(int(epoch) for epoch in self.indices))

    def name(self, country):
        return self.names.get(country, country)

    def _epoch(self, table, epoch):
        try:
            return table[str(epoch)]
        except KeyError:
            raise InputError('no reference data for epoch {}; available: {}'.format(
                epoch, ', '.join(map(str, self.epochs))), module='report_cli')

    def scores(self, epoch):
        """Printed indices with their printed ranks, in fixture country order."""
        table = self._epoch(self.indices, epoch)
        rows = []
        for country in self.countries:
            cells = table[country]
            rows.append(CountryScore(
                country=country,
                f_index=cells['F'][0], o_index=cells['O'][0], i_index=cells['I'][0],
                f_rank=int(cells['F'][1]), o_rank=int(cells['O'][1]), i_rank=int(cells['I'][1]),
            ))
        return FoiScores(epoch=int(epoch), rows=rows)

    def clusters(self, epoch):
        return dict(self._epoch(self.memberships, epoch))

    def factor_table(self):
        """(countries, factor columns, grid with NaN for empty cells)."""
        rows = self.factor_values['rows']
        countries = list(rows)
        grid = np.array([[from_optional(value) for value in rows[country]] for country in countries])
        return countries, list(self.factor_values['columns']), grid


def _checksum_path(path):
    return path.rsplit('.', 1)[0] + '.sha256'


def _check_tables(data):
    countries = set(data['countries'])
    for epoch, table in data['indices'].items():
        if set(table) != countries:
            raise FixtureError('index table {} does not cover the fixture countries'.format(epoch))
        for country, cells in table.items():
            if set(cells) != set(PILLARS):
                raise FixtureError('index row {} {} must have exactly the pillars F, O, I'.format(epoch, country))
    for epoch, table in data['clusters'].items():
        if set(table) != countries:
            raise FixtureError('membership table {} does not cover the fixture countries'.format(epoch))
    width = len(data['factor_values']['columns'])
    for country, values in data['factor_values']['rows'].items():
        if country not in countries:
            raise FixtureError('factor row {} is not a fixture country'.format(country))
        if len(values) != width:
            raise FixtureError('factor row {} has {} cells, expected {}'.format(country, len(values), width))


def load_reference_fixture(path=None):
    path = path or settings.FOI['REFERENCE_FIXTURE']
    try:
        with open(path, 'rb') as f:
            payload = f.read()
        with open(_checksum_path(path), encoding='ascii') as f:
            expected = f.read().split()[0]
    except (OSError, IndexError) as e:
        raise FixtureError('cannot read reference fixture {}: {}'.format(path, e))

    digest = hashlib.sha256(payload).hexdigest()
    if digest != expected:
        raise FixtureError('checksum mismatch for {}: expected {}, got {}'.format(path, expected, digest))

    try:
        data = json.loads(payload.decode('utf-8'))
    except ValueError as e:
        raise FixtureError('reference fixture is not valid JSON: {}'.format(e))
    serializer = ReferenceTablesSerializer(data=data)
    if not serializer.is_valid():
        raise FixtureError('reference fixture does not validate: {}'.format(serializer.errors))
    _check_tables(data)

    logger.debug('loaded reference fixture %s (%s)', path, digest[:12])
    return ReferenceFixture(
        names=data['countries'],
        indices=data['indices'],
        memberships=data['clusters'],
        factor_values=data['factor_values'],
    )


@lru_cache(maxsize=4)
def _cached(path):
    return load_reference_fixture(path)


def reference_fixture():
    """Checksum-verified fixture for the configured path, loaded once per process."""
    return _cached(settings.FOI['REFERENCE_FIXTURE'])

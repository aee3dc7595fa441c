"""
The eight interval-halving clusters.

Every cluster is registered here with its L/H pattern; classification code
looks clusters up through ``cluster_types`` and never hard-codes labels.
"""
from typing import FrozenSet, Optional, Tuple

import attr

from indicator_store.types import PILLARS

LOW = 'L'
HIGH = 'H'

cluster_choices = []

# cluster id / level pattern -> registered cluster class
cluster_types = {}
cluster_by_levels = {}


def ClusterType(_class):
    cluster_choices.append((_class.cluster_id, _class.label))
    cluster_types[_class.cluster_id] = _class
    cluster_by_levels[_class.levels] = _class
    return _class


class BaseClusterType(object):
    cluster_id = None
    levels = None
    label = '-'
    description = ''

    @classmethod
    def in_middle_income_trap(cls):
        return False


@ClusterType
class TraditionalCluster(BaseClusterType):
    cluster_id = 1
    levels = (LOW, LOW, LOW)
    label = 'Traditional'
    description = 'low in every pillar; outdated economic structure, no clear policy priority'

    @classmethod
    def in_middle_income_trap(cls):
        return True


@ClusterType
class InsideOnlyCluster(BaseClusterType):
    cluster_id = 2
    levels = (LOW, LOW, HIGH)


@ClusterType
class DualisticCluster(BaseClusterType):
    cluster_id = 3
    levels = (LOW, HIGH, LOW)
    label = 'Dualistic'
    description = 'development relies on external resources: foreign capital and technology'

    @classmethod
    def in_middle_income_trap(cls):
        return True


@ClusterType
class OpenMarketCluster(BaseClusterType):
    cluster_id = 4
    levels = (LOW, HIGH, HIGH)
    label = 'Open market-based'
    description = 'low future potential with strong outside and inside potential; FDI-ready liberal economies'


@ClusterType
class FutureOnlyCluster(BaseClusterType):
    cluster_id = 5
    levels = (HIGH, LOW, LOW)


@ClusterType
class FutureInsideCluster(BaseClusterType):
    cluster_id = 6
    levels = (HIGH, LOW, HIGH)


@ClusterType
class GovernmentLedCluster(BaseClusterType):
    cluster_id = 7
    levels = (HIGH, HIGH, LOW)
    # both names are in use for this model
    label = 'Government-led / Bureaucratic'
    description = 'large-corporation based; protects a weak inside potential with domestic safe havens'


@ClusterType
class HumanCapitalCluster(BaseClusterType):
    cluster_id = 8
    levels = (HIGH, HIGH, HIGH)
    label = 'Human capital-based'
    description = 'high in every pillar; focused on knowledge generation'


@attr.s(frozen=True, auto_attribs=True)
class ClusterAssignment:
    country: str
    levels: Tuple[str, str, str] = attr.ib(converter=tuple)
    cluster_id: int
    label: str
    borderline: FrozenSet[str] = attr.ib(converter=frozenset, factory=frozenset)
    indices: Optional[Tuple[float, float, float]] = None

    def __attrs_post_init__(self):
        expected = cluster_by_levels[self.levels].cluster_id
        if expected != self.cluster_id:
            raise ValueError('levels {} belong to cluster {}, not {}'.format(
                ''.join(self.levels), expected, self.cluster_id))

    @property
    def pattern(self):
        return ''.join(self.levels)

    @property
    def high_count(self):
        return self.levels.count(HIGH)

    @property
    def cluster(self):
        return cluster_types[self.cluster_id]

    @property
    def in_middle_income_trap(self):
        return self.cluster.in_middle_income_trap()

    def level(self, pillar):
        return self.levels[PILLARS.index(pillar)]

    @classmethod
    def for_cluster(cls, country, cluster_id, indices=None):
        cluster = cluster_types[cluster_id]
        return cls(country=country, levels=cluster.levels, cluster_id=cluster_id, label=cluster.label,
                   indices=indices)


@attr.s(frozen=True, auto_attribs=True)
class Transition:
    country: str
    from_cluster: int
    to_cluster: int
    delta_h: int

    @property
    def moved(self):
        return self.from_cluster != self.to_cluster


@attr.s(frozen=True, auto_attribs=True, eq=False)
class ShiftReport:
    epochs: Tuple[Optional[int], Optional[int]]
    transitions: Tuple[Transition, ...] = attr.ib(converter=tuple)
    # 8x8, rows = cluster in the first epoch, columns = cluster in the second
    matrix: object
    upward: Tuple[Transition, ...] = attr.ib(converter=tuple)
    downward: Tuple[Transition, ...] = attr.ib(converter=tuple)
    lateral: Tuple[Transition, ...] = attr.ib(converter=tuple)
    stayers: Tuple[Transition, ...] = attr.ib(converter=tuple)
    emerged_clusters: Tuple[int, ...] = attr.ib(converter=tuple)
    vanished_clusters: Tuple[int, ...] = attr.ib(converter=tuple)
    trap_entries: Tuple[str, ...] = attr.ib(converter=tuple)
    trap_exits: Tuple[str, ...] = attr.ib(converter=tuple)

    def transition(self, country):
        for transition in self.transitions:
            if transition.country == country:
                return transition
        raise KeyError(country)

    def cluster_sizes(self):
        return self.matrix.sum(axis=1), self.matrix.sum(axis=0)

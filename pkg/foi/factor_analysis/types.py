from typing import Optional, Tuple

import attr
import numpy as np

from core.exceptions import DuplicateCountryError, SchemaError
from core.utils import readonly

PAIRWISE = 'pairwise'
LISTWISE = 'listwise'
MISSING_MODES = (PAIRWISE, LISTWISE)


@attr.s(frozen=True, auto_attribs=True, eq=False)
class VariableMatrix:
    """observations (countries) x variables, MISSING cells are NaN."""
    countries: Tuple[str, ...] = attr.ib(converter=tuple)
    variables: Tuple[str, ...] = attr.ib(converter=tuple)
    values: np.ndarray = attr.ib(converter=readonly)

    def __attrs_post_init__(self):
        if len(set(self.countries)) != len(self.countries):
            duplicate = next(c for c in self.countries if self.countries.count(c) > 1)
            raise DuplicateCountryError(duplicate)
        if self.values.shape != (len(self.countries), len(self.variables)):
            raise ValueError('grid shape {} does not match {} rows x {} variables'.format(
                self.values.shape, len(self.countries), len(self.variables)))

    @property
    def complete_rows(self):
        return ~np.isnan(self.values).any(axis=1)

    @property
    def n(self):
        return int(self.complete_rows.sum())

    @property
    def p(self):
        return len(self.variables)

    def column(self, variable):
        return self.values[:, self.variables.index(variable)]

    def select(self, variables):
        for variable in variables:
            if variable not in self.variables:
                raise SchemaError(variable, 'unknown variable "{}"'.format(variable))
        columns = [self.variables.index(variable) for variable in variables]
        return VariableMatrix(countries=self.countries, variables=variables, values=self.values[:, columns])


@attr.s(frozen=True, auto_attribs=True, eq=False)
class CorrelationMatrix:
    variables: Tuple[str, ...] = attr.ib(converter=tuple)
    values: np.ndarray = attr.ib(converter=readonly)
    # complete observations behind every entry
    pair_counts: np.ndarray = attr.ib(converter=readonly)

    @property
    def p(self):
        return len(self.variables)

    @property
    def min_pair_count(self):
        counts = np.array(self.pair_counts)
        if self.p > 1:
            counts = counts[~np.eye(self.p, dtype=bool)]
        return int(counts.min())


@attr.s(frozen=True, auto_attribs=True)
class BartlettResult:
    chi_square: float
    df: int
    p_value: float
    n: int


@attr.s(frozen=True, auto_attribs=True, eq=False)
class KmoResult:
    overall: float
    # per-variable measure of sampling adequacy, NaN where undefined
    msa: np.ndarray = attr.ib(converter=readonly)


@attr.s(frozen=True, auto_attribs=True, eq=False)
class PrincipalComponents:
    loadings: np.ndarray = attr.ib(converter=readonly)
    # all p eigenvalues, descending
    eigenvalues: np.ndarray = attr.ib(converter=readonly)
    ties: bool = False

    @property
    def k(self):
        return self.loadings.shape[1]


@attr.s(frozen=True, auto_attribs=True, eq=False)
class VarimaxResult:
    loadings: np.ndarray = attr.ib(converter=readonly)
    rotation: np.ndarray = attr.ib(converter=readonly)
    criterion: float
    history: Tuple[float, ...] = attr.ib(converter=tuple)
    sweeps: int
    converged: bool


@attr.s(frozen=True, auto_attribs=True, eq=False)
class FactorModel:
    variables: Tuple[str, ...] = attr.ib(converter=tuple)
    countries: Tuple[str, ...] = attr.ib(converter=tuple)
    unrotated: np.ndarray = attr.ib(converter=readonly)
    rotated: np.ndarray = attr.ib(converter=readonly)
    rotation: np.ndarray = attr.ib(converter=readonly)
    eigenvalues: np.ndarray = attr.ib(converter=readonly)
    kmo: float
    msa: np.ndarray = attr.ib(converter=readonly)
    bartlett: BartlettResult
    variance_explained: float
    # country x factor, NaN for incomplete rows
    scores: np.ndarray = attr.ib(converter=readonly)
    converged: bool = True
    criterion_history: Tuple[float, ...] = attr.ib(converter=tuple, default=())
    eigenvalue_ties: bool = False
    kaiser_normalized: bool = True
    name: Optional[str] = None

    @property
    def k(self):
        return self.rotated.shape[1]

    @property
    def communalities(self):
        return (np.array(self.rotated) ** 2).sum(axis=1)

    @property
    def factor_variance(self):
        """Per-factor share of total variance, rotated solution."""
        return (np.array(self.rotated) ** 2).sum(axis=0) / len(self.variables)

    def factor_names(self):
        prefix = self.name or 'factor'
        return ['{}{}'.format(prefix, j + 1) for j in range(self.k)]

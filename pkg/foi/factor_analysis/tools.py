# -*- encoding: utf-8 -*-
import json
import logging
from collections import OrderedDict

from django.conf import settings

from core.exceptions import InputError
from indicator_store.store import read_grid_csv
from .extraction import factor_scores, kaiser_count, pca_extract, variance_explained
from .rotation import varimax_rotate
from .serializers import FactorGroupsSerializer
from .statistics import bartlett_test, correlation_matrix, kmo_statistic
from .types import PAIRWISE, FactorModel, VariableMatrix

logger = logging.getLogger(__name__)


def load_variable_matrix(path):
    countries, variables, grid = read_grid_csv(path)
    return VariableMatrix(countries=countries, variables=variables, values=grid)


def load_groups(path):
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise InputError('groups file "{}" not found'.format(path), module='factor_analysis')
    except ValueError as e:
        raise InputError('groups file "{}" is not valid JSON: {}'.format(path, e), module='factor_analysis')

    serializer = FactorGroupsSerializer(data={'groups': data})
    if not serializer.is_valid():
        raise InputError('invalid groups file "{}": {}'.format(path, serializer.errors['groups']),
                         module='factor_analysis')
    return OrderedDict(serializer.validated_data['groups'])


def run_factor_analysis(data, k=None, kaiser_select=False, missing=PAIRWISE, kaiser_normalize=True,
                        tol=None, max_iter=None, name=None):
    """
    correlation -> Bartlett / KMO -> PCA extraction -> varimax -> regression scores.
    Bartlett's n is the smallest pairwise count behind the correlation matrix.
    """
    if k is None and not kaiser_select:
        k = settings.FOI['FACTORS_K']

    r = correlation_matrix(data, missing=missing)
    bartlett = bartlett_test(r, r.min_pair_count)
    kmo = kmo_statistic(r)

    if kaiser_select:
        k = max(1, kaiser_count(pca_extract(r, 1).eigenvalues))
        logger.info('%s: Kaiser criterion retains %d factors', name or 'factors', k)
    extraction = pca_extract(r, k)
    rotation = varimax_rotate(extraction.loadings, kaiser_normalize=kaiser_normalize, tol=tol, max_iter=max_iter,
                              variables=data.variables)
    scores = factor_scores(data, r, rotation.loadings)

    logger.info('%s: p=%d k=%d KMO=%.3f chi2=%.3f df=%d', name or 'factors', data.p, k, kmo.overall,
                bartlett.chi_square, bartlett.df)
    return FactorModel(
        variables=data.variables,
        countries=data.countries,
        unrotated=extraction.loadings,
        rotated=rotation.loadings,
        rotation=rotation.rotation,
        eigenvalues=extraction.eigenvalues,
        kmo=kmo.overall,
        msa=kmo.msa,
        bartlett=bartlett,
        variance_explained=variance_explained(rotation.loadings, data.p),
        scores=scores,
        converged=rotation.converged,
        criterion_history=rotation.history,
        eigenvalue_ties=extraction.ties,
        kaiser_normalized=kaiser_normalize,
        name=name,
    )


def run_groups(data, groups, **kwargs):
    """One model per variable group, in group order."""
    return OrderedDict(
        (group, run_factor_analysis(data.select(variables), name=group, **kwargs))
        for group, variables in groups.items()
    )

"""
Correlation, sphericity and sampling-adequacy statistics.
"""
import logging

import numpy as np
from scipy import linalg
from scipy.stats import chi2

from core.exceptions import (DomainError, InputError, InsufficientPairsError, NotPositiveDefiniteError,
                             SingularMatrixError, UndefinedStatisticError, ZeroVarianceError)
from .types import LISTWISE, MISSING_MODES, PAIRWISE, BartlettResult, CorrelationMatrix, KmoResult

logger = logging.getLogger(__name__)

MIN_PAIRS = 3
CONDITION_LIMIT = 1e12


def _pearson(x, y):
    dx = x - x.mean()
    dy = y - y.mean()
    return float(np.dot(dx, dy) / np.sqrt(np.dot(dx, dx) * np.dot(dy, dy)))


def _check_variance(data, values):
    for j, variable in enumerate(data.variables):
        column = values[:, j]
        column = column[~np.isnan(column)]
        if len(column) and np.ptp(column) == 0:
            raise ZeroVarianceError(variable)


def correlation_matrix(data, missing=PAIRWISE):
    """
    Pearson correlations. ``pairwise`` uses every row complete for the pair,
    ``listwise`` only rows complete across all variables.
    """
    if missing not in MISSING_MODES:
        raise InputError('unknown missing mode "{}"'.format(missing), module='factor_analysis')
    values = np.array(data.values)
    if missing == LISTWISE:
        values = values[data.complete_rows]
    _check_variance(data, values)

    p = data.p
    present = ~np.isnan(values)
    r = np.eye(p)
    counts = np.zeros((p, p), dtype=int)
    for i in range(p):
        counts[i, i] = int(present[:, i].sum())
        for j in range(i + 1, p):
            both = present[:, i] & present[:, j]
            count = int(both.sum())
            if count < MIN_PAIRS:
                raise InsufficientPairsError(data.variables[i], data.variables[j], count)
            x, y = values[both, i], values[both, j]
            if np.ptp(x) == 0:
                raise ZeroVarianceError(data.variables[i])
            if np.ptp(y) == 0:
                raise ZeroVarianceError(data.variables[j])
            r[i, j] = r[j, i] = np.clip(_pearson(x, y), -1.0, 1.0)
            counts[i, j] = counts[j, i] = count

    logger.debug('correlation matrix over %d variables (%s), min pair count %d',
                 p, missing, counts.min() if p else 0)
    return CorrelationMatrix(variables=data.variables, values=r, pair_counts=counts)


def _values(r):
    return np.array(getattr(r, 'values', r), dtype=float)


def bartlett_test(r, n):
    """Bartlett's sphericity test: H0 says the correlation matrix is the identity."""
    matrix = _values(r)
    p = matrix.shape[0]
    if p < 2:
        raise DomainError('sphericity test needs at least two variables', module='factor_analysis')
    if n <= p:
        raise DomainError('sphericity test needs n > p (n={}, p={})'.format(n, p), module='factor_analysis')
    try:
        cholesky = linalg.cholesky(matrix, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefiniteError()
    log_det = 2.0 * np.log(np.diag(cholesky)).sum()

    chi_square = max(0.0, -(n - 1 - (2 * p + 5) / 6.0) * log_det)
    df = p * (p - 1) // 2
    return BartlettResult(chi_square=float(chi_square), df=df, p_value=float(chi2.sf(chi_square, df)), n=int(n))


def partial_correlations(r):
    matrix = _values(r)
    if not np.linalg.cond(matrix) < CONDITION_LIMIT:
        raise SingularMatrixError()
    try:
        inverse = linalg.inv(matrix)
    except linalg.LinAlgError:
        raise SingularMatrixError()
    scale = np.sqrt(np.outer(np.diag(inverse), np.diag(inverse)))
    partial = -inverse / scale
    np.fill_diagonal(partial, 1.0)
    return partial


def kmo_statistic(r):
    """Kaiser-Meyer-Olkin sampling adequacy, overall and per variable."""
    matrix = _values(r)
    partial = partial_correlations(matrix)

    off_diagonal = ~np.eye(matrix.shape[0], dtype=bool)
    r2 = np.where(off_diagonal, matrix ** 2, 0.0)
    q2 = np.where(off_diagonal, partial ** 2, 0.0)

    total = r2.sum() + q2.sum()
    if total == 0:
        raise UndefinedStatisticError()

    column_r2, column_total = r2.sum(axis=0), r2.sum(axis=0) + q2.sum(axis=0)
    with np.errstate(invalid='ignore', divide='ignore'):
        msa = np.where(column_total > 0, column_r2 / column_total, np.nan)
    return KmoResult(overall=float(r2.sum() / total), msa=msa)

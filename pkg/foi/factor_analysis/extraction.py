import logging

import numpy as np
from scipy import linalg

from core.exceptions import DomainError, InsufficientPairsError, SingularMatrixError, ZeroVarianceError
from .statistics import _values
from .types import PrincipalComponents

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-10


def orient_columns(loadings, *others):
    """
    Flip every column whose largest-magnitude entry is negative. The same
    columns of ``others`` are flipped along with it.
    """
    loadings = np.array(loadings, dtype=float)
    others = [np.array(other, dtype=float) for other in others]
    for j in range(loadings.shape[1]):
        column = loadings[:, j]
        if column[np.argmax(np.abs(column))] < 0:
            loadings[:, j] = -column
            for other in others:
                other[:, j] = -other[:, j]
    if others:
        return (loadings,) + tuple(others)
    return loadings


def pca_extract(r, k):
    """Principal component extraction: loading = eigenvector * sqrt(eigenvalue)."""
    matrix = _values(r)
    p = matrix.shape[0]
    if not 1 <= k <= p:
        raise DomainError('cannot extract {} components from {} variables'.format(k, p), module='factor_analysis')

    eigenvalues, eigenvectors = linalg.eigh(matrix)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]

    # only ties touching the retained subspace make it ambiguous
    relevant = eigenvalues[:min(k + 1, p)]
    ties = bool(np.any(np.abs(np.diff(relevant)) <= TIE_TOLERANCE * max(1.0, abs(relevant[0]))))
    if ties:
        logger.warning('tied eigenvalues among the first %d components; loadings are not unique', k)

    loadings = eigenvectors[:, :k] * np.sqrt(np.maximum(eigenvalues[:k], 0.0))
    return PrincipalComponents(loadings=orient_columns(loadings), eigenvalues=eigenvalues, ties=ties)


def kaiser_count(eigenvalues):
    return int((np.asarray(eigenvalues, dtype=float) > 1.0).sum())


def variance_explained(loadings, p=None):
    loadings = np.asarray(loadings, dtype=float)
    if p is None:
        p = loadings.shape[0]
    return float((loadings ** 2).sum() / p)


def standardize(data):
    """z-scores over complete rows (ddof=1); incomplete rows stay NaN."""
    values = np.array(data.values)
    complete = data.complete_rows
    if complete.sum() < 2:
        raise InsufficientPairsError(data.variables[0], data.variables[-1], int(complete.sum()))
    rows = values[complete]
    means = rows.mean(axis=0)
    deviations = rows.std(axis=0, ddof=1)
    for variable, deviation in zip(data.variables, deviations):
        if deviation == 0:
            raise ZeroVarianceError(variable)
    z = np.full(values.shape, np.nan)
    z[complete] = (rows - means) / deviations
    return z


def factor_scores(data, r, loadings):
    """Regression (Thurstone) scores Z R^-1 L; rows with any MISSING get MISSING scores."""
    try:
        weights = linalg.solve(_values(r), np.asarray(loadings, dtype=float), assume_a='sym')
    except linalg.LinAlgError:
        raise SingularMatrixError()
    scores = np.full((data.values.shape[0], weights.shape[1]), np.nan)
    complete = data.complete_rows
    if complete.sum() < 2:
        logger.warning('only %d complete rows; every factor score is missing', int(complete.sum()))
        return scores
    z = standardize(data)
    scores[complete] = z[complete] @ weights
    return scores

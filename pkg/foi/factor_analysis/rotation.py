"""
Varimax rotation by pairwise planar sweeps.

Every pair of factors is rotated by the angle that maximises the varimax
criterion for that pair, which has a closed form. A sweep visits every pair
once; sweeps repeat until the relative criterion gain drops below ``tol``.
"""
import logging

import numpy as np
from django.conf import settings

from core.exceptions import DomainError
from .extraction import orient_columns
from .types import VarimaxResult

logger = logging.getLogger(__name__)


def varimax_criterion(loadings):
    """Sum over factors of the variance of squared loadings."""
    squared = np.asarray(loadings, dtype=float) ** 2
    return float(((squared ** 2).mean(axis=0) - squared.mean(axis=0) ** 2).sum())


def planar_angle(x, y):
    """Angle maximising the criterion of columns (x, y), rotated as (x cos + y sin, -x sin + y cos)."""
    p = len(x)
    u = x ** 2 - y ** 2
    v = 2 * x * y
    a, b = u.sum(), v.sum()
    c = (u ** 2 - v ** 2).sum()
    d = 2 * (u * v).sum()
    return np.arctan2(d - 2 * a * b / p, c - (a ** 2 - b ** 2) / p) / 4


def _rotate_pair(matrix, j, k, angle):
    cos, sin = np.cos(angle), np.sin(angle)
    x, y = matrix[:, j].copy(), matrix[:, k].copy()
    matrix[:, j] = x * cos + y * sin
    matrix[:, k] = -x * sin + y * cos


def _converged(previous, current, tol):
    gain = current - previous
    if previous == 0:
        return abs(gain) < tol
    return gain / abs(previous) < tol


def varimax_rotate(loadings, kaiser_normalize=True, tol=None, max_iter=None, variables=None):
    if tol is None:
        tol = settings.FOI['VARIMAX_TOL']
    if max_iter is None:
        max_iter = settings.FOI['VARIMAX_MAX_ITER']

    loadings = np.array(loadings, dtype=float)
    p, k = loadings.shape
    if variables is None:
        variables = ['v{}'.format(i + 1) for i in range(p)]

    if kaiser_normalize:
        norms = np.sqrt((loadings ** 2).sum(axis=1))
        for variable, norm in zip(variables, norms):
            if norm == 0:
                raise DomainError('variable "{}" has zero communality; cannot Kaiser-normalise'.format(variable),
                                  module='factor_analysis')
        working = loadings / norms[:, None]
    else:
        norms = np.ones(p)
        working = loadings.copy()

    rotation = np.eye(k)
    history = [varimax_criterion(working)]
    converged = k < 2
    sweeps = 0
    while not converged and sweeps < max_iter:
        for j in range(k - 1):
            for m in range(j + 1, k):
                angle = planar_angle(working[:, j], working[:, m])
                _rotate_pair(working, j, m, angle)
                _rotate_pair(rotation, j, m, angle)
        sweeps += 1
        history.append(varimax_criterion(working))
        converged = _converged(history[-2], history[-1], tol)

    if not converged:
        logger.warning('varimax did not converge after %d sweeps (criterion %.12g)', sweeps, history[-1])

    rotated = working * norms[:, None]
    rotated, rotation = orient_columns(rotated, rotation)
    return VarimaxResult(
        loadings=rotated,
        rotation=rotation,
        criterion=history[-1],
        history=history,
        sweeps=sweeps,
        converged=converged,
    )

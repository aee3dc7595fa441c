"""
Data with a known factor structure, and tools to compare recovered loadings against it.
"""
import numpy as np
from scipy.optimize import linear_sum_assignment

from core.exceptions import DomainError
from .types import VariableMatrix


def simple_structure_loadings(p, k, strength=0.8):
    """p x k block matrix: variable i loads only on factor i * k // p."""
    if not 1 <= k <= p:
        raise DomainError('need 1 <= k <= p (p={}, k={})'.format(p, k), module='factor_analysis')
    loadings = np.zeros((p, k))
    for i in range(p):
        loadings[i, i * k // p] = strength
    return loadings


def synthesize_known_factors(p, k, n, loadings=None, noise=0.3, seed=0, return_factors=False):
    """
    data = F L^T + noise * E with F (n x k) and E (n x p) standard normal.
    Same arguments, same seed -> identical matrix. With return_factors, (data, F).
    """
    if p < 1 or k < 1 or k > p or n < 2:
        raise DomainError('invalid dimensions p={}, k={}, n={}'.format(p, k, n), module='factor_analysis')
    if noise < 0:
        raise DomainError('noise must be non-negative', module='factor_analysis')
    if loadings is None:
        loadings = simple_structure_loadings(p, k)
    loadings = np.asarray(loadings, dtype=float)
    if loadings.shape != (p, k):
        raise DomainError('loadings shape {} is not ({}, {})'.format(loadings.shape, p, k), module='factor_analysis')

    rng = np.random.default_rng(seed)
    factors = rng.standard_normal((n, k))
    errors = rng.standard_normal((n, p))
    values = factors @ loadings.T + noise * errors
    data = VariableMatrix(
        countries=['obs{:04d}'.format(i + 1) for i in range(n)],
        variables=['x{:02d}'.format(j + 1) for j in range(p)],
        values=values,
    )
    if return_factors:
        return data, factors
    return data


def congruence(a, b):
    """Tucker's congruence coefficient between two loading columns."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denominator = np.sqrt(np.dot(a, a) * np.dot(b, b))
    if denominator == 0:
        raise DomainError('congruence of a zero column is undefined', module='factor_analysis')
    return float(np.dot(a, b) / denominator)


def match_factors(reference, estimated):
    """
    Pair every reference column with an estimated column, maximising total |congruence|.
    Returns (aligned estimated loadings, column order, congruences after sign alignment).
    """
    reference = np.asarray(reference, dtype=float)
    estimated = np.asarray(estimated, dtype=float)
    k = reference.shape[1]
    table = np.array([[congruence(reference[:, i], estimated[:, j]) for j in range(estimated.shape[1])]
                      for i in range(k)])
    rows, order = linear_sum_assignment(-np.abs(table))
    signs = np.sign(table[rows, order])
    signs[signs == 0] = 1.0
    aligned = estimated[:, order] * signs
    return aligned, order.tolist(), (np.abs(table[rows, order])).tolist()

"""Slow reference implementations used to validate the fast paths.

Everything here goes through dense textbook linear algebra (LAPACK least
squares on explicitly assembled matrices) and exhaustive enumeration.  None
of it shares code with the incremental rotation engine or the dynamic
program; that separation is the point.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .core import ModelParams, Partition, SolveResult, as_signal, difference_stencil

EXHAUSTIVE_MAX_N = 15


def _dense_system(m: int, k: int, beta: float):
    """Stacked spline system matrix for an interval of length m."""
    eye = np.eye(m)
    if m <= k:
        return eye
    sten = difference_stencil(k)
    rows = np.zeros((m - k, m))
    for i in range(m - k):
        rows[i, i:i + k + 1] = sten
    return np.vstack([eye, beta ** k * rows])


def _vandermonde(left: int, right: int, k: int) -> np.ndarray:
    """Columns 1, t, ..., t^(k-1) over local abscissas t = 1..m.

    The degree-(k-1) polynomial space is shift-invariant, so fitting over
    local abscissas gives the same error and fitted values as absolute ones
    while keeping the columns well conditioned on far-right intervals.
    """
    t = np.arange(1, right - left + 2, dtype=np.float64)
    return np.vander(t, k, increasing=True)


def eps_dense(f, left: int, right: int, k: int, beta: float) -> float:
    """Approximation error of f on [left, right] by a dense least-squares solve.

    Finite beta: residual of the stacked identity / scaled-difference system.
    beta = inf: residual of the best degree-(k-1) polynomial fit.
    Intervals of length <= k fit exactly (error 0).
    """
    f = as_signal(f)
    if not (1 <= left <= right <= f.size):
        raise ValueError("interval (%r, %r) out of bounds for n=%d" % (left, right, f.size))
    m = right - left + 1
    if m <= k:
        return 0.0
    fseg = f[left - 1:right]
    if math.isinf(beta):
        mat = _vandermonde(left, right, k)
        y = fseg
    else:
        mat = _dense_system(m, k, beta)
        y = np.concatenate([fseg, np.zeros(m - k)])
    sol = np.linalg.lstsq(mat, y, rcond=None)[0]
    r = mat @ sol - y
    return float(r @ r)


def _dense_fit(f, left: int, right: int, k: int, beta: float) -> np.ndarray:
    """Restricted minimizer on one interval, dense route."""
    fseg = f[left - 1:right]
    m = right - left + 1
    if m <= k:
        return fseg.copy()
    if math.isinf(beta):
        mat = _vandermonde(left, right, k)
        coef = np.linalg.lstsq(mat, fseg, rcond=None)[0]
        return mat @ coef
    mat = _dense_system(m, k, beta)
    y = np.concatenate([fseg, np.zeros(m - k)])
    sol = np.linalg.lstsq(mat, y, rcond=None)[0]
    return sol


def all_interval_errors(f, k: int, beta: float) -> np.ndarray:
    """Dense errors for every interval; entry [l-1, r-1] holds E[l:r]."""
    f = as_signal(f)
    n = f.size
    out = np.zeros((n, n))
    for left in range(1, n + 1):
        for right in range(left, n + 1):
            out[left - 1, right - 1] = eps_dense(f, left, right, k, beta)
    return out


def solve_exhaustive(f, params: ModelParams) -> SolveResult:
    """Globally optimal segmentation by enumerating all 2^(n-1) partitions.

    Guarded to n <= 15.  Among equal-energy optima the lexicographically
    smallest tuple of segment start indices wins.
    """
    f = as_signal(f)
    n = f.size
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError("exhaustive search is limited to n <= %d, got n=%d"
                         % (EXHAUSTIVE_MAX_N, n))
    err = all_interval_errors(f, params.k, params.beta)
    best_energy = math.inf
    best_lefts = None
    for cuts in itertools.chain.from_iterable(
            itertools.combinations(range(2, n + 1), c) for c in range(n)):
        lefts = (1,) + cuts
        rights = tuple(l - 1 for l in lefts[1:]) + (n,)
        energy = params.gamma * len(lefts)
        for l, r in zip(lefts, rights):
            energy += err[l - 1, r - 1]
        if energy < best_energy or (energy == best_energy and lefts < best_lefts):
            best_energy = energy
            best_lefts = lefts
    part = Partition.from_boundaries(list(best_lefts), n)
    estimate = np.empty(n)
    for seg in part:
        estimate[seg.slice] = _dense_fit(f, seg.left, seg.right, params.k, params.beta)
    return SolveResult(partition=part, estimate=estimate,
                       energy=best_energy, num_error_updates=0)


def _det_expand(mat) -> float:
    """Determinant as the fully expanded signed permutation sum.

    This is the shape a computer-algebra system produces when a determinant
    expression is expanded into a polynomial in the matrix entries, so it
    carries the full cancellation of that closed form (no factored
    elimination).  Sizes here are at most 5 x 5.
    """
    m = len(mat)
    total = 0.0
    for perm in itertools.permutations(range(m)):
        inversions = sum(1 for a in range(m) for b in range(a + 1, m)
                         if perm[a] > perm[b])
        prod = 1.0
        for i in range(m):
            prod *= mat[i][perm[i]]
        total += -prod if inversions % 2 else prod
    return total


def eps_moments(f, left: int, right: int, k: int) -> float:
    """Polynomial-fit error from cumulative moment sums (absolute abscissas).

    Solves the k x k normal equations assembled from running sums of n^j and
    n^j * f_n, using the closed-form Cramer expressions (cofactor
    determinants) that solving the system symbolically produces.  Kept at
    plain float64 on purpose: for k >= 3 the ill-conditioning of the absolute-
    abscissa Gram matrix visibly corrupts the result, which is the behaviour
    this function exists to demonstrate.  Not a ground-truth oracle.  Returns
    nan when the normal matrix is singular.
    """
    f = as_signal(f)
    if not 1 <= k <= 4:
        raise ValueError("moment route supports k in 1..4, got %r" % (k,))
    if not (1 <= left <= right <= f.size):
        raise ValueError("interval (%r, %r) out of bounds for n=%d" % (left, right, f.size))
    m = right - left + 1
    if m <= k:
        return 0.0
    n = np.arange(1, f.size + 1, dtype=np.float64)
    pow_sums = [np.concatenate([[0.0], np.cumsum(n ** j)]) for j in range(2 * k - 1)]
    fmom_sums = [np.concatenate([[0.0], np.cumsum(n ** j * f)]) for j in range(k)]
    ff_sum = np.concatenate([[0.0], np.cumsum(f * f)])

    gram = [[float(pow_sums[a + b][right] - pow_sums[a + b][left - 1])
             for b in range(k)] for a in range(k)]
    rhs = [float(fmom_sums[a][right] - fmom_sums[a][left - 1]) for a in range(k)]
    sff = float(ff_sum[right] - ff_sum[left - 1])
    det_g = _det_expand(gram)
    if det_g == 0.0 or not np.isfinite(det_g):
        return float("nan")
    # closed form for the minimal residual: bordered-determinant ratio
    # (the Schur complement of the Gram block), i.e. the rational expression
    # in the moments that solving the normal equations symbolically yields
    bordered = [gram[a] + [rhs[a]] for a in range(k)]
    bordered.append(rhs + [sff])
    return float(_det_expand(bordered) / det_g)

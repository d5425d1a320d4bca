"""Per-segment restricted minimizers for a given partition.

Finite beta: the discrete smoothing spline, solved by a banded QR pass over
the stacked identity / scaled-difference system followed by back-substitution
(the error engine discards the solved entries it no longer needs, so
reconstruction redoes the pass keeping the band; one segment costs O(k^2 m)).
beta = inf: the least-squares polynomial of degree k-1 in local coordinates.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular

from .core import MAX_ORDER, ModelParams, Partition, as_signal
from .errors import _spline_data_qr


def _check_k(k: int):
    if not isinstance(k, int) or not 1 <= k <= MAX_ORDER:
        raise ValueError("order k must be an integer in 1..%d, got %r" % (MAX_ORDER, k))


def fit_segment_spline(f_seg, k: int, beta: float) -> np.ndarray:
    """Minimizer of ||v - f||^2 + beta^(2k) ||k-th difference of v||^2.

    Segments of length <= k are returned unchanged (no difference rows
    exist, the data term alone is minimized by v = f).
    """
    _check_k(k)
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError("beta must be positive and finite, got %r" % (beta,))
    fseg = as_signal(f_seg)
    m = fseg.size
    if m <= k:
        return fseg.copy()
    band, q, _ = _spline_data_qr(fseg, k, beta)
    v = np.empty(m)
    for i in range(m - 1, -1, -1):
        acc = q[i]
        top = min(k, m - 1 - i)
        for t in range(1, top + 1):
            acc -= band[i, t] * v[i + t]
        v[i] = acc / band[i, 0]
    return v


def fit_segment_poly(f_seg, k: int) -> np.ndarray:
    """Least-squares polynomial of degree k-1 evaluated on the segment.

    Fitted over local abscissas 1..m via QR; with m <= k the polynomial
    interpolates, so the data comes back unchanged.
    """
    _check_k(k)
    fseg = as_signal(f_seg)
    m = fseg.size
    if m <= k:
        return fseg.copy()
    x = np.arange(1, m + 1, dtype=np.float64)
    vmat = np.vander(x, k, increasing=True)
    q, r = np.linalg.qr(vmat)
    coef = solve_triangular(r, q.T @ fseg)
    return vmat @ coef


def reconstruct(f, part: Partition, params: ModelParams) -> np.ndarray:
    """Concatenated per-segment fits for the whole signal."""
    f = as_signal(f)
    if part.n != f.size:
        raise ValueError("partition covers 1..%d but the signal has %d samples"
                         % (part.n, f.size))
    out = np.empty(f.size)
    for seg in part:
        fseg = f[seg.slice]
        if params.is_polynomial:
            out[seg.slice] = fit_segment_poly(fseg, params.k)
        else:
            out[seg.slice] = fit_segment_spline(fseg, params.k, params.beta)
    return out

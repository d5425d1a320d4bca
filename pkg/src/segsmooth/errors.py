"""Incremental interval approximation errors via Givens rotations.

For an interval of data the approximation error is the residual of either

* a discrete smoothing-spline fit (finite beta): least squares against the
  identity stacked on beta^k times the k-th difference operator, or
* a polynomial fit of degree k-1 (beta = inf).

Extending an interval by one sample updates the error in O(k) by applying a
short, data-independent chain of plane rotations to a small window of live
entries of the orthogonally transformed right-hand side.  The rotation
coefficients depend only on the interval length, never on its position, so a
single table serves every interval of a signal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MAX_ORDER, difference_stencil

SPLINE = "spline"
POLY = "poly"


def _givens(b: float, a: float):
    """Rotation (c, s) zeroing a against pivot b.

    c = b/rho, s = a/rho with rho = sign(b) * hypot(a, b); sign(0) is taken
    as +1, and a zero pair yields the identity rotation.
    """
    if a == 0.0 and b == 0.0:
        return 1.0, 0.0
    rho = math.hypot(a, b)
    if b < 0.0:
        rho = -rho
    return b / rho, a / rho


@dataclass
class RotationTable:
    """Precomputed rotation coefficients for one (mode, k, beta, max_length).

    cos_rows/sin_rows hold one row per extension step, indexed by
    new_length - 2 for new_length = 2..max_length.  Row width is k+1 in
    spline mode (the last pair acts on the incoming sample) and k in
    polynomial mode.  Rows for new_length <= k are the warm-up block:
    identity rotations in spline mode, partial-elimination rotations padded
    with a swap and identities in polynomial mode.  The rows from
    new_length = k+1 on are the main block (property `step_cos`/`step_sin`).
    """

    mode: str
    k: int
    beta: float | None
    max_length: int
    cos_rows: np.ndarray
    sin_rows: np.ndarray

    @property
    def step_cos(self) -> np.ndarray:
        return self.cos_rows[self.k - 1:]

    @property
    def step_sin(self) -> np.ndarray:
        return self.sin_rows[self.k - 1:]

    @property
    def warmup_cos(self) -> np.ndarray:
        return self.cos_rows[: self.k - 1]

    @property
    def warmup_sin(self) -> np.ndarray:
        return self.sin_rows[: self.k - 1]


def _check_args(k: int, max_length: int):
    if not isinstance(k, int) or not 1 <= k <= MAX_ORDER:
        raise ValueError("order k must be an integer in 1..%d, got %r" % (MAX_ORDER, k))
    if not isinstance(max_length, int) or max_length < 1:
        raise ValueError("max_length must be a positive integer, got %r" % (max_length,))


def precompute_spline(k: int, beta: float, max_length: int) -> RotationTable:
    """Rotation table for the smoothing-spline error recurrence.

    Runs the structural QR of the stacked system for lengths 2..max_length,
    eliminating each appended (scaled) difference row against the band of the
    running triangular factor; the k+1 rotations of each step end at the
    fresh identity row of the newest sample.  O(k^2 max_length) time, no data
    involved.
    """
    _check_args(k, max_length)
    if not (beta > 0 and math.isfinite(beta)):
        raise ValueError("beta must be positive and finite for the spline table, got %r" % (beta,))
    width = k + 1
    nrows = max_length - 1
    cos_rows = np.ones((nrows, width))
    sin_rows = np.zeros((nrows, width))
    band = np.zeros((max_length, width))
    band[0, 0] = 1.0
    scaled = difference_stencil(k) * beta ** k
    d = np.empty(width)
    for newlen in range(2, max_length + 1):
        band[newlen - 1, 0] = 1.0
        if newlen <= k:
            continue  # no difference row yet; identity rotations stay in place
        row = newlen - 2
        d[:] = scaled
        base = newlen - 1 - k  # 0-based column (and pivot row) of the leading entry
        for idx in range(width):
            j0 = base + idx
            c, s = _givens(band[j0, 0], d[idx])
            cos_rows[row, idx] = c
            sin_rows[row, idx] = s
            for t in range(newlen - j0):
                rj = band[j0, t]
                dt = d[idx + t]
                band[j0, t] = c * rj + s * dt
                d[idx + t] = c * dt - s * rj
            d[idx] = 0.0
    return RotationTable(SPLINE, k, float(beta), max_length, cos_rows, sin_rows)


def precompute_poly(k: int, max_length: int) -> RotationTable:
    """Rotation table for the degree-(k-1) polynomial error recurrence.

    Maintains the k x k triangular factor of the Vandermonde matrix in local
    coordinates (abscissas 1, 2, ...), eliminating each new row with k
    rotations.  While fewer than k rows exist the trailing pairs of a row are
    a swap (0, 1) placing the remainder on the next pivot followed by
    identities, which keeps every step exactly k pairs wide.
    """
    _check_args(k, max_length)
    width = k
    nrows = max_length - 1
    cos_rows = np.ones((nrows, width))
    sin_rows = np.zeros((nrows, width))
    r_fac = np.zeros((k, k))
    r_fac[0, :] = 1.0  # Vandermonde row at abscissa 1
    v = np.empty(k)
    for newlen in range(2, max_length + 1):
        row = newlen - 2
        x = float(newlen)
        p = 1.0
        for j in range(k):
            v[j] = p
            p *= x
        filled = min(newlen - 1, k)
        for j in range(filled):
            c, s = _givens(r_fac[j, j], v[j])
            cos_rows[row, j] = c
            sin_rows[row, j] = s
            for t in range(j, k):
                rj = r_fac[j, t]
                vt = v[t]
                r_fac[j, t] = c * rj + s * vt
                v[t] = c * vt - s * rj
            v[j] = 0.0
        if filled < k:
            # remainder becomes the new pivot row; on the data side this is
            # the swap pair (c, s) = (0, 1) acting on a zero window slot
            cos_rows[row, filled] = 0.0
            sin_rows[row, filled] = 1.0
            r_fac[filled, :] = v
    return RotationTable(POLY, k, None, max_length, cos_rows, sin_rows)


@dataclass(eq=False)
class ErrorState:
    """Running approximation error of the interval [left, right].

    eps is exact-arithmetic-equal to the squared residual of the model fit on
    the interval; it is zero while the interval holds at most k samples.
    window carries the k live entries of the transformed right-hand side
    (spline: the last k, left-padded with zeros during warm-up; poly: the
    first k, right-padded).
    """

    left: int
    right: int
    eps: float
    window: np.ndarray


def init_state(left: int, first_sample: float, table: RotationTable) -> ErrorState:
    """Length-one interval [left, left] seeded with its sample."""
    if not isinstance(left, int) or left < 1:
        raise ValueError("left index must be a positive integer, got %r" % (left,))
    w = np.zeros(table.k)
    if table.mode == POLY:
        w[0] = first_sample
    else:
        w[table.k - 1] = first_sample
    return ErrorState(left=left, right=left, eps=0.0, window=w)


def extend(state: ErrorState, next_sample: float, table: RotationTable) -> ErrorState:
    """Error state of [left, right+1] given the sample at right+1.

    O(k) per call; raises when the new interval length exceeds the table.
    """
    newlen = state.right - state.left + 2
    if newlen > table.max_length:
        raise ValueError(
            "rotation table exhausted: interval length %d exceeds max_length %d"
            % (newlen, table.max_length)
        )
    k = table.k
    row = newlen - 2
    cr = table.cos_rows[row]
    sr = table.sin_rows[row]
    w = state.window.copy()
    x = float(next_sample)
    if table.mode == POLY:
        t = x
        for j in range(k):
            wj = w[j]
            w[j] = cr[j] * wj + sr[j] * t
            t = cr[j] * t - sr[j] * wj
    else:
        t = 0.0
        for j in range(k):
            wj = w[j]
            w[j] = cr[j] * wj + sr[j] * t
            t = cr[j] * t - sr[j] * wj
        xo = x
        x = cr[k] * xo + sr[k] * t
        t = cr[k] * t - sr[k] * xo
        w[:-1] = w[1:]
        w[-1] = x
    return ErrorState(left=state.left, right=state.right + 1,
                      eps=state.eps + t * t, window=w)


def prefix_errors(f: np.ndarray, table: RotationTable) -> np.ndarray:
    """All errors E[1:r] for r = 1..len(f) in one sweep (testing/diagnostics)."""
    n = len(f)
    out = np.zeros(n)
    st = init_state(1, f[0], table)
    for r in range(2, n + 1):
        st = extend(st, f[r - 1], table)
        out[r - 1] = st.eps
    return out


def _spline_data_qr(fseg: np.ndarray, k: int, beta: float):
    """Banded QR of the stacked spline system carrying the data through.

    Returns (band, q, eps): the k+1-wide band of the triangular factor at
    full length, the solved part of the transformed right-hand side, and the
    accumulated squared residual.  Used for reconstruction, which needs the
    whole solved block rather than the engine's k-entry window.
    """
    m = len(fseg)
    width = k + 1
    band = np.zeros((m, width))
    q = np.zeros(m)
    band[0, 0] = 1.0
    q[0] = fseg[0]
    eps = 0.0
    scaled = difference_stencil(k) * beta ** k
    d = np.empty(width)
    for newlen in range(2, m + 1):
        band[newlen - 1, 0] = 1.0
        q[newlen - 1] = fseg[newlen - 1]
        if newlen <= k:
            continue
        d[:] = scaled
        t = 0.0
        base = newlen - 1 - k
        for idx in range(width):
            j0 = base + idx
            c, s = _givens(band[j0, 0], d[idx])
            for tt in range(newlen - j0):
                rj = band[j0, tt]
                dt = d[idx + tt]
                band[j0, tt] = c * rj + s * dt
                d[idx + tt] = c * dt - s * rj
            d[idx] = 0.0
            qj = q[j0]
            q[j0] = c * qj + s * t
            t = c * t - s * qj
        eps += t * t
    return band, q, eps

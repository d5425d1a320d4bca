"""Exact segmentation by dynamic programming over prefixes.

The optimal prefix energies satisfy the Bellman recursion

    P[r] = min over l of  E[l:r] + gamma + P[l-1],      P[0] = 0,

where E[l:r] is the interval approximation error.  Each error is maintained
incrementally (one O(k) rotation chain per extension), and two sound pruning
rules cut the candidate set:

* bound rule: candidates are visited newest-first; once the current best
  P[r] drops below E[l:r] + gamma, no older candidate can win at this r,
  because shrinking an interval never increases its error;
* dominance rule: while a candidate catches its frontier up to r, it is
  dropped for good as soon as P[l-1] + E[l:s] >= P[s] at some s, because
  errors are superadditive so the candidate can never beat the best split
  at s afterwards.

Neither rule changes the optimal energy, only the work done.  The forward
pass is jitted; the helpers mirror the public engine update exactly so both
produce identical floating-point error streams.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from numba import njit

from .core import ModelParams, Partition, SolveResult, as_signal
from .errors import POLY, RotationTable, precompute_poly, precompute_spline
from .reconstruct import reconstruct

PRUNING_MODES = ("both", "amp_only", "kf_only", "none")


@njit(cache=True, inline="always")
def _step_spline(w_rows, slot, x, row, cos_rows, sin_rows, k):
    t = 0.0
    for j in range(k):
        c = cos_rows[row, j]
        s = sin_rows[row, j]
        wj = w_rows[slot, j]
        w_rows[slot, j] = c * wj + s * t
        t = c * t - s * wj
    c = cos_rows[row, k]
    s = sin_rows[row, k]
    xo = x
    x = c * xo + s * t
    t = c * t - s * xo
    for j in range(k - 1):
        w_rows[slot, j] = w_rows[slot, j + 1]
    w_rows[slot, k - 1] = x
    return t * t


@njit(cache=True, inline="always")
def _step_poly(w_rows, slot, x, row, cos_rows, sin_rows, k):
    t = x
    for j in range(k):
        c = cos_rows[row, j]
        s = sin_rows[row, j]
        wj = w_rows[slot, j]
        w_rows[slot, j] = c * wj + s * t
        t = c * t - s * wj
    return t * t


@njit(cache=True)
def _forward(f, cos_rows, sin_rows, k, gamma, is_poly, use_bound, use_prune):
    n = f.shape[0]
    best = np.empty(n + 1)
    best[0] = 0.0
    jumps = np.zeros(n, dtype=np.int64)
    # candidate slot = left index; slot 1 is the whole-prefix interval [1, r]
    w_rows = np.zeros((n + 2, k))
    fronts = np.zeros(n + 2, dtype=np.int64)
    eps = np.zeros(n + 2)
    nxt = np.full(n + 2, -1, dtype=np.int64)
    updates = 0

    if is_poly:
        w_rows[1, 0] = f[0]
    else:
        w_rows[1, k - 1] = f[0]
    fronts[1] = 1
    best[1] = gamma
    head = -1
    if n >= 2:
        if is_poly:
            w_rows[2, 0] = f[1]
        else:
            w_rows[2, k - 1] = f[1]
        fronts[2] = 2
        head = 2

    for r in range(2, n + 1):
        if is_poly:
            de = _step_poly(w_rows, 1, f[r - 1], r - 2, cos_rows, sin_rows, k)
        else:
            de = _step_spline(w_rows, 1, f[r - 1], r - 2, cos_rows, sin_rows, k)
        eps[1] += de
        fronts[1] = r
        updates += 1
        best[r] = eps[1] + gamma
        jr = 0

        i = head
        prev = -1
        while i != -1:
            nx = nxt[i]
            removed = False
            while fronts[i] < r:
                row = fronts[i] - i  # new length minus 2
                if is_poly:
                    de = _step_poly(w_rows, i, f[fronts[i]], row, cos_rows, sin_rows, k)
                else:
                    de = _step_spline(w_rows, i, f[fronts[i]], row, cos_rows, sin_rows, k)
                eps[i] += de
                fronts[i] += 1
                updates += 1
                if use_prune and best[i - 1] + eps[i] >= best[fronts[i]]:
                    if prev == -1:
                        head = nx
                    else:
                        nxt[prev] = nx
                    removed = True
                    break
            if removed:
                i = nx
                continue
            b = best[i - 1] + gamma + eps[i]
            if b <= best[r]:
                best[r] = b
                jr = i - 1
            if use_bound and eps[i] + gamma > best[r]:
                break
            prev = i
            i = nx
        jumps[r - 1] = jr

        if r < n:
            sl = r + 1
            if is_poly:
                w_rows[sl, 0] = f[r]
            else:
                w_rows[sl, k - 1] = f[r]
            fronts[sl] = sl
            eps[sl] = 0.0
            nxt[sl] = head
            head = sl
    return best, jumps, updates


def backtrack(jumps: Sequence[int]) -> Partition:
    """Partition from the per-prefix optimal segment starts (minus one).

    jumps[r-1] holds l*-1 for the optimal last segment [l*, r] of prefix r.
    """
    n = len(jumps)
    if n < 1:
        raise ValueError("jumps must be non-empty")
    segs = []
    r = n
    while r > 0:
        j = int(jumps[r - 1])
        if not 0 <= j < r:
            raise ValueError("malformed jump sequence: jumps[%d] = %d" % (r - 1, j))
        segs.append((j + 1, r))
        r = j
    segs.reverse()
    return Partition(segs)


def solve(f, params: ModelParams, pruning: str = "both",
          table: RotationTable | None = None) -> SolveResult:
    """Globally optimal partition and estimate for one signal.

    pruning selects which of the two candidate-skipping rules run ("both",
    "amp_only", "kf_only", "none"); the energy is the same in every mode.
    A prebuilt RotationTable for the same (k, beta) and max_length >= n may
    be passed to amortize precomputation across solves.
    """
    f = as_signal(f)
    if pruning not in PRUNING_MODES:
        raise ValueError("pruning must be one of %s, got %r" % (PRUNING_MODES, pruning))
    n = f.size
    if table is None:
        if params.is_polynomial:
            table = precompute_poly(params.k, n)
        else:
            table = precompute_spline(params.k, params.beta, n)
    else:
        want = POLY if params.is_polynomial else "spline"
        if table.mode != want or table.k != params.k:
            raise ValueError("rotation table was built for mode=%s k=%d, need mode=%s k=%d"
                             % (table.mode, table.k, want, params.k))
        if not params.is_polynomial and table.beta != params.beta:
            raise ValueError("rotation table beta %r does not match params beta %r"
                             % (table.beta, params.beta))
        if table.max_length < n:
            raise ValueError("rotation table covers lengths up to %d, signal has %d samples"
                             % (table.max_length, n))
    use_bound = pruning in ("both", "amp_only")
    use_prune = pruning in ("both", "kf_only")
    best, jumps, updates = _forward(
        f,
        np.ascontiguousarray(table.cos_rows),
        np.ascontiguousarray(table.sin_rows),
        params.k, params.gamma, params.is_polynomial, use_bound, use_prune,
    )
    part = backtrack(jumps)
    estimate = reconstruct(f, part, params)
    return SolveResult(partition=part, estimate=estimate,
                       energy=float(best[n]), num_error_updates=int(updates))

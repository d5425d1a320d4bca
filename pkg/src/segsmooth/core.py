"""Shared types and the discrete objective.

Indices facing the user are 1-based and inclusive on both ends, matching the
usual mathematical notation for discrete intervals.  Everything that touches a
numpy array converts at the boundary; helpers here are the only place the
conversion logic lives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

# Smoothness orders beyond this are numerically pointless (the difference
# stencil weights reach ~10^4 and interval errors underflow the noise floor
# long before) and the Vandermonde systems degrade, so we refuse them early.
MAX_ORDER = 16


def as_signal(values) -> np.ndarray:
    """Validate and return a 1-D float64 signal array.

    Accepts any array-like of finite numbers with at least one sample.
    """
    f = np.asarray(values, dtype=np.float64)
    if f.ndim != 1:
        raise ValueError("signal must be one-dimensional, got shape %s" % (f.shape,))
    if f.size < 1:
        raise ValueError("signal must contain at least one sample")
    if not np.all(np.isfinite(f)):
        bad = int(np.flatnonzero(~np.isfinite(f))[0])
        raise ValueError("signal contains a non-finite value at position %d" % (bad + 1))
    return f


def difference_stencil(k: int) -> np.ndarray:
    """Row pattern of the k-th order forward difference operator.

    Built by convolving (-1, 1) with itself k times in exact integer
    arithmetic, e.g. k=1 -> (-1, 1), k=2 -> (1, -2, 1), k=3 -> (-1, 3, -3, 1).
    """
    if not 1 <= k <= MAX_ORDER:
        raise ValueError("order k must be in 1..%d, got %r" % (MAX_ORDER, k))
    coeffs = [1]
    for _ in range(k):
        prev = [0] + coeffs
        shifted = coeffs + [0]
        coeffs = [a - b for a, b in zip(prev, shifted)]
    return np.array(coeffs, dtype=np.float64)


def kth_difference(values, k: int) -> np.ndarray:
    """Apply the k-th order forward difference to a vector.

    Returns a vector shorter by k entries; errors out when the input has
    length <= k (the interval is too short for order k).
    """
    v = as_signal(values)
    if v.size <= k:
        raise ValueError(
            "interval of length %d is too short for difference order %d" % (v.size, k)
        )
    s = difference_stencil(k)
    # correlation: out[i] = sum_j s[j] * v[i+j]
    return np.convolve(v, s[::-1], mode="valid")


@dataclass(frozen=True)
class Segment:
    """Discrete interval [left, right], 1-based and inclusive."""

    left: int
    right: int

    def __post_init__(self):
        if not (1 <= self.left <= self.right):
            raise ValueError("invalid segment (%r, %r)" % (self.left, self.right))

    def __len__(self) -> int:
        return self.right - self.left + 1

    @property
    def slice(self) -> slice:
        """0-based numpy slice selecting this segment."""
        return slice(self.left - 1, self.right)


class Partition:
    """Ordered list of contiguous segments covering 1..n without gaps."""

    def __init__(self, segments: Sequence[Tuple[int, int]]):
        segs = [s if isinstance(s, Segment) else Segment(*s) for s in segments]
        if not segs:
            raise ValueError("partition must contain at least one segment")
        if segs[0].left != 1:
            raise ValueError("partition must start at index 1")
        for a, b in zip(segs, segs[1:]):
            if b.left != a.right + 1:
                raise ValueError(
                    "segments (%d,%d) and (%d,%d) are not contiguous"
                    % (a.left, a.right, b.left, b.right)
                )
        self.segments: List[Segment] = segs

    @property
    def n(self) -> int:
        return self.segments[-1].right

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, i):
        return self.segments[i]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.segments == other.segments

    def __repr__(self):
        return "Partition(%s)" % [(s.left, s.right) for s in self.segments]

    def labels(self) -> np.ndarray:
        """Per-sample segment number, 0-based, length n."""
        out = np.empty(self.n, dtype=np.int64)
        for i, s in enumerate(self.segments):
            out[s.slice] = i
        return out

    @staticmethod
    def from_boundaries(lefts: Sequence[int], n: int) -> "Partition":
        """Build from sorted segment start indices; lefts[0] must be 1."""
        lefts = list(lefts)
        rights = [l - 1 for l in lefts[1:]] + [n]
        return Partition(list(zip(lefts, rights)))

    @staticmethod
    def single(n: int) -> "Partition":
        return Partition([(1, n)])


@dataclass(frozen=True)
class ModelParams:
    """Model orders and weights: smoothness order k, elasticity beta, jump penalty gamma.

    beta = math.inf selects the piecewise-polynomial (hard) model of degree
    k-1; any finite positive beta selects the segmented spline model.
    """

    k: int
    beta: float
    gamma: float

    def __post_init__(self):
        if not isinstance(self.k, int) or not 1 <= self.k <= MAX_ORDER:
            raise ValueError("k must be an integer in 1..%d, got %r" % (MAX_ORDER, self.k))
        if not (self.beta > 0):
            raise ValueError("beta must be positive (math.inf allowed), got %r" % (self.beta,))
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError("gamma must be positive and finite, got %r" % (self.gamma,))

    @property
    def is_polynomial(self) -> bool:
        return math.isinf(self.beta)


@dataclass
class SolveResult:
    """Output of the segmentation solver.

    energy is the objective value of (partition, estimate);
    num_error_updates counts incremental error-update steps the solver
    performed (one per single-sample extension of any interval error).
    """

    partition: Partition
    estimate: np.ndarray
    energy: float
    num_error_updates: int


def functional_value(f, u, partition: Partition, params: ModelParams) -> float:
    """Objective value of a candidate estimate u on a given partition.

    Data term plus beta^{2k} times the summed squared k-th differences of u
    inside each segment (segments of length <= k contribute nothing), plus
    gamma times the number of segments.  With beta = inf the smoothness term
    is skipped entirely; the caller guarantees u is piecewise polynomial of
    degree < k on the partition.
    """
    f = as_signal(f)
    u = as_signal(u)
    if f.size != u.size:
        raise ValueError("signal and estimate lengths differ: %d vs %d" % (f.size, u.size))
    if partition.n != f.size:
        raise ValueError("partition covers 1..%d but the signal has %d samples"
                         % (partition.n, f.size))
    value = float(np.sum((u - f) ** 2)) + params.gamma * len(partition)
    if not params.is_polynomial:
        w = params.beta ** (2 * params.k)
        for seg in partition:
            if len(seg) > params.k:
                d = kth_difference(u[seg.slice], params.k)
                value += w * float(np.sum(d * d))
    return value

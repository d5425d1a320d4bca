"""Quality measures for estimates and segmentations."""
from __future__ import annotations

import numpy as np

from .core import Partition, as_signal


def rel_l2_error(estimate, truth) -> float:
    """Relative l2 distance ||u - g|| / ||g||; truth must be nonzero."""
    u = as_signal(estimate)
    g = as_signal(truth)
    if u.size != g.size:
        raise ValueError("lengths differ: %d vs %d" % (u.size, g.size))
    denom = float(np.linalg.norm(g))
    if denom == 0.0:
        raise ValueError("ground truth is identically zero")
    return float(np.linalg.norm(u - g)) / denom


def rand_index(a: Partition, b: Partition) -> float:
    """Pairwise-agreement score between two partitions of the same domain.

    Fraction of sample pairs on which the partitions agree (both place the
    pair in one segment, or both separate it), out of all n*(n-1)/2 pairs.
    Computed from segment-overlap counts in O(|a| * |b| + n); 1.0 exactly
    when the partitions are identical.
    """
    if a.n != b.n:
        raise ValueError("partitions cover different domains: %d vs %d" % (a.n, b.n))
    n = a.n
    if n < 2:
        raise ValueError("rand index needs at least 2 samples")

    def pairs(m: int) -> float:
        return m * (m - 1) / 2.0

    within_a = sum(pairs(len(s)) for s in a)
    within_b = sum(pairs(len(s)) for s in b)
    within_both = 0.0
    for sa in a:
        for sb in b:
            lo = max(sa.left, sb.left)
            hi = min(sa.right, sb.right)
            if hi >= lo:
                within_both += pairs(hi - lo + 1)
    total = pairs(n)
    agree = total - within_a - within_b + 2.0 * within_both
    return agree / total

"""Test-signal generation and reproducible noise.

The named signals are sampled at t_i = i/n, i = 1..n.  Step discontinuities
are right-continuous (a sample landing exactly on a breakpoint takes the
right-hand value), so the sampled ground-truth segmentation is exact.

heavysine and blocks follow the classical Donoho-Johnstone definitions:

    heavysine(t) = 4 sin(4 pi t) - sign(t - 0.3) - sign(0.72 - t)
    blocks(t)    = sum_j h_j K(t - t_j),  K(t) = indicator(t >= 0)

with the standard blocks breakpoints/heights listed below.  pw_smooth is a
stand-in composition (quadratic, sinusoid, constant, quadratic with three
jumps), not a reproduction of any published figure.
"""
from __future__ import annotations

import numpy as np

from .core import Partition, as_signal

KINDS = ("heavysine", "blocks", "pw_smooth")

_BLOCKS_POS = np.array([0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCKS_HGT = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2])

_PW_SMOOTH_BREAKS = (0.25, 0.6, 0.82)


def _grid(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=np.float64) / n


def _heavysine(t: np.ndarray) -> np.ndarray:
    g = 4.0 * np.sin(4.0 * np.pi * t)
    g -= np.where(t >= 0.3, 1.0, -1.0)     # sign(t - 0.3), right-continuous
    g -= np.where(t < 0.72, 1.0, -1.0)     # sign(0.72 - t), right-continuous
    return g


def _blocks(t: np.ndarray) -> np.ndarray:
    g = np.zeros_like(t)
    for pos, hgt in zip(_BLOCKS_POS, _BLOCKS_HGT):
        g += hgt * (t >= pos)
    return g


def _pw_smooth(t: np.ndarray) -> np.ndarray:
    b1, b2, b3 = _PW_SMOOTH_BREAKS
    g = np.empty_like(t)
    m = t < b1
    g[m] = 2.0 - 24.0 * (t[m] - 0.1) ** 2
    m = (t >= b1) & (t < b2)
    g[m] = np.sin(6.0 * np.pi * (t[m] - b1)) - 1.0
    m = (t >= b2) & (t < b3)
    g[m] = 1.5
    m = t >= b3
    g[m] = 10.0 * (t[m] - 0.95) ** 2 - 0.5
    return g


_GENERATORS = {"heavysine": _heavysine, "blocks": _blocks, "pw_smooth": _pw_smooth}

_BREAKPOINTS = {
    "heavysine": (0.3, 0.72),
    "blocks": tuple(_BLOCKS_POS),
    "pw_smooth": _PW_SMOOTH_BREAKS,
}


def generate(kind: str, n: int) -> np.ndarray:
    """n equidistant samples of a named test signal on (0, 1]."""
    if kind not in _GENERATORS:
        raise ValueError("unknown signal kind %r; choose from %s" % (kind, KINDS))
    if not isinstance(n, int) or n < 2:
        raise ValueError("n must be an integer >= 2, got %r" % (n,))
    return _GENERATORS[kind](_grid(n))


def true_partition(kind: str, n: int) -> Partition:
    """Ground-truth segmentation of generate(kind, n).

    Segment starts are the first sample indices at or past each breakpoint;
    breakpoints that fall outside the sampled range (or collide at small n)
    are merged away.
    """
    if kind not in _BREAKPOINTS:
        raise ValueError("unknown signal kind %r; choose from %s" % (kind, KINDS))
    if not isinstance(n, int) or n < 2:
        raise ValueError("n must be an integer >= 2, got %r" % (n,))
    lefts = [1]
    for b in _BREAKPOINTS[kind]:
        start = int(np.ceil(b * n))  # first index i with i/n >= b
        if 2 <= start <= n and start != lefts[-1]:
            lefts.append(start)
    return Partition.from_boundaries(lefts, n)


def random_pw_poly(n: int, p: float, k: int, seed: int):
    """Random piecewise polynomial: (clean signal, true partition).

    Segment lengths are geometric with parameter p (expected length 1/p),
    clipped to fill exactly n samples.  On a segment of length h the signal
    is a polynomial of degree k-1 over the abscissas 0, p, ..., (h-1)p with
    coefficient j-1 drawn as X_j / (j+1)^2, X_j uniform on [-1, 1].
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer, got %r" % (n,))
    if not 0.0 < p < 1.0:
        raise ValueError("jump probability p must be in (0, 1), got %r" % (p,))
    rng = np.random.default_rng(seed)
    lengths = []
    total = 0
    while total < n:
        h = int(rng.geometric(p))
        lengths.append(min(h, n - total))
        total += lengths[-1]
    signal = np.empty(n)
    lefts = []
    pos = 0
    for h in lengths:
        lefts.append(pos + 1)
        x = np.arange(h, dtype=np.float64) * p
        vals = np.zeros(h)
        xp = np.ones(h)
        for j in range(1, k + 1):
            coef = rng.uniform(-1.0, 1.0) / (j + 1) ** 2
            vals += coef * xp
            xp = xp * x
        signal[pos:pos + h] = vals
        pos += h
    return signal, Partition.from_boundaries(lefts, n)


def add_noise(g, eta: float, seed: int) -> np.ndarray:
    """Additive i.i.d. Gaussian noise with sigma = eta * ||g||_1 / n.

    Noise comes from numpy's PCG64 generator via Generator.normal (ziggurat
    transform), so outputs are bit-reproducible for a given seed.
    """
    g = as_signal(g)
    if eta < 0:
        raise ValueError("noise level eta must be >= 0, got %r" % (eta,))
    if eta == 0:
        return g.copy()
    l1 = float(np.abs(g).sum())
    if l1 == 0.0:
        raise ValueError("signal has zero l1 norm; noise level eta is undefined")
    sigma = eta * l1 / g.size
    rng = np.random.default_rng(seed)
    return g + rng.normal(0.0, sigma, g.size)

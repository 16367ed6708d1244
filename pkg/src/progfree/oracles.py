"""Slow, naive reference computations used to cross-check the fast paths.

Nothing here shares code with the routines it checks: counts come from full
enumeration with rational weights, maxima from scanning every subset, ranks
from column-wise elimination, ratios from high-precision arithmetic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import numpy as np


def brute_force_m_set_size(alpha: Fraction, q: int, n: int) -> int:
    return sum(
        1
        for lam in itertools.product(range(q), repeat=n)
        if Fraction(sum(lam), q - 1) <= alpha * n
    )


def brute_force_max_free(q: int, n: int, k: int, semantics: str = "literal") -> int:
    """Maximum over all 2^(q^n) subsets; only sensible for q^n <= 16."""
    pts = list(itertools.product(range(q), repeat=n))
    index = {p: i for i, p in enumerate(pts)}
    N = len(pts)
    if N > 20:
        raise ValueError("brute force limited to q^n <= 20")
    ap_masks = set()
    for a in pts:
        for d in pts:
            if not any(d):
                continue
            terms = [tuple((x + j * y) % q for x, y in zip(a, d)) for j in range(k)]
            if semantics == "distinct" and len(set(terms)) < k:
                continue
            ap_masks.add(sum(1 << index[t] for t in set(terms)))
    subsets = np.arange(1 << N, dtype=np.int64)
    bad = np.zeros(subsets.shape, dtype=bool)
    for m in ap_masks:
        bad |= (subsets & m) == m
    sizes = np.bitwise_count(subsets[~bad])
    return int(sizes.max())


def rank_by_columns(M: list[list[int]], p: int) -> int:
    """Rank of the transpose, eliminating from the last row upwards."""
    if not M:
        return 0
    cols = [list(col) for col in zip(*M)][::-1]
    cols = [[x % p for x in c] for c in cols]
    rank = 0
    width = len(cols[0])
    for j in reversed(range(width)):
        pivot = next((i for i in range(rank, len(cols)) if cols[i][j]), None)
        if pivot is None:
            continue
        cols[rank], cols[pivot] = cols[pivot], cols[rank]
        inv = pow(cols[rank][j], p - 2, p)
        for i in range(rank + 1, len(cols)):
            f = cols[i][j] * inv % p
            if f:
                cols[i] = [(x - f * y) % p for x, y in zip(cols[i], cols[rank])]
        rank += 1
    return rank


def chernoff_ratio_mp(m: int, y, dps: int = 50):
    """The ratio in mpmath at ``dps`` digits, straight from the formula."""
    with mpmath.workdps(dps):
        y = mpmath.mpf(y)
        return (1 - y**m) / (m * (1 - y) * y ** (mpmath.mpf(m - 1) / 3))

"""Deterministic near-linear solver for unbounded SubsetSum.

Each input value may be used any number of times, so no partitioning tricks
are needed: seed with the exact table for sums up to t/n, then double the
reach with capped sumsets until the full target range is covered. The result
is exactly the unbounded DP's, at O(n + t log t) cost.
"""

from __future__ import annotations

from .convolve import SumSet, capped_sumset
from .oracle import unbounded_dp


def unbounded_subset_sum(zs, t: int) -> SumSet:
    """All sums of arbitrary-length sequences over zs, capped at t. Exact.

    Values above t are filtered out first; an empty (filtered) input yields
    {0}.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    items = sorted({int(z) for z in zs})
    if items and items[0] < 1:
        raise ValueError("items must be positive")
    items = [z for z in items if z <= t]
    if not items:
        return SumSet.zero(t)
    n = len(items)

    s = unbounded_dp(items, t // n)
    zset = SumSet.from_elements(items, t)
    rounds = (n - 1).bit_length()  # ceil(log2 n)
    for i in range(1, rounds + 1):
        # cap grows as ceil(2^i * t / n); ceilings only widen the window
        cap_i = min(t, -(-(t << i) // n))
        s = capped_sumset(s, s, cap_i)
        s = capped_sumset(s, SumSet(zset.bits & ((1 << (cap_i + 1)) - 1), cap_i), cap_i)
    return SumSet(s.bits & ((1 << (t + 1)) - 1), t)

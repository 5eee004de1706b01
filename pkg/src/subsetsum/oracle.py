"""Ground-truth solvers: the textbook dynamic programs.

These are the reference answers every randomized component is tested
against, and the baseline the fast solver is benchmarked against.
"""

from __future__ import annotations

import numpy as np

from .convolve import SumSet
from .preprocess import Instance, reduce_multiplicities


def bellman_all_sums(inst: Instance, t: int) -> SumSet:
    """Exact bounded subset sums <= t via the classic O(n*t) table update.

    Multiplicities are first reduced to at most 2, then every physical copy
    is processed as its own 0/1 item (independent of the two-set split this
    oracle is used to validate). The inner update is deliberately one cell
    per step, with no word packing: this is the honest baseline for the
    scaling comparisons.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    local = reduce_multiplicities(Instance.from_items(inst.items_expanded(), t))
    reach = bytearray(t + 1)
    reach[0] = 1
    hi = 0  # max possibly-reachable sum so far; keeps small instances cheap
    for z in local.items_expanded():
        hi = min(t, hi + z)
        for s in range(hi, z - 1, -1):
            if reach[s - z]:
                reach[s] = 1
    return _sumset_from_flags(np.frombuffer(bytes(reach), np.uint8) != 0, t)


def unbounded_dp(zs, t: int) -> SumSet:
    """Exact unbounded subset sums <= t (each value usable any number of times).

    Classic coin-style DP: per value z, reach[s] |= reach[s-z] for ascending s.
    Within one value the update is a running OR along each residue class
    mod z, executed as one vectorized accumulate per value.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    reach = np.zeros(t + 1, dtype=bool)
    reach[0] = True
    for z in sorted({int(z) for z in zs}):
        if z < 1:
            raise ValueError("items must be positive")
        if z > t:
            continue
        pad = (-len(reach)) % z
        m = np.concatenate([reach, np.zeros(pad, dtype=bool)]).reshape(-1, z)
        np.logical_or.accumulate(m, axis=0, out=m)
        reach = m.reshape(-1)[: t + 1]
    return _sumset_from_flags(reach, t)


def _sumset_from_flags(flags: np.ndarray, cap: int) -> SumSet:
    packed = np.packbits(flags, bitorder="little")
    return SumSet(int.from_bytes(packed.tobytes(), "little"), cap)

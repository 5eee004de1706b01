"""Shared test helpers: independent oracles kept away from the library code."""

from __future__ import annotations

import random
from itertools import combinations


def brute_capped_sumset(a, b, cap):
    """Pairwise enumeration of {x+y : x in A∪{0}, y in B∪{0}} ∩ [0, cap]."""
    av = set(a) | {0}
    bv = set(b) | {0}
    return {x + y for x in av for y in bv if x + y <= cap}


def schoolbook_convolve(x, y):
    """O(|x||y|) Boolean convolution, double loop."""
    out = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj:
                out[i + j] = 1
    return out


def enumerate_subset_sums(items, t):
    """All subset sums <= t by explicit 2^n enumeration (n <= 20)."""
    items = list(items)
    assert len(items) <= 20, "enumeration oracle is exponential"
    sums = set()
    for r in range(len(items) + 1):
        for comb in combinations(range(len(items)), r):
            s = sum(items[i] for i in comb)
            if s <= t:
                sums.add(s)
    return sums


def incremental_subset_sums(items, t):
    """Set-based 0/1 subset sums <= t; independent of the package's oracles."""
    sums = {0}
    for z in items:
        sums |= {s + z for s in sums if s + z <= t}
    return sums


def unbounded_sums_reference(zs, t):
    """Scalar reference for unbounded reachability."""
    reach = [False] * (t + 1)
    reach[0] = True
    zl = sorted(set(zs))
    for s in range(1, t + 1):
        for z in zl:
            if z > s:
                break
            if reach[s - z]:
                reach[s] = True
                break
    return {s for s, ok in enumerate(reach) if ok}


def random_multiset(rng: random.Random, n_max: int, t_max: int):
    """(items, t) with duplicates allowed, items in [1, t]."""
    t = rng.randint(5, t_max)
    n = rng.randint(1, n_max)
    return [rng.randint(1, t) for _ in range(n)], t


def random_set(rng: random.Random, n_max: int, t_max: int):
    """(items, t) with distinct items in [1, t]."""
    t = rng.randint(5, t_max)
    n = rng.randint(1, min(n_max, t))
    return sorted(rng.sample(range(1, t + 1), n)), t

"""Randomized near-linear bounded SubsetSum.

Three pieces, bottom up:

* color_coding: finds all sums generated by subsets of size <= k. Each round
  scatters the items uniformly into k^2 bins and folds the bins together
  with capped sumsets; a fixed small witness subset lands in pairwise
  distinct bins with constant probability, so a few rounds suffice.
* color_coding_layer: same guarantee for a "layer" (items confined to
  [t/ell, 2t/ell], or at most ell items below 2t/ell), but with the
  quadratic bin blowup removed by a two-stage split into m groups of
  logarithmic witness size each.
* faster_subset_sum: splits the input into geometrically shrinking layers,
  solves each, and folds the layer sums together.

Everything is one-sided: reported sums are always attainable, and each
attainable sum is reported with probability >= 1-delta. All randomness flows
through the seedable Rng, so equal seeds give bit-identical outputs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .convolve import SumSet, capped_sumset
from .preprocess import Instance, reduce_multiplicities, split_two_sets

_MASK64 = (1 << 64) - 1


def _mix64(x: int) -> int:
    # splitmix64 finalizer; cheap, well-scrambled child-seed derivation
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class Rng:
    """Seedable deterministic random stream driving all partitioning.

    Identical seeds produce identical partition sequences. child(tag) derives
    an independent stream deterministically from (seed, tag), so subproblems
    can be re-randomized reproducibly.
    """

    __slots__ = ("seed", "_gen")

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._gen = random.Random(self.seed)

    def randrange(self, n: int) -> int:
        return self._gen.randrange(n)

    def child(self, tag: int) -> "Rng":
        return Rng(_mix64(self.seed ^ _mix64(tag & _MASK64)))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed})"


def random_partition(zs, parts: int, rng: Rng) -> list[list[int]]:
    """Assign each element an independent uniform bin.

    Returns `parts` disjoint ascending lists whose union is zs. Elements are
    visited in sorted order so the draw depends only on (zs, parts, seed).
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")
    bins: list[list[int]] = [[] for _ in range(parts)]
    for z in sorted(zs):
        bins[rng.randrange(parts)].append(z)
    return bins


def sparse_partition(zs, parts: int, rng: Rng) -> list[list[int]]:
    """random_partition's nonempty bins only, in bin order.

    Identical random draws (one uniform bin index per element, sorted
    order), but no allocation for the typically huge number of empty bins.
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")
    grouped: dict[int, list[int]] = {}
    for z in sorted(zs):
        grouped.setdefault(rng.randrange(parts), []).append(z)
    return [grouped[b] for b in sorted(grouped)]


def color_coding_rounds(delta: float) -> int:
    """Rounds needed to push the per-witness miss rate below delta."""
    # each round succeeds with probability >= 1/4, hence the 4/3 base
    return max(1, math.ceil(math.log(1.0 / delta) / math.log(4.0 / 3.0)))


def color_coding(zs, t: int, k: int, delta: float, rng: Rng) -> SumSet:
    """Sums of subsets of size <= k, by unioning random-partition sumsets.

    Sound for every seed: the output only contains attainable sums. Each sum
    generated by a subset of <= k elements is present with probability
    >= 1-delta.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must be in (0, 1)")
    if t < 0:
        raise ValueError("t must be non-negative")
    items = sorted(zs)
    # set input is a hard contract: duplicates would let one value be used
    # twice in a sum; multiset handling belongs to the preprocessing step
    assert all(a < b for a, b in zip(items, items[1:])), "input must be a set"
    assert all(z >= 1 for z in items), "items must be positive"
    bins = k * k
    mask = (1 << (t + 1)) - 1
    out = 1  # bitset for {0}
    for _ in range(color_coding_rounds(delta)):
        acc = 1
        for group in sparse_partition(items, bins, rng):
            acc = _fold_group(acc, group, t, mask)
        out |= acc
    return SumSet(out, t)


def _fold_group(acc: int, group: list[int], cap: int, mask: int) -> int:
    # acc (+)_cap group, with 0 adjoined to the group: capped_sumset's
    # shift-OR path inlined (groups hold few items, acc already contains 0)
    res = acc
    for z in group:
        if z <= cap:
            res |= acc << z
    return res & mask


@dataclass(frozen=True)
class LayerParams:
    """Derived parameters for solving one layer.

    m groups (a power of two), a per-group witness bound gamma, and the
    failure budget delta. Only meaningful when the layer does not fall back
    to plain color coding (ell >= log2(ell/delta)).
    """

    ell: int
    delta: float
    gamma: int
    m: int

    @classmethod
    def compute(cls, ell: int, delta: float) -> "LayerParams":
        if ell < 1:
            raise ValueError("ell must be >= 1")
        if not (0.0 < delta <= 0.25):
            raise ValueError("layer solver requires delta in (0, 1/4]")
        lg = math.log2(ell / delta)
        gamma = math.ceil(6 * lg)
        m = 1
        while m < ell / lg:
            m *= 2
        return cls(ell, delta, gamma, m)


def _is_layer(items: list[int], t: int, ell: int) -> bool:
    if any(z * ell > 2 * t for z in items):
        return False
    return len(items) <= ell or all(z * ell >= t for z in items)


def color_coding_layer(zs, t: int, ell: int, delta: float, rng: Rng) -> SumSet:
    """Layer solver: items in [t/ell, 2t/ell], or <= ell items below 2t/ell.

    Any feasible subset of such a layer has at most ell elements. Small ell
    delegates to plain color coding; otherwise the items are scattered into
    m groups (per-group witnesses then have logarithmic size), each group is
    solved at a short target, and the group sums are folded pairwise with
    caps that double per level. Sound for every seed; each attainable sum
    survives with probability >= 1-delta.
    """
    if not (0.0 < delta <= 0.25):
        raise ValueError("delta must be in (0, 1/4]")
    items = sorted(zs)
    assert _is_layer(items, t, ell), "input is not an ell-layer instance"
    if ell < math.log2(ell / delta):
        return color_coding(items, t, ell, delta, rng)
    params = LayerParams.compute(ell, delta)
    groups = random_partition(items, params.m, rng)
    cap_g = -(-2 * params.gamma * t // ell)  # ceil(2*gamma*t/ell)
    level = [
        color_coding(g, cap_g, params.gamma, delta / ell, rng) for g in groups
    ]
    h = 1
    while len(level) > 1:
        cap_h = -(-(1 << h) * 2 * params.gamma * t // ell)
        level = [
            capped_sumset(level[2 * j], level[2 * j + 1], cap_h)
            for j in range(len(level) // 2)
        ]
        h += 1
    return SumSet(level[0].bits & ((1 << (t + 1)) - 1), t)


def split_layers(items: list[int], t: int, n: int) -> list[tuple[int, list[int]]]:
    """Geometric layers: layer i holds items in (t/2^i, t/2^(i-1)].

    The last layer takes everything at or below t/2^(L-1) where
    L = max(1, ceil(log2 n)); its item count never exceeds its bound 2^L.
    Every item lands in exactly one layer.
    """
    L = max(1, (n - 1).bit_length())
    layers = []
    for i in range(1, L + 1):
        if i < L:
            sel = [z for z in items if (z << i) > t and (z << (i - 1)) <= t]
        else:
            sel = [z for z in items if (z << (L - 1)) <= t]
        layers.append((1 << i, sel))
    return layers


def faster_subset_sum(zs, t: int, delta: float, rng: Rng) -> SumSet:
    """Near-linear randomized bounded subset sums.

    Splits the input set into layers, solves each with the layer solver at
    failure budget delta/#layers, and folds the layer outputs with capped
    sumsets. The output is a subset of the true sums for every seed; each
    true sum is present with probability >= 1-delta.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if not (0.0 < delta <= 0.25):
        raise ValueError("delta must be in (0, 1/4]")
    items = sorted({int(z) for z in zs})
    if items and (items[0] < 1 or items[-1] > t):
        raise ValueError("items must lie in [1, t]")
    if not items:
        return SumSet.zero(t)
    layers = split_layers(items, t, len(items))
    budget = delta / len(layers)
    out = SumSet.zero(t)
    for ell, layer_items in layers:
        if not layer_items:
            continue  # empty layer contributes {0}: identity
        part = color_coding_layer(layer_items, t, ell, budget, rng)
        out = capped_sumset(out, part, t)
    return out


@dataclass(frozen=True)
class DecideResult:
    """Decision outcome plus the reproducibility knobs that produced it."""

    answer: bool
    delta: float
    seed: int
    dropped_items: int
    note: str

    def __bool__(self) -> bool:
        return self.answer


def decide(inst: Instance, delta: float, seed: int) -> DecideResult:
    """One-sided randomized decision for a multiset instance.

    "yes" answers are always correct; "no" answers are wrong with
    probability at most delta. Target 0 is trivially yes (empty subset).
    """
    if not (0.0 < delta <= 0.25):
        raise ValueError("delta must be in (0, 1/4]")
    t = inst.target
    if t == 0:
        return DecideResult(True, delta, seed, inst.dropped, "empty subset sums to 0")
    reduced = reduce_multiplicities(inst)
    z1, z2 = split_two_sets(reduced)
    if not z1:
        return DecideResult(False, delta, seed, inst.dropped, "no usable items")
    rng = Rng(seed)
    # split the failure budget across the two set solves
    s = faster_subset_sum(z1, t, delta / 2 if z2 else delta, rng)
    if z2:
        s2 = faster_subset_sum(z2, t, delta / 2, rng)
        s = capped_sumset(s, s2, t)
    note = "one-sided: yes is certain, no errs with prob <= delta"
    return DecideResult(t in s, delta, seed, inst.dropped, note)

"""Instance handling: multiset inputs, multiplicity reduction, two-set split.

Every solver in this package assumes its input is a plain set. An arbitrary
multiset instance is first rewritten so that no value occurs more than twice
(replacing surplus copies of z by copies of 2z, which leaves the attainable
sums below the target unchanged), then split into two sets whose capped
sumset reproduces the multiset's sums.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass


@dataclass
class Instance:
    """SubsetSum instance: positive item multiplicities plus a target.

    Items equal to 0 or above the target never change the attainable sums
    and are dropped at construction; the drop counters are kept for CLI
    diagnostics.
    """

    counts: dict[int, int]
    target: int
    dropped_zeros: int = 0
    dropped_over: int = 0

    @classmethod
    def from_items(cls, items, target: int) -> "Instance":
        if target < 0:
            raise ValueError("target must be non-negative")
        counts: dict[int, int] = {}
        dropped_zeros = dropped_over = 0
        for z in items:
            z = int(z)
            if z < 0:
                raise ValueError(f"items must be non-negative, got {z}")
            if z == 0:
                dropped_zeros += 1
            elif z > target:
                dropped_over += 1
            else:
                counts[z] = counts.get(z, 0) + 1
        return cls(counts, target, dropped_zeros, dropped_over)

    @property
    def size(self) -> int:
        """Total number of item copies (sum of multiplicities)."""
        return sum(self.counts.values())

    @property
    def dropped(self) -> int:
        return self.dropped_zeros + self.dropped_over

    def values(self) -> list[int]:
        """Distinct item values, ascending."""
        return sorted(self.counts)

    def items_expanded(self) -> list[int]:
        """Every physical copy as its own 0/1 item, ascending."""
        out = []
        for z in sorted(self.counts):
            out.extend([z] * self.counts[z])
        return out


def reduce_multiplicities(inst: Instance) -> Instance:
    """Rewrite multiplicities above 2 into doubled values; sums <= target unchanged.

    A value z with multiplicity 2k+1 becomes one copy of z plus k copies of
    2z; multiplicity 2k+2 becomes two copies of z plus k copies of 2z.
    Values are processed ascending so freshly created doubles are rewritten
    in turn; the output has every multiplicity <= 2 and size <= min(n, 2t).
    """
    t = inst.target
    counts = dict(inst.counts)
    vals = sorted(counts)
    out: dict[int, int] = {}
    i = 0
    while i < len(vals):
        z = vals[i]
        i += 1
        m = counts[z]
        if m > 2:
            keep = 1 if m % 2 else 2
            carry = (m - keep) // 2
            dbl = 2 * z
            if dbl <= t:  # doubles above t cannot appear in any sum <= t
                if dbl in counts:
                    counts[dbl] += carry
                else:
                    counts[dbl] = carry
                    insort(vals, dbl, lo=i)
            m = keep
        out[z] = m
    return Instance(out, t, inst.dropped_zeros, inst.dropped_over)


def split_two_sets(inst: Instance) -> tuple[set[int], set[int]]:
    """Split a multiplicity-<=2 instance into two plain sets.

    Z1 holds one copy of every distinct value, Z2 the values occurring twice;
    the capped sumset of their subset-sum sets equals the multiset's.
    """
    z1: set[int] = set()
    z2: set[int] = set()
    for v, m in inst.counts.items():
        assert m <= 2, "multiplicity above 2; run reduce_multiplicities first"
        if m >= 1:
            z1.add(v)
        if m == 2:
            z2.add(v)
    return z1, z2

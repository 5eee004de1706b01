"""Exact Boolean sumset and convolution primitives.

A SumSet is a dense bitset over {0..cap}: bit i records that the integer sum
i is attainable. The workhorse operation is the capped sumset

    A (+)_cap B  =  {a + b : a in A∪{0}, b in B∪{0}}  ∩  [0, cap]

which reduces to Boolean convolution of the characteristic bitsets. Short or
sparse convolutions are done with word-packed shift-ORs; long dense ones are
reduced to a single exact integer multiplication (Kronecker substitution with
per-coefficient guard slots, delegated to GMP). Both backends are exact; the
dispatch is purely a performance decision.
"""

from __future__ import annotations

import gmpy2
import numpy as np

# Result length at or below which shift-ORs always win (tunable).
SCHOOLBOOK_MAX_LEN = 1 << 10
# Set-bit count below which the shift-OR path beats one big multiplication
# regardless of length (measured crossover on the multiplication backend).
SPARSE_POP_CUTOFF = 768
# Guard-slot counters are sized from the operands, but never allowed past
# 8 bytes; convolutions of 0/1 vectors can only reach counts <= min length.
_MAX_SLOT_BYTES = 8


def _mask(cap: int) -> int:
    return (1 << (cap + 1)) - 1


class SumSet:
    """Set of attainable sums in {0..cap}, stored as an int bitset."""

    __slots__ = ("bits", "cap")

    def __init__(self, bits: int, cap: int):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        assert bits >= 0 and bits >> (cap + 1) == 0, "bit set above cap"
        self.bits = bits
        self.cap = cap

    @classmethod
    def zero(cls, cap: int) -> "SumSet":
        """The set {0}: identity element of the capped sumset."""
        return cls(1, cap)

    @classmethod
    def from_elements(cls, elements, cap: int) -> "SumSet":
        """Build from an iterable of integers; values outside [0, cap] are dropped."""
        bits = 0
        for z in elements:
            if 0 <= z <= cap:
                bits |= 1 << z
        return cls(bits, cap)

    def members(self) -> list[int]:
        if self.bits == 0:
            return []
        raw = self.bits.to_bytes((self.cap >> 3) + 1, "little")
        arr = np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little")
        return np.flatnonzero(arr).tolist()

    def count(self) -> int:
        return self.bits.bit_count()

    def max_element(self) -> int:
        """Largest attainable sum (-1 for the empty set)."""
        return self.bits.bit_length() - 1

    def __contains__(self, s: int) -> bool:
        return 0 <= s <= self.cap and (self.bits >> s) & 1 == 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SumSet)
            and self.cap == other.cap
            and self.bits == other.bits
        )

    def __repr__(self) -> str:
        return f"SumSet(cap={self.cap}, count={self.count()})"


def capped_sumset(a: SumSet, b: SumSet, cap: int) -> SumSet:
    """Capped sumset of a and b, where either side may also contribute 0.

    Exact for any inputs: result bit i is set iff i = x + y <= cap for some
    x in A∪{0}, y in B∪{0}. cap 0 yields {0}.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    m = _mask(cap)
    x = (a.bits | 1) & m  # adjoin 0 and drop elements that cannot contribute
    y = (b.bits | 1) & m
    return SumSet(or_convolve(x, y) & m, cap)


def union(a: SumSet, b: SumSet) -> SumSet:
    """Bitwise-OR union; operands must share the same cap."""
    assert a.cap == b.cap, "union of SumSets with different caps"
    return SumSet(a.bits | b.bits, a.cap)


def raw_convolve(x, y) -> list[int]:
    """Boolean convolution of two 0/1 vectors: z[i] = OR_j (x[j] AND y[i-j]).

    Output length is len(x)+len(y)-1.
    """
    if len(x) == 0 or len(y) == 0:
        raise ValueError("raw_convolve requires non-empty vectors")
    xb = _bits_from_vector(x)
    yb = _bits_from_vector(y)
    zb = or_convolve(xb, yb)
    return [(zb >> i) & 1 for i in range(len(x) + len(y) - 1)]


def _bits_from_vector(vec) -> int:
    bits = 0
    for i, v in enumerate(vec):
        if v:
            bits |= 1 << i
    return bits


def or_convolve(x: int, y: int) -> int:
    """OR-convolution of two int bitsets: bit i set iff x[j] and y[i-j] for some j."""
    if x == 0 or y == 0:
        return 0
    lx = x.bit_length()
    ly = y.bit_length()
    out_len = lx + ly - 1
    px = x.bit_count()
    py = y.bit_count()
    if out_len <= SCHOOLBOOK_MAX_LEN or min(px, py) <= SPARSE_POP_CUTOFF:
        if px <= py:
            return _shift_or_convolve(x, y)
        return _shift_or_convolve(y, x)
    return _kron_convolve(x, lx, y, ly, min(px, py))


def _shift_or_convolve(small: int, big: int) -> int:
    # Word-packed schoolbook: one shifted OR per set bit of the sparser side.
    acc = 0
    while small:
        low = small & -small
        acc |= big << (low.bit_length() - 1)
        small ^= low
    return acc


def _kron_convolve(x: int, lx: int, y: int, ly: int, count_bound: int) -> int:
    # Exact integer-multiplication reduction: one guard slot per coefficient,
    # wide enough that convolution counts (<= count_bound) never carry over.
    slot = min(_MAX_SLOT_BYTES, max(1, (count_bound.bit_length() + 7) // 8))
    prod = gmpy2.mpz(_spread(x, lx, slot)) * gmpy2.mpz(_spread(y, ly, slot))
    return _collapse(int(prod), lx + ly - 1, slot)


def _spread(bits: int, nbits: int, slot_bytes: int) -> int:
    # Bitset -> integer with one slot_bytes-wide slot per bit position.
    raw = bits.to_bytes((nbits + 7) // 8, "little")
    flat = np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little")[:nbits]
    mat = np.zeros((nbits, slot_bytes), np.uint8)
    mat[:, 0] = flat
    return int.from_bytes(mat.tobytes(), "little")


def _collapse(value: int, nslots: int, slot_bytes: int) -> int:
    # Integer of per-slot counts -> bitset of slots holding a nonzero count.
    raw = value.to_bytes(nslots * slot_bytes, "little")
    nz = np.frombuffer(raw, np.uint8).reshape(nslots, slot_bytes).any(axis=1)
    return int.from_bytes(np.packbits(nz, bitorder="little").tobytes(), "little")

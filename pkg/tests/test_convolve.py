import random

import pytest

from conftest import brute_capped_sumset, schoolbook_convolve
from subsetsum.convolve import (
    SCHOOLBOOK_MAX_LEN,
    SumSet,
    capped_sumset,
    or_convolve,
    raw_convolve,
    union,
)


def ss(elems, cap):
    return SumSet.from_elements(elems, cap)


class TestCappedSumset:
    def test_basic_example(self):
        assert capped_sumset(ss([1, 3], 6), ss([2], 6), 6).members() == [0, 1, 2, 3, 5]

    def test_empty_operands(self):
        assert capped_sumset(ss([], 10), ss([], 10), 10).members() == [0]

    def test_cap_discards_large_sums(self):
        # brute force: {4,7}+{4,9} pairs 11, 13, 16 exceed the cap
        assert capped_sumset(ss([4, 7], 10), ss([4, 9], 10), 10).members() == [0, 4, 7, 8, 9]

    def test_cap_zero_yields_zero_set(self):
        assert capped_sumset(ss([3], 5), ss([4], 5), 0).members() == [0]

    def test_zero_bit_always_set(self):
        r = capped_sumset(ss([5], 9), ss([7], 9), 9)
        assert 0 in r

    def test_matches_bruteforce_random_small(self):
        rng = random.Random(42)
        for _ in range(300):
            cap = rng.randint(0, 200)
            a = [rng.randint(0, 250) for _ in range(rng.randint(0, 8))]
            b = [rng.randint(0, 250) for _ in range(rng.randint(0, 8))]
            got = set(capped_sumset(ss(a, cap), ss(b, cap), cap).members())
            assert got == brute_capped_sumset(a, b, cap)

    def test_matches_bruteforce_past_schoolbook_threshold(self):
        # dense operands long enough to exercise the multiplication backend
        rng = random.Random(7)
        for _ in range(10):
            cap = rng.randint(3000, 4096)
            a = rng.sample(range(0, cap), 1500)
            b = rng.sample(range(0, cap), 1500)
            got = set(capped_sumset(ss(a, cap), ss(b, cap), cap).members())
            assert got == brute_capped_sumset(a, b, cap)

    def test_commutative(self):
        rng = random.Random(3)
        for _ in range(50):
            cap = rng.randint(1, 300)
            a = ss([rng.randint(0, cap) for _ in range(5)], cap)
            b = ss([rng.randint(0, cap) for _ in range(5)], cap)
            assert capped_sumset(a, b, cap) == capped_sumset(b, a, cap)

    def test_associative_with_late_caps(self):
        # ((A+B)+C) and (A+(B+C)) agree on [0,t] when intermediate caps are loose
        rng = random.Random(5)
        for _ in range(50):
            t = rng.randint(10, 150)
            big = 4 * t  # beyond any pairwise sum of elements <= t
            a, b, c = (ss([rng.randint(1, t) for _ in range(4)], big) for _ in range(3))
            left = capped_sumset(capped_sumset(a, b, big), c, big)
            right = capped_sumset(a, capped_sumset(b, c, big), big)
            mask = (1 << (t + 1)) - 1
            assert left.bits & mask == right.bits & mask

    def test_zero_set_is_identity(self):
        rng = random.Random(9)
        for _ in range(30):
            cap = rng.randint(1, 400)
            a = ss([rng.randint(0, cap) for _ in range(6)], cap)
            az = union(a, SumSet.zero(cap))  # a with 0 adjoined
            assert capped_sumset(a, SumSet.zero(cap), cap) == az
            assert capped_sumset(SumSet.zero(cap), a, cap) == az


class TestRawConvolve:
    def test_hand_example(self):
        assert raw_convolve([1, 1, 0], [1, 0, 1]) == [1, 1, 1, 1, 0]

    def test_identity_element(self):
        assert raw_convolve([1], [1, 0, 1]) == [1, 0, 1]

    def test_length_contract(self):
        assert len(raw_convolve([0, 1], [1, 0, 0, 1])) == 5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            raw_convolve([], [1])

    def test_random_length_64_vs_schoolbook(self):
        rng = random.Random(64)
        for _ in range(50):
            x = [rng.randint(0, 1) for _ in range(64)]
            y = [rng.randint(0, 1) for _ in range(64)]
            assert raw_convolve(x, y) == schoolbook_convolve(x, y)

    def test_long_dense_vs_schoolbook(self):
        # one case decisively above SCHOOLBOOK_MAX_LEN and the sparse cutoff
        rng = random.Random(11)
        n = SCHOOLBOOK_MAX_LEN + 200
        x = [rng.randint(0, 1) for _ in range(n)]
        y = [rng.randint(0, 1) for _ in range(n)]
        assert raw_convolve(x, y) == schoolbook_convolve(x, y)


class TestBackendDispatch:
    def test_kron_path_agrees_with_shift_or(self):
        # same inputs through both backends, forced via popcount structure
        rng = random.Random(13)
        for _ in range(5):
            n = 3000
            dense_a = sum(1 << i for i in rng.sample(range(n), 1800))
            dense_b = sum(1 << i for i in rng.sample(range(n), 1700))
            from subsetsum.convolve import _kron_convolve, _shift_or_convolve

            want = _shift_or_convolve(dense_a, dense_b)
            got = _kron_convolve(
                dense_a, dense_a.bit_length(), dense_b, dense_b.bit_length(), 1700
            )
            assert got == want

    def test_or_convolve_zero(self):
        assert or_convolve(0, 0b101) == 0


class TestUnion:
    def test_basic(self):
        assert union(ss([0, 2], 5), ss([0, 3], 5)).members() == [0, 2, 3]

    def test_identity(self):
        s = ss([0, 1, 4], 6)
        assert union(s, SumSet.zero(6)).members() == [0, 1, 4]

    def test_idempotent(self):
        s = ss([0, 1], 3)
        assert union(s, s) == s

    def test_cap_mismatch_asserts(self):
        with pytest.raises(AssertionError):
            union(ss([1], 4), ss([1], 5))


class TestSumSet:
    def test_members_roundtrip(self):
        s = ss([0, 5, 17, 100], 100)
        assert s.members() == [0, 5, 17, 100]
        assert 17 in s and 16 not in s and 101 not in s

    def test_out_of_range_elements_dropped(self):
        assert ss([0, 5, 200], 100).members() == [0, 5]

    def test_count_and_max(self):
        s = ss([2, 9], 9)
        assert s.count() == 2
        assert s.max_element() == 9
        assert ss([], 4).max_element() == -1

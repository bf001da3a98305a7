import math
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ulamkac.combinatorics import (
    EMPTY,
    MomentIndex,
    Multiset,
    basis_size,
    canonical_basis,
    partition_count,
    partitions,
    position_subsets,
)

small_multisets = st.lists(st.integers(1, 6), max_size=6).map(lambda xs: Multiset(tuple(xs)))


def brute_partitions(n):
    # every tuple of parts from {1..n} of length <= n summing to n, canonicalised
    found = set()
    for length in range(n + 1):
        for parts in product(range(1, n + 1), repeat=length):
            if sum(parts) == n:
                found.add(tuple(sorted(parts, reverse=True)))
    return found


def test_partitions_zero_is_empty_multiset():
    assert partitions(0) == [EMPTY]


def test_partitions_three():
    assert partitions(3) == [Multiset.of(3), Multiset.of(2, 1), Multiset.of(1, 1, 1)]


@pytest.mark.parametrize("n", range(0, 8))
def test_partitions_match_brute_force(n):
    got = [p.parts for p in partitions(n)]
    assert len(got) == len(set(got))
    assert set(got) == brute_partitions(n)


def test_partitions_six_count():
    assert len(partitions(6)) == 11


def test_multiset_is_canonical():
    assert Multiset((1, 3, 2)).parts == (3, 2, 1)
    assert Multiset.of(1, 2) == Multiset.of(2, 1)
    with pytest.raises(ValueError):
        Multiset.of(0)


def test_multiset_subtract_missing_part():
    with pytest.raises(ValueError):
        Multiset.of(2, 1) - [3]


@given(small_multisets, small_multisets)
def test_add_then_subtract_is_identity(a, b):
    assert (a + b) - b == a
    assert (a + b).size == a.size + b.size
    assert (a + b).length == a.length + b.length


def test_position_subsets_repeated_parts():
    got = position_subsets(Multiset.of(1, 1))
    assert sorted((s.parts, r.parts) for s, r in got) == sorted(
        [((), (1, 1)), ((1,), (1,)), ((1,), (1,)), ((1, 1), ())]
    )


def test_position_subsets_empty():
    assert position_subsets(EMPTY) == [(EMPTY, EMPTY)]


def test_position_subsets_two_one_bitmask():
    parts = (2, 1)
    expected = []
    for mask in range(4):
        sub = tuple(p for k, p in enumerate(parts) if mask >> k & 1)
        rest = tuple(p for k, p in enumerate(parts) if not mask >> k & 1)
        expected.append((Multiset(sub), Multiset(rest)))
    got = position_subsets(Multiset(parts))
    key = lambda sr: (sr[0].parts, sr[1].parts)
    assert sorted(got, key=key) == sorted(expected, key=key)


@given(small_multisets)
def test_position_subsets_count_and_complement(p):
    subs = position_subsets(p)
    assert len(subs) == 2**p.length
    for sub, rest in subs:
        assert sub + rest == p


def test_canonical_basis_m1():
    assert canonical_basis(1).entries == (MomentIndex(1),)


def test_canonical_basis_m3():
    assert canonical_basis(3).entries == (
        MomentIndex(3), MomentIndex(2, Multiset.of(1)), MomentIndex(1, Multiset.of(2)), MomentIndex(1, Multiset.of(1, 1)),
    )


def test_canonical_basis_m4():
    M = Multiset.of
    assert canonical_basis(4).entries == (
        MomentIndex(4), MomentIndex(3, M(1)), MomentIndex(2, M(2)), MomentIndex(1, M(3)),
        MomentIndex(2, M(1, 1)), MomentIndex(1, M(2, 1)), MomentIndex(1, M(1, 1, 1)),
    )


def test_canonical_basis_rejects_zero():
    with pytest.raises(ValueError):
        canonical_basis(0)


@pytest.mark.parametrize("m", range(1, 13))
def test_basis_count_and_bound(m):
    basis = canonical_basis(m)
    assert len(basis) == sum(partition_count(j) for j in range(m)) == basis_size(m)
    assert len(basis) <= math.exp(3 * math.sqrt(m))
    assert basis[0] == MomentIndex(m)
    assert all(e.order == m for e in basis)


@pytest.mark.parametrize("m", range(1, 10))
def test_canonical_order_is_strict_and_lookup_bijective(m):
    basis = canonical_basis(m)
    keys = [(e.p.length, -e.q) for e in basis]
    assert keys == sorted(keys)
    assert len(set(basis.entries)) == len(basis)
    assert [basis.index(e) for e in basis] == list(range(len(basis)))

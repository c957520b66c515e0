import itertools
import math

import pytest
from hypothesis import given, strategies as st

from ginibre.combinat import (
    IncreasingMap,
    Permutation,
    complement,
    enumerate_increasing,
    enumerate_pi,
    induced_permutation,
    permutation_sign,
    permutation_sign_cycles,
    sign_of_map,
)
from ginibre.errors import EmptyDomainError, UsageError


@given(st.permutations(list(range(1, 8))))
def test_sign_methods_agree(p):
    assert permutation_sign(p) == permutation_sign_cycles(p)


def test_transposition_is_odd():
    assert Permutation((2, 1, 3)).sign == -1
    assert Permutation((1, 2, 3)).sign == 1
    assert Permutation((2, 3, 1)).sign == 1


def test_permutation_validation():
    with pytest.raises(UsageError):
        Permutation((1, 1, 2))


@pytest.mark.parametrize("k,n", [(0, 0), (0, 3), (2, 4), (3, 5), (5, 5)])
def test_enumerate_increasing_count_and_order(k, n):
    maps = list(enumerate_increasing(k, n))
    assert len(maps) == math.comb(n, k)
    assert [m.image for m in maps] == sorted(m.image for m in maps)


def test_enumerate_increasing_empty_domain():
    with pytest.raises(EmptyDomainError):
        list(enumerate_increasing(3, 2))


def test_increasing_map_validation():
    with pytest.raises(UsageError):
        IncreasingMap(2, 4, (3, 2))
    with pytest.raises(UsageError):
        IncreasingMap(2, 4, (0, 2))
    m = IncreasingMap(2, 4, (2, 4))
    assert m(1) == 2 and m(2) == 4
    assert m.to_zero_based() == [1, 3]


def test_complement_and_induced_permutation():
    t = IncreasingMap(2, 5, (2, 4))
    assert complement(t).image == (1, 3, 5)
    assert induced_permutation(t).mapping == (2, 4, 1, 3, 5)
    # (2,4,1,3,5) has inversions (2,1), (4,1), (4,3).
    assert sign_of_map(t) == -1


def _in_pi(p):
    return all(a < b for a, b in zip(p[0::2], p[1::2]))


@pytest.mark.parametrize("j", [0, 1, 2, 3, 4])
def test_enumerate_pi_matches_filtered_symmetric_group(j):
    brute = {p for p in itertools.permutations(range(1, 2 * j + 1)) if _in_pi(p)}
    got = [q.mapping for q in enumerate_pi(j)]
    assert len(got) == len(set(got)) == math.factorial(2 * j) // 2**j
    assert set(got) == brute


def test_enumerate_pi_is_lazy():
    it = enumerate_pi(10)
    assert next(it).mapping == tuple(range(1, 21))

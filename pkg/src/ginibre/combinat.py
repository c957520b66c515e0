"""Increasing maps and permutations used by Laplace and Pfaffian expansions.

Indices are 1-based throughout, as in the usual statement of these
expansions.  ``to_zero_based`` is the single place where they are turned
into array offsets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import EmptyDomainError, UsageError


@dataclass(frozen=True)
class IncreasingMap:
    """A strictly increasing map {1..k} -> {1..n}, stored by its image."""

    k: int
    n: int
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(i) for i in self.image)
        object.__setattr__(self, "image", image)
        if len(image) != self.k or self.k > self.n or self.k < 0:
            raise UsageError(f"invalid increasing map sizes k={self.k}, n={self.n}")
        if any(i < 1 or i > self.n for i in image):
            raise UsageError(f"image {image} not contained in 1..{self.n}")
        if any(a >= b for a, b in zip(image, image[1:])):
            raise UsageError(f"image {image} is not strictly increasing")

    @classmethod
    def identity(cls, k: int, n: int) -> "IncreasingMap":
        return cls(k, n, tuple(range(1, k + 1)))

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def to_zero_based(self) -> list[int]:
        return [i - 1 for i in self.image]


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n} given by its one-line notation."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        mapping = tuple(int(i) for i in self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(1, len(mapping) + 1)):
            raise UsageError(f"{mapping} is not a permutation of 1..{len(mapping)}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    @property
    def sign(self) -> int:
        return permutation_sign(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]


def permutation_sign(mapping: Sequence[int]) -> int:
    """Sign of a permutation from its inversion count."""
    inversions = 0
    for a, b in itertools.combinations(mapping, 2):
        if a > b:
            inversions += 1
    return -1 if inversions % 2 else 1


def permutation_sign_cycles(mapping: Sequence[int]) -> int:
    """Sign from the cycle decomposition: each m-cycle is m-1 transpositions."""
    n = len(mapping)
    seen = [False] * n
    transpositions = 0
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = mapping[i] - 1
            length += 1
        transpositions += length - 1
    return -1 if transpositions % 2 else 1


def enumerate_increasing(k: int, n: int) -> Iterator[IncreasingMap]:
    """All C(n, k) increasing maps {1..k} -> {1..n} in lexicographic order."""
    if k < 0 or n < 0:
        raise UsageError("sizes must be non-negative")
    if k > n:
        raise EmptyDomainError(f"no increasing map from {k} points into {n}")
    for image in itertools.combinations(range(1, n + 1), k):
        yield IncreasingMap(k, n, image)


def complement(t: IncreasingMap) -> IncreasingMap:
    chosen = set(t.image)
    rest = tuple(i for i in range(1, t.n + 1) if i not in chosen)
    return IncreasingMap(t.n - t.k, t.n, rest)


def induced_permutation(t: IncreasingMap) -> Permutation:
    """The permutation listing the image of ``t`` followed by its complement."""
    return Permutation(t.image + complement(t).image)


def sign_of_map(t: IncreasingMap) -> int:
    return induced_permutation(t).sign


def enumerate_pi(j: int) -> Iterator[Permutation]:
    """Permutations of {1..2j} with sigma(2i) > sigma(2i-1) for every i.

    Generated lazily pair by pair, so the (2j)! permutations of the full
    symmetric group are never visited.
    """
    if j < 0:
        raise UsageError("j must be non-negative")

    def extend(prefix: tuple[int, ...], remaining: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if not remaining:
            yield prefix
            return
        for a, b in itertools.combinations(remaining, 2):
            rest = tuple(x for x in remaining if x != a and x != b)
            yield from extend(prefix + (a, b), rest)

    for mapping in extend((), tuple(range(1, 2 * j + 1))):
        yield Permutation(mapping)

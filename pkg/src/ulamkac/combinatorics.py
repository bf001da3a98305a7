"""Multisets of positive integers and the canonical ordering of moment indices.

A moment index ``(q; p)`` labels the sequence

    C_n(q; p) = sum over a_1..a_l < n of E[X_n^q * prod_i X_{a_i}^{p_i}]

and the canonical ordering (ascending number of parts, then descending ``q``)
fixes the row/column layout of every matrix in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator


@dataclass(frozen=True, order=False)
class Multiset:
    """A finite multiset of positive integers, stored non-increasing."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive integers, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Multiset":
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __add__(self, other: "Multiset | Iterable[int]") -> "Multiset":
        return Multiset(self.parts + tuple(other))

    def __sub__(self, other: "Multiset | Iterable[int]") -> "Multiset":
        remaining = list(self.parts)
        for p in other:
            try:
                remaining.remove(p)
            except ValueError:
                raise ValueError(f"{list(other)} is not a sub-multiset of {list(self.parts)}") from None
        return Multiset(tuple(remaining))

    def __repr__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]" if self.parts else "∅"


EMPTY = Multiset()


@dataclass(frozen=True)
class MomentIndex:
    q: int
    p: Multiset = EMPTY

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")

    @property
    def order(self) -> int:
        return self.q + self.p.size

    def __repr__(self) -> str:
        return f"({self.q};{self.p!r})"


def partitions(n: int) -> list[Multiset]:
    """All partitions of ``n``, largest first part first; ``partitions(0) == [∅]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Multiset(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partition_count(n: int) -> int:
    return len(_partitions(n, n))


def position_subsets(p: Multiset) -> list[tuple[Multiset, Multiset]]:
    """Every subset of the *positions* of ``p`` with its complement.

    Equal parts are distinct positions, so ``[1,1]`` yields ``[1]`` twice.
    """
    out = []
    for mask in product((False, True), repeat=p.length):
        sub = tuple(x for x, keep in zip(p.parts, mask) if keep)
        rest = tuple(x for x, keep in zip(p.parts, mask) if not keep)
        out.append((Multiset(sub), Multiset(rest)))
    return out


def _canonical_key(idx: MomentIndex):
    # descending lexicographic order on parts breaks ties inside (length, q)
    return (idx.p.length, -idx.q, tuple(-x for x in idx.p.parts))


@dataclass(frozen=True)
class CanonicalBasis:
    m: int
    entries: tuple[MomentIndex, ...]
    _lookup: dict = field(repr=False, compare=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> MomentIndex:
        return self.entries[i]

    def __iter__(self) -> Iterator[MomentIndex]:
        return iter(self.entries)

    def index(self, idx: MomentIndex) -> int:
        try:
            return self._lookup[idx]
        except KeyError:
            raise KeyError(f"{idx!r} is not a moment index of order {self.m}") from None

    def __contains__(self, idx: MomentIndex) -> bool:
        return idx in self._lookup

    @property
    def lengths(self) -> list[int]:
        return [e.p.length for e in self.entries]


@lru_cache(maxsize=None)
def canonical_basis(m: int) -> CanonicalBasis:
    """Ordered list of all ``(q; p)`` with ``1 <= q <= m`` and ``|p| = m - q``."""
    if m < 1:
        raise ValueError(f"moment order must be >= 1, got {m}")
    entries = [MomentIndex(q, p) for q in range(1, m + 1) for p in partitions(m - q)]
    entries.sort(key=_canonical_key)
    lookup = {e: i for i, e in enumerate(entries)}
    return CanonicalBasis(m, tuple(entries), lookup)


def basis_size(m: int) -> int:
    """Number of moment indices of order ``m``: sum of p(j) for j < m."""
    return sum(partition_count(j) for j in range(m))

"""Set partitions of ``range(N)`` and a small union-find.

Blocks are stored 0-based in canonical form: indices sorted within blocks,
blocks sorted by their smallest element.  ``str()`` and ``to_json()`` print
1-based indices, the usual mathematical convention.

Order convention: ``p.is_refinement_of(q)`` means every block of ``p`` lies
inside a block of ``q``.  ``meet`` joins blocks that share an element (the
connected components of the union of both "same block" graphs), i.e. the
finest common coarsening.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ShapeError


class UnionFind:
    """Disjoint sets over ``range(n)`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


@dataclass(frozen=True)
class Partition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        bl = [tuple(sorted(set(b))) for b in blocks]
        if any(not b for b in bl):
            raise ValueError("partition blocks must be non-empty")
        seen = [x for b in bl for x in b]
        if n is None:
            n = len(seen)
        if sorted(seen) != list(range(n)):
            raise ValueError(f"blocks do not partition range({n}): {bl}")
        bl.sort(key=lambda b: b[0])
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", tuple(bl))

    @classmethod
    def one_based(cls, blocks: Iterable[Iterable[int]]) -> Partition:
        return cls([[i - 1 for i in b] for b in blocks])

    @classmethod
    def from_labels(cls, labels: Sequence) -> Partition:
        groups: dict = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return cls(groups.values(), len(labels))

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls([[i] for i in range(n)], n)

    @classmethod
    def whole(cls, n: int) -> Partition:
        return cls([list(range(n))], n)

    @property
    def m(self) -> int:
        return len(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def labels(self) -> list[int]:
        lab = [0] * self.n
        for j, b in enumerate(self.blocks):
            for i in b:
                lab[i] = j
        return lab

    def block_index(self, i: int) -> int:
        for j, b in enumerate(self.blocks):
            if i in b:
                return j
        raise IndexError(i)

    def is_refinement_of(self, other: Partition) -> bool:
        _check_n(self, other)
        lab = other.labels()
        return all(len({lab[i] for i in b}) == 1 for b in self.blocks)

    def meet(self, other: Partition) -> Partition:
        _check_n(self, other)
        uf = UnionFind(self.n)
        for p in (self, other):
            for b in p.blocks:
                for x in b[1:]:
                    uf.union(b[0], x)
        return Partition(uf.groups(), self.n)

    def merge(self, groups_of_blocks: Iterable[Iterable[int]]) -> Partition:
        """Coarsen by merging the listed groups of block indices."""
        return Partition(
            [[i for j in grp for i in self.blocks[j]] for grp in groups_of_blocks], self.n
        )

    def __str__(self):
        return "{" + ",".join("{" + ",".join(str(i + 1) for i in b) + "}" for b in self.blocks) + "}"

    def to_json(self) -> list[list[int]]:
        return [[i + 1 for i in b] for b in self.blocks]


def _check_n(p: Partition, q: Partition):
    if p.n != q.n:
        raise ShapeError(f"partitions of different sets: {p.n} vs {q.n}")


def partition_meet(p: Partition, q: Partition) -> Partition:
    return p.meet(q)


def is_refinement(p: Partition, q: Partition) -> bool:
    """True iff ``p`` refines ``q``."""
    return p.is_refinement_of(q)


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions of ``items`` via restricted growth strings."""
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(pos: int, maxval: int):
        if pos == n:
            groups: list[list] = [[] for _ in range(maxval + 1)]
            for item, g in zip(items, rgs):
                groups[g].append(item)
            yield groups
            return
        for v in range(maxval + 2):
            rgs[pos] = v
            yield from rec(pos + 1, max(maxval, v))

    rgs[0] = 0
    yield from rec(1, 0)


def all_partitions(n: int) -> Iterator[Partition]:
    for groups in set_partitions(list(range(n))):
        yield Partition(groups, n)


def coarsenings(p: Partition) -> list[Partition]:
    """Every partition that ``p`` refines, ``p`` included."""
    return [p.merge(groups) for groups in set_partitions(list(range(p.m)))]

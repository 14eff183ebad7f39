"""Partitions and binary relations on ``{0, ..., n-1}``.

A :class:`Partition` stores, for every element, the least element of its
block.  That normal form makes equality structural, so partitions hash and
compare in O(n) and can be used directly as lattice elements.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence


class SizeMismatch(ValueError):
    pass


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # keep the smaller index as root so reps come out canonical
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True

    def reps(self) -> tuple[int, ...]:
        return tuple(self.find(x) for x in range(len(self.parent)))


def _canonical(labels: Sequence) -> tuple[int, ...]:
    first: dict = {}
    out = []
    for x, lab in enumerate(labels):
        out.append(first.setdefault(lab, x))
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """An equivalence relation in least-representative form."""

    reps: tuple[int, ...]

    def __post_init__(self):
        reps = self.reps
        for x, r in enumerate(reps):
            if not 0 <= r <= x or reps[r] != r:
                raise ValueError(f"not a canonical representative map: {reps!r}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Partition whose blocks are the fibres of ``labels``."""
        return cls(_canonical(labels))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Blocks not listed become singletons; overlapping blocks are merged."""
        uf = _UnionFind(n)
        for block in blocks:
            block = list(block)
            for x in block:
                if not 0 <= x < n:
                    raise ValueError(f"element {x} outside 0..{n - 1}")
            for x in block[1:]:
                uf.union(block[0], x)
        return cls(uf.reps())

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        """Eq(pairs): the least equivalence relation containing ``pairs``."""
        uf = _UnionFind(n)
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair {(a, b)} outside 0..{n - 1}")
            uf.union(a, b)
        return cls(uf.reps())

    @classmethod
    def bottom(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def top(cls, n: int) -> "Partition":
        return cls((0,) * n)

    # -- basic queries ----------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.reps)

    def rep(self, x: int) -> int:
        return self.reps[x]

    def related(self, x: int, y: int) -> bool:
        return self.reps[x] == self.reps[y]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.reps):
            out.setdefault(r, []).append(x)
        return list(out.values())

    def num_blocks(self) -> int:
        return sum(1 for x, r in enumerate(self.reps) if x == r)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """All ordered pairs of the relation, including the diagonal."""
        for block in self.blocks():
            yield from product(block, repeat=2)

    def is_bottom(self) -> bool:
        return all(x == r for x, r in enumerate(self.reps))

    def is_top(self) -> bool:
        return not any(self.reps)

    def __le__(self, other: "Partition") -> bool:
        """Refinement order: ``self`` is contained in ``other``."""
        _check(self, other)
        o = other.reps
        return all(o[x] == o[r] for x, r in enumerate(self.reps))

    def __lt__(self, other: "Partition") -> bool:
        return self != other and self <= other

    def __ge__(self, other: "Partition") -> bool:
        return other <= self

    def __gt__(self, other: "Partition") -> bool:
        return other < self

    def __and__(self, other: "Partition") -> "Partition":
        return partition_meet(self, other)

    def __or__(self, other: "Partition") -> "Partition":
        return partition_join(self, other)

    def __len__(self) -> int:
        return len(self.reps)

    def __str__(self) -> str:
        return "|" + "|".join(",".join(map(str, b)) for b in self.blocks()) + "|"

    def to_relation(self) -> "BinaryRelation":
        return BinaryRelation(self.size, frozenset(self.pairs()))


def _check(p, q):
    if p.size != q.size:
        raise SizeMismatch(f"sizes differ: {p.size} != {q.size}")


def partition_meet(p: Partition, q: Partition) -> Partition:
    _check(p, q)
    return Partition.from_labels(list(zip(p.reps, q.reps)))


def partition_join(p: Partition, q: Partition) -> Partition:
    _check(p, q)
    uf = _UnionFind(p.size)
    for x in range(p.size):
        uf.union(x, p.reps[x])
        uf.union(x, q.reps[x])
    return Partition(uf.reps())


def join_all(parts: Iterable[Partition], n: int) -> Partition:
    out = Partition.bottom(n)
    for p in parts:
        out = partition_join(out, p)
    return out


def meet_all(parts: Iterable[Partition], n: int) -> Partition:
    out = Partition.top(n)
    for p in parts:
        out = partition_meet(out, p)
    return out


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of an n-set, via restricted growth strings."""
    if n == 0:
        yield Partition(())
        return
    rgs = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield Partition.from_labels(rgs)
            return
        for v in range(m + 2):
            rgs[i] = v
            yield from rec(i + 1, max(m, v))

    rgs[0] = 0
    yield from rec(1, 0)


@dataclass(frozen=True)
class BinaryRelation:
    size: int
    pairs: frozenset

    def __post_init__(self):
        n = self.size
        for a, b in self.pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair {(a, b)} outside 0..{n - 1}")

    @classmethod
    def identity(cls, n: int) -> "BinaryRelation":
        return cls(n, frozenset((x, x) for x in range(n)))

    @classmethod
    def full(cls, n: int) -> "BinaryRelation":
        return cls(n, frozenset(product(range(n), repeat=2)))

    @classmethod
    def empty(cls, n: int) -> "BinaryRelation":
        return cls(n, frozenset())

    @classmethod
    def of(cls, rel) -> "BinaryRelation":
        return rel.to_relation() if isinstance(rel, Partition) else rel

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def is_reflexive(self) -> bool:
        return all((x, x) in self.pairs for x in range(self.size))

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)

    def is_transitive(self) -> bool:
        return relation_compose(self, self).pairs <= self.pairs

    def issubset(self, other) -> bool:
        return self.pairs <= BinaryRelation.of(other).pairs

    def transitive_closure(self) -> Partition:
        """Eq of the relation; equals the transitive closure when the
        relation is reflexive and symmetric."""
        return Partition.from_pairs(self.size, self.pairs)


def relation_compose(r, s) -> BinaryRelation:
    """``r ∘ s``: first an r-step, then an s-step."""
    r, s = BinaryRelation.of(r), BinaryRelation.of(s)
    if r.size != s.size:
        raise SizeMismatch(f"sizes differ: {r.size} != {s.size}")
    succ: dict[int, list[int]] = {}
    for b, c in s.pairs:
        succ.setdefault(b, []).append(c)
    return BinaryRelation(
        r.size, frozenset((a, c) for a, b in r.pairs for c in succ.get(b, ()))
    )


def relation_intersect(r, s) -> BinaryRelation:
    r, s = BinaryRelation.of(r), BinaryRelation.of(s)
    if r.size != s.size:
        raise SizeMismatch(f"sizes differ: {r.size} != {s.size}")
    return BinaryRelation(r.size, r.pairs & s.pairs)

"""Finite algebras given by operation tables, and their congruences."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .partition import Partition, _UnionFind, all_partitions, partition_join

# Direct enumeration of all partitions is used up to this size (Bell(8) = 4140).
ENUMERATION_LIMIT = 8
DEFAULT_CONGRUENCE_BUDGET = 100_000


class BudgetExceeded(RuntimeError):
    pass


class NotACongruence(ValueError):
    pass


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    table: np.ndarray = field(repr=False, compare=False)

    def __call__(self, *args: int) -> int:
        return int(self.table[args]) if args else int(self.table[()])


class FiniteAlgebra:
    """A universe ``{0..n-1}`` with finitary operations.

    Tables may be given as nested lists or flat row-major lists of length
    ``n**arity``.  Zero operations is allowed (a pure set).
    """

    def __init__(self, size: int, operations: Iterable = ()):
        if size < 1:
            raise ValueError("universe must be nonempty")
        self.size = size
        ops = []
        for op in operations:
            if isinstance(op, Operation):
                name, arity, table = op.name, op.arity, op.table
            else:
                name, arity, table = op
            table = np.asarray(table, dtype=np.int64)
            if table.size != size**arity:
                raise ValueError(
                    f"operation {name!r}: table has {table.size} entries, "
                    f"expected {size}**{arity} = {size**arity}"
                )
            table = table.reshape((size,) * arity)
            if table.size and (table.min() < 0 or table.max() >= size):
                raise ValueError(f"operation {name!r}: entries outside 0..{size - 1}")
            table.setflags(write=False)
            ops.append(Operation(name, arity, table))
        self.operations: tuple[Operation, ...] = tuple(ops)

    @classmethod
    def set_only(cls, size: int) -> "FiniteAlgebra":
        return cls(size, ())

    def __repr__(self) -> str:
        sig = ", ".join(f"{op.name}/{op.arity}" for op in self.operations)
        return f"FiniteAlgebra(size={self.size}, ops=[{sig}])"

    def _translations(self, a: int, b: int):
        """Yield the image arrays (f(..a..), f(..b..)) over all positions."""
        for op in self.operations:
            if op.arity == 0:
                continue
            for j in range(op.arity):
                ta = np.take(op.table, a, axis=j).ravel()
                tb = np.take(op.table, b, axis=j).ravel()
                yield ta, tb


def _check_size(alg: FiniteAlgebra, p: Partition):
    if p.size != alg.size:
        raise ValueError(f"partition on {p.size} elements, algebra has {alg.size}")


def is_congruence(alg: FiniteAlgebra, p: Partition) -> bool:
    _check_size(alg, p)
    reps = np.asarray(p.reps)
    for x, r in enumerate(p.reps):
        if x == r:
            continue
        for ta, tb in alg._translations(x, r):
            if not np.array_equal(reps[ta], reps[tb]):
                return False
    return True


def cg(alg: FiniteAlgebra, seed: Iterable[tuple[int, int]] = ()) -> Partition:
    """Least congruence containing the seed pairs.

    Every pair merged by union-find is pushed through all one-position
    translations; this reaches the full congruence because any
    coordinatewise-related tuple pair is linked by single-coordinate steps.
    """
    n = alg.size
    uf = _UnionFind(n)
    work = []
    for a, b in seed:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"pair {(a, b)} outside 0..{n - 1}")
        if uf.union(a, b):
            work.append((a, b))
    while work:
        a, b = work.pop()
        for ta, tb in alg._translations(a, b):
            for c, d in zip(ta.tolist(), tb.tolist()):
                if c != d and uf.union(c, d):
                    work.append((c, d))
    return Partition(uf.reps())


def cg_partition(alg: FiniteAlgebra, p: Partition) -> Partition:
    _check_size(alg, p)
    return cg(alg, ((x, r) for x, r in enumerate(p.reps) if x != r))


def principal_congruences(alg: FiniteAlgebra) -> list[Partition]:
    return [cg(alg, [(a, b)]) for a, b in combinations(range(alg.size), 2)]


def all_congruences(alg: FiniteAlgebra, budget: int = DEFAULT_CONGRUENCE_BUDGET) -> list[Partition]:
    """Con(A), sorted by number of blocks (descending) then representatives.

    Small universes are enumerated directly; larger ones are the join
    closure of the principal congruences.
    """
    n = alg.size
    if n <= ENUMERATION_LIMIT:
        found = [p for p in all_partitions(n) if is_congruence(alg, p)]
        if len(found) > budget:
            raise BudgetExceeded(f"{len(found)} congruences exceed budget {budget}")
    else:
        seen = {Partition.bottom(n)}
        principals = list(dict.fromkeys(principal_congruences(alg)))
        frontier = list(seen)
        while frontier:
            nxt = []
            for p in frontier:
                for q in principals:
                    j = partition_join(p, q)
                    if j not in seen:
                        seen.add(j)
                        nxt.append(j)
                        if len(seen) > budget:
                            raise BudgetExceeded(
                                f"more than {budget} congruences on {n} elements"
                            )
            frontier = nxt
        found = list(seen)
    return sorted(found, key=lambda p: (-p.num_blocks(), p.reps))


def quotient(alg: FiniteAlgebra, theta: Partition) -> tuple[FiniteAlgebra, list[int]]:
    """A/θ together with the map from elements of A to class indices."""
    if not is_congruence(alg, theta):
        raise NotACongruence(f"{theta} is not a congruence")
    reps = sorted(set(theta.reps))
    index = {r: i for i, r in enumerate(reps)}
    cls = [index[r] for r in theta.reps]
    m = len(reps)
    ops = []
    cls_arr = np.asarray(cls)
    for op in alg.operations:
        sub = op.table[np.ix_(*[reps] * op.arity)] if op.arity else op.table
        ops.append((op.name, op.arity, cls_arr[sub]))
    return FiniteAlgebra(m, ops), cls


def push_partition(p: Partition, cls: Sequence[int], m: int) -> Partition:
    """Image of a partition lying above the kernel of ``cls`` in the quotient."""
    return Partition.from_pairs(m, ((cls[x], cls[r]) for x, r in enumerate(p.reps)))

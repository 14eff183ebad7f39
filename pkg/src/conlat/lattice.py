"""Finite lattices as explicit order/meet/join tables.

Elements are indices ``0..n-1``; ``labels`` carries whatever the element
stands for (a partition, a figure name, ...).  Predicates are vectorised
over numpy tables, embedding search is a backtracking matcher.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .partition import Partition, partition_join, partition_meet

DEFAULT_ELEMENT_BUDGET = 10_000


class NotALattice(ValueError):
    pass


class ClosureBudgetExceeded(RuntimeError):
    pass


def _transitive_closure(leq: np.ndarray) -> np.ndarray:
    leq = leq.copy()
    for k in range(len(leq)):
        leq |= np.outer(leq[:, k], leq[k, :])
    return leq


class FiniteLattice:
    def __init__(self, labels: Sequence, leq, meet, join, names: Sequence[str] | None = None):
        self.labels = list(labels)
        self.leq = np.asarray(leq, dtype=bool)
        self.meet = np.asarray(meet, dtype=np.int64)
        self.join = np.asarray(join, dtype=np.int64)
        self.names = list(names) if names is not None else [str(x) for x in self.labels]
        for arr in (self.leq, self.meet, self.join):
            arr.setflags(write=False)
        self._bottom = int(np.flatnonzero(self.leq.all(axis=1))[0])
        self._top = int(np.flatnonzero(self.leq.all(axis=0))[0])

    # -- construction -----------------------------------------------------
    @classmethod
    def from_order(cls, labels: Sequence, leq, names=None) -> "FiniteLattice":
        """Build from a partial order matrix; raises NotALattice otherwise."""
        leq = np.asarray(leq, dtype=bool)
        n = len(leq)
        if n == 0:
            raise NotALattice("empty poset")
        if not leq.diagonal().all():
            raise NotALattice("order is not reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            raise NotALattice("order is not antisymmetric")
        if not np.array_equal(_transitive_closure(leq), leq):
            raise NotALattice("order is not transitive")
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        for x in range(n):
            for y in range(x, n):
                lower = np.flatnonzero(leq[:, x] & leq[:, y])
                glb = [g for g in lower if leq[lower, g].all()]
                upper = np.flatnonzero(leq[x, :] & leq[y, :])
                lub = [g for g in upper if leq[g, upper].all()]
                if len(glb) != 1 or len(lub) != 1:
                    lx = names[x] if names else labels[x]
                    ly = names[y] if names else labels[y]
                    what = "meet" if len(glb) != 1 else "join"
                    raise NotALattice(f"no {what} for {lx!s} and {ly!s}")
                meet[x, y] = meet[y, x] = glb[0]
                join[x, y] = join[y, x] = lub[0]
        return cls(labels, leq, meet, join, names)

    @classmethod
    def from_covers(cls, labels: Sequence, covers: Iterable[tuple[int, int]], names=None) -> "FiniteLattice":
        n = len(labels)
        leq = np.eye(n, dtype=bool)
        for a, b in covers:
            leq[a, b] = True
        return cls.from_order(labels, _transitive_closure(leq), names)

    @classmethod
    def chain(cls, n: int) -> "FiniteLattice":
        return cls.from_covers(list(range(n)), [(i, i + 1) for i in range(n - 1)])

    # -- basic structure --------------------------------------------------
    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteLattice({len(self)} elements)"

    @property
    def bottom(self) -> int:
        return self._bottom

    @property
    def top(self) -> int:
        return self._top

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs (a, b) with a < b, sorted."""
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        # a < b is a cover iff no c with a < c < b
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        cov = lt & ~between
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(cov))]

    def heights(self) -> list[int]:
        """Length of the longest chain from the bottom to each element."""
        n = len(self)
        order = sorted(range(n), key=lambda x: int(self.leq[:, x].sum()))
        h = [0] * n
        up: dict[int, list[int]] = {}
        for a, b in self.covers():
            up.setdefault(a, []).append(b)
        for x in order:
            for y in up.get(x, ()):
                h[y] = max(h[y], h[x] + 1)
        return h

    def sublattice_closure(self, elements: Iterable[int]) -> list[int]:
        found = set(elements)
        frontier = list(found)
        while frontier:
            nxt = []
            for x in frontier:
                for y in list(found):
                    for z in (int(self.meet[x, y]), int(self.join[x, y])):
                        if z not in found:
                            found.add(z)
                            nxt.append(z)
            frontier = nxt
        return sorted(found)

    def sublattice(self, elements: Iterable[int]) -> "FiniteLattice":
        idx = self.sublattice_closure(elements)
        pos = {x: i for i, x in enumerate(idx)}
        sel = np.asarray(idx)
        meet = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.meet[np.ix_(sel, sel)])
        join = np.vectorize(pos.__getitem__, otypes=[np.int64])(self.join[np.ix_(sel, sel)])
        return FiniteLattice(
            [self.labels[i] for i in idx],
            self.leq[np.ix_(sel, sel)],
            meet,
            join,
            [self.names[i] for i in idx],
        )

    def interval(self, lo: int, hi: int) -> "FiniteLattice":
        members = [x for x in range(len(self)) if self.leq[lo, x] and self.leq[x, hi]]
        return self.sublattice(members)

    def dual(self) -> "FiniteLattice":
        return FiniteLattice(self.labels, self.leq.T, self.join, self.meet, self.names)

    def check_axioms(self) -> list[str]:
        """Return a list of violated lattice axioms (empty when valid)."""
        problems = []
        leq, meet, join = self.leq, self.meet, self.join
        n = len(self)
        idx = np.arange(n)
        if not leq.diagonal().all():
            problems.append("leq not reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            problems.append("leq not antisymmetric")
        if not np.array_equal(_transitive_closure(leq), leq):
            problems.append("leq not transitive")
        if not (np.array_equal(meet, meet.T) and np.array_equal(join, join.T)):
            problems.append("meet/join not commutative")
        if not (leq[meet, idx[None, :]].all() and leq[meet, idx[:, None]].all()):
            problems.append("meet is not a lower bound")
        if not (leq[idx[None, :], join].all() and leq[idx[:, None], join].all()):
            problems.append("join is not an upper bound")
        for x in range(n):
            for y in range(n):
                lower = leq[:, x] & leq[:, y]
                if not leq[lower, meet[x, y]].all():
                    problems.append(f"meet({x},{y}) not greatest")
                    break
                upper = leq[x, :] & leq[y, :]
                if not leq[join[x, y], upper].all():
                    problems.append(f"join({x},{y}) not least")
                    break
        if not (join[idx[:, None], meet] == idx[:, None]).all():
            problems.append("absorption x v (x ^ y) = x fails")
        if not (meet[idx[:, None], join] == idx[:, None]).all():
            problems.append("absorption x ^ (x v y) = x fails")
        return problems


# -- lattices of partitions -------------------------------------------------
def lattice_from_partitions(
    gens: Mapping[str, Partition] | Iterable[Partition],
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> FiniteLattice:
    """Sublattice of the partition lattice generated by ``gens``.

    ``gens`` may be a mapping from names to partitions; every element of the
    result then gets a name built from the shortest generating expression.
    """
    if isinstance(gens, Mapping):
        named = list(gens.items())
    else:
        named = [(str(p), p) for p in gens]
    if not named:
        raise ValueError("need at least one generator")
    size = named[0][1].size
    if any(p.size != size for _, p in named):
        raise ValueError("generators live on different sets")
    names: dict[Partition, str] = {}
    order: list[Partition] = []
    for name, p in named:
        if p not in names:
            names[p] = name
            order.append(p)
    frontier = list(order)
    while frontier:
        nxt = []
        for p in frontier:
            for q in list(order):
                for op, sym in ((partition_meet, "&"), (partition_join, "|")):
                    r = op(p, q)
                    if r not in names:
                        names[r] = f"({names[p]} {sym} {names[q]})"
                        order.append(r)
                        nxt.append(r)
                        if len(order) > budget:
                            raise ClosureBudgetExceeded(
                                f"generated sublattice exceeds {budget} elements"
                            )
        frontier = nxt
    return lattice_of_partitions(order, [names[p] for p in order])


def lattice_of_partitions(parts: Sequence[Partition], names: Sequence[str] | None = None) -> FiniteLattice:
    """Tables for a family of partitions already closed under meet and join."""
    perm = sorted(range(len(parts)), key=lambda i: (-parts[i].num_blocks(), parts[i].reps))
    parts = [parts[i] for i in perm]
    if names is not None:
        names = [names[i] for i in perm]
    pos = {p: i for i, p in enumerate(parts)}
    n = len(parts)
    leq = np.zeros((n, n), dtype=bool)
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(parts):
        for j in range(i, n):
            q = parts[j]
            leq[i, j] = p <= q
            leq[j, i] = q <= p
            try:
                m, jn = pos[partition_meet(p, q)], pos[partition_join(p, q)]
            except KeyError:
                raise NotALattice("family is not closed under meet and join") from None
            meet[i, j] = meet[j, i] = m
            join[i, j] = join[j, i] = jn
    return FiniteLattice(parts, leq, meet, join, names)


# -- predicates -------------------------------------------------------------
def is_modular(l: FiniteLattice) -> bool:
    """x <= z implies x v (y ^ z) = (x v y) ^ z."""
    M, J, leq = l.meet, l.join, l.leq
    for x in range(len(l)):
        zs = np.flatnonzero(leq[x])
        lhs = J[x][M[:, zs]]
        rhs = M[J[x][:, None], zs[None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_distributive(l: FiniteLattice) -> bool:
    M, J = l.meet, l.join
    for x in range(len(l)):
        if not np.array_equal(M[x][J], J[M[x][:, None], M[x][None, :]]):
            return False
    return True


def is_meet_semidistributive(l: FiniteLattice) -> bool:
    """x ^ y = x ^ z implies x ^ (y v z) = x ^ y."""
    M, J = l.meet, l.join
    for x in range(len(l)):
        mx = M[x]
        same = mx[:, None] == mx[None, :]
        ok = mx[J] == mx[:, None]
        if (same & ~ok).any():
            return False
    return True


def is_join_semidistributive(l: FiniteLattice) -> bool:
    return is_meet_semidistributive(l.dual())


def is_semidistributive(l: FiniteLattice) -> bool:
    return is_meet_semidistributive(l) and is_join_semidistributive(l)


def satisfies_whitman(l: FiniteLattice) -> bool:
    """(W): a^b <= c v d implies a <= cvd or b <= cvd or a^b <= c or a^b <= d."""
    M, J, leq = l.meet, l.join, l.leq
    n = len(l)
    for a, b in product(range(n), repeat=2):
        m = M[a, b]
        below = leq[m][J]  # m <= c v d, indexed by (c, d)
        ok = leq[a][J] | leq[b][J] | leq[m][:, None] | leq[m][None, :]
        if (below & ~ok).any():
            return False
    return True


def is_projective_finite(l: FiniteLattice) -> bool:
    """Finite projectivity: semidistributive and (W)."""
    return is_semidistributive(l) and satisfies_whitman(l)


# -- embeddings -------------------------------------------------------------
@dataclass(frozen=True)
class LatticeEmbedding:
    map: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.map[i]

    def __len__(self) -> int:
        return len(self.map)

    def verify(self, pattern: FiniteLattice, host: FiniteLattice) -> bool:
        f = np.asarray(self.map)
        if len(f) != len(pattern) or len(set(self.map)) != len(f):
            return False
        return bool(
            np.array_equal(f[pattern.meet], host.meet[np.ix_(f, f)])
            and np.array_equal(f[pattern.join], host.join[np.ix_(f, f)])
        )

    def inverse(self) -> "LatticeEmbedding":
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return LatticeEmbedding(tuple(inv))

    def compose(self, other: "LatticeEmbedding") -> "LatticeEmbedding":
        """``other`` after ``self``."""
        return LatticeEmbedding(tuple(other.map[j] for j in self.map))


def _signature(l: FiniteLattice) -> list[tuple[int, int, int, int]]:
    h = l.heights()
    cov = l.covers()
    down = [0] * len(l)
    up = [0] * len(l)
    for a, b in cov:
        up[a] += 1
        down[b] += 1
    below = l.leq.sum(axis=0)
    return [(h[x], down[x], up[x], int(below[x])) for x in range(len(l))]


def _search(pattern: FiniteLattice, host: FiniteLattice, bijective: bool, find_all: bool = False):
    n, m = len(pattern), len(host)
    if n > m or (bijective and n != m):
        return []
    P_meet, P_join, P_leq = pattern.meet, pattern.join, pattern.leq
    H_meet, H_join, H_leq = host.meet, host.join, host.leq

    # linear extension: bottom-up by down-set size, ties by index
    order = sorted(range(n), key=lambda x: (int(P_leq[:, x].sum()), x))
    rank = {x: i for i, x in enumerate(order)}
    # constraints that become checkable when element order[k] is placed:
    # (a, b, c, is_meet) with c = a op b and max rank among a, b, c == k
    checks: list[list[tuple[int, int, int, bool]]] = [[] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            for c, is_meet in ((int(P_meet[a, b]), True), (int(P_join[a, b]), False)):
                if c in (a, b):
                    continue
                k = max(rank[a], rank[b], rank[c])
                checks[k].append((a, b, c, is_meet))
    # placed elements order-relations, checked pairwise
    if bijective:
        psig, hsig = _signature(pattern), _signature(host)
        if sorted(psig) != sorted(hsig):
            return []
        candidates = [[y for y in range(m) if hsig[y] == psig[x]] for x in range(n)]
    else:
        pdown = P_leq.sum(axis=0)
        pup = P_leq.sum(axis=1)
        hdown = H_leq.sum(axis=0)
        hup = H_leq.sum(axis=1)
        candidates = [[y for y in range(m) if hdown[y] >= pdown[x] and hup[y] >= pup[x]] for x in range(n)]

    f = [-1] * n
    used = [False] * m
    results = []

    def consistent(k: int, x: int, y: int) -> bool:
        for j in range(k):
            q = order[j]
            fq = f[q]
            if bool(P_leq[x, q]) != bool(H_leq[y, fq]) or bool(P_leq[q, x]) != bool(H_leq[fq, y]):
                return False
        f[x] = y
        for a, b, c, is_meet in checks[k]:
            table = H_meet if is_meet else H_join
            if table[f[a], f[b]] != f[c]:
                f[x] = -1
                return False
        return True

    def rec(k: int) -> bool:
        if k == n:
            results.append(LatticeEmbedding(tuple(f)))
            return not find_all
        x = order[k]
        for y in candidates[x]:
            if used[y]:
                continue
            if consistent(k, x, y):
                used[y] = True
                if rec(k + 1):
                    return True
                used[y] = False
                f[x] = -1
        return False

    rec(0)
    return results


def find_embedding(pattern: FiniteLattice, host: FiniteLattice) -> LatticeEmbedding | None:
    """A meet- and join-preserving injection of ``pattern`` into ``host``."""
    found = _search(pattern, host, bijective=False)
    return found[0] if found else None


def all_embeddings(pattern: FiniteLattice, host: FiniteLattice) -> list[LatticeEmbedding]:
    return _search(pattern, host, bijective=False, find_all=True)


def are_isomorphic(a: FiniteLattice, b: FiniteLattice) -> LatticeEmbedding | None:
    found = _search(a, b, bijective=True)
    return found[0] if found else None


# -- output -----------------------------------------------------------------
def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(l: FiniteLattice, labels: Sequence[str] | None = None, name: str = "L") -> str:
    """Graphviz source of the Hasse diagram (covers only, drawn bottom-up)."""
    labels = list(labels) if labels is not None else l.names
    h = l.heights()
    lines = [f'digraph "{_dot_escape(name)}" {{', "  rankdir=BT;", "  node [shape=plaintext];"]
    for x in range(len(l)):
        lines.append(f'  n{x} [label="{_dot_escape(str(labels[x]))}"];')
    for level in sorted(set(h)):
        members = " ".join(f"n{x};" for x in range(len(l)) if h[x] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in l.covers():
        lines.append(f"  n{a} -> n{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"

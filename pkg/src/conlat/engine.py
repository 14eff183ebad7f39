"""The doubling construction A(α) ≤ A², lifted congruences, the ascending
congruence chains, and the classification of the sublattices they generate.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import catalog
from .algebra import BudgetExceeded, FiniteAlgebra, all_congruences, cg, is_congruence, quotient, push_partition
from .lattice import (
    DEFAULT_ELEMENT_BUDGET,
    FiniteLattice,
    LatticeEmbedding,
    are_isomorphic,
    lattice_from_partitions,
)
from .partition import BinaryRelation, Partition, partition_join, partition_meet

DEFAULT_UNIVERSE_BUDGET = 20_000
# cap on entries of a single coordinatewise operation table
DEFAULT_TABLE_BUDGET = 4_000_000


class EngineError(ValueError):
    pass


class PreconditionError(EngineError):
    """The labelled congruences do not satisfy a named hypothesis."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class TheoremViolation(RuntimeError):
    """Chain condition and lattice isomorphism type disagree.

    ``lattice`` carries the generated sublattice for reporting.
    """

    def __init__(self, message: str, lattice: FiniteLattice | None = None):
        super().__init__(message)
        self.lattice = lattice


# -- A^n(α) -------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SubpowerContext:
    base: FiniteAlgebra
    alpha: Partition
    n: int
    universe: tuple[tuple[int, ...], ...]
    algebra: FiniteAlgebra = field(repr=False)
    tuple_index: Mapping[tuple[int, ...], int] = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.universe)

    def lifted(self, theta: Partition, side: int) -> Partition:
        key = (theta, side)
        if key not in self._cache:
            self._cache[key] = lift(self, theta, side).partition
        return self._cache[key]

    def eta(self, side: int) -> Partition:
        return self.lifted(Partition.bottom(self.base.size), side)

    def tuple_partition(self, p: Partition) -> list[list[tuple[int, ...]]]:
        return [[self.universe[x] for x in b] for b in p.blocks()]


def build_subpower(
    alg: FiniteAlgebra,
    alpha: Partition,
    n: int = 2,
    budget: int = DEFAULT_UNIVERSE_BUDGET,
) -> SubpowerContext:
    """A^n(α): tuples whose entries are pairwise α-related, in lexicographic order."""
    if n < 2:
        raise ValueError("power must be at least 2")
    if alpha.size != alg.size:
        raise ValueError(f"partition on {alpha.size} elements, algebra has {alg.size}")
    if not is_congruence(alg, alpha):
        raise PreconditionError("alpha is not a congruence")
    total = sum(len(b) ** n for b in alpha.blocks())
    if total > budget:
        raise BudgetExceeded(f"A^{n}(alpha) has {total} elements, budget {budget}")
    universe = tuple(sorted(t for b in alpha.blocks() for t in product(b, repeat=n)))
    index = {t: i for i, t in enumerate(universe)}
    m = alg.size
    U = np.asarray(universe, dtype=np.int64)
    lookup = np.full(m**n, -1, dtype=np.int64)
    codes = np.zeros(len(universe), dtype=np.int64)
    for c in range(n):
        codes = codes * m + U[:, c]
    lookup[codes] = np.arange(len(universe))
    ops = []
    N = len(universe)
    for op in alg.operations:
        if N**op.arity > DEFAULT_TABLE_BUDGET:
            raise BudgetExceeded(
                f"operation {op.name!r} on A^{n}(alpha) needs {N}**{op.arity} entries"
            )
        if op.arity == 0:
            v = int(op.table[()])
            ops.append((op.name, 0, [index[(v,) * n]]))
            continue
        code = np.zeros((N,) * op.arity, dtype=np.int64)
        for c in range(n):
            code = code * m + op.table[np.ix_(*[U[:, c]] * op.arity)]
        ops.append((op.name, op.arity, lookup[code]))
    return SubpowerContext(alg, alpha, n, universe, FiniteAlgebra(N, ops), index)


@dataclass(frozen=True)
class LiftedCongruence:
    side: int
    source: Partition
    partition: Partition


def lift(ctx: SubpowerContext, theta: Partition, side: int) -> LiftedCongruence:
    """θ_side: tuples related when their ``side`` entries are θ-related."""
    if not 0 <= side < ctx.n:
        raise ValueError(f"side must be in 0..{ctx.n - 1}")
    if theta.size != ctx.base.size:
        raise ValueError(f"partition on {theta.size} elements, algebra has {ctx.base.size}")
    if not is_congruence(ctx.base, theta):
        raise PreconditionError("not a congruence", str(theta))
    reps = theta.reps
    p = Partition.from_labels([reps[t[side]] for t in ctx.universe])
    return LiftedCongruence(side, theta, p)


# -- doubling identities ----------------------------------------------------
@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "skipped"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def _witness(ctx: SubpowerContext, p: Partition, q: Partition) -> str:
    """A pair related in exactly one of p, q."""
    for x in range(p.size):
        for y in range(x + 1, p.size):
            if p.related(x, y) != q.related(x, y):
                return f"{ctx.universe[x]} ~ {ctx.universe[y]}"
    return ""


def verify_doubling_identities(ctx: SubpowerContext, thetas: Iterable[Partition]) -> list[Check]:
    """The three doubling identities in Con(A(γ)), with γ = ctx.alpha."""
    gamma = ctx.alpha
    e0, e1 = ctx.eta(0), ctx.eta(1)
    out = []
    g0 = ctx.lifted(gamma, 0)
    j = e0 | e1
    out.append(Check("gamma_0 = eta_0 v eta_1", "pass" if g0 == j else "fail", _witness(ctx, g0, j)))
    for k, th in enumerate(thetas):
        t0, t1 = ctx.lifted(th, 0), ctx.lifted(th, 1)
        tag = f"theta[{k}]={th}"
        if gamma <= th:
            out.append(Check(f"{tag}: theta_0 = theta_1", "pass" if t0 == t1 else "fail", _witness(ctx, t0, t1)))
        else:
            out.append(Check(f"{tag}: theta_0 = theta_1", "skipped", "gamma not below theta"))
        for side, ti in ((0, t0), (1, t1)):
            rhs = ctx.eta(side) | (t0 & t1)
            out.append(Check(
                f"{tag}: theta_{side} = eta_{side} v (theta_0 ^ theta_1)",
                "pass" if ti == rhs else "fail",
                _witness(ctx, ti, rhs),
            ))
    return out


# -- congruence chains ----------------------------------------------------------
def _matrix(p: Partition) -> np.ndarray:
    r = np.asarray(p.reps)
    return r[:, None] == r[None, :]


def tolerance_step(outer: Partition, bridge: Partition, x: Partition) -> BinaryRelation:
    """(bridge ∘ x ∘ bridge) ∩ outer as a relation."""
    B = _matrix(bridge).astype(np.int64)
    rel = ((B @ _matrix(x).astype(np.int64) @ B) > 0) & _matrix(outer)
    a, b = np.nonzero(rel)
    return BinaryRelation(outer.size, frozenset(zip(a.tolist(), b.tolist())))


@dataclass(frozen=True)
class ChainResult:
    chain: tuple[Partition, ...]
    stabilized_at: int | None
    reached_top_of_interval: bool
    tolerances: tuple[BinaryRelation, ...] = field(repr=False, default=())
    outer: Partition | None = field(repr=False, default=None)

    @property
    def exhausted(self) -> bool:
        return self.stabilized_at is None

    def __getitem__(self, i: int) -> Partition:
        """γ^i, constant past the stabilization point."""
        if i < len(self.chain):
            return self.chain[i]
        if self.exhausted:
            raise IndexError(i)
        return self.chain[-1]


def congruence_chain(
    alg: FiniteAlgebra,
    outer: Partition,
    bridge: Partition,
    seed: Partition,
    budget: int | None = None,
) -> ChainResult:
    """Iterate x -> Cg((bridge ∘ x ∘ bridge) ∩ outer) from ``seed``.

    The chain is recorded up to and including the first repeat (so
    ``chain[k] == chain[k+1]`` is not stored twice): ``stabilized_at`` is the
    least k with x_k = x_{k+1}.  ``budget`` defaults to |A|² steps; running
    out of it leaves ``stabilized_at`` as None.
    """
    for name, p in (("outer", outer), ("bridge", bridge), ("seed", seed)):
        if p.size != alg.size:
            raise ValueError(f"{name}: partition on {p.size} elements, algebra has {alg.size}")
        if not is_congruence(alg, p):
            raise PreconditionError(f"{name} is not a congruence", str(p))
    if not seed <= outer:
        raise PreconditionError("seed must lie below outer", f"{seed} vs {outer}")
    if budget is None:
        budget = alg.size**2
    chain = [seed]
    tols = []
    x = seed
    for _ in range(budget):
        t = tolerance_step(outer, bridge, x)
        tols.append(t)
        nxt = cg(alg, t.pairs)
        if nxt == x:
            return ChainResult(tuple(chain), len(chain) - 1, x == outer, tuple(tols), outer)
        chain.append(nxt)
        x = nxt
    return ChainResult(tuple(chain), None, False, tuple(tols), outer)


# -- classification ---------------------------------------------------------
class Family(str, enum.Enum):
    M = "M"
    K = "K"
    S = "S"
    S_STAR = "S_star"
    D13 = "D13"
    K_INF_UNREACHED = "K_inf_unreached"
    S_INF_UNREACHED = "S_inf_unreached"


@dataclass
class Classification:
    family: Family
    index: int | None
    generated: FiniteLattice
    witness: LatticeEmbedding | None
    chain: ChainResult | None
    context: SubpowerContext = field(repr=False)
    labels: dict[str, Partition] = field(default_factory=dict, repr=False)
    quotient_by: Partition | None = None

    @property
    def name(self) -> str:
        if self.index is None:
            return self.family.value
        return f"{self.family.value}_{self.index}"

    @property
    def catalog_entry(self) -> catalog.CatalogEntry | None:
        if self.family in (Family.K_INF_UNREACHED, Family.S_INF_UNREACHED):
            return None
        if self.family is Family.D13:
            return catalog.build("D13")
        return catalog.build(self.family.value, self.index)

    def landmark_names(self) -> list[str]:
        """Catalog label of each generated element, via the witness."""
        entry = self.catalog_entry
        if entry is None or self.witness is None:
            return list(self.generated.names)
        return [entry.lattice.names[self.witness[x]] for x in range(len(self.generated))]


def _require_congruences(alg: FiniteAlgebra, labels: Mapping[str, Partition]):
    for name, p in labels.items():
        if p.size != alg.size:
            raise PreconditionError(f"{name} has the wrong size", f"{p.size} != {alg.size}")
        if not is_congruence(alg, p):
            raise PreconditionError(f"{name} is not a congruence", str(p))


def _pentagon_problem(gamma: Partition, alpha: Partition, beta: Partition) -> str | None:
    """None when γ < α, α∧β = γ∧β and α∨β = γ∨β (then the five are an N5)."""
    if gamma == alpha:
        return "not an N5: gamma = alpha"
    if not gamma <= alpha:
        gen = lattice_from_partitions([gamma, alpha, beta])
        from .lattice import is_modular

        if is_modular(gen):
            return "not an N5: modular quintuple"
        return "not an N5: gamma < alpha fails"
    if (alpha & beta) != (gamma & beta):
        return "not an N5: alpha ^ beta != gamma ^ beta"
    if (alpha | beta) != (gamma | beta):
        return "not an N5: alpha v beta != gamma v beta"
    return None


def _check_bounds(labels, zero: Partition, one: Partition):
    if "zero" in labels and labels["zero"] != zero:
        raise PreconditionError("zero label is not the bottom of the pattern", str(labels["zero"]))
    if "one" in labels and labels["one"] != one:
        raise PreconditionError("one label is not the top of the pattern", str(labels["one"]))


def _reduce(alg, labels: dict[str, Partition], bottom: Partition):
    """Pass to A/bottom so that the pattern's bottom becomes 0."""
    q, cls = quotient(alg, bottom)
    m = q.size
    return q, {k: push_partition(p, cls, m) for k, p in labels.items()}


def _match(gen: FiniteLattice, family: Family, index: int) -> LatticeEmbedding:
    entry = catalog.build(family.value, index)
    iso = are_isomorphic(gen, entry.lattice) if len(gen) == len(entry) else None
    if iso is None:
        found = catalog.identify(gen)
        what = f"{found[0]}_{found[1]}" if found and found[1] else (found[0] if found else "no catalog entry")
        raise TheoremViolation(
            f"chain predicts {family.value}_{index} ({len(entry)} elements) but the generated "
            f"lattice has {len(gen)} elements and matches {what}",
            gen,
        )
    return iso


def classify_n5(
    alg: FiniteAlgebra,
    n5: Mapping[str, Partition],
    *,
    relaxed: bool = False,
    chain_budget: int | None = None,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> Classification:
    """Classify the sublattice of Con(A(β)) generated by α₀, α₁, β₀, γ₀, γ₁.

    ``n5`` needs keys gamma, alpha, beta and may carry zero/one.  The
    pentagon's own bounds are used; by default its bottom must be 0_A, with
    ``relaxed`` the computation moves to A/(α∧β) instead.
    """
    labels = {k: n5[k] for k in ("gamma", "alpha", "beta") if k in n5}
    missing = {"gamma", "alpha", "beta"} - labels.keys()
    if missing:
        raise PreconditionError("missing labels", ", ".join(sorted(missing)))
    extra = {k: n5[k] for k in ("zero", "one") if k in n5}
    _require_congruences(alg, {**labels, **extra})
    g, a, b = labels["gamma"], labels["alpha"], labels["beta"]
    problem = _pentagon_problem(g, a, b)
    if problem:
        raise PreconditionError(problem)
    bottom = a & b
    _check_bounds(extra, bottom, a | b)
    quotient_by = None
    if not bottom.is_bottom():
        if not relaxed:
            raise PreconditionError(
                "alpha ^ beta = 0_A fails", f"pentagon bottom is {bottom} (use relaxed bounds)"
            )
        alg, labels = _reduce(alg, labels, bottom)
        g, a, b = labels["gamma"], labels["alpha"], labels["beta"]
        quotient_by = bottom
    ctx = build_subpower(alg, b)
    chain = congruence_chain(alg, a, b, g, chain_budget)
    gens = {
        "alpha_0": ctx.lifted(a, 0),
        "alpha_1": ctx.lifted(a, 1),
        "beta_0": ctx.lifted(b, 0),
        "gamma^0_0": ctx.lifted(g, 0),
        "gamma^0_1": ctx.lifted(g, 1),
    }
    gen = lattice_from_partitions(gens, element_budget)
    if chain.exhausted:
        return Classification(Family.K_INF_UNREACHED, None, gen, None, chain, ctx, labels, quotient_by)
    k = chain.stabilized_at
    family, index = (Family.K, k) if chain[k] == a else (Family.M, k + 1)
    iso = _match(gen, family, index)
    return Classification(family, index, gen, iso, chain, ctx, labels, quotient_by)


def n5_chain_prediction(chain: ChainResult) -> tuple[Family, int | None]:
    if chain.exhausted:
        return Family.K_INF_UNREACHED, None
    k = chain.stabilized_at
    return (Family.K, k) if chain[k] == chain.outer else (Family.M, k + 1)


def d2_chain_prediction(chain: ChainResult) -> tuple[Family, int | None]:
    if chain.exhausted:
        return Family.S_INF_UNREACHED, None
    k = chain.stabilized_at
    return (Family.S_STAR, k) if chain[k] == chain.outer else (Family.S, k + 1)


class D1Square(NamedTuple):
    lattice: FiniteLattice
    witness: LatticeEmbedding
    context: SubpowerContext


def _validate_pattern(name: str, labels: Mapping[str, Partition], expected: Mapping[str, Partition]):
    """Labels that may be omitted are filled in; given ones must agree."""
    out = dict(labels)
    for k, v in expected.items():
        if k in out and out[k] != v:
            raise PreconditionError(f"not a {name}: {k} label disagrees with the figure", f"{out[k]} != {v}")
        out[k] = v
    return out


def _embeds_as(entry_name: str, parts: Mapping[str, Partition]) -> str | None:
    """Check that label -> partition is an embedding of the catalog figure."""
    entry = catalog.build(entry_name)
    l = entry.lattice
    labs = l.names
    img = [parts[x] for x in labs]
    if len(set(img)) != len(img):
        dup = [labs[i] for i in range(len(img)) if img.index(img[i]) != i]
        return f"not a {entry_name}: labels collapse ({', '.join(dup)})"
    for i in range(len(l)):
        for j in range(i + 1, len(l)):
            if img[int(l.meet[i, j])] != (img[i] & img[j]):
                return f"not a {entry_name}: {labs[i]} ^ {labs[j]} != {labs[int(l.meet[i, j])]}"
            if img[int(l.join[i, j])] != (img[i] | img[j]):
                return f"not a {entry_name}: {labs[i]} v {labs[j]} != {labs[int(l.join[i, j])]}"
    return None


def _d1_parts(labels: Mapping[str, Partition]) -> dict[str, Partition]:
    a, g, b = labels["alpha"], labels["gamma"], labels["beta"]
    parts = _validate_pattern("D1", labels, {"mu": a | b, "delta": g | b})
    parts["0"], parts["1"] = a & g, a | g
    return parts


def generate_d1_square(
    alg: FiniteAlgebra,
    d1: Mapping[str, Partition],
    *,
    relaxed: bool = False,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> D1Square:
    """The sublattice of Con(A(β)) generated by α₀, α₁, γ₀, γ₁, β₀, matched to D₁₃."""
    need = {"alpha", "gamma", "beta"}
    if need - d1.keys():
        raise PreconditionError("missing labels", ", ".join(sorted(need - d1.keys())))
    _require_congruences(alg, dict(d1))
    parts = _d1_parts(d1)
    problem = _embeds_as("D1", parts)
    if problem:
        raise PreconditionError(problem)
    if not relaxed:
        if not parts["0"].is_bottom():
            raise PreconditionError("alpha ^ gamma = 0_A fails", str(parts["0"]))
        if not parts["1"].is_top():
            raise PreconditionError("alpha v gamma = 1_A fails", str(parts["1"]))
    labels = {k: parts[k] for k in ("alpha", "gamma", "beta")}
    if not parts["0"].is_bottom():
        alg, labels = _reduce(alg, labels, parts["0"])
    a, g, b = labels["alpha"], labels["gamma"], labels["beta"]
    ctx = build_subpower(alg, b)
    gens = {
        "alpha_0": ctx.lifted(a, 0),
        "alpha_1": ctx.lifted(a, 1),
        "gamma_0": ctx.lifted(g, 0),
        "gamma_1": ctx.lifted(g, 1),
        "beta_0": ctx.lifted(b, 0),
    }
    gen = lattice_from_partitions(gens, element_budget)
    target = catalog.build("D13").lattice
    iso = are_isomorphic(gen, target) if len(gen) == len(target) else None
    if iso is None:
        raise TheoremViolation(f"D1 square has {len(gen)} elements and is not isomorphic to D13", gen)
    return D1Square(gen, iso, ctx)


def _d2_parts(labels: Mapping[str, Partition]) -> dict[str, Partition]:
    a, g, b = labels["alpha"], labels["gamma"], labels["beta"]
    parts = _validate_pattern("D2", labels, {"mu": a & b, "delta": g & b})
    parts["0"], parts["1"] = a & g, a | g
    return parts


def classify_d2(
    alg: FiniteAlgebra,
    d2: Mapping[str, Partition],
    *,
    relaxed: bool = False,
    chain_budget: int | None = None,
    element_budget: int = DEFAULT_ELEMENT_BUDGET,
) -> Classification:
    """Classify the sublattice of Con(A(μ)) generated by μ₀, α₀, γ₀, γ₁, δ₀, δ₁."""
    need = {"alpha", "gamma", "beta"}
    if need - d2.keys():
        raise PreconditionError("missing labels", ", ".join(sorted(need - d2.keys())))
    _require_congruences(alg, dict(d2))
    parts = _d2_parts(d2)
    problem = _embeds_as("D2", parts)
    if problem:
        raise PreconditionError(problem)
    if not relaxed:
        if not parts["0"].is_bottom():
            raise PreconditionError("alpha ^ gamma = 0_A fails", str(parts["0"]))
        if not parts["1"].is_top():
            raise PreconditionError("alpha v gamma = 1_A fails", str(parts["1"]))
    labels = {k: parts[k] for k in ("alpha", "gamma", "beta", "mu", "delta")}
    quotient_by = None
    if not parts["0"].is_bottom():
        alg, labels = _reduce(alg, labels, parts["0"])
        quotient_by = parts["0"]
    a, g, mu, d = labels["alpha"], labels["gamma"], labels["mu"], labels["delta"]
    ctx = build_subpower(alg, mu)
    chain = congruence_chain(alg, g, mu, d, chain_budget)
    gens = {
        "mu_0": ctx.lifted(mu, 0),
        "alpha_0": ctx.lifted(a, 0),
        "gamma_0": ctx.lifted(g, 0),
        "gamma_1": ctx.lifted(g, 1),
        "delta^0_0": ctx.lifted(d, 0),
        "delta^0_1": ctx.lifted(d, 1),
    }
    gen = lattice_from_partitions(gens, element_budget)
    family, index = d2_chain_prediction(chain)
    if index is None:
        return Classification(family, None, gen, None, chain, ctx, labels, quotient_by)
    iso = _match(gen, family, index)
    return Classification(family, index, gen, iso, chain, ctx, labels, quotient_by)


def l14_square(alg: FiniteAlgebra, n5: Mapping[str, Partition], element_budget: int = DEFAULT_ELEMENT_BUDGET):
    """Sublattice of Con(A(γ)) generated by the two lifted copies of the pentagon."""
    _require_congruences(alg, {k: n5[k] for k in ("gamma", "alpha", "beta")})
    g, a, b = n5["gamma"], n5["alpha"], n5["beta"]
    problem = _pentagon_problem(g, a, b)
    if problem:
        raise PreconditionError(problem)
    ctx = build_subpower(alg, g)
    gens = {}
    for side in (0, 1):
        gens[f"alpha_{side}"] = ctx.lifted(a, side)
        gens[f"beta_{side}"] = ctx.lifted(b, side)
        gens[f"gamma_{side}"] = ctx.lifted(g, side)
    return lattice_from_partitions(gens, element_budget), ctx


# -- lemma suite --------------------------------------------------------------
def verify_lemma_suite(alg: FiniteAlgebra, labels: Mapping[str, Partition], chain_budget: int | None = None) -> dict[str, list[Check]]:
    """Evaluate each lemma's conclusion on Con(A(β)); hypotheses not met give 'skipped'."""
    _require_congruences(alg, {k: labels[k] for k in ("alpha", "beta", "gamma")})
    a, b, g = labels["alpha"], labels["beta"], labels["gamma"]
    zero = Partition.bottom(alg.size)
    out: dict[str, list[Check]] = {}

    # doubling identities, in A(γ)
    gctx = build_subpower(alg, g)
    fam = sorted({a, b, g, a & b, a | b, g | b, g & b, zero, Partition.top(alg.size)},
                 key=lambda p: (-p.num_blocks(), p.reps))
    out["doublinglemma"] = verify_doubling_identities(gctx, fam)

    ctx = build_subpower(alg, b)
    L = ctx.lifted
    e0, e1 = ctx.eta(0), ctx.eta(1)
    a0, a1, g0, g1 = L(a, 0), L(a, 1), L(g, 0), L(g, 1)
    ab0 = (a & b).is_bottom()
    gb0 = (g & b).is_bottom()

    def chk(name, cond, detail=""):
        return Check(name, "pass" if cond else "fail", "" if cond else detail)

    if ab0 and g < a:
        lhs = (a0 & g1) | (g0 & a1)
        out["lemma1"] = [chk("(alpha_0 ^ gamma_1) v (gamma_0 ^ alpha_1) < alpha_0 ^ alpha_1",
                             lhs < (a0 & a1), _witness(ctx, lhs, a0 & a1))]
    else:
        out["lemma1"] = [Check("lemma1", "skipped", "needs alpha ^ beta = 0 and gamma < alpha")]

    if ab0:
        out["lem:etameet"] = [
            chk("alpha_0 ^ eta_1 = 0", (a0 & e1).is_bottom()),
            chk("alpha_1 ^ eta_0 = 0", (a1 & e0).is_bottom()),
        ]
    else:
        out["lem:etameet"] = [Check("lem:etameet", "skipped", "needs alpha ^ beta = 0")]

    chain = congruence_chain(alg, a, b, g, chain_budget) if g <= a else None
    steps = range(len(chain.chain)) if chain else range(0)

    if chain is not None and ab0 and gb0:
        res = []
        for i in steps:
            gi = chain[i]
            tol = chain.tolerances[i]
            cond1 = not tol.issubset(gi)
            gi0, gi1 = L(gi, 0), L(gi, 1)
            cond2 = (gi0 & gi1) < (a0 & gi1)
            res.append(Check(f"step {i}: condition (1) is {cond1}, condition (2) is {cond2}",
                             "pass" if cond1 == cond2 else "fail"))
        out["lem:skew"] = res
    else:
        out["lem:skew"] = [Check("lem:skew", "skipped", "needs alpha ^ beta = gamma ^ beta = 0 and gamma <= alpha")]

    if chain is not None:
        res = []
        for i in steps:
            gi, gn = chain[i], chain[i + 1]
            lhs0, rhs0 = L(gn, 0), e0 | (a0 & L(gi, 1))
            lhs1, rhs1 = L(gn, 1), e1 | (L(gi, 0) & a1)
            res.append(chk(f"step {i}: gamma^{i+1}_0 = eta_0 v (alpha_0 ^ gamma^{i}_1)", lhs0 == rhs0,
                           _witness(ctx, lhs0, rhs0)))
            res.append(chk(f"step {i}: gamma^{i+1}_1 = eta_1 v (gamma^{i}_0 ^ alpha_1)", lhs1 == rhs1,
                           _witness(ctx, lhs1, rhs1)))
            strict = gi < gn
            grows = BinaryRelation.of(gi).pairs < chain.tolerances[i].pairs
            res.append(chk(f"step {i}: ascent iff the tolerance strictly contains gamma^{i}", strict == grows))
        out["lem:gen_gi"] = res
    else:
        out["lem:gen_gi"] = [Check("lem:gen_gi", "skipped", "needs gamma <= alpha")]

    if _pentagon_problem(g, a, b) is None and ab0:
        x, y = a0 & g1, g0 & a1
        gg, aa = g0 & g1, a0 & a1
        out["lemma3"] = [
            chk("(1) gamma_0 ^ gamma_1 below the three skew meets", gg <= x and gg <= y and gg <= aa),
            chk("(2) alpha_0 ^ alpha_1 below none of them", not (aa <= x) and not (aa <= y) and not (aa <= gg)),
            chk("(3) comparable skew meets collapse", not (x <= y or y <= x) or (x == y == gg)),
            chk("(4) gamma_k v (alpha_0 ^ alpha_1) = alpha_k", (g0 | aa) == a0 and (g1 | aa) == a1),
        ]
    else:
        out["lemma3"] = [Check("lemma3", "skipped", "needs an N5 with bottom 0_A")]
    return out


# -- exhaustive pentagon search ---------------------------------------------
@dataclass
class PentagonSurvey:
    pentagons: list[tuple[Partition, Partition, Partition]]
    classifications: list[Classification]

    @property
    def has_m1_or_k(self) -> bool:
        return any(c.index == 1 and c.family in (Family.M, Family.K) for c in self.classifications)


def find_pentagons(parts: Sequence[Partition]) -> list[tuple[Partition, Partition, Partition]]:
    """All (γ, α, β) in a meet/join-closed family forming a labelled N5."""
    parts = sorted(set(parts), key=lambda p: (-p.num_blocks(), p.reps))
    out = []
    for g in parts:
        for a in parts:
            if not g < a:
                continue
            for b in parts:
                if (a & b) == (g & b) and (a | b) == (g | b):
                    out.append((g, a, b))
    return out


def search_n5_all(
    alg: FiniteAlgebra,
    candidates: Sequence[Partition] | None = None,
    *,
    threads: int = 1,
    budget: int | None = None,
) -> PentagonSurvey:
    """Classify every pentagon of Con(A), or of ``candidates`` if given.

    ``candidates`` must be a meet/join-closed family of congruences (for
    example a generated sublattice); pentagons with nonzero bottom are
    classified in the quotient.
    """
    if candidates is None:
        kwargs = {} if budget is None else {"budget": budget}
        candidates = all_congruences(alg, **kwargs)
    pents = find_pentagons(candidates)

    def run(t):
        g, a, b = t
        return classify_n5(alg, {"gamma": g, "alpha": a, "beta": b}, relaxed=True)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            res = list(ex.map(run, pents))
    else:
        res = [run(t) for t in pents]
    return PentagonSurvey(pents, res)


def quotient_consistency(ctx: SubpowerContext, parts: Sequence[Partition], side: int) -> bool:
    """θ ↦ θ_side is an order isomorphism from ``parts`` onto its image."""
    img = [ctx.lifted(p, side) for p in parts]
    eta = ctx.eta(side)
    for p, ip in zip(parts, img):
        if not eta <= ip:
            return False
        for q, iq in zip(parts, img):
            if (p <= q) != (ip <= iq):
                return False
            if ctx.lifted(partition_meet(p, q), side) != partition_meet(ip, iq):
                return False
            if ctx.lifted(partition_join(p, q), side) != partition_join(ip, iq):
                return False
    return True

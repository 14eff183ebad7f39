from itertools import product

import pytest

from conftest import P, n5_labels
from conlat import catalog
from conlat.algebra import BudgetExceeded, FiniteAlgebra, cg
from conlat.engine import (
    Family,
    PreconditionError,
    TheoremViolation,
    build_subpower,
    classify_d2,
    classify_n5,
    congruence_chain,
    d2_chain_prediction,
    find_pentagons,
    generate_d1_square,
    l14_square,
    lift,
    n5_chain_prediction,
    quotient_consistency,
    search_n5_all,
    tolerance_step,
    verify_doubling_identities,
    verify_lemma_suite,
)
from conlat.lattice import are_isomorphic, lattice_from_partitions
from conlat.partition import Partition, all_partitions, relation_compose, relation_intersect

SET4 = FiniteAlgebra.set_only(4)
WITNESS = {"gamma": P(4, (0, 1)), "alpha": P(4, (0, 1), (2, 3)), "beta": P(4, (0, 2), (1, 3))}


# -- subpower ------------------------------------------------------------------
def test_subpower_universe_and_ops():
    alg = FiniteAlgebra(3, [("f", 1, [1, 0, 2]), ("m", 2, [0, 1, 2, 1, 1, 2, 2, 2, 2])])
    alpha = P(3, (0, 1))
    ctx = build_subpower(alg, alpha)
    assert ctx.universe == ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2))
    f, m = ctx.algebra.operations
    for i, t in enumerate(ctx.universe):
        assert ctx.universe[f(i)] == (alg.operations[0](t[0]), alg.operations[0](t[1]))
        for j, u in enumerate(ctx.universe):
            want = tuple(alg.operations[1](t[k], u[k]) for k in range(2))
            assert ctx.universe[m(i, j)] == want


def test_subpower_higher_power_and_budget():
    ctx = build_subpower(SET4, P(4, (0, 1), (2, 3)), n=3)
    assert ctx.size == 16
    with pytest.raises(BudgetExceeded):
        build_subpower(SET4, Partition.top(4), budget=10)
    with pytest.raises(ValueError):
        build_subpower(SET4, Partition.top(4), n=1)
    alg = FiniteAlgebra(3, [("f", 1, [1, 2, 0])])
    with pytest.raises(PreconditionError):
        build_subpower(alg, P(3, (0, 1)))


def test_lift_is_the_kernel_of_a_coordinate():
    ctx = build_subpower(SET4, Partition.top(4))
    theta = P(4, (0, 3))
    lifted = lift(ctx, theta, 1).partition
    for i, t in enumerate(ctx.universe):
        for j, u in enumerate(ctx.universe):
            assert lifted.related(i, j) == theta.related(t[1], u[1])
    assert ctx.eta(0) == ctx.lifted(Partition.bottom(4), 0)
    with pytest.raises(ValueError):
        lift(ctx, theta, 2)


def test_doubling_identities_on_partition_lattice():
    g = P(4, (0, 1), (2, 3))
    ctx = build_subpower(SET4, g)
    checks = verify_doubling_identities(ctx, list(all_partitions(4)))
    assert all(c.ok for c in checks)
    assert sum(c.status == "pass" for c in checks) > 30


# -- chains --------------------------------------------------------------------
def naive_step(alg, outer, bridge, x):
    comp = relation_compose(relation_compose(bridge, x), bridge)
    return cg(alg, relation_intersect(comp, outer).pairs)


def test_tolerance_step_matches_relations():
    for outer, bridge, x in product(list(all_partitions(4))[::3], repeat=3):
        want = relation_intersect(relation_compose(relation_compose(bridge, x), bridge), outer)
        assert tolerance_step(outer, bridge, x) == want


def test_chain_on_k2_example(k2_doc):
    alg = k2_doc.algebra()
    lab = n5_labels(k2_doc)
    ch = congruence_chain(alg, lab["alpha"], lab["beta"], lab["gamma"])
    assert len(ch.chain) == 3 and ch.stabilized_at == 2 and ch.reached_top_of_interval
    assert ch[1] == k2_doc.partition("gamma1") and ch[2] == lab["alpha"] and ch[7] == ch[2]
    x = lab["gamma"]
    for i in range(3):
        assert ch[i] == x
        x = naive_step(alg, lab["alpha"], lab["beta"], x)
    assert n5_chain_prediction(ch) == (Family.K, 2)


def test_chain_budget_and_preconditions(k2_doc):
    alg = k2_doc.algebra()
    lab = n5_labels(k2_doc)
    short = congruence_chain(alg, lab["alpha"], lab["beta"], lab["gamma"], budget=1)
    assert short.exhausted and n5_chain_prediction(short) == (Family.K_INF_UNREACHED, None)
    assert d2_chain_prediction(short) == (Family.S_INF_UNREACHED, None)
    with pytest.raises(IndexError):
        short[5]
    with pytest.raises(PreconditionError):
        congruence_chain(alg, lab["gamma"], lab["beta"], lab["alpha"])


# -- N5 classification -------------------------------------------------------------
def test_example_m2(m2_doc):
    c = classify_n5(m2_doc.algebra(), n5_labels(m2_doc))
    assert (c.family, c.index, c.name) == (Family.M, 2, "M_2")
    assert len(c.generated) == 17
    assert c.witness.verify(c.generated, catalog.build("M", 2).lattice)
    assert c.chain[1] == m2_doc.partition("gamma1")
    assert c.chain.stabilized_at == 1 and not c.chain.reached_top_of_interval


def test_example_k2(k2_doc):
    c = classify_n5(k2_doc.algebra(), n5_labels(k2_doc))
    assert c.name == "K_2" and len(c.generated) == 20
    assert c.witness.verify(c.generated, catalog.build("K", 2).lattice)
    names = c.landmark_names()
    assert "theta_1" in names and "alpha_0 & alpha_1" in names


def test_witness_gives_k1():
    c = classify_n5(SET4, WITNESS)
    assert c.name == "K_1" and len(c.generated) == 14


@pytest.mark.parametrize("labels,needle", [
    ({"gamma": P(3, (0, 1)), "alpha": P(3, (0, 2)), "beta": P(3, (1, 2))}, "modular quintuple"),
    ({"gamma": P(4, (0, 1)), "alpha": P(4, (0, 1)), "beta": P(4, (0, 2))}, "gamma = alpha"),
    ({"gamma": P(4, (0, 1)), "alpha": P(4, (0, 1), (2, 3)), "beta": P(4, (2, 3))}, r"alpha \^ beta != gamma \^ beta"),
    ({"gamma": P(4, (0, 1)), "alpha": P(4, (0, 1), (2, 3))}, "missing labels"),
])
def test_pentagon_preconditions(labels, needle):
    n = next(iter(labels.values())).size
    with pytest.raises(PreconditionError, match=needle) as info:
        classify_n5(FiniteAlgebra.set_only(n), labels)
    assert info.value.hypothesis


def test_non_congruence_label_is_named():
    alg = FiniteAlgebra(4, [("f", 1, [1, 2, 3, 0])])
    with pytest.raises(PreconditionError, match="gamma is not a congruence"):
        classify_n5(alg, WITNESS)


def test_nonzero_bottom_needs_relaxed_mode():
    # pentagon with bottom |0,4| on five points
    lab = {"gamma": P(5, (0, 1, 4)), "alpha": P(5, (0, 1, 4), (2, 3)), "beta": P(5, (0, 2, 4), (1, 3))}
    alg = FiniteAlgebra.set_only(5)
    with pytest.raises(PreconditionError, match="alpha \\^ beta = 0_A fails"):
        classify_n5(alg, lab)
    c = classify_n5(alg, lab, relaxed=True)
    assert c.name == "K_1" and c.quotient_by == P(5, (0, 4))


def test_zero_and_one_labels_checked():
    lab = dict(WITNESS, zero=Partition.bottom(4), one=Partition.top(4))
    classify_n5(SET4, lab)
    with pytest.raises(PreconditionError, match="zero label"):
        classify_n5(SET4, dict(WITNESS, zero=P(4, (0, 1))))


def test_classification_against_independent_lattice(m2_doc):
    """Rebuild the generated lattice by hand and identify it directly."""
    lab = n5_labels(m2_doc)
    ctx = build_subpower(m2_doc.algebra(), lab["beta"])
    gens = [ctx.lifted(lab["alpha"], 0), ctx.lifted(lab["alpha"], 1), ctx.lifted(lab["beta"], 0),
            ctx.lifted(lab["gamma"], 0), ctx.lifted(lab["gamma"], 1)]
    found = catalog.identify(lattice_from_partitions(gens))
    assert found[:2] == ("M", 2)


# -- D1 / D2 -------------------------------------------------------------------------
D1_LAB = {"alpha": P(5, (0, 1), (2, 3)), "gamma": P(5, (0, 2), (1, 4)), "beta": P(5, (3, 4))}
D2_LAB = {"alpha": P(4, (0, 1), (2, 3)), "gamma": P(4, (0, 2), (1, 3)), "beta": P(4, (0, 1, 2))}


def test_d1_square_contradicts_d13():
    with pytest.raises(TheoremViolation) as info:
        generate_d1_square(FiniteAlgebra.set_only(5), D1_LAB)
    lat = info.value.lattice
    assert len(lat) == 17
    assert are_isomorphic(lat, catalog.build("D13").lattice) is None


def test_d1_diagonal_obstruction():
    """The diagonal is a union of blocks of (alpha_0 ^ alpha_1) v (gamma_0 ^ gamma_1)."""
    ctx = build_subpower(FiniteAlgebra.set_only(5), D1_LAB["beta"])
    a, g = D1_LAB["alpha"], D1_LAB["gamma"]
    j = (ctx.lifted(a, 0) & ctx.lifted(a, 1)) | (ctx.lifted(g, 0) & ctx.lifted(g, 1))
    diag = {i for i, t in enumerate(ctx.universe) if t[0] == t[1]}
    for block in j.blocks():
        assert set(block) <= diag or not set(block) & diag
    assert not j.is_top()


def test_d1_preconditions():
    alg = FiniteAlgebra.set_only(5)
    with pytest.raises(PreconditionError, match="not a D1"):
        generate_d1_square(alg, dict(D1_LAB, beta=P(5, (0, 1))))
    with pytest.raises(PreconditionError, match="mu label disagrees"):
        generate_d1_square(alg, dict(D1_LAB, mu=Partition.top(5)))
    with pytest.raises(PreconditionError, match="missing"):
        generate_d1_square(alg, {"alpha": D1_LAB["alpha"]})


def test_d2_gives_s1():
    c = classify_d2(SET4, D2_LAB)
    assert c.name == "S_1" and len(c.generated) == 13
    assert c.chain.stabilized_at == 0 and not c.chain.reached_top_of_interval
    assert c.labels["mu"] == P(4, (0, 1)) and c.labels["delta"] == P(4, (0, 2))


def test_d2_chain_is_constant():
    """mu, delta <= beta forces (mu o delta o mu) ^ gamma <= beta ^ gamma = delta."""
    alg = FiniteAlgebra.set_only(5)
    seen = 0
    parts = list(all_partitions(5))
    for a in parts[::4]:
        for g in parts[::3]:
            for b in parts:
                try:
                    c = classify_d2(alg, {"alpha": a, "gamma": g, "beta": b}, relaxed=True)
                except PreconditionError:
                    continue
                seen += 1
                assert len(c.chain.chain) == 1
    assert seen > 0


def test_d2_preconditions():
    with pytest.raises(PreconditionError, match="not a D2"):
        classify_d2(SET4, dict(D2_LAB, beta=Partition.top(4)))
    with pytest.raises(PreconditionError, match="delta label disagrees"):
        classify_d2(SET4, dict(D2_LAB, delta=Partition.bottom(4)))


# -- L14, lemmas, surveys ------------------------------------------------------------
def test_l14_square():
    lat, ctx = l14_square(SET4, WITNESS)
    assert len(lat) == 9 and ctx.alpha == WITNESS["gamma"]
    assert are_isomorphic(lat, catalog.build("L14").lattice) is not None


@pytest.mark.parametrize("fixture", ["m2_doc", "k2_doc"])
def test_lemma_suite_on_examples(fixture, request):
    doc = request.getfixturevalue(fixture)
    res = verify_lemma_suite(doc.algebra(), n5_labels(doc))
    assert set(res) == {"doublinglemma", "lemma1", "lem:etameet", "lem:skew", "lem:gen_gi", "lemma3"}
    for name, checks in res.items():
        assert all(c.ok for c in checks), (name, [c for c in checks if not c.ok])
        assert any(c.status == "pass" for c in checks), name


def test_lemma_suite_skips_unmet_hypotheses():
    lab = {"gamma": P(5, (0, 1, 4)), "alpha": P(5, (0, 1, 4), (2, 3)), "beta": P(5, (0, 2, 4), (1, 3))}
    res = verify_lemma_suite(FiniteAlgebra.set_only(5), lab)
    assert res["lemma1"][0].status == "skipped"
    assert res["lemma3"][0].status == "skipped"


def test_skew_conditions_on_k2(k2_doc):
    res = verify_lemma_suite(k2_doc.algebra(), n5_labels(k2_doc))["lem:skew"]
    assert [c.name for c in res] == [
        "step 0: condition (1) is True, condition (2) is True",
        "step 1: condition (1) is True, condition (2) is True",
        "step 2: condition (1) is False, condition (2) is False",
    ]


def test_pentagon_search_and_threads():
    parts = list(all_partitions(4))
    pents = find_pentagons(parts)
    assert (WITNESS["gamma"], WITNESS["alpha"], WITNESS["beta"]) in pents
    one = search_n5_all(SET4)
    four = search_n5_all(SET4, threads=4)
    assert [c.name for c in one.classifications] == [c.name for c in four.classifications]
    assert one.pentagons == four.pentagons and one.has_m1_or_k


def test_quotient_consistency():
    ctx = build_subpower(SET4, Partition.top(4))
    assert quotient_consistency(ctx, list(all_partitions(4)), 0)
    assert quotient_consistency(ctx, list(all_partitions(4)), 1)

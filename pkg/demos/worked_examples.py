"""Classify the two bundled pentagons and show where the chain stops.

    python3 demos/worked_examples.py
"""
from importlib import resources

from conlat.engine import classify_n5, verify_lemma_suite
from conlat.io import parse_algebra

for fname in ("example_m2.alg", "example_k2.alg"):
    doc = parse_algebra(resources.files("conlat").joinpath("data", fname).read_text("utf-8"))
    labels = {"gamma": doc.partition("gamma0"), "alpha": doc.partition("alpha"), "beta": doc.partition("beta")}
    c = classify_n5(doc.algebra(), labels)
    print(f"{fname}: {c.name}, {len(c.generated)} congruences generated in A(beta) ({c.context.size} pairs)")
    for i, p in enumerate(c.chain.chain):
        print(f"   gamma^{i} = {doc.format_partition(p)}")
    top = "alpha" if c.chain.reached_top_of_interval else "something below alpha"
    print(f"   stops at step {c.chain.stabilized_at}, at {top}")

    # which generated congruences are the skew meets?
    for x, name in enumerate(c.landmark_names()):
        if " & " in name:
            print(f"   {name:28s} {c.generated.names[x]}")

    bad = [ch for checks in verify_lemma_suite(doc.algebra(), labels).values() for ch in checks if not ch.ok]
    print(f"   lemma checks failing: {len(bad)}\n")

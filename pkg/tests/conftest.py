from __future__ import annotations

from importlib import resources

import pytest

from conlat.io import parse_algebra
from conlat.partition import Partition


def bundled(name: str):
    return parse_algebra(resources.files("conlat").joinpath("data", name).read_text("utf-8"))


def P(n: int, *blocks) -> Partition:
    """Partition of {0..n-1}; unlisted elements are singletons."""
    seen = {x for b in blocks for x in b}
    return Partition.from_blocks(n, [list(b) for b in blocks] + [[x] for x in range(n) if x not in seen])


@pytest.fixture(scope="session")
def m2_doc():
    return bundled("example_m2.alg")


@pytest.fixture(scope="session")
def k2_doc():
    return bundled("example_k2.alg")


@pytest.fixture(scope="session")
def witness_doc():
    return bundled("pentagon4.alg")


def n5_labels(doc, gamma="gamma0"):
    return {"gamma": doc.partition(gamma), "alpha": doc.partition("alpha"), "beta": doc.partition("beta")}


# acceptance lines are collected here and echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

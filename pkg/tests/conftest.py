import pytest
from hypothesis import settings
from hypothesis import strategies as st

from porel.poset import Poset

# fixed example streams keep every run reproducible
settings.register_profile("porel", derandomize=True, deadline=None)
settings.load_profile("porel")

LABELS = "abcdefg"


@st.composite
def posets(draw, min_size=0, max_size=6):
    """Random partial order: closure of a random DAG on a random label order."""
    n = draw(st.integers(min_size, max_size))
    labels = draw(st.permutations(LABELS[:n]))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    reach = [{i} for i in range(n)]
    for i in reversed(range(n)):
        for a, b in edges:
            if a == i:
                reach[i] |= reach[b]
    up = tuple(sum(1 << j for j in reach[i]) for i in range(n))
    # labels are drawn as a permutation, so ids and the DAG order differ
    return Poset(tuple(labels), up)


_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and rep.when == "call":
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance.append(("PASS" if rep.passed else "FAIL", doc))


def pytest_terminal_summary(terminalreporter):
    if _acceptance:
        terminalreporter.section("acceptance criteria")
        for status, doc in _acceptance:
            terminalreporter.write_line(f"[{status}] {doc}")

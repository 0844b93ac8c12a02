import random

import pytest
from hypothesis import strategies as st

from treenergy.enumeration import random_tree


@st.composite
def trees(draw, min_n=1, max_n=14):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tree(n, random.Random(seed))


@st.composite
def tree_and_edge(draw, min_n=2, max_n=14):
    t = draw(trees(min_n, max_n))
    e = draw(st.sampled_from(t.edge_list()))
    return t, e


@pytest.fixture
def rng():
    return random.Random(20240601)


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])

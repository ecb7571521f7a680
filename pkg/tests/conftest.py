import pytest
from hypothesis import settings
from hypothesis import strategies as st

from oddkh.corpus import load_diagrams
from oddkh.diagram import braid_closure, parse_pd

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

TREFOIL = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
HOPF = "X(2,4,1,3) X(4,2,3,1)"


@pytest.fixture(scope="session")
def corpus():
    return load_diagrams()


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL)


@pytest.fixture
def hopf():
    return parse_pd(HOPF)


@st.composite
def braids(draw, max_strands=3, max_len=5):
    """Short braid closures; every letter is ±1..±(strands-1)."""
    strands = draw(st.integers(2, max_strands))
    letters = st.integers(1, strands - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    word = draw(st.lists(letters, min_size=1, max_size=max_len))
    return braid_closure(word, strands)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)

import pytest

from lengthchars import Quiver, enumerate_catalog

A2_EDGES = [("a", "1", "2")]
A3_EDGES = [("a", "1", "2"), ("b", "2", "3")]
D4_EDGES = [("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4")]
KRONECKER_EDGES = [("a", "1", "2"), ("b", "1", "2")]


def a2_quiver():
    return Quiver.from_edges(["1", "2"], A2_EDGES)


def a3_quiver():
    return Quiver.from_edges(["1", "2", "3"], A3_EDGES)


def d4_quiver():
    return Quiver.from_edges(["1", "2", "3", "4"], D4_EDGES)


def kronecker_quiver():
    return Quiver.from_edges(["1", "2"], KRONECKER_EDGES)


@pytest.fixture(scope="session")
def a2():
    return a2_quiver()


@pytest.fixture(scope="session")
def a3():
    return a3_quiver()


@pytest.fixture(scope="session")
def kronecker():
    return kronecker_quiver()


@pytest.fixture(scope="session")
def a2_cat(a2):
    return enumerate_catalog(a2, 2, per_vertex=2)


@pytest.fixture(scope="session")
def a3_cat(a3):
    return enumerate_catalog(a3, 2, total=3)


@pytest.fixture(scope="session")
def d4_cat():
    return enumerate_catalog(d4_quiver(), 2, per_vertex=2)


@pytest.fixture(scope="session")
def kron_cat(kronecker):
    return enumerate_catalog(kronecker, 2, per_vertex=3)


@pytest.fixture(scope="session")
def a2_model(a2_cat):
    from lengthchars import build_model

    return build_model(a2_cat)


@pytest.fixture(scope="session")
def a3_model(a3_cat):
    from lengthchars import build_model

    return build_model(a3_cat)


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

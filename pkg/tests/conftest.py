import pytest

from socgraph import DiGraph


@pytest.fixture
def two_cycle():
    return DiGraph.from_edges(2, [(0, 1), (1, 0)])


@pytest.fixture
def chain3():
    return DiGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    # complete bidirected graph on three nodes
    return DiGraph.from_edges(
        3, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]
    )


@pytest.fixture
def directed_3cycle():
    return DiGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def switch():
    # one source steering a bidirected pair that both feed a sink
    return DiGraph.from_edges(
        4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 1), (1, 3), (2, 3)]
    )


@pytest.fixture
def triangle_fed():
    # complete bidirected triangle plus an off-cycle parent of nodes 1 and 2
    return DiGraph.from_edges(
        4,
        [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1), (3, 1), (3, 2)],
    )

import pytest

from bundleforge import complete_graph, cycle_graph, empty_graph, path_graph
from bundleforge.named import (
    hexagonal_prism,
    mobius_ladder_3,
    mod3_projection,
    twisted_hexagonal_ladder,
    twisted_ladder_voltage,
)


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def c3():
    return cycle_graph(3)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def two_k1():
    return empty_graph(2)


@pytest.fixture
def m3():
    return mobius_ladder_3()


@pytest.fixture
def m62():
    return twisted_hexagonal_ladder()


@pytest.fixture
def c6k2():
    return hexagonal_prism()


@pytest.fixture
def p_c6_c3(c6):
    """Double-cover projection of the hexagon onto the triangle."""
    return mod3_projection(c6)


@pytest.fixture
def q_m3_c3(m3):
    return mod3_projection(m3)


@pytest.fixture
def m3_voltage():
    return twisted_ladder_voltage()

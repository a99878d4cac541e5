import pytest

from oldoind.classes import base_graph, complete, cycle, path
from oldoind.hardness import X3CInstance, build_gadget


@pytest.fixture
def P5():
    return path(5)


@pytest.fixture
def C4():
    return cycle(4)


@pytest.fixture
def K3():
    return complete(3)


@pytest.fixture
def Z():
    return base_graph("Z")


@pytest.fixture
def example_x3c():
    return X3CInstance.of(6, [(0, 1, 3), (1, 3, 5), (2, 4, 5)])


@pytest.fixture
def example_gadget(example_x3c):
    return build_gadget(example_x3c)


@pytest.fixture
def single_triple():
    return X3CInstance.of(3, [(0, 1, 2)])

import itertools

import pytest

from oldoind import InvalidInput
from oldoind.classes import SpiderKind, base_graph, complete, gen_spider, path
from oldoind.graph import empty_graph
from oldoind.hardness import RingPatternRule
from oldoind.selftest import literal_oldoind
from oldoind.solve import SolveStatus, exists_oldoind, min_oldoind
from oldoind.verify import induces_matching, verify_oldoind
from tests import conf


def _brute_force_minimum(G):
    for size in range(2, G.n + 1, 2):
        for S in itertools.combinations(range(G.n), size):
            if literal_oldoind(G, S):
                return size
    return None


def test_min_examples(P5, K3):
    result = min_oldoind(K3)
    assert result.found and result.size == 2
    assert result.set.as_list == [0, 1]

    result = min_oldoind(P5)
    assert result.size == 4
    assert result.set.as_list == [0, 1, 3, 4]


def test_exists_absent():
    result = exists_oldoind(path(4))
    assert result.status is SolveStatus.ABSENT
    assert not result.found and result.size is None

    # open twins are refuted without search
    result = exists_oldoind(empty_graph(2))
    assert result.status is SolveStatus.ABSENT and result.nodes_explored == 0


def test_result_is_an_induced_matching(Z):
    result = exists_oldoind(Z)
    assert result.found
    assert verify_oldoind(Z, result.set).valid
    assert induces_matching(Z, result.set)


@pytest.mark.parametrize("max_n", [6, pytest.param(7, marks=pytest.mark.slow)])
def test_min_matches_brute_force(max_n):
    for G in conf.atlas(max_n):
        result = min_oldoind(G)
        expected = _brute_force_minimum(G)
        if expected is None:
            assert not result.found
        else:
            assert result.size == expected
            assert literal_oldoind(G, result.set.as_list)


@pytest.mark.parametrize("name", ["K2", "K3", "P5", "P5_join_K1", "Z", "Z_join_K1"])
def test_base_witnesses_are_minimum(name):
    from oldoind.classes import BASE_WITNESSES

    result = min_oldoind(base_graph(name))
    assert tuple(result.set) == BASE_WITNESSES[name]


def test_budget(example_gadget):
    graph, _ = example_gadget
    result = exists_oldoind(graph, budget=5)
    assert result.status is SolveStatus.BUDGET_EXCEEDED
    assert result.set is None
    assert result.as_dict["status"] == "budget-exceeded"


def test_pruning_rule(example_gadget):
    graph, gadget = example_gadget
    result = exists_oldoind(graph, rule=RingPatternRule(gadget))
    assert result.found
    assert verify_oldoind(graph, result.set).valid


def test_rule_that_prunes_everything(P5):
    assert not exists_oldoind(P5, rule=lambda chosen, free: True).found


def test_parallel_matches_serial(Z):
    G = gen_spider(SpiderKind.THIN, 3, complete(1))
    parallel, serial = exists_oldoind(G, workers=2), exists_oldoind(G)
    assert (parallel.status, parallel.set) == (serial.status, serial.set)

    Zk = base_graph("Z_join_K1")
    parallel, serial = min_oldoind(Zk, workers=2), min_oldoind(Zk)
    assert (parallel.status, parallel.set) == (serial.status, serial.set)


def test_empty_graph_rejected():
    with pytest.raises(InvalidInput):
        exists_oldoind(empty_graph(0))


if __name__ == "__main__":
    pytest.main([__file__])

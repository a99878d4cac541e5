import itertools

import pytest

from oldoind import CapacityExceeded, InvalidInput
from oldoind.canon import is_isomorphic
from oldoind.classes import (BASE_CATALOG, CotreeKind, Replacement, Side, SpiderKind, R, R_star, base_graph, build_cotree, complete, count_induced_p4,
                             cycle, find_quasi_spider, find_spider_partition, gen_named, gen_quasi_spider, gen_spider, has_induced_p4, is_cograph,
                             is_p4_tidy, is_p4_tidy_definitional, parse_head, path, recognize_base, recognize_R)
from oldoind.graph import complement, empty_graph, join, relabel
from tests import conf

HEADS = [None, complete(1), complete(2), empty_graph(2), path(3), path(4)]


def test_catalog_graphs():
    assert base_graph("K3") == complete(3)
    assert base_graph("P5") == path(5)
    assert base_graph("C5") == cycle(5)
    assert base_graph("P5bar") == complement(path(5))
    assert base_graph("P5_join_K1") == join(path(5), complete(1))
    assert base_graph("Z_join_K1") == join(base_graph("Z"), complete(1))

    with pytest.raises(InvalidInput):
        base_graph("P6")


@pytest.mark.parametrize("name", list(BASE_CATALOG))
def test_recognize_base(name):
    G = base_graph(name)
    assert recognize_base(relabel(G, list(reversed(range(G.n))))) == name


def test_recognize_base_misses():
    assert recognize_base(path(4)) is None
    assert recognize_base(complete(4)) is None


def test_families():
    assert gen_named("R", 1, 1) == complete(3)
    assert is_isomorphic(gen_named("R_star", 1, 1), path(3))
    assert is_isomorphic(gen_named("K1_join_mK2bar", 1), path(3))
    assert gen_named("P5") == path(5)
    assert is_isomorphic(gen_named("cocktail_party", 2), cycle(4))
    assert gen_named("star", 3).m == 3
    assert R(2, 2).n == 6 and R(2, 2).m == 2 + 8
    assert R_star(2, 2).m == R(2, 2).m - 1

    for family, params in [("nope", ()), ("path", (1, 2)), ("cycle", (0,)), ("R", (1, 0))]:
        with pytest.raises(InvalidInput):
            gen_named(family, *params)


def test_cotree():
    tree = build_cotree(complete(3))
    assert tree.kind is CotreeKind.JOIN
    assert [child.kind for child in tree.children] == [CotreeKind.LEAF] * 3
    assert tree.as_dict["kind"] == "join"

    tree = build_cotree(cycle(4))
    assert tree.kind is CotreeKind.JOIN
    assert all(child.kind is CotreeKind.UNION for child in tree.children)

    assert build_cotree(path(4)) is None
    assert not is_cograph(cycle(5))


def test_cograph_iff_p4_free():
    for G in conf.atlas(6):
        tree = build_cotree(G)
        assert (tree is not None) == (not has_induced_p4(G))
        if tree is not None:
            assert tree.evaluate(G.n) == G
            assert sorted(tree.leaves()) == list(range(G.n))


def test_count_induced_p4():
    assert count_induced_p4(path(4)) == 1
    assert count_induced_p4(cycle(5)) == 5
    assert count_induced_p4(complete(5)) == 0


def test_spider_generators():
    G = gen_spider(SpiderKind.THIN, 3, complete(1))
    assert G.n == 7 and G.m == 3 + 3 + 3

    thick = gen_spider(SpiderKind.THICK, 3)
    assert thick.degrees.tolist() == [4, 4, 4, 2, 2, 2]

    assert is_isomorphic(gen_spider(SpiderKind.THICK, 2), gen_spider(SpiderKind.THIN, 2))

    with pytest.raises(InvalidInput):
        gen_spider(SpiderKind.THIN, 1)
    with pytest.raises(InvalidInput):
        gen_spider("medium", 3)
    with pytest.raises(InvalidInput):
        gen_quasi_spider(SpiderKind.THIN, 2, None, Side.C, 2, Replacement.K2)


def test_find_spider_partition_examples():
    part = find_spider_partition(path(4))
    assert part.kind is SpiderKind.THIN and part.k == 2
    assert part.X.as_list == [0, 3] and part.C.as_list == [1, 2]
    assert not part.H

    assert find_spider_partition(complete(4)) is None
    assert find_spider_partition(cycle(5)) is None


@pytest.mark.parametrize("kind, k, head", itertools.product(SpiderKind, (2, 3, 4), HEADS))
def test_spider_partition_recovers_generator(kind, k, head):
    G = gen_spider(kind, k, head)
    part = find_spider_partition(G)
    assert part is not None
    assert part.C.as_list == list(range(k))
    assert part.X.as_list == list(range(k, 2 * k))
    assert len(part.H) == (head.n if head else 0)
    assert part.kind is (SpiderKind.THIN if k == 2 else kind)
    assert find_quasi_spider(G) is None


@pytest.mark.parametrize("kind, k, side, replacement, head", itertools.product(SpiderKind, (2, 3), Side, Replacement, HEADS[:3]))
def test_quasi_spider_recovers_generator(kind, k, side, replacement, head):
    G = gen_quasi_spider(kind, k, head, side, 0, replacement)
    part = find_quasi_spider(G)
    assert part is not None
    assert part.k == k
    assert part.quasi.replacement is replacement
    assert len(part.C) + len(part.X) == 2 * k + 1
    assert part.as_dict["quasi"]["replacement"] == replacement.value


def test_quasi_spider_z(Z):
    part = find_quasi_spider(Z)
    assert part.k == 2 and part.quasi is not None
    assert is_isomorphic(Z, gen_quasi_spider(SpiderKind.THICK, 2, None, Side.X, 0, Replacement.K2))


def test_p4_tidy_examples():
    assert is_p4_tidy(cycle(5))
    assert is_p4_tidy(complement(path(5)))
    assert not is_p4_tidy(cycle(6))
    assert not is_p4_tidy_definitional(cycle(6))
    assert is_p4_tidy(complete(1))

    with pytest.raises(CapacityExceeded):
        is_p4_tidy_definitional(path(9))


def test_p4_tidy_agrees_with_definition():
    for G in conf.atlas(6):
        assert is_p4_tidy(G) == is_p4_tidy_definitional(G), G


@pytest.mark.slow
def test_p4_tidy_agrees_with_definition_seven():
    for G in conf.atlas(7):
        if G.n == 7:
            assert is_p4_tidy(G) == is_p4_tidy_definitional(G), G


def test_cographs_are_p4_tidy():
    for G in conf.atlas(6):
        if is_cograph(G):
            assert is_p4_tidy(G)


@pytest.mark.parametrize("ell, m", itertools.product((1, 2, 3), (1, 2, 3)))
def test_recognize_R(ell, m):
    pattern = recognize_R(relabel(R(ell, m), list(reversed(range(ell + 2 * m)))))
    assert (pattern.ell, pattern.m, pattern.starred) == (ell, m, False)

    starred = recognize_R(R_star(ell, m))
    assert (starred.ell, starred.m, starred.starred) == (ell, m, True)
    assert starred.deficient == starred.independents[0]
    assert relabel(R_star(ell, m), starred.labeling) == R_star(ell, m)


def test_recognize_R_examples():
    assert recognize_R(complete(3)).name == "R(1,1)"
    assert recognize_R(path(3)).name == "R*(1,1)"
    assert recognize_R(path(5)) is None
    assert recognize_R(cycle(4)) is None


def test_parse_head():
    assert parse_head(None) is None
    assert parse_head("empty") is None
    assert parse_head("K1") == complete(1)
    assert parse_head("K2bar") == empty_graph(2)
    assert parse_head("P3") == path(3)
    assert parse_head("Z") == base_graph("Z")
    with pytest.raises(InvalidInput):
        parse_head("Q3")


if __name__ == "__main__":
    pytest.main([__file__])

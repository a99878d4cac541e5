import pytest

from oldoind import NotCograph, NotConnected, NotP4Tidy, WitnessInvalid
from oldoind.canon import enumerate_nonisomorphic
from oldoind.classes import R, R_star, base_graph, complete, cycle, gen_named, is_cograph, is_p4_tidy, path, recognize_base
from oldoind.deciders import (PrismDecider, PrismWitness, audit_prism_set, cograph_oldoind, complement_parts, decide_cograph, decide_p4tidy, decide_prism_cograph,
                              p4tidy_oldoind, prism_cograph_oldoind, size2_construct)
from oldoind.formats import encode_graph6
from oldoind.graph import complement, complementary_prism, components, disjoint_union, empty_graph, is_connected, join, relabel
from oldoind.solve import exists_oldoind
from oldoind.verify import verify_oldoind
from tests import conf


def mixed_parts():
    """Complement of R(2,2) + R*(1,1) + K2."""
    return complement(conf.union_all([R(2, 2), R_star(1, 1), complete(2)]))


def peeled():
    """Complement of P3 + K2: peeling the K2 leaves the universal vertex case."""
    return complement(disjoint_union(path(3), complete(2)))


def test_p4tidy_examples(P5):
    witness = p4tidy_oldoind(P5)
    assert witness.as_list == [0, 1, 3, 4]

    decision = decide_p4tidy(cycle(5))
    assert not decision.accepted
    assert decision.derivation.case == "reject"


def test_p4tidy_universal_join():
    G = join(disjoint_union(complete(2), complete(3)), complete(1))
    decision = decide_p4tidy(G)
    assert decision.accepted
    assert len(decision.witness) == 4
    assert 5 not in decision.witness
    assert decision.derivation.case == "universal-join"
    assert decision.derivation.params == {"vertex": 5, "t": 2}
    assert [child.case for child in decision.derivation.children] == ["base", "base"]


def test_p4tidy_disconnected(Z):
    G = disjoint_union(Z, path(5))
    decision = decide_p4tidy(G)
    assert decision.derivation.case == "union"
    assert len(decision.witness) == 8
    assert verify_oldoind(G, decision.witness).valid

    assert p4tidy_oldoind(disjoint_union(Z, cycle(5))) is None


def test_p4tidy_precondition():
    with pytest.raises(NotP4Tidy):
        decide_p4tidy(cycle(6))


def test_cograph_examples(C4):
    assert cograph_oldoind(complete(2)).as_list == [0, 1]
    assert cograph_oldoind(C4) is None

    G = join(disjoint_union(complete(2), complete(2)), complete(1))
    assert len(cograph_oldoind(G)) == 4

    with pytest.raises(NotCograph):
        decide_cograph(path(4))


def test_cograph_base_is_restricted(P5):
    # P5 is a base graph for P4-tidy inputs only
    with pytest.raises(NotCograph):
        decide_cograph(P5)


@pytest.mark.parametrize("max_n", [6, pytest.param(7, marks=pytest.mark.slow)])
def test_deciders_match_search(max_n):
    for G in conf.atlas(max_n, connected_only=True):
        if not is_p4_tidy(G):
            continue
        expected = exists_oldoind(G).found
        decision = decide_p4tidy(G)
        assert decision.accepted == expected, G
        if is_cograph(G):
            assert decide_cograph(G).accepted == expected, G


def test_co_connected_accepts():
    accepted = set()
    for G in conf.atlas(6, connected_only=True):
        co_connected = len(components(G, in_complement=True)) == 1
        if co_connected and is_p4_tidy(G) and decide_p4tidy(G).accepted:
            accepted.add(recognize_base(G))
    assert accepted == {"P5", "Z"}


def test_prism_universal_base():
    decision = decide_prism_cograph(path(3))
    assert decision.accepted
    assert decision.derivation.case == "universal-base"
    assert decision.prism.S0.as_list == [1]
    assert len(decision.prism.S1bar) == 3

    for m in range(1, 5):
        G = gen_named("K1_join_mK2bar", m)
        W = prism_cograph_oldoind(G)
        assert W.S0.as_list == [0]
        assert W.S1bar.as_list == list(range(G.n, 2 * G.n))


def test_prism_single_vertex():
    W = prism_cograph_oldoind(complete(1))
    assert W.as_set.as_list == [0, 1]


def test_prism_rejects():
    decision = decide_prism_cograph(complete(2))
    assert not decision.accepted
    assert decision.derivation.case == "reject"

    # one universal vertex, but not joined to a cocktail party
    star = gen_named("star", 3)
    assert prism_cograph_oldoind(star) is None
    assert not exists_oldoind(complementary_prism(star)).found


def test_prism_preconditions():
    with pytest.raises(NotConnected):
        decide_prism_cograph(empty_graph(2))
    with pytest.raises(NotCograph):
        decide_prism_cograph(path(4))


def test_prism_size2_structure():
    G = mixed_parts()
    assert G.n == 11
    decision = decide_prism_cograph(G)
    assert decision.derivation.case == "size2-structure"
    assert len(decision.prism.S0) == 2
    assert len(decision.prism.S1bar) == 8
    assert verify_oldoind(complementary_prism(G), decision.witness).valid


def test_size2_construct_examples():
    G = join(empty_graph(3), empty_graph(3))
    W = size2_construct(G, complement_parts(G))
    assert W.S0.as_list == [0, 3]
    assert len(W.S1bar) == 4

    G = complement(disjoint_union(R(2, 1), complete(3)))
    W = size2_construct(G, complement_parts(G))
    assert len(W.S0) == 2
    assert verify_oldoind(complementary_prism(G), W.as_set).valid


def test_complement_parts_order():
    parts = complement_parts(mixed_parts())
    assert [part.name for part in parts] == ["K2", "R*(1,1)", "R(2,2)"]
    assert [part.size for part in parts] == [2, 3, 6]


def test_prism_peel():
    decision = decide_prism_cograph(peeled())
    assert decision.derivation.case == "peel"
    assert decision.derivation.params["r"] == 1
    assert [child.case for child in decision.derivation.children] == ["universal-base"]


def test_prism_two_level_peel():
    G = complement(disjoint_union(peeled(), complete(2)))
    assert is_connected(G)
    decision = decide_prism_cograph(G)
    assert decision.accepted
    assert decision.derivation.case == "peel"
    inner = decision.derivation.children[0]
    assert inner.case == "peel"
    assert inner.children[0].case == "universal-base"
    assert exists_oldoind(complementary_prism(G)).found



def test_prism_memo_shared_between_relabelings():
    G = complement(disjoint_union(peeled(), complete(2)))
    H = relabel(G, list(reversed(range(G.n))))
    decider = PrismDecider()

    first = decider.decide(G)
    size = len(decider._memo)
    second = decider.decide(H)
    assert len(decider._memo) == size

    assert second.derivation.case == first.derivation.case == "peel"
    assert second.derivation.graph6 == encode_graph6(H)
    assert verify_oldoind(complementary_prism(H), second.witness).valid
    assert len(second.prism.S0) == len(first.prism.S0)
    assert set(second.derivation.chosen) == set(second.prism.S0)


@pytest.mark.parametrize("n", range(1, 6))
def test_prism_matches_search(n):
    for G in enumerate_nonisomorphic(n, connected_only=True):
        if not is_cograph(G):
            continue
        decision = decide_prism_cograph(G)
        assert decision.accepted == exists_oldoind(complementary_prism(G)).found, G
        if decision.accepted:
            matched = [v for v in decision.prism.S0 if v + n in decision.prism.S1bar]
            assert len(matched) <= 1


@pytest.mark.slow
def test_prism_matches_search_six():
    for G in enumerate_nonisomorphic(6, connected_only=True):
        if is_cograph(G):
            assert decide_prism_cograph(G).accepted == exists_oldoind(complementary_prism(G)).found, G


def test_audit():
    W = prism_cograph_oldoind(path(3))
    assert not audit_prism_set(path(3), W).hypotheses_met
    assert audit_prism_set(path(3), W).as_dict == {"result": "hypotheses not met"}

    G = mixed_parts()
    result = audit_prism_set(G, prism_cograph_oldoind(G))
    assert result.hypotheses_met and result.passed
    assert [check.clause for check in result.checks] == ["i", "ii", "iii", "iv", "v", "vi"]


def test_audit_searched_witnesses():
    for n in range(2, 6):
        for G in enumerate_nonisomorphic(n, connected_only=True):
            if not is_cograph(G):
                continue
            result = exists_oldoind(complementary_prism(G))
            if result.found:
                audit = audit_prism_set(G, PrismWitness.from_set(G, result.set))
                assert not audit.hypotheses_met or audit.passed, (G, audit.as_dict)


def test_audit_rejects_invalid_witness():
    G = path(3)
    with pytest.raises(WitnessInvalid):
        audit_prism_set(G, PrismWitness.from_set(G, [0, 1]))


def test_base_witnesses_verify():
    for name in ("K2", "K3", "P5", "P5_join_K1", "Z", "Z_join_K1"):
        G = base_graph(name)
        assert decide_p4tidy(G).derivation.params == {"name": name}


if __name__ == "__main__":
    pytest.main([__file__])

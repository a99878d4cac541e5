import networkx as nx
import pytest

from oldoind import CapacityExceeded, InvalidInput, ParseError
from oldoind.classes import complete, path
from oldoind.formats import (decode_graph6, encode_graph6, format_edge_list, iter_graph6, parse_edge_list, parse_vertex_list, read_graph)
from oldoind.graph import empty_graph, from_edges
from tests import conf


def test_encode_small():
    assert encode_graph6(empty_graph(1)) == "@"
    assert encode_graph6(complete(2)) == "A_"
    assert encode_graph6(complete(3)) == "Bw"
    assert encode_graph6(path(5)) == "DhC"


def test_encode_matches_networkx():
    for G in conf.atlas(6):
        expected = nx.to_graph6_bytes(conf.to_networkx(G), header=False).strip().decode()
        assert encode_graph6(G) == expected


def test_encode_long_header():
    G = path(63)
    line = encode_graph6(G)
    assert line.startswith("~")
    assert decode_graph6(line) == G


def test_decode(P5):
    assert decode_graph6("DhC") == P5
    assert decode_graph6(">>graph6<<A_\n") == complete(2)
    assert conf.to_networkx(decode_graph6("Dhc")).number_of_edges() == 5


def test_classes_encode_distinctly():
    lines = {encode_graph6(G) for G in conf.atlas(4) if G.n == 4}
    assert len(lines) == 11


@pytest.mark.parametrize("line, offset", [
    ("D h", 1),
    ("", 0),
    ("Dh", 2),
    ("DhCC", 3),
    (">>graph6<<D h", 11),
])
def test_decode_errors(line, offset):
    with pytest.raises(ParseError) as info:
        decode_graph6(line)
    assert info.value.offset == offset


def test_decode_padding():
    # K3 has three bits, the remaining three must be zero
    with pytest.raises(ParseError):
        decode_graph6("Bx")


def test_decode_capacity():
    with pytest.raises(CapacityExceeded):
        decode_graph6("~?AA")


def test_iter_graph6():
    graphs = list(iter_graph6("A_\n\nBw\n"))
    assert graphs == [complete(2), complete(3)]


def test_edge_list(P5):
    text = format_edge_list(P5)
    assert text == "5 4\n0 1\n1 2\n2 3\n3 4\n"
    assert parse_edge_list(text) == P5
    assert parse_edge_list("# comment\n3 0\n") == empty_graph(3)


@pytest.mark.parametrize("text, offset", [
    ("3 2\n0 1\n1 x\n", 8),
    ("", 0),
    ("3 1\n0 3\n", 4),
    ("3 1\n1 1\n", 4),
])
def test_edge_list_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text)
    assert info.value.offset == offset


def test_edge_list_count_mismatch():
    with pytest.raises(ParseError):
        parse_edge_list("3 2\n0 1\n")


def test_read_graph():
    assert read_graph("2 1\n0 1\n") == complete(2)
    assert read_graph("A_\n") == complete(2)
    assert read_graph(">>graph6<<Bw") == complete(3)
    with pytest.raises(ParseError):
        read_graph("   ")


def test_parse_vertex_list():
    assert parse_vertex_list("0, 1 3", 5).as_list == [0, 1, 3]
    assert parse_vertex_list("", 5).as_list == []

    with pytest.raises(ParseError) as info:
        parse_vertex_list("0 a", 5)
    assert info.value.offset == 2

    with pytest.raises(InvalidInput):
        parse_vertex_list("7", 5)


def test_edge_list_and_graph6_agree():
    G = from_edges(7, [(0, 6), (2, 5), (1, 3)])
    assert read_graph(format_edge_list(G)) == read_graph(encode_graph6(G))


if __name__ == "__main__":
    pytest.main([__file__])

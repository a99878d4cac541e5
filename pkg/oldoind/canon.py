"""
Canonical forms, isomorphism tests and enumeration of small graphs.

The canonical labeling maximizes the graph6 bit string over all vertex
orders that list vertices by descending invariant (degree, sorted neighbor
degrees). Partial orders are extended level by level and only those with
the best prefix survive; exchanging twins is an automorphism, so at most
one vertex per twin class is tried at each level.
"""

import logging
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from oldoind import CapacityExceeded, InvalidInput
from oldoind.formats import encode_graph6
from oldoind.graph import Graph, are_twins, is_connected, iter_bits, relabel

logger = logging.getLogger(__name__)

MAX_CANONICAL = 10
"""Largest vertex count accepted by canonical_form."""
MAX_ENUMERATE = 7
"""Largest vertex count accepted by enumerate_nonisomorphic."""


def _invariant(G: Graph, v: int) -> Tuple:
    return (G.degree(v), tuple(sorted(G.degree(u) for u in iter_bits(G.adj[v]))))


@lru_cache(maxsize=65536)
def canonical_labeling(G: Graph) -> Tuple[int, ...]:
    """
    A vertex order realizing the canonical form of G.

    Returns
    -------
    typing.Tuple[int, ...]
        order[i] is the vertex of G placed at position i.

    Raises
    ------
    CapacityExceeded
        If G has more than MAX_CANONICAL vertices.
    """
    if G.n > MAX_CANONICAL:
        raise CapacityExceeded(f"canonical labeling is limited to {MAX_CANONICAL} vertices, got {G.n}")

    keys = [_invariant(G, v) for v in range(G.n)]
    slots = sorted(keys, reverse=True)

    level: List[Tuple[int, ...]] = [()]
    for j in range(G.n):
        best = -1
        survivors: List[Tuple[int, ...]] = []
        for order in level:
            placed = set(order)
            tried: List[int] = []
            for v in range(G.n):
                if v in placed or keys[v] != slots[j]:
                    continue
                if any(are_twins(G, v, u) for u in tried):
                    continue
                tried.append(v)

                column = 0
                for u in order:
                    column = column << 1 | (G.adj[v] >> u & 1)

                if column > best:
                    best = column
                    survivors = [order + (v,)]
                elif column == best:
                    survivors.append(order + (v,))
        level = survivors

    return level[0]


@lru_cache(maxsize=65536)
def canonical_form(G: Graph) -> bytes:
    """
    Isomorphism invariant byte string: graph6 of the canonically relabeled graph.

    Parameters
    ----------
    G: Graph
        A graph with at most MAX_CANONICAL vertices.

    Returns
    -------
    bytes
    """
    return encode_graph6(relabel(G, canonical_labeling(G))).encode()


def canonical_graph(G: Graph) -> Graph:
    return relabel(G, canonical_labeling(G))


def is_isomorphic(G1: Graph, G2: Graph) -> bool:
    if G1.n != G2.n or G1.m != G2.m:
        return False
    return canonical_form(G1) == canonical_form(G2)


def find_isomorphism(G1: Graph, G2: Graph) -> Optional[Dict[int, int]]:
    """
    An explicit isomorphism from G1 to G2.

    Returns
    -------
    typing.Optional[typing.Dict[int, int]]
        Map from vertices of G1 to vertices of G2, None if not isomorphic.
    """
    if not is_isomorphic(G1, G2):
        return None
    return dict(zip(canonical_labeling(G1), canonical_labeling(G2)))


def _extend(G: Graph, neighbors: int) -> Graph:
    v = G.n
    return Graph(v + 1, tuple(row | ((neighbors >> u & 1) << v) for u, row in enumerate(G.adj)) + (neighbors,))


@lru_cache(maxsize=None)
def _classes(n: int) -> Tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, (0,)),)

    seen: Dict[bytes, Graph] = {}
    for G in _classes(n - 1):
        for neighbors in range(1 << (n - 1)):
            H = _extend(G, neighbors)
            form = canonical_form(H)
            if form not in seen:
                seen[form] = canonical_graph(H)

    logger.debug(f"{len(seen)} isomorphism classes on {n} vertices")
    return tuple(seen[form] for form in sorted(seen))


def enumerate_nonisomorphic(n: int, connected_only: bool = False) -> Iterator[Graph]:
    """
    One canonical representative per isomorphism class on n vertices.

    Classes on n vertices are obtained by extending every class on n-1
    vertices with a new vertex in all possible ways and deduplicating by
    canonical form; representatives are yielded in canonical form order.

    Parameters
    ----------
    n: int
        Vertex count, 1 <= n <= MAX_ENUMERATE.
    connected_only: bool
        Skip disconnected graphs.
    """
    if n > MAX_ENUMERATE:
        raise CapacityExceeded(f"enumeration is limited to {MAX_ENUMERATE} vertices, got {n}")
    if n < 1:
        raise InvalidInput(f"cannot enumerate graphs on {n} vertices")

    for G in _classes(n):
        if not connected_only or is_connected(G):
            yield G

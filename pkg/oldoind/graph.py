import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from oldoind import CapacityExceeded, InvalidInput

logger = logging.getLogger(__name__)

MAX_VERTICES = 64
"""Upper limit for the bitset core."""
MAX_PRISM_VERTICES = MAX_VERTICES // 2
"""Upper limit for complementary prism inputs."""


def iter_bits(bits: int) -> Iterator[int]:
    """Iterate the positions of set bits in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def mask_of(vertices: Iterable[int]) -> int:
    """Convert an iterable of vertices to a bitset."""
    bits = 0
    for v in vertices:
        bits |= 1 << v
    return bits


@dataclass(frozen=True)
class VertexSet:
    """
    A subset of the vertices of a graph with n vertices.

    Parameters
    ----------
    n: int
        Vertex count of the host graph.
    bits: int
        Bitset over [0, n).
    """
    n: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise InvalidInput(f"vertex set {bin(self.bits)} exceeds {self.n} vertices")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        """
        Build a vertex set from a list of vertices.

        Raises
        ------
        InvalidInput
            If any vertex is out of range.
        """
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= v < n:
                raise InvalidInput(f"vertex {v} out of range [0, {n})")
        return cls(n, mask_of(vertices))

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, v: int) -> bool:
        return v >= 0 and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.bits | other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.bits & other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.n, self.bits & ~other.bits)

    @property
    def as_list(self) -> List[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"VertexSet({self.as_list})"


@dataclass(frozen=True)
class Graph:
    """
    Finite simple undirected graph stored as adjacency bitsets.

    Parameters
    ----------
    n: int
        Vertex count, at most MAX_VERTICES.
    adj: typing.Tuple[int, ...]
        Row v is the open neighborhood N(v) as a bitset over [0, n).
    """
    n: int
    adj: Tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise CapacityExceeded(f"{self.n} vertices exceed the limit of {MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise InvalidInput(f"{len(self.adj)} adjacency rows for {self.n} vertices")

        for v, row in enumerate(self.adj):
            if row < 0 or row >> self.n:
                raise InvalidInput(f"row {v} references vertices beyond {self.n - 1}")
            if row >> v & 1:
                raise InvalidInput(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise InvalidInput(f"edge {v}-{u} is not symmetric")

    @property
    def full(self) -> int:
        """Bitset of all vertices."""
        return (1 << self.n) - 1

    @property
    def vertices(self) -> VertexSet:
        return VertexSet(self.n, self.full)

    @property
    def m(self) -> int:
        """Edge count."""
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def degrees(self) -> np.ndarray:
        """Degree of every vertex."""
        return np.fromiter((row.bit_count() for row in self.adj), dtype=np.int64, count=self.n)

    def to_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix."""
        matrix = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            matrix[u, v] = matrix[v, u] = 1
        return matrix

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


SetLike = Union[VertexSet, Iterable[int]]


def as_vertex_set(G: Graph, S: SetLike) -> VertexSet:
    """
    Interpret S against G.

    Raises
    ------
    InvalidInput
        If S belongs to a graph of another order or references missing vertices.
    """
    if isinstance(S, VertexSet):
        if S.n != G.n:
            raise InvalidInput(f"vertex set over {S.n} vertices used with a graph of {G.n} vertices")
        return S
    return VertexSet.of(G.n, S)


def require_nonempty(G: Graph):
    if G.n == 0:
        raise InvalidInput("the empty graph is not accepted by analysis operations")


def from_edges(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """
    Build a graph from an edge list, collapsing duplicates.

    Parameters
    ----------
    n: int
        Vertex count.
    edges: typing.Iterable[typing.Sequence[int]]
        Unordered vertex pairs.

    Returns
    -------
    Graph
    """
    if not 0 <= n <= MAX_VERTICES:
        raise CapacityExceeded(f"{n} vertices exceed the limit of {MAX_VERTICES}")

    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInput(f"edge {u}-{v} has an endpoint outside [0, {n})")
        if u == v:
            raise InvalidInput(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    return Graph(n, tuple(adj))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complement(G: Graph) -> Graph:
    full = G.full
    return Graph(G.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(G.adj)))


def disjoint_union(G1: Graph, G2: Graph) -> Graph:
    """Union of G1 and G2, vertices of G2 are shifted by G1.n."""
    if G1.n + G2.n > MAX_VERTICES:
        raise CapacityExceeded(f"union of {G1.n} and {G2.n} vertices exceeds {MAX_VERTICES}")
    return Graph(G1.n + G2.n, G1.adj + tuple(row << G1.n for row in G2.adj))


def join(G1: Graph, G2: Graph) -> Graph:
    """Disjoint union of G1 and G2 plus all edges between them."""
    union = disjoint_union(G1, G2)
    low, high = G1.full, G2.full << G1.n
    return Graph(union.n, tuple(row | (high if v < G1.n else low) for v, row in enumerate(union.adj)))


def induced_subgraph(G: Graph, S: SetLike) -> Tuple[Graph, Dict[int, int]]:
    """
    The subgraph of G induced by S.

    Parameters
    ----------
    G: Graph
        Host graph.
    S: SetLike
        Nonempty vertex subset.

    Returns
    -------
    Graph
        Induced subgraph, vertices relabeled 0..|S|-1 in ascending order of S.
    typing.Dict[int, int]
        Map from old to new labels.
    """
    S = as_vertex_set(G, S)
    if not S:
        raise InvalidInput("cannot induce a subgraph on an empty vertex set")

    index = {old: new for new, old in enumerate(S)}
    adj = []
    for old in S:
        adj.append(mask_of(index[u] for u in iter_bits(G.adj[old] & S.bits)))

    return Graph(len(index), tuple(adj)), index


def relabel(G: Graph, order: Sequence[int]) -> Graph:
    """Relabel G such that new vertex i is old vertex order[i]."""
    if sorted(order) != list(range(G.n)):
        raise InvalidInput(f"{order} is not a permutation of {G.n} vertices")

    position = [0] * G.n
    for new, old in enumerate(order):
        position[old] = new

    return Graph(G.n, tuple(mask_of(position[u] for u in iter_bits(G.adj[old])) for old in order))


def complementary_prism(G: Graph) -> Graph:
    """
    The complementary prism of G.

    Vertices 0..n-1 carry G, vertices n..2n-1 carry the complement of G and
    vertex v is matched with v+n.
    """
    if G.n > MAX_PRISM_VERTICES:
        raise CapacityExceeded(f"prism of {G.n} vertices exceeds {MAX_VERTICES}")

    n = G.n
    co = complement(G)
    adj = [row | (1 << (v + n)) for v, row in enumerate(G.adj)]
    adj += [(row << n) | (1 << v) for v, row in enumerate(co.adj)]

    return Graph(2 * n, tuple(adj))


def _split(G: Graph, within: int, in_complement: bool) -> List[int]:
    parts = []
    remaining = within
    while remaining:
        root = remaining & -remaining
        part, frontier = root, root
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            row = G.adj[v]
            if in_complement:
                row = ~row & ~(1 << v)
            new = row & within & ~part
            part |= new
            frontier |= new
        parts.append(part)
        remaining &= ~part
    return parts


def components(G: Graph, in_complement: bool = False, within: Optional[SetLike] = None) -> List[VertexSet]:
    """
    Connected components of G, or anticomponents if in_complement is set.

    Parameters
    ----------
    G: Graph
        The graph.
    in_complement: bool
        Split by connectivity of the complement instead.
    within: typing.Optional[SetLike]
        Restrict to the subgraph induced by these vertices.

    Returns
    -------
    typing.List[VertexSet]
        Partition of the vertices, parts sorted by their smallest vertex.
    """
    require_nonempty(G)
    bits = G.full if within is None else as_vertex_set(G, within).bits
    return [VertexSet(G.n, part) for part in _split(G, bits, in_complement)]


def is_connected(G: Graph, within: Optional[SetLike] = None) -> bool:
    return len(components(G, within=within)) <= 1


def girth(G: Graph) -> Union[int, float]:
    """
    Length of a shortest cycle, math.inf for forests.

    One breadth-first search per vertex; the shortest closing edge over all
    roots yields the girth.
    """
    require_nonempty(G)

    best = math.inf
    for root in range(G.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in iter_bits(G.adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)

    return best


def is_bipartite(G: Graph) -> Optional[Tuple[VertexSet, VertexSet]]:
    """
    Two-color G.

    Returns
    -------
    typing.Optional[typing.Tuple[VertexSet, VertexSet]]
        The two color classes, None if G contains an odd cycle.
    """
    color: Dict[int, int] = {}
    for root in range(G.n):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in iter_bits(G.adj[u]):
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    logger.debug(f"odd cycle through edge {u}-{w}")
                    return None

    return (VertexSet.of(G.n, (v for v, c in color.items() if c == 0)),
            VertexSet.of(G.n, (v for v, c in color.items() if c == 1)))


def universal_vertices(G: Graph, within: Optional[int] = None) -> List[int]:
    """Vertices adjacent to every other vertex of the (induced) graph."""
    bits = G.full if within is None else within
    return [v for v in iter_bits(bits) if G.adj[v] & bits == bits & ~(1 << v)]


def are_twins(G: Graph, u: int, v: int) -> bool:
    """Open or closed twins."""
    return G.adj[u] & ~(1 << v) == G.adj[v] & ~(1 << u)

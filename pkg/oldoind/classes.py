import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from oldoind import CapacityExceeded, InvalidInput
from oldoind.canon import canonical_form
from oldoind.formats import decode_graph6
from oldoind.graph import (Graph, VertexSet, are_twins, complement, components, empty_graph, from_edges, induced_subgraph, is_connected,
                           iter_bits, join, mask_of, relabel, require_nonempty)

logger = logging.getLogger(__name__)

BASE_CATALOG: Dict[str, str] = {
    "K2": "A_",
    "K3": "Bw",
    "P5": "DhC",
    "C5": "Dhc",
    "P5bar": "DUw",
    "Z": "Dqg",
    "P5_join_K1": "EhFw",
    "Z_join_K1": "Eqjw",
}
"""Small graphs singled out by the characterizations, as graph6 in generator labeling."""

BASE_WITNESSES: Dict[str, Tuple[int, ...]] = {
    "K2": (0, 1),
    "K3": (0, 1),
    "P5": (0, 1, 3, 4),
    "P5_join_K1": (0, 1, 3, 4),
    "Z": (1, 2, 3, 4),
    "Z_join_K1": (1, 2, 3, 4),
}
"""Minimum OLD_oind sets of the catalog graphs, as returned by min_oldoind."""

EXCEPTIONAL = ("C5", "P5", "P5bar")
"""Co-connected P4-tidy graphs that are neither spiders nor quasi-spiders."""

MAX_DEFINITIONAL = 8


def base_graph(name: str) -> Graph:
    if name not in BASE_CATALOG:
        raise InvalidInput(f"unknown base graph {name}, choose from {', '.join(BASE_CATALOG)}")
    return decode_graph6(BASE_CATALOG[name])


@lru_cache(maxsize=None)
def _catalog_forms() -> Dict[bytes, str]:
    return {canonical_form(base_graph(name)): name for name in BASE_CATALOG}


def recognize_base(G: Graph) -> Optional[str]:
    """Name of the catalog graph isomorphic to G, if any."""
    if G.n not in (2, 3, 5, 6):
        return None
    return _catalog_forms().get(canonical_form(G))


# named families

def path(n: int) -> Graph:
    return from_edges(n, ((v, v + 1) for v in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidInput(f"a cycle needs at least 3 vertices, got {n}")
    return from_edges(n, [(v, v + 1) for v in range(n - 1)] + [(0, n - 1)])


def complete(n: int) -> Graph:
    return from_edges(n, itertools.combinations(range(n), 2))


def matching(m: int) -> Graph:
    """mK2 with pairs (2i, 2i+1)."""
    return from_edges(2 * m, ((2 * i, 2 * i + 1) for i in range(m)))


def R(ell: int, m: int) -> Graph:
    """The join of ell independent vertices and m disjoint edges; independents come first."""
    return join(empty_graph(ell), matching(m))


def R_star(ell: int, m: int) -> Graph:
    """R(ell, m) without the edge between independent vertex 0 and pair vertex ell."""
    G = R(ell, m)
    adj = list(G.adj)
    adj[0] &= ~(1 << ell)
    adj[ell] &= ~1
    return Graph(G.n, tuple(adj))


FAMILIES = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "empty": (empty_graph, 1),
    "star": (lambda n: join(empty_graph(1), empty_graph(n)), 1),
    "cocktail_party": (lambda s: complement(matching(s)), 1),
    "R": (R, 2),
    "R_star": (R_star, 2),
    "K1_join_mK2bar": (lambda m: join(empty_graph(1), complement(matching(m))), 1),
}
"""Generator and parameter count per family name."""


def gen_named(family: str, *params: int) -> Graph:
    """
    Generate a named graph.

    Parameters
    ----------
    family: str
        A key of FAMILIES or BASE_CATALOG.
    params: int
        Family parameters, all at least 1.

    Returns
    -------
    Graph
    """
    if family in BASE_CATALOG and not params:
        return base_graph(family)
    if family not in FAMILIES:
        raise InvalidInput(f"unknown family {family}, choose from {', '.join(list(FAMILIES) + list(BASE_CATALOG))}")

    generator, arity = FAMILIES[family]
    if len(params) != arity:
        raise InvalidInput(f"{family} takes {arity} parameters, got {len(params)}")
    if any(p < 1 for p in params):
        raise InvalidInput(f"{family} parameters must be at least 1, got {list(params)}")

    return generator(*params)


# cotrees

class CotreeKind(Enum):
    LEAF = "leaf"
    UNION = "union"
    JOIN = "join"


@dataclass(frozen=True)
class Cotree:
    """
    Normalized cotree: union children are never unions, join children never joins.

    Parameters
    ----------
    kind: CotreeKind
        Node type.
    vertex: typing.Optional[int]
        Graph vertex of a leaf.
    children: typing.Tuple[Cotree, ...]
        At least two children for internal nodes.
    """
    kind: CotreeKind
    vertex: Optional[int] = None
    children: Tuple["Cotree", ...] = ()

    def leaves(self) -> List[int]:
        if self.kind is CotreeKind.LEAF:
            return [self.vertex]
        return [v for child in self.children for v in child.leaves()]

    def evaluate(self, n: Optional[int] = None) -> Graph:
        """Rebuild the graph with the original vertex labels."""
        n = max(self.leaves()) + 1 if n is None else n
        adj = [0] * n

        def build(node: "Cotree") -> int:
            if node.kind is CotreeKind.LEAF:
                return 1 << node.vertex
            masks = [build(child) for child in node.children]
            if node.kind is CotreeKind.JOIN:
                for i, a in enumerate(masks):
                    for b in masks[i + 1:]:
                        for v in iter_bits(a):
                            adj[v] |= b
                        for v in iter_bits(b):
                            adj[v] |= a
            return mask_of(v for mask in masks for v in iter_bits(mask))

        build(self)
        return Graph(n, tuple(adj))

    @property
    def as_dict(self) -> Dict:
        if self.kind is CotreeKind.LEAF:
            return {"kind": self.kind.value, "vertex": self.vertex}
        return {"kind": self.kind.value, "children": [child.as_dict for child in self.children]}


def _cotree(G: Graph, mask: int) -> Optional[Cotree]:
    if mask & (mask - 1) == 0:
        return Cotree(CotreeKind.LEAF, mask.bit_length() - 1)

    for kind, in_complement in ((CotreeKind.UNION, False), (CotreeKind.JOIN, True)):
        parts = components(G, in_complement, VertexSet(G.n, mask))
        if len(parts) > 1:
            children = []
            for part in parts:
                child = _cotree(G, part.bits)
                if child is None:
                    return None
                children.append(child)
            return Cotree(kind, None, tuple(children))

    logger.debug(f"vertices {list(iter_bits(mask))} are connected and co-connected")
    return None


def build_cotree(G: Graph) -> Optional[Cotree]:
    """The cotree of G, None if G contains an induced P4."""
    require_nonempty(G)
    return _cotree(G, G.full)


def is_cograph(G: Graph) -> bool:
    return build_cotree(G) is not None


# spiders

class SpiderKind(Enum):
    THIN = "thin"
    THICK = "thick"


class Side(Enum):
    C = "C"
    X = "X"


class Replacement(Enum):
    K2 = "K2"
    K2_BAR = "K2bar"


@dataclass(frozen=True)
class QuasiPair:
    """The twin pair replacing a single vertex of a spider."""
    replaced_pair: Tuple[int, int]
    replacement: Replacement
    original_side: Side


@dataclass(frozen=True)
class SpiderPartition:
    """
    Spider partition (C, X, H) of a graph.

    Parameters
    ----------
    C: VertexSet
        The clique, including the twin if a C vertex was replaced.
    X: VertexSet
        The independent set, including the twin if an X vertex was replaced.
    H: VertexSet
        The head, possibly empty.
    kind: SpiderKind
        thin if x_i is adjacent to c_i only, thick if adjacent to all c_j but c_i.
    k: int
        Weight before replacement.
    pairs: typing.Tuple[typing.Tuple[int, int], ...]
        The (c_i, x_i) correspondence.
    quasi: typing.Optional[QuasiPair]
        Replacement record for quasi-spiders.
    """
    C: VertexSet
    X: VertexSet
    H: VertexSet
    kind: SpiderKind
    k: int
    pairs: Tuple[Tuple[int, int], ...] = ()
    quasi: Optional[QuasiPair] = None

    @property
    def as_dict(self) -> Dict:
        out = {
            "C": self.C.as_list,
            "X": self.X.as_list,
            "H": self.H.as_list,
            "kind": self.kind.value,
            "k": self.k,
        }
        if self.quasi is not None:
            out["quasi"] = {
                "replaced_pair": list(self.quasi.replaced_pair),
                "replacement": self.quasi.replacement.value,
                "original_side": self.quasi.original_side.value,
            }
        return out


def _spider(G: Graph, mask: int) -> Optional[SpiderPartition]:
    vertices = list(iter_bits(mask))
    if len(vertices) < 4:
        return None

    degrees = np.array([(G.adj[v] & mask).bit_count() for v in vertices])
    X = mask_of(vertices[i] for i in np.flatnonzero(degrees == degrees.min()))
    k = X.bit_count()
    if k < 2:
        return None

    C = 0
    for x in iter_bits(X):
        C |= G.adj[x] & mask
    if C & X or C.bit_count() != k:
        return None
    H = mask & ~C & ~X

    for c in iter_bits(C):
        if G.adj[c] & C != C & ~(1 << c):
            return None
    for h in iter_bits(H):
        if G.adj[h] & C != C:
            return None

    neighborhoods = {x: G.adj[x] & mask for x in iter_bits(X)}
    if all(row.bit_count() == 1 for row in neighborhoods.values()):
        kind, partner = SpiderKind.THIN, {x: row for x, row in neighborhoods.items()}
    elif k >= 3 and all(row.bit_count() == k - 1 for row in neighborhoods.values()):
        kind, partner = SpiderKind.THICK, {x: C & ~row for x, row in neighborhoods.items()}
    else:
        return None
    if len(set(partner.values())) != k:
        return None

    pairs = tuple(sorted((row.bit_length() - 1, x) for x, row in partner.items()))
    return SpiderPartition(VertexSet(G.n, C), VertexSet(G.n, X), VertexSet(G.n, H), kind, k, pairs)


def find_spider_partition(G: Graph) -> Optional[SpiderPartition]:
    """
    The spider partition of G, None if G is not a spider.

    X is the set of minimum degree vertices, C their common neighborhood and
    H the rest; every adjacency condition is verified afterwards. Spiders of
    weight two are reported as thin.
    """
    return _spider(G, G.full)


def find_quasi_spider(G: Graph) -> Optional[SpiderPartition]:
    """
    The quasi-spider partition of G, None if G is no quasi-spider.

    Plain spiders are not quasi-spiders. For every twin pair u < w in
    lexicographic order, w is removed; if the rest is a spider with u in
    C or X, w joins u's side.
    """
    if G.n < 5 or _spider(G, G.full) is not None:
        return None

    for u in range(G.n):
        for w in range(u + 1, G.n):
            if not are_twins(G, u, w):
                continue
            part = _spider(G, G.full & ~(1 << w))
            if part is None or u in part.H:
                continue

            side = Side.C if u in part.C else Side.X
            replacement = Replacement.K2 if G.has_edge(u, w) else Replacement.K2_BAR
            twin = VertexSet(G.n, 1 << w)
            C = part.C | twin if side is Side.C else part.C
            X = part.X | twin if side is Side.X else part.X
            logger.debug(f"quasi-spider: {w} replaces {u} on side {side.value} as {replacement.value}")
            return SpiderPartition(C, X, part.H, part.kind, part.k, part.pairs, QuasiPair((u, w), replacement, side))

    return None


def _kind(kind: Union[SpiderKind, str]) -> SpiderKind:
    try:
        return SpiderKind(kind)
    except ValueError:
        raise InvalidInput(f"unknown spider kind {kind}")


def gen_spider(kind: Union[SpiderKind, str], k: int, head: Optional[Graph] = None) -> Graph:
    """
    Generate a spider of weight k.

    C is 0..k-1, X is k..2k-1 with x_i = k+i, the head follows.
    """
    kind = _kind(kind)
    if k < 2:
        raise InvalidInput(f"spider weight must be at least 2, got {k}")
    head = head if head is not None else empty_graph(0)

    edges = list(itertools.combinations(range(k), 2))
    for i in range(k):
        if kind is SpiderKind.THIN:
            edges.append((i, k + i))
        else:
            edges += [(j, k + i) for j in range(k) if j != i]
    edges += [(2 * k + u, 2 * k + v) for u, v in head.edges()]
    edges += [(c, 2 * k + h) for c in range(k) for h in range(head.n)]

    return from_edges(2 * k + head.n, edges)


def gen_quasi_spider(kind: Union[SpiderKind, str], k: int, head: Optional[Graph], side: Union[Side, str], index: int, replacement: Union[Replacement, str]) -> Graph:
    """
    Generate a quasi-spider: vertex index of side C or X is replaced by a
    twin pair, the new twin is appended as the last vertex.
    """
    try:
        side, replacement = Side(side), Replacement(replacement)
    except ValueError as error:
        raise InvalidInput(str(error))
    if not 0 <= index < k:
        raise InvalidInput(f"index {index} outside the spider weight {k}")

    base = gen_spider(kind, k, head)
    v = index if side is Side.C else k + index
    twin = base.n
    row = base.adj[v] | ((1 << v) if replacement is Replacement.K2 else 0)

    edges = base.edges() + [(u, twin) for u in iter_bits(row)]
    return from_edges(base.n + 1, edges)


# P4-tidy graphs

def _tidy(G: Graph, mask: int) -> bool:
    if mask & (mask - 1) == 0:
        return True

    for in_complement in (False, True):
        parts = components(G, in_complement, VertexSet(G.n, mask))
        if len(parts) > 1:
            return all(_tidy(G, part.bits) for part in parts)

    sub, _ = induced_subgraph(G, VertexSet(G.n, mask))
    if sub.n == 5 and recognize_base(sub) in EXCEPTIONAL:
        return True

    part = find_spider_partition(sub) or find_quasi_spider(sub)
    if part is None:
        return False
    return not part.H or _tidy(sub, part.H.bits)


def is_p4_tidy(G: Graph) -> bool:
    """
    Structural P4-tidy recognition.

    K1 is P4-tidy; otherwise G is P4-tidy iff all its components (or all
    its anticomponents) are, or G is C5, P5 or the complement of P5, or G is
    a spider or quasi-spider whose head is empty or P4-tidy.
    """
    require_nonempty(G)
    return _tidy(G, G.full)


def _is_p4(G: Graph, quad: int) -> bool:
    return sorted((G.adj[v] & quad).bit_count() for v in iter_bits(quad)) == [1, 1, 2, 2]


def induced_p4s(G: Graph) -> List[int]:
    """Vertex sets, as bitsets, of all induced P4's."""
    return [quad for quad in (mask_of(c) for c in itertools.combinations(range(G.n), 4)) if _is_p4(G, quad)]


def count_induced_p4(G: Graph) -> int:
    return len(induced_p4s(G))


def has_induced_p4(G: Graph) -> bool:
    return any(_is_p4(G, mask_of(c)) for c in itertools.combinations(range(G.n), 4))


def is_p4_tidy_definitional(G: Graph) -> bool:
    """
    P4-tidy test by definition: every induced P4 has at most one partner,
    a vertex outside it that creates at least one further induced P4.
    """
    require_nonempty(G)
    if G.n > MAX_DEFINITIONAL:
        raise CapacityExceeded(f"definitional P4-tidy test is limited to {MAX_DEFINITIONAL} vertices, got {G.n}")

    for quad in induced_p4s(G):
        partners = 0
        for v in iter_bits(G.full & ~quad):
            if any(_is_p4(G, quad & ~(1 << a) | 1 << v) for a in iter_bits(quad)):
                partners += 1
        if partners > 1:
            return False

    return True


# the R family

@dataclass(frozen=True)
class RPattern:
    """
    Role assignment of a graph isomorphic to R(ell, m) or R_star(ell, m).

    Parameters
    ----------
    ell: int
        Number of independent vertices.
    m: int
        Number of matching edges.
    starred: bool
        Whether one independent-to-pair edge is missing.
    independents: typing.Tuple[int, ...]
        The independent vertices, the deficient one first.
    pairs: typing.Tuple[typing.Tuple[int, int], ...]
        The matching edges; for starred patterns the first vertex of the
        first pair is the one missing its edge to the deficient vertex.
    deficient: typing.Optional[int]
        The independent vertex missing an edge.
    """
    ell: int
    m: int
    starred: bool
    independents: Tuple[int, ...]
    pairs: Tuple[Tuple[int, int], ...]
    deficient: Optional[int] = None

    @property
    def name(self) -> str:
        return f"R{'*' if self.starred else ''}({self.ell},{self.m})"

    @property
    def matched(self) -> List[int]:
        return [v for pair in self.pairs for v in pair]

    @property
    def labeling(self) -> List[int]:
        """Vertex order mapping the graph onto its generator labeling."""
        return list(self.independents) + self.matched

    def mapped(self, index: Dict[int, int]) -> "RPattern":
        """The same pattern with vertices renamed through index."""
        return RPattern(self.ell, self.m, self.starred,
                        tuple(index[v] for v in self.independents),
                        tuple((index[a], index[b]) for a, b in self.pairs),
                        None if self.deficient is None else index[self.deficient])


def _has_edges(G: Graph, part: VertexSet) -> bool:
    return any(G.adj[v] & part.bits for v in part)


def _is_perfect_matching(G: Graph, part: VertexSet) -> bool:
    return all((G.adj[v] & part.bits).bit_count() == 1 for v in part)


def _plain_R(G: Graph, prefer: Optional[int] = None) -> Optional[RPattern]:
    if G.n < 3 or not is_connected(G):
        return None

    anti = components(G, in_complement=True)
    independents, matched = None, None
    if len(anti) == 2:
        for I, M in (anti, anti[::-1]):
            if not _has_edges(G, I) and len(M) >= 4 and _is_perfect_matching(G, M):
                independents, matched = I.as_list, M
    elif len(anti) == 3:
        singles = [P for P in anti if len(P) == 1]
        if len(singles) == 3:
            first = prefer if prefer is not None else 0
            independents = [first]
            matched = VertexSet(G.n, G.full & ~(1 << first))
        elif len(singles) == 2:
            I = next(P for P in anti if len(P) > 1)
            if not _has_edges(G, I):
                independents, matched = I.as_list, singles[0] | singles[1]

    if independents is None:
        return None

    pairs = []
    for v in matched:
        partner = (G.adj[v] & matched.bits).bit_length() - 1
        if v < partner:
            pairs.append((v, partner))

    pattern = RPattern(len(independents), len(pairs), False, tuple(independents), tuple(pairs))
    if relabel(G, pattern.labeling) != R(pattern.ell, pattern.m):
        return None
    return pattern


def recognize_R(G: Graph) -> Optional[RPattern]:
    """
    Match G against R(ell, m) and R_star(ell, m).

    Plain patterns are read off the anticomponents: one edgeless part joined
    to a perfect matching. Starred patterns are found by restoring a single
    non-edge between an independent and a matched vertex. Every match is
    confirmed by relabeling G onto the generated graph.
    """
    plain = _plain_R(G)
    if plain is not None:
        return plain
    if G.n < 3:
        return None

    shapes = [(G.n - 2 * m, m) for m in range(1, (G.n - 1) // 2 + 1)]
    if not any(m * (1 + 2 * ell) - 1 == G.m for ell, m in shapes):
        return None

    for u in range(G.n):
        for w in range(u + 1, G.n):
            if G.has_edge(u, w):
                continue
            adj = list(G.adj)
            adj[u] |= 1 << w
            adj[w] |= 1 << u
            pattern = _plain_R(Graph(G.n, tuple(adj)), prefer=u)
            if pattern is None or (u in pattern.independents) == (w in pattern.independents):
                continue

            deficient, other = (u, w) if u in pattern.independents else (w, u)
            independents = (deficient,) + tuple(v for v in pattern.independents if v != deficient)
            first = next(pair for pair in pattern.pairs if other in pair)
            first = (other, first[0] + first[1] - other)
            pairs = (first,) + tuple(pair for pair in pattern.pairs if other not in pair)

            starred = RPattern(pattern.ell, pattern.m, True, independents, pairs, deficient)
            if relabel(G, starred.labeling) == R_star(starred.ell, starred.m):
                return starred

    return None


def parse_head(name: Optional[str]) -> Optional[Graph]:
    """Head graph by name for the spider generators: a catalog name, P<n>, K<n> or K<n>bar."""
    if name is None or name in ("", "empty", "none"):
        return None
    if name in BASE_CATALOG:
        return base_graph(name)
    if name[0] in "PKC" and name[1:].removesuffix("bar").isdigit():
        size = int(name[1:].removesuffix("bar"))
        graph = {"P": path, "K": complete, "C": cycle}[name[0]](size)
        return complement(graph) if name.endswith("bar") else graph
    raise InvalidInput(f"unknown head graph {name}")

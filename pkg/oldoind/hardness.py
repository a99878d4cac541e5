"""
Reduction from exact cover by 3-sets to OLD_oind existence.

Every element x_i becomes a vertex joined through a private vertex y_ij to
the set vertex S_j of every triple containing it, and every set vertex sits
on its own 6-cycle S_j a_j b_j c_j d_j e_j. The instance has an exact cover
if and only if the gadget has an OLD_oind set; a cover maps to a set and back
through the set vertices left out of it.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from oldoind import CapacityExceeded, InternalContractError, InvalidInput, NotAnExactCover, ParseError, WitnessInvalid
from oldoind.graph import MAX_VERTICES, Graph, SetLike, VertexSet, as_vertex_set, from_edges, is_bipartite
from oldoind.verify import verify_oldoind

logger = logging.getLogger(__name__)

RING = ("S", "a", "b", "c", "d", "e")
RING_PATTERNS: Tuple[FrozenSet[str], ...] = (
    frozenset("Sacd"),
    frozenset("Sbce"),
    frozenset("abde"),
)
"""Intersections of an OLD_oind set of the gadget with a single ring."""

MAX_BRUTEFORCE_SETS = 24
MAX_ENUMERATE_GROUND = 6

Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class X3CInstance:
    """
    Exact cover by 3-sets instance.

    Parameters
    ----------
    ground_size: int
        Number of elements 3n, elements are 0..3n-1.
    sets: typing.Tuple[Triple, ...]
        The triples, each sorted.
    """
    ground_size: int
    sets: Tuple[Triple, ...]

    def __post_init__(self):
        if self.ground_size < 3 or self.ground_size % 3:
            raise InvalidInput(f"ground set size must be a positive multiple of 3, got {self.ground_size}")
        if not self.sets:
            raise InvalidInput("an instance needs at least one triple")
        for j, triple in enumerate(self.sets):
            if len(triple) != 3 or len(set(triple)) != 3:
                raise InvalidInput(f"set {j + 1} is not a triple of distinct elements: {triple}")
            if not all(0 <= x < self.ground_size for x in triple):
                raise InvalidInput(f"set {j + 1} has an element outside [1, {self.ground_size}]")

    @classmethod
    def of(cls, ground_size: int, sets: Sequence[Sequence[int]]) -> "X3CInstance":
        return cls(ground_size, tuple(tuple(sorted(triple)) for triple in sets))

    @property
    def m(self) -> int:
        return len(self.sets)

    def is_exact_cover(self, cover: Sequence[int]) -> bool:
        """Whether the triples with the given 0-based indices partition the ground set."""
        if any(not 0 <= j < self.m for j in cover) or len(set(cover)) != len(cover):
            return False
        covered = [x for j in cover for x in self.sets[j]]
        return len(covered) == self.ground_size and len(set(covered)) == self.ground_size


def parse_x3c(text: str) -> X3CInstance:
    """
    Parse the instance text format: a line "3n m" followed by m lines of
    three 1-based elements. Lines starting with # are ignored.

    Raises
    ------
    ParseError
        With the byte offset of the offending line.
    """
    offset = 0
    rows = []
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            fields = stripped.split()
            if not all(f.isdigit() for f in fields):
                raise ParseError(f"expected non-negative integers, got {stripped!r}", offset)
            rows.append(([int(f) for f in fields], offset))
        offset += len(line.encode())

    if not rows:
        raise ParseError("empty instance", 0)
    header, at = rows[0]
    if len(header) != 2:
        raise ParseError(f"header needs ground set size and set count, got {len(header)} fields", at)

    ground, m = header
    if len(rows) - 1 != m:
        raise ParseError(f"header announces {m} sets, found {len(rows) - 1}", rows[-1][1])

    sets = []
    for values, at in rows[1:]:
        if len(values) != 3:
            raise ParseError(f"a set needs 3 elements, got {len(values)}", at)
        if not all(1 <= x <= ground for x in values):
            raise ParseError(f"elements must lie in [1, {ground}], got {values}", at)
        sets.append([x - 1 for x in values])

    return X3CInstance.of(ground, sets)


def format_x3c(inst: X3CInstance) -> str:
    return "".join([f"{inst.ground_size} {inst.m}\n"] + [" ".join(str(x + 1) for x in triple) + "\n" for triple in inst.sets])


@dataclass(frozen=True)
class GadgetMap:
    """
    Vertex names of a gadget graph.

    Element and set indices in names are 1-based: x_i, y_i_j, S_j and the
    ring vertices a_j to e_j.

    Parameters
    ----------
    names: typing.Tuple[str, ...]
        Name of every vertex, in vertex order.
    graph: Graph
        The gadget itself.
    """
    names: Tuple[str, ...]
    graph: Graph
    index: Dict[str, int] = field(init=False, hash=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {name: v for v, name in enumerate(self.names)})

    def __getitem__(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise InvalidInput(f"no gadget vertex named {name}")

    def name(self, v: int) -> str:
        return self.names[v]

    def ring(self, j: int) -> Dict[str, int]:
        """Ring vertices of the 0-based set j by letter."""
        return {letter: self.index[f"{letter}_{j + 1}"] for letter in RING}

    @property
    def to_json(self) -> Dict[str, int]:
        return dict(self.index)


def gadget_size(inst: X3CInstance) -> int:
    return inst.ground_size + 3 * inst.m + 6 * inst.m


def build_gadget(inst: X3CInstance) -> Tuple[Graph, GadgetMap]:
    """
    Build the gadget graph of an instance.

    Vertices are ordered: elements, then the y vertices set by set, then
    the rings S_j, a_j, ..., e_j set by set.

    Raises
    ------
    CapacityExceeded
        If the gadget has more than MAX_VERTICES vertices.
    InternalContractError
        If the result is not bipartite.
    """
    size = gadget_size(inst)
    if size > MAX_VERTICES:
        raise CapacityExceeded(f"gadget needs {size} vertices, the limit is {MAX_VERTICES}")

    names: List[str] = [f"x_{i + 1}" for i in range(inst.ground_size)]
    names += [f"y_{i + 1}_{j + 1}" for j, triple in enumerate(inst.sets) for i in triple]
    names += [f"{letter}_{j + 1}" for j in range(inst.m) for letter in RING]
    index = {name: v for v, name in enumerate(names)}

    edges = []
    for j, triple in enumerate(inst.sets):
        for i in triple:
            y = index[f"y_{i + 1}_{j + 1}"]
            edges += [(index[f"x_{i + 1}"], y), (y, index[f"S_{j + 1}"])]
        ring = [index[f"{letter}_{j + 1}"] for letter in RING]
        edges += [(ring[k], ring[(k + 1) % 6]) for k in range(6)]

    graph = from_edges(size, edges)
    if is_bipartite(graph) is None:
        raise InternalContractError("gadget graph is not bipartite")

    logger.debug(f"gadget with {graph.n} vertices and {graph.m} edges")
    return graph, GadgetMap(tuple(names), graph)


def cover_to_set(inst: X3CInstance, gadget: GadgetMap, cover: Sequence[int]) -> VertexSet:
    """
    Translate an exact cover into an OLD_oind set of the gadget.

    Covering sets contribute their elements, their y vertices and the ring
    vertices a, b, d, e; all other sets contribute S, a, c and d.

    Raises
    ------
    NotAnExactCover
        If cover is not an exact cover.
    InternalContractError
        If the translated set fails verification.
    """
    if not inst.is_exact_cover(cover):
        raise NotAnExactCover(f"sets {sorted(j + 1 for j in cover)} do not partition the ground set")

    chosen = set(cover)
    names = []
    for j, triple in enumerate(inst.sets):
        if j in chosen:
            names += [f"x_{i + 1}" for i in triple] + [f"y_{i + 1}_{j + 1}" for i in triple]
            names += [f"{letter}_{j + 1}" for letter in "abde"]
        else:
            names += [f"{letter}_{j + 1}" for letter in "Sacd"]

    D = VertexSet.of(gadget.graph.n, (gadget[name] for name in names))
    verdict = verify_oldoind(gadget.graph, D)
    if not verdict.valid:
        raise InternalContractError(f"cover translation fails with {verdict.violation} at {[gadget.name(v) for v in verdict.witnesses]}")
    return D


def set_to_cover(inst: X3CInstance, gadget: GadgetMap, D: SetLike) -> List[int]:
    """
    Translate an OLD_oind set of the gadget into an exact cover: the sets
    whose vertex S_j is not in D.

    Raises
    ------
    WitnessInvalid
        If D is not an OLD_oind set of the gadget.
    InternalContractError
        If the extracted sets are not an exact cover.
    """
    D = as_vertex_set(gadget.graph, D)
    verdict = verify_oldoind(gadget.graph, D)
    if not verdict.valid:
        raise WitnessInvalid(f"{verdict.violation.value} at {[gadget.name(v) for v in verdict.witnesses]}")

    cover = [j for j in range(inst.m) if gadget[f"S_{j + 1}"] not in D]
    if not inst.is_exact_cover(cover):
        raise InternalContractError(f"extracted sets {[j + 1 for j in cover]} are not an exact cover")
    return cover


def x3c_bruteforce(inst: X3CInstance) -> Optional[List[int]]:
    """
    The lexicographically smallest exact cover, None if there is none.

    Raises
    ------
    CapacityExceeded
        If the instance has more than MAX_BRUTEFORCE_SETS triples.
    """
    if inst.m > MAX_BRUTEFORCE_SETS:
        raise CapacityExceeded(f"brute force is limited to {MAX_BRUTEFORCE_SETS} sets, got {inst.m}")

    full = (1 << inst.ground_size) - 1
    masks = [sum(1 << x for x in triple) for triple in inst.sets]

    def search(start: int, covered: int, chosen: List[int]) -> Optional[List[int]]:
        if covered == full:
            return list(chosen)
        for j in range(start, inst.m):
            if not masks[j] & covered:
                chosen.append(j)
                result = search(j + 1, covered | masks[j], chosen)
                chosen.pop()
                if result is not None:
                    return result
        return None

    return search(0, 0, [])


def ring_pattern(gadget: GadgetMap, D: SetLike, j: int) -> FrozenSet[str]:
    """Letters of the ring of the 0-based set j that lie in D."""
    D = as_vertex_set(gadget.graph, D)
    return frozenset(letter for letter, v in gadget.ring(j).items() if v in D)


class RingPatternRule:
    """
    Pruning rule for the exact search on a gadget: a partial set is cut as
    soon as some ring can no longer end up in one of RING_PATTERNS.
    """

    def __init__(self, gadget: GadgetMap):
        self.rings: List[Tuple[int, Tuple[int, ...]]] = []
        sets = sum(1 for name in gadget.names if name.startswith("S_"))
        for j in range(sets):
            ring = gadget.ring(j)
            mask = sum(1 << v for v in ring.values())
            allowed = tuple(sum(1 << ring[letter] for letter in pattern) for pattern in RING_PATTERNS)
            self.rings.append((mask, allowed))

    def __call__(self, chosen: int, free: int) -> bool:
        for mask, allowed in self.rings:
            inside, open_ = chosen & mask, free & mask
            if not any(inside & ~pattern == 0 and pattern & ~(inside | open_) == 0 for pattern in allowed):
                return True
        return False


def _canonical_sets(sets: Sequence[Triple], perms: Sequence[Tuple[int, ...]]) -> Tuple[Triple, ...]:
    return min(tuple(sorted(tuple(sorted(p[x] for x in triple)) for triple in sets)) for p in perms)


def enumerate_x3c_instances(ground: int, max_sets: int) -> Iterator[X3CInstance]:
    """
    All instances on ground elements with 1 to max_sets distinct triples,
    one per orbit under permutations of the elements.

    Raises
    ------
    CapacityExceeded
        If ground exceeds MAX_ENUMERATE_GROUND.
    """
    if ground > MAX_ENUMERATE_GROUND:
        raise CapacityExceeded(f"instance enumeration is limited to {MAX_ENUMERATE_GROUND} elements, got {ground}")

    triples = list(itertools.combinations(range(ground), 3))
    perms = list(itertools.permutations(range(ground)))
    seen = set()
    for m in range(1, max_sets + 1):
        for sets in itertools.combinations(triples, m):
            key = _canonical_sets(sets, perms)
            if key in seen:
                continue
            seen.add(key)
            yield X3CInstance(ground, key)

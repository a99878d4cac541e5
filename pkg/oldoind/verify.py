import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from oldoind import PreconditionViolated, InvalidInput
from oldoind.graph import Graph, SetLike, VertexSet, as_vertex_set, girth, iter_bits, require_nonempty

logger = logging.getLogger(__name__)


class Violation(Enum):
    NOT_OPEN_DOMINATING = "not-open-dominating"
    OPEN_INDEPENDENCE = "open-independence"
    NOT_DISTINGUISHED = "not-distinguished"
    OVER_DOMINATED_IN_S = "over-dominated-in-S"
    UNDER_DOMINATED = "under-dominated"


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of checking a candidate set.

    Parameters
    ----------
    valid: bool
        Whether every clause holds.
    violation: typing.Optional[Violation]
        The first violated clause.
    witnesses: typing.Tuple[int, ...]
        Vertices exhibiting the violation.
    codes: typing.Optional[typing.Tuple[VertexSet, ...]]
        N(v) & S for every vertex v, if requested.
    """
    valid: bool
    violation: Optional[Violation] = None
    witnesses: Tuple[int, ...] = ()
    codes: Optional[Tuple[VertexSet, ...]] = None

    @property
    def as_dict(self) -> Dict:
        out: Dict = {
            "valid": self.valid,
            "violation": self.violation.value if self.violation else None,
            "witnesses": list(self.witnesses),
        }
        if self.codes is not None:
            out["codes"] = {str(v): code.as_list for v, code in enumerate(self.codes)}
        return out


VALID = Verdict(True)


def code(G: Graph, S: SetLike, v: int) -> VertexSet:
    """The code N(v) & S of vertex v."""
    S = as_vertex_set(G, S)
    if not 0 <= v < G.n:
        raise InvalidInput(f"vertex {v} out of range [0, {G.n})")
    return VertexSet(G.n, G.adj[v] & S.bits)


def _codes(G: Graph, S: VertexSet) -> Tuple[VertexSet, ...]:
    return tuple(VertexSet(G.n, row & S.bits) for row in G.adj)


def _first_undominated(G: Graph, S: VertexSet) -> Optional[Verdict]:
    for v, row in enumerate(G.adj):
        if not row & S.bits:
            return Verdict(False, Violation.NOT_OPEN_DOMINATING, (v,))
    return None


def _first_shared_code(G: Graph, S: VertexSet) -> Optional[Verdict]:
    # lexicographically smallest pair (u, v) with equal codes
    groups: Dict[int, List[int]] = {}
    for v, row in enumerate(G.adj):
        groups.setdefault(row & S.bits, []).append(v)

    pairs = [(members[0], members[1]) for members in groups.values() if len(members) > 1]
    if pairs:
        return Verdict(False, Violation.NOT_DISTINGUISHED, min(pairs))
    return None


def verify_old(G: Graph, S: SetLike) -> Verdict:
    """
    Check that S is an open-locating-dominating set of G.

    Clauses are checked in the order open domination, then distinct codes.
    """
    require_nonempty(G)
    S = as_vertex_set(G, S)
    verdict = _first_undominated(G, S)
    if verdict is None:
        verdict = _first_shared_code(G, S)
    return verdict if verdict is not None else VALID


def verify_oldoind(G: Graph, S: SetLike, with_codes: bool = False) -> Verdict:
    """
    Check that S is an open-independent open-locating-dominating set of G.

    Clauses are checked in a fixed order: open domination, open
    independence, distinct codes. Within a clause the smallest witness is
    reported.

    Parameters
    ----------
    G: Graph
        The graph.
    S: SetLike
        The candidate set.
    with_codes: bool
        Attach the codes of all vertices to the verdict.

    Returns
    -------
    Verdict
    """
    require_nonempty(G)
    S = as_vertex_set(G, S)

    verdict = _first_undominated(G, S)
    if verdict is None:
        for v in S:
            if (G.adj[v] & S.bits).bit_count() > 1:
                verdict = Verdict(False, Violation.OPEN_INDEPENDENCE, (v,))
                break
    if verdict is None:
        verdict = _first_shared_code(G, S)
    if verdict is None:
        verdict = VALID

    if with_codes:
        verdict = Verdict(verdict.valid, verdict.violation, verdict.witnesses, _codes(G, S))
    return verdict


def check_necessary(G: Graph, S: SetLike) -> Verdict:
    """
    Check the domination counts every OLD_oind set satisfies.

    Every vertex of S must be open-dominated exactly once, every other
    vertex at least twice. Undominated vertices are reported first, then
    vertices of S dominated more than once, then the remaining ones.
    """
    require_nonempty(G)
    S = as_vertex_set(G, S)

    verdict = _first_undominated(G, S)
    if verdict is not None:
        return verdict

    counts = [(row & S.bits).bit_count() for row in G.adj]
    for v in S:
        if counts[v] > 1:
            return Verdict(False, Violation.OVER_DOMINATED_IN_S, (v,))
    for v, count in enumerate(counts):
        if v not in S and count < 2:
            return Verdict(False, Violation.UNDER_DOMINATED, (v,))

    return VALID


def verify_girth5(G: Graph, S: SetLike) -> Verdict:
    """
    Decide OLD_oind membership on graphs of girth at least five.

    On such graphs the domination counts of check_necessary are also
    sufficient.

    Raises
    ------
    PreconditionViolated
        If G has a cycle shorter than five.
    """
    g = girth(G)
    if g < 5:
        raise PreconditionViolated(f"girth {g} is below 5")
    return check_necessary(G, S)


def find_open_twins(G: Graph) -> Optional[Tuple[int, int]]:
    """The lexicographically smallest pair of distinct vertices with equal open neighborhoods."""
    groups: Dict[int, List[int]] = {}
    for v, row in enumerate(G.adj):
        groups.setdefault(row, []).append(v)

    pairs = [(members[0], members[1]) for members in groups.values() if len(members) > 1]
    return min(pairs) if pairs else None


def induces_matching(G: Graph, S: SetLike) -> bool:
    """Whether G[S] is a disjoint union of K2's."""
    S = as_vertex_set(G, S)
    return all((G.adj[v] & S.bits).bit_count() == 1 for v in iter_bits(S.bits))

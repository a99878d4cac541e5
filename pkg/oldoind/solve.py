import logging
import multiprocessing
from dataclasses import dataclass
from enum import Enum
from typing import Callable, FrozenSet, List, Optional, Tuple

from oldoind import InternalContractError, SearchBudgetExceeded
from oldoind.graph import Graph, VertexSet, iter_bits, require_nonempty
from oldoind.verify import find_open_twins, verify_oldoind

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
PruningRule = Callable[[int, int], bool]
"""Called with the chosen and free vertex bitsets, returns True to cut the branch."""


class SolveStatus(Enum):
    FOUND = "found"
    ABSENT = "absent"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class SolveResult:
    """
    Outcome of the exact search.

    Parameters
    ----------
    status: SolveStatus
        found, proven absent, or budget exceeded before a decision.
    set: typing.Optional[VertexSet]
        The OLD_oind set if found.
    nodes_explored: int
        Search nodes visited.
    """
    status: SolveStatus
    set: Optional[VertexSet] = None
    nodes_explored: int = 0

    @property
    def found(self) -> bool:
        return self.status is SolveStatus.FOUND

    @property
    def size(self) -> Optional[int]:
        return len(self.set) if self.set is not None else None

    @property
    def as_dict(self):
        return {
            "status": self.status.value,
            "size": self.size,
            "nodes_explored": self.nodes_explored,
        }


def _sort_key(bits: int) -> Tuple[int, ...]:
    return tuple(iter_bits(bits))


class MatchingSearch:
    """
    Depth-first search over induced matchings.

    Every OLD_oind set induces a disjoint union of K2's, so the search adds
    one edge at a time. A node holds the chosen vertices S; their outside
    neighbors are forbidden, all remaining vertices are free. The search
    branches on the most constrained vertex that still lacks domination and
    tries every free edge giving it a new neighbor in S. Edges tried earlier
    at a node are banned in later siblings, so every set is reached once.

    Parameters
    ----------
    graph: Graph
        The graph to search.
    budget: typing.Optional[int]
        Maximum number of nodes, unlimited if None.
    rule: typing.Optional[PruningRule]
        Additional pruning rule; must be picklable for parallel runs.
    """

    def __init__(self, graph: Graph, budget: Optional[int] = None, rule: Optional[PruningRule] = None):
        self.graph = graph
        self.budget = budget
        self.rule = rule
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(f"node budget of {self.budget} exhausted")

    def _target(self, chosen: int, forbidden: int) -> Tuple[bool, Optional[int]]:
        """
        Check partial feasibility and pick the next vertex to branch on.

        Returns
        -------
        bool
            False if the node cannot lead to an OLD_oind set.
        typing.Optional[int]
            Vertex to branch on, None if chosen is already an OLD_oind set.
        """
        adj = self.graph.adj
        free = self.graph.full & ~(chosen | forbidden)
        live = chosen | free

        reachable = set()
        target, target_key = None, None
        for v, row in enumerate(adj):
            # codes can only shrink to row & final S, equal bounds stay equal
            bound = row & live
            if bound in reachable:
                return False, None
            reachable.add(bound)

            bit = 1 << v
            if chosen & bit:
                continue

            avail = (row & free).bit_count()
            if free & bit:
                need = 1
            else:
                need = 2 - (row & chosen).bit_count()
                if need <= 0:
                    continue
            if avail < need:
                return False, None

            key = (avail - need, avail, v)
            if target_key is None or key < target_key:
                target, target_key = v, key

        return True, target

    def options(self, chosen: int, forbidden: int, target: int, banned: FrozenSet[Edge]) -> List[Edge]:
        """Free edges giving target a new neighbor in S, in lexicographic order."""
        adj = self.graph.adj
        free = self.graph.full & ~(chosen | forbidden)
        edges = set()
        for w in iter_bits(adj[target] & free):
            for x in iter_bits(adj[w] & free):
                edges.add((min(w, x), max(w, x)))
        return sorted(edges - banned)

    @staticmethod
    def _add(graph: Graph, chosen: int, forbidden: int, edge: Edge) -> Tuple[int, int]:
        a, b = edge
        chosen |= 1 << a | 1 << b
        forbidden = (forbidden | graph.adj[a] | graph.adj[b]) & ~chosen
        return chosen, forbidden

    def descend(self,
                chosen: int,
                forbidden: int,
                depth: int,
                limit: int,
                banned: FrozenSet[Edge],
                first_only: bool,
                found: List[int],
                ) -> bool:
        """
        Explore a node and its subtree.

        Solutions are appended to found. Returns True once the search may stop.
        """
        self._tick()

        feasible, target = self._target(chosen, forbidden)
        if not feasible:
            return False
        if target is None:
            found.append(chosen)
            return first_only
        if depth >= limit:
            return False

        free = self.graph.full & ~(chosen | forbidden)
        if self.rule is not None and self.rule(chosen, free):
            return False

        local = set(banned)
        for edge in self.options(chosen, forbidden, target, banned):
            child, child_forbidden = self._add(self.graph, chosen, forbidden, edge)
            if self.descend(child, child_forbidden, depth + 1, limit, frozenset(local), first_only, found):
                return True
            local.add(edge)

        return False

    def root_branches(self) -> List[Tuple[Edge, FrozenSet[Edge]]]:
        """Top level branches with their banned edges, for splitting across workers."""
        feasible, target = self._target(0, 0)
        if not feasible or target is None:
            return []
        edges = self.options(0, 0, target, frozenset())
        return [(edge, frozenset(edges[:i])) for i, edge in enumerate(edges)]


def _run_branch(args) -> Tuple[List[int], int, bool]:
    graph, budget, rule, edge, banned, limit, first_only = args
    search = MatchingSearch(graph, budget, rule)
    chosen, forbidden = MatchingSearch._add(graph, 0, 0, edge)
    found: List[int] = []
    try:
        search.descend(chosen, forbidden, 1, limit, banned, first_only, found)
    except SearchBudgetExceeded:
        return found, search.nodes, True
    return found, search.nodes, False


def _search(G: Graph, limit: int, first_only: bool, budget: Optional[int], workers: int, rule: Optional[PruningRule], spent: int) -> Tuple[List[int], int, bool]:
    remaining = None if budget is None else budget - spent

    if workers <= 1:
        search = MatchingSearch(G, remaining, rule)
        found: List[int] = []
        try:
            search.descend(0, 0, 0, limit, frozenset(), first_only, found)
        except SearchBudgetExceeded:
            return found, search.nodes, True
        return found, search.nodes, False

    root = MatchingSearch(G, remaining, rule)
    branches = root.root_branches()
    tasks = [(G, remaining, rule, edge, banned, limit, first_only) for edge, banned in branches]
    logger.debug(f"splitting {len(tasks)} top level branches across {workers} workers")
    with multiprocessing.Pool(workers) as pool:
        results = pool.map(_run_branch, tasks)

    found, nodes, exceeded = [], 1, False
    for branch_found, branch_nodes, branch_exceeded in results:
        nodes += branch_nodes
        # in serial order the first decided branch ends a first_only run
        if first_only and (found or exceeded):
            continue
        exceeded = exceeded or branch_exceeded
        found.extend(branch_found)

    return found, nodes, exceeded


def _checked(G: Graph, bits: int, nodes: int) -> SolveResult:
    S = VertexSet(G.n, bits)
    verdict = verify_oldoind(G, S)
    if not verdict.valid:
        raise InternalContractError(f"search returned {S} which fails with {verdict.violation}")
    return SolveResult(SolveStatus.FOUND, S, nodes)


def exists_oldoind(G: Graph, budget: Optional[int] = None, workers: int = 1, rule: Optional[PruningRule] = None) -> SolveResult:
    """
    Search for any OLD_oind set of G.

    Parameters
    ----------
    G: Graph
        The graph.
    budget: typing.Optional[int]
        Node budget; exhausting it yields SolveStatus.BUDGET_EXCEEDED.
    workers: int
        Worker processes sharing the top level branches.
    rule: typing.Optional[PruningRule]
        Additional pruning rule.

    Returns
    -------
    SolveResult
        The first set in search order, identical for serial and parallel runs.
    """
    require_nonempty(G)
    twins = find_open_twins(G)
    if twins is not None:
        logger.debug(f"open twins {twins}, no OLD_oind set")
        return SolveResult(SolveStatus.ABSENT)

    found, nodes, exceeded = _search(G, G.n // 2, True, budget, workers, rule, 0)
    if found:
        return _checked(G, found[0], nodes)
    if exceeded:
        logger.warning(f"search budget of {budget} nodes exhausted")
        return SolveResult(SolveStatus.BUDGET_EXCEEDED, None, nodes)
    return SolveResult(SolveStatus.ABSENT, None, nodes)


def min_oldoind(G: Graph, budget: Optional[int] = None, workers: int = 1, rule: Optional[PruningRule] = None) -> SolveResult:
    """
    Search for a minimum OLD_oind set of G.

    Iterative deepening on the number of matching edges; among all sets with
    the first feasible edge count the lexicographically smallest sorted
    vertex list is returned.

    Parameters
    ----------
    G: Graph
        The graph.
    budget: typing.Optional[int]
        Node budget over all deepening rounds.
    workers: int
        Worker processes sharing the top level branches.
    rule: typing.Optional[PruningRule]
        Additional pruning rule.

    Returns
    -------
    SolveResult
    """
    require_nonempty(G)
    twins = find_open_twins(G)
    if twins is not None:
        logger.debug(f"open twins {twins}, no OLD_oind set")
        return SolveResult(SolveStatus.ABSENT)

    nodes = 0
    for limit in range(1, G.n // 2 + 1):
        found, spent, exceeded = _search(G, limit, False, budget, workers, rule, nodes)
        nodes += spent
        if exceeded:
            logger.warning(f"search budget of {budget} nodes exhausted at {limit} edges")
            return SolveResult(SolveStatus.BUDGET_EXCEEDED, None, nodes)
        if found:
            logger.debug(f"{len(found)} sets with {limit} edges after {nodes} nodes")
            return _checked(G, min(found, key=_sort_key), nodes)

    return SolveResult(SolveStatus.ABSENT, None, nodes)

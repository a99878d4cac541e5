"""
Polynomial deciders with constructive witnesses.

The P4-tidy and cograph deciders walk the component structure: a connected
component is accepted if it is one of the base graphs, or if it has a
universal vertex whose removal leaves at least two components that are all
accepted in turn. The prism decider works on the components of the
complement of a connected cograph and tries, in this order, the single
universal vertex case, the case of two vertices in the G-side of the
witness, and peeling off a component that is decided recursively.
"""

import logging
import threading
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from oldoind import (CapacityExceeded, InternalContractError, NotCograph, NotConnected, NotP4Tidy, WitnessInvalid)
from oldoind.canon import MAX_CANONICAL, canonical_form, canonical_labeling, find_isomorphism
from oldoind.classes import BASE_WITNESSES, RPattern, base_graph, is_cograph, is_p4_tidy, recognize_base, recognize_R
from oldoind.formats import encode_graph6
from oldoind.graph import (MAX_PRISM_VERTICES, Graph, SetLike, VertexSet, as_vertex_set, complement, complementary_prism, components, induced_subgraph,
                           is_connected, iter_bits, mask_of, relabel, require_nonempty, universal_vertices)
from oldoind.verify import verify_oldoind

logger = logging.getLogger(__name__)

P4_TIDY_BASES = ("K2", "K3", "P5", "P5_join_K1", "Z", "Z_join_K1")
COGRAPH_BASES = ("K2", "K3")


@dataclass(frozen=True)
class Derivation:
    """
    Trace of the case that decided a (sub)graph.

    Parameters
    ----------
    case: str
        union, base, universal-join, universal-base, size2-structure, peel or reject.
    graph6: str
        The (sub)graph the case applies to.
    params: typing.Dict
        Case parameters, e.g. the base name or the peel counts.
    chosen: typing.Tuple[int, ...]
        Vertices selected at this level, in the labels of the input graph.
    children: typing.Tuple[Derivation, ...]
        Derivations of the subproblems.
    """
    case: str
    graph6: str
    params: Dict = field(default_factory=dict, hash=False, compare=False)
    chosen: Tuple[int, ...] = ()
    children: Tuple["Derivation", ...] = ()

    @property
    def as_dict(self) -> Dict:
        out = {"case": self.case, "graph6": self.graph6, "params": self.params}
        if self.chosen:
            out["chosen"] = list(self.chosen)
        if self.children:
            out["children"] = [child.as_dict for child in self.children]
        return out


@dataclass(frozen=True)
class PrismWitness:
    """
    An OLD_oind set of a complementary prism, split by side.

    Parameters
    ----------
    S0: VertexSet
        Vertices on the G side, labels 0..n-1.
    S1bar: VertexSet
        Vertices on the complement side, prism labels n..2n-1.
    derivation: Derivation
        How the set was obtained.
    """
    S0: VertexSet
    S1bar: VertexSet
    derivation: Derivation

    @property
    def as_set(self) -> VertexSet:
        return VertexSet(self.S1bar.n, self.S0.bits | self.S1bar.bits)

    @classmethod
    def from_set(cls, G: Graph, S: SetLike) -> "PrismWitness":
        """Split a vertex set of the prism of G, e.g. one found by search."""
        S = as_vertex_set(complementary_prism(G), S)
        return cls(VertexSet(G.n, S.bits & G.full), VertexSet(2 * G.n, S.bits & (G.full << G.n)),
                   Derivation("external", encode_graph6(G)))

    @property
    def as_dict(self) -> Dict:
        return {"S0": self.S0.as_list, "S1bar": self.S1bar.as_list}


@dataclass(frozen=True)
class Decision:
    """
    Outcome of a decider.

    Parameters
    ----------
    witness: typing.Optional[VertexSet]
        The constructed OLD_oind set, None if rejected.
    derivation: Derivation
        Decision trace.
    prism: typing.Optional[PrismWitness]
        Side split of the witness for prism decisions.
    """
    witness: Optional[VertexSet]
    derivation: Derivation
    prism: Optional[PrismWitness] = None

    @property
    def accepted(self) -> bool:
        return self.witness is not None


def _graph6_of(G: Graph, mask: int) -> str:
    return encode_graph6(induced_subgraph(G, VertexSet(G.n, mask))[0])


def _decide_components(G: Graph, mask: int, bases: Tuple[str, ...]) -> Tuple[Optional[int], Derivation]:
    parts = components(G, within=VertexSet(G.n, mask))
    if len(parts) > 1:
        results = [_decide_components(G, part.bits, bases) for part in parts]
        witness = None
        if all(bits is not None for bits, _ in results):
            witness = mask_of(v for bits, _ in results for v in iter_bits(bits))
        return witness, Derivation("union", _graph6_of(G, mask), {"t": len(parts)}, (), tuple(d for _, d in results))

    sub, index = induced_subgraph(G, VertexSet(G.n, mask))
    graph6 = encode_graph6(sub)

    name = recognize_base(sub)
    if name in bases:
        labels = list(index)
        iso = find_isomorphism(base_graph(name), sub)
        witness = mask_of(labels[iso[v]] for v in BASE_WITNESSES[name])
        return witness, Derivation("base", graph6, {"name": name})

    for u in universal_vertices(G, mask):
        rest = components(G, within=VertexSet(G.n, mask & ~(1 << u)))
        if len(rest) < 2:
            continue
        results = [_decide_components(G, part.bits, bases) for part in rest]
        witness = None
        if all(bits is not None for bits, _ in results):
            witness = mask_of(v for bits, _ in results for v in iter_bits(bits))
        return witness, Derivation("universal-join", graph6, {"vertex": u, "t": len(rest)}, (), tuple(d for _, d in results))

    return None, Derivation("reject", graph6)


def _checked(G: Graph, bits: Optional[int], derivation: Derivation) -> Decision:
    if bits is None:
        return Decision(None, derivation)

    witness = VertexSet(G.n, bits)
    verdict = verify_oldoind(G, witness)
    if not verdict.valid:
        raise InternalContractError(f"constructed witness {witness} fails with {verdict.violation} at {list(verdict.witnesses)}")
    return Decision(witness, derivation)


def decide_p4tidy(G: Graph) -> Decision:
    """
    Decide OLD_oind existence on a P4-tidy graph.

    Raises
    ------
    NotP4Tidy
        If G is not P4-tidy.
    """
    require_nonempty(G)
    if not is_p4_tidy(G):
        raise NotP4Tidy(f"{encode_graph6(G)} is not P4-tidy")

    bits, derivation = _decide_components(G, G.full, P4_TIDY_BASES)
    return _checked(G, bits, derivation)


def p4tidy_oldoind(G: Graph) -> Optional[VertexSet]:
    return decide_p4tidy(G).witness


def decide_cograph(G: Graph) -> Decision:
    """
    Decide OLD_oind existence on a cograph; only K2 and K3 serve as base graphs.

    Raises
    ------
    NotCograph
        If G contains an induced P4.
    """
    require_nonempty(G)
    if not is_cograph(G):
        raise NotCograph(f"{encode_graph6(G)} contains an induced P4")

    bits, derivation = _decide_components(G, G.full, COGRAPH_BASES)
    return _checked(G, bits, derivation)


def cograph_oldoind(G: Graph) -> Optional[VertexSet]:
    return decide_cograph(G).witness


# complementary prisms of cographs

@dataclass(frozen=True)
class Part:
    """
    A component of the complement of G.

    Parameters
    ----------
    vertices: VertexSet
        Vertices in the labels of G.
    graph: Graph
        The component itself, vertex i is vertices.as_list[i].
    pattern: typing.Optional[RPattern]
        R family match in the labels of G.
    """
    vertices: VertexSet
    graph: Graph
    pattern: Optional[RPattern] = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def key(self) -> Tuple:
        ell, m, starred = (self.pattern.ell, self.pattern.m, self.pattern.starred) if self.pattern else (0, 0, False)
        return self.size, ell, m, starred, min(self.vertices)

    @property
    def name(self) -> str:
        if self.size <= 2:
            return f"K{self.size}"
        return self.pattern.name if self.pattern else "other"

    @property
    def matched(self) -> List[int]:
        """Vertices covered by the matching edges; both vertices of a K2."""
        if self.size == 2:
            return self.vertices.as_list
        return self.pattern.matched if self.pattern else []

    @property
    def is_size2_admissible(self) -> bool:
        if self.size == 2:
            return True
        p = self.pattern
        return p is not None and p.ell in (1, 2) and (not p.starred or p.m == 1)

    @property
    def is_plain_r1(self) -> bool:
        return self.pattern is not None and not self.pattern.starred and self.pattern.ell == 1


def complement_parts(G: Graph) -> List[Part]:
    """Components of the complement of G sorted by (size, ell, m, starred, smallest vertex)."""
    co = complement(G)
    parts = []
    for vertices in components(co):
        sub, index = induced_subgraph(co, vertices)
        pattern = None
        if len(vertices) >= 3:
            pattern = recognize_R(sub)
            if pattern is not None:
                pattern = pattern.mapped({new: old for old, new in index.items()})
        parts.append(Part(vertices, sub, pattern))
    return sorted(parts, key=lambda part: part.key)


def size2_construct(G: Graph, parts: List[Part]) -> PrismWitness:
    """
    Build the witness with two G-side vertices.

    The complement side takes every matched vertex of every part. The G side
    takes the first independent vertex of two parts with at least three
    vertices; for a starred part that is the vertex missing an edge. With
    three such parts, the last plain R(1, m) part is left out.

    Raises
    ------
    InternalContractError
        If the construction does not verify.
    """
    n = G.n
    big = [part for part in parts if part.size >= 3]
    if len(big) == 3:
        plain = [part for part in big if not part.pattern.starred]
        big = [part for part in big if part is not plain[-1]]

    S0 = VertexSet.of(n, (part.pattern.independents[0] for part in big))
    S1bar = VertexSet.of(2 * n, (v + n for part in parts for v in part.matched))
    witness = PrismWitness(S0, S1bar, Derivation("size2-structure", encode_graph6(G),
                                                 {"t_prime": len([part for part in parts if part.size >= 3]), "parts": [part.name for part in parts]},
                                                 tuple(S0)))

    verdict = verify_oldoind(complementary_prism(G), witness.as_set)
    if not verdict.valid:
        raise InternalContractError(f"two-vertex construction on {encode_graph6(G)} fails with {verdict.violation}")
    return witness


def _size2_applies(parts: List[Part]) -> bool:
    if not all(part.is_size2_admissible for part in parts):
        return False

    big = [part for part in parts if part.size >= 3]
    if not 2 <= len(big) <= 3:
        return False

    wide = [part for part in big if part.pattern.ell == 2]
    if len(wide) > 1 or (wide and len(big) != 2):
        return False

    special = [part for part in big if part.pattern.ell == 2 or part.pattern.starred]
    return len(special) <= 2


def _relabel_result(G: Graph, order: Tuple[int, ...], witness: Optional[PrismWitness],
                    derivation: Derivation) -> Tuple[Optional[PrismWitness], Derivation]:
    # vertex i of the canonical graph is vertex order[i] of G
    n = G.n
    top = replace(derivation, graph6=encode_graph6(G), chosen=tuple(sorted(order[v] for v in derivation.chosen)))
    if witness is None:
        return None, top

    S0 = VertexSet.of(n, (order[v] for v in witness.S0))
    S1bar = VertexSet.of(2 * n, (order[v - n] + n for v in witness.S1bar))
    return PrismWitness(S0, S1bar, top), top


class PrismDecider:
    """
    Decide OLD_oind existence on complementary prisms of connected cographs.

    Subproblems of the peel case are memoized by isomorphism class. The memo
    can be shared between threads.
    """

    def __init__(self):
        self._memo: Dict[object, Tuple[Optional[PrismWitness], Derivation]] = {}
        self._lock = threading.Lock()

    def _universal_base(self, G: Graph, parts: List[Part]) -> Tuple[Optional[PrismWitness], Derivation]:
        singles = [part for part in parts if part.size == 1]
        graph6 = encode_graph6(G)
        if len(singles) > 1 or any(part.size != 2 for part in parts if part.size != 1):
            return None, Derivation("reject", graph6, {"universal_vertices": len(singles)})

        u = min(singles[0].vertices)
        S0 = VertexSet.of(G.n, [u])
        S1bar = VertexSet(2 * G.n, G.full << G.n)
        return PrismWitness(S0, S1bar, Derivation("universal-base", graph6, {"s": len(parts) - 1}, (u,))), None

    def _peel(self, G: Graph, parts: List[Part]) -> Optional[PrismWitness]:
        n = G.n
        for part in parts:
            if part.size < 2:
                continue
            rest = [other for other in parts if other is not part]
            pairs = [other for other in rest if other.size == 2]
            others = [other for other in rest if other.size != 2]
            if others and not (len(others) == 1 and others[0].is_plain_r1):
                continue
            if not rest:
                continue

            sub, sub_derivation = self.solve(part.graph)
            if sub is None:
                logger.debug(f"peeling {part.name} from {encode_graph6(G)}: component rejected")
                continue

            labels = part.vertices.as_list
            h = part.graph.n
            S0 = VertexSet.of(n, (labels[x - h] for x in sub.S1bar))
            matched = [v for other in rest for v in other.matched]
            S1bar = VertexSet.of(2 * n, [labels[x] + n for x in sub.S0] + [v + n for v in matched])

            f = others[0] if others else None
            params = {"r": len(pairs), "m": f.pattern.m if f else 0, "f": f.size if f else 0}
            return PrismWitness(S0, S1bar, Derivation("peel", encode_graph6(G), params, tuple(S0), (sub.derivation,)))

        return None

    def _solve(self, G: Graph) -> Tuple[Optional[PrismWitness], Derivation]:
        parts = complement_parts(G)
        if any(part.size == 1 for part in parts):
            witness, rejection = self._universal_base(G, parts)
        else:
            witness, rejection = None, None
            if _size2_applies(parts):
                witness = size2_construct(G, parts)
            if witness is None:
                witness = self._peel(G, parts)
            if witness is None:
                rejection = Derivation("reject", encode_graph6(G), {"parts": [part.name for part in parts]})

        return witness, witness.derivation if witness else rejection

    def solve(self, G: Graph) -> Tuple[Optional[PrismWitness], Derivation]:
        """
        Decide a connected cograph without precondition checks.

        Graphs up to MAX_CANONICAL vertices are solved once per isomorphism
        class and the witness is mapped back onto G; larger graphs are
        memoized on their labels.
        """
        if G.n > MAX_CANONICAL:
            key, order = G, None
        else:
            key, order = canonical_form(G), canonical_labeling(G)

        with self._lock:
            result = self._memo.get(key)
        if result is None:
            result = self._solve(G if order is None else relabel(G, order))
            with self._lock:
                result = self._memo.setdefault(key, result)

        if order is None:
            return result
        return _relabel_result(G, order, *result)

    def decide(self, G: Graph) -> Decision:
        """
        Decide OLD_oind existence on the complementary prism of G.

        Raises
        ------
        NotConnected
            If G is disconnected.
        NotCograph
            If G contains an induced P4.
        CapacityExceeded
            If G has more than MAX_PRISM_VERTICES vertices.
        InternalContractError
            If the constructed witness fails verification.
        """
        require_nonempty(G)
        if G.n > MAX_PRISM_VERTICES:
            raise CapacityExceeded(f"prism decider is limited to {MAX_PRISM_VERTICES} vertices, got {G.n}")
        if not is_connected(G):
            raise NotConnected(f"{encode_graph6(G)} is disconnected")
        if not is_cograph(G):
            raise NotCograph(f"{encode_graph6(G)} contains an induced P4")

        witness, derivation = self.solve(G)
        if witness is None:
            return Decision(None, derivation)

        S = witness.as_set
        verdict = verify_oldoind(complementary_prism(G), S)
        if not verdict.valid:
            raise InternalContractError(f"prism witness {S} of {encode_graph6(G)} fails with {verdict.violation}")
        matched = [v for v in witness.S0 if v + G.n in witness.S1bar]
        if len(matched) > 1:
            raise InternalContractError(f"prism witness of {encode_graph6(G)} contains {len(matched)} prism edges")

        return Decision(S, derivation, witness)


_decider = PrismDecider()


def decide_prism_cograph(G: Graph) -> Decision:
    return _decider.decide(G)


def prism_cograph_oldoind(G: Graph) -> Optional[PrismWitness]:
    """
    An OLD_oind set of the complementary prism of a connected cograph G.

    Returns
    -------
    typing.Optional[PrismWitness]
        The witness split into its G side and complement side, None if the
        prism has no OLD_oind set.
    """
    return _decider.decide(G).prism


@dataclass(frozen=True)
class AuditCheck:
    clause: str
    passed: bool
    detail: str = ""

    @property
    def as_dict(self) -> Dict:
        return {"clause": self.clause, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class AuditResult:
    """
    Structural checks of a prism witness against the properties every
    OLD_oind set of a prism of a cograph has.

    Parameters
    ----------
    hypotheses_met: bool
        False if some complement component is a single vertex or there are
        fewer than two components; no clause is evaluated then.
    checks: typing.Tuple[AuditCheck, ...]
        Clauses (i) to (vi).
    """
    hypotheses_met: bool
    checks: Tuple[AuditCheck, ...] = ()

    @property
    def passed(self) -> bool:
        return self.hypotheses_met and all(check.passed for check in self.checks)

    @property
    def as_dict(self) -> Dict:
        if not self.hypotheses_met:
            return {"result": "hypotheses not met"}
        return {"result": "pass" if self.passed else "fail", "checks": [check.as_dict for check in self.checks]}


def audit_prism_set(G: Graph, W: PrismWitness) -> AuditResult:
    """
    Evaluate the structural clauses on a valid prism witness.

    Raises
    ------
    WitnessInvalid
        If W is not an OLD_oind set of the prism of G.
    """
    require_nonempty(G)
    verdict = verify_oldoind(complementary_prism(G), W.as_set)
    if not verdict.valid:
        raise WitnessInvalid(f"{W.as_set} is no OLD_oind set of the prism: {verdict.violation.value} at {list(verdict.witnesses)}")

    co = complement(G)
    parts = components(co)
    if len(parts) < 2 or any(len(part) < 2 for part in parts):
        return AuditResult(False)

    n = G.n
    S0 = W.S0.bits
    S1 = W.S1bar.bits >> n
    # complement side vertices outside the set, per component
    D = [part.bits & ~S1 for part in parts]
    big = [i for i, part in enumerate(parts) if len(part) >= 3]

    checks = [AuditCheck("i", bool(S0) and bool(S1), f"|S0|={S0.bit_count()}, |S1bar|={S1.bit_count()}")]

    missing = [min(part) for part in parts if not part.bits & S1]
    checks.append(AuditCheck("ii", not missing, f"components without S1bar vertices at {missing}" if missing else ""))

    bad = []
    for i in big:
        if (S0 & parts[i].bits).bit_count() <= 1:
            independent = all(not co.adj[v] & D[i] for v in iter_bits(D[i]))
            if not (independent and 1 <= D[i].bit_count() <= 2):
                bad.append(min(parts[i]))
    checks.append(AuditCheck("iii", not bad, f"components at {bad}" if bad else ""))

    if S0.bit_count() == 2:
        hit = [i for i in big if S0 & parts[i].bits]
        total = sum(d.bit_count() for d in D)
        checks.append(AuditCheck("iv", len(hit) == 2 and 2 <= total <= 3, f"{len(hit)} large components meet S0, |Dbar|={total}"))
    else:
        checks.append(AuditCheck("iv", True, "|S0| != 2"))

    missed = [i for i in big if not S0 & parts[i].bits]
    checks.append(AuditCheck("v", len(missed) <= 1, f"{len(missed)} large components miss S0"))

    checks.append(AuditCheck("vi", 1 <= len(big) <= 3, f"t'={len(big)}"))

    return AuditResult(True, tuple(checks))

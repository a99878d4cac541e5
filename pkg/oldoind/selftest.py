"""
Self-test suites replicating the characterizations at desk scale.

Every suite walks a family of small graphs, compares the fast code paths
against brute force and stops at the first counterexample, which is reported
as graph6 together with a short description.
"""

import itertools
import logging
import multiprocessing
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import numpy as np

from oldoind import OldoindError, Report
from oldoind.canon import MAX_ENUMERATE, canonical_form, enumerate_nonisomorphic, is_isomorphic
from oldoind.classes import (BASE_CATALOG, Replacement, Side, SpiderKind, base_graph, build_cotree, complete, gen_named, gen_quasi_spider, gen_spider,
                             has_induced_p4, is_cograph, is_p4_tidy, is_p4_tidy_definitional, find_quasi_spider, find_spider_partition, path, recognize_base)
from oldoind.consume import dumps
from oldoind.deciders import PrismWitness, audit_prism_set, decide_cograph, decide_p4tidy, decide_prism_cograph
from oldoind.formats import decode_graph6, encode_graph6, format_edge_list, parse_edge_list
from oldoind.graph import (Graph, VertexSet, complement, complementary_prism, components, empty_graph, from_edges, girth, is_bipartite, is_connected, iter_bits,
                           relabel, universal_vertices)
from oldoind.hardness import (RingPatternRule, X3CInstance, build_gadget, cover_to_set, enumerate_x3c_instances, set_to_cover, x3c_bruteforce)
from oldoind.solve import exists_oldoind, min_oldoind
from oldoind.verify import Verdict, Violation, check_necessary, verify_girth5, verify_oldoind

logger = logging.getLogger(__name__)

CLASS_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}
"""Number of isomorphism classes of graphs per vertex count."""

EXAMPLE_X3C = X3CInstance.of(6, [(0, 1, 3), (1, 3, 5), (2, 4, 5)])
"""Worked instance with the exact cover made of its first and third set."""


@dataclass(frozen=True)
class SuiteOptions:
    max_n: int = 7
    seed: int = 0
    samples: int = 1000
    inject_fault: bool = False


@dataclass(frozen=True)
class SuiteResult:
    """
    Outcome of a single suite.

    Parameters
    ----------
    name: str
        Suite name.
    passed: bool
        Whether no counterexample was found.
    checked: int
        Number of graphs or instances checked.
    counterexample: typing.Optional[str]
        graph6 of the first failing graph.
    detail: str
        What failed.
    """
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[str] = None
    detail: str = ""

    @property
    def as_dict(self) -> Dict:
        out = {"suite": self.name, "result": "pass" if self.passed else "fail", "checked": self.checked}
        if not self.passed:
            out["counterexample"] = self.counterexample
            out["detail"] = self.detail
        return out


class Counterexample(Exception):
    def __init__(self, graph: Optional[Graph], detail: str):
        super().__init__(detail)
        self.graph = graph
        self.detail = detail


def _require(condition: bool, graph: Optional[Graph], detail: str):
    if not condition:
        raise Counterexample(graph, detail)


def literal_oldoind(G: Graph, S: Sequence[int]) -> bool:
    """OLD_oind membership written out with Python sets, independent of the bitset verifier."""
    S = set(S)
    neighborhoods = [set(iter_bits(row)) for row in G.adj]
    codes = [frozenset(N & S) for N in neighborhoods]
    if any(not code for code in codes):
        return False
    if any(len(neighborhoods[v] & S) > 1 for v in S):
        return False
    return len(set(codes)) == G.n


def _broken_verify(G: Graph, S: VertexSet) -> Verdict:
    # deliberately skips the locating clause
    verdict = verify_oldoind(G, S)
    if verdict.violation is Violation.NOT_DISTINGUISHED:
        return Verdict(True)
    return verdict


def _classes(max_n: int, connected_only: bool = False) -> Iterator[Graph]:
    for n in range(1, min(max_n, MAX_ENUMERATE) + 1):
        yield from enumerate_nonisomorphic(n, connected_only)


def _random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    rows, cols = np.nonzero(upper)
    return from_edges(n, zip(rows.tolist(), cols.tolist()))


def _subsets(n: int) -> Iterator[List[int]]:
    for size in range(n + 1):
        yield from (list(c) for c in itertools.combinations(range(n), size))


# suites

def suite_codec(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(options.max_n):
        _require(decode_graph6(encode_graph6(G)) == G, G, "graph6 roundtrip")
        _require(parse_edge_list(format_edge_list(G)) == G, G, "edge list roundtrip")
        checked += 1

    rng = np.random.default_rng(options.seed)
    for _ in range(options.samples):
        G = _random_graph(rng, int(rng.integers(1, 33)), float(rng.random()))
        _require(decode_graph6(encode_graph6(G)) == G, G, "graph6 roundtrip")
        checked += 1
    return checked


def suite_graph_laws(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(options.max_n):
        _require(complement(complement(G)) == G, G, "double complement")
        P = complementary_prism(G)
        _require(P.n == 2 * G.n and P.m == G.n * (G.n - 1) // 2 + G.n, P, "prism size")
        parts = components(G)
        _require(sum(len(part) for part in parts) == G.n, G, "components partition the vertices")
        _require((is_bipartite(G) is not None) == _odd_free(G), G, "two-coloring disagrees with odd closed walks")
        checked += 1
    return checked


def _odd_free(G: Graph) -> bool:
    A = G.to_matrix().astype(np.int64)
    power = A.copy()
    for length in range(1, G.n + 1, 2):
        if length > 1:
            power = power @ A @ A
        if np.trace(power):
            return False
    return True


def suite_canonical(options: SuiteOptions) -> int:
    rng = np.random.default_rng(options.seed)
    checked = 0
    for n in range(1, min(options.max_n, MAX_ENUMERATE) + 1):
        graphs = list(enumerate_nonisomorphic(n))
        _require(len(graphs) == CLASS_COUNTS[n], None, f"{len(graphs)} classes on {n} vertices, expected {CLASS_COUNTS[n]}")
        for G in graphs:
            order = rng.permutation(n).tolist()
            _require(canonical_form(relabel(G, order)) == canonical_form(G), G, f"canonical form changes under {order}")
            checked += 1
    return checked


def suite_oracle_consistency(options: SuiteOptions) -> int:
    verify = _broken_verify if options.inject_fault else verify_oldoind
    rng = np.random.default_rng(options.seed)
    checked = 0
    for G in _classes(options.max_n):
        samples = rng.integers(0, 2, size=(options.samples, G.n))
        for row in samples:
            S = np.flatnonzero(row).tolist()
            _require(verify(G, VertexSet.of(G.n, S)).valid == literal_oldoind(G, S), G, f"verifier disagrees on {S}")

        sizes = [len(S) for S in _subsets(G.n) if literal_oldoind(G, S)]
        result = min_oldoind(G)
        if sizes:
            _require(result.found and result.size == min(sizes), G, f"minimum {result.size}, brute force {min(sizes)}")
            _require(literal_oldoind(G, result.set.as_list), G, f"minimum set {result.set} fails")
        else:
            _require(not result.found, G, f"search found {result.set} where brute force finds none")
        checked += 1
    return checked


def suite_girth5(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(options.max_n):
        if girth(G) < 5:
            continue
        for S in _subsets(G.n):
            _require(verify_girth5(G, S).valid == verify_oldoind(G, S).valid, G, f"domination counts disagree on {S}")
        checked += 1
    return checked


def suite_necessary(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(min(options.max_n, 6)):
        for S in _subsets(G.n):
            if verify_oldoind(G, S).valid:
                _require(check_necessary(G, S).valid, G, f"valid set {S} violates the domination counts")
        checked += 1
    return checked


def suite_cograph(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(options.max_n):
        tree = build_cotree(G)
        _require((tree is not None) == (not has_induced_p4(G)), G, "cotree exists iff no induced P4")
        if tree is not None:
            _require(tree.evaluate(G.n) == G, G, "cotree evaluation")
        checked += 1
    return checked


HEADS = {
    "empty": None,
    "K1": complete(1),
    "K2": complete(2),
    "K2bar": empty_graph(2),
    "P3": path(3),
    "P4": path(4),
}


def suite_spider(options: SuiteOptions) -> int:
    checked = 0
    for kind, k, head in itertools.product(SpiderKind, (2, 3, 4), HEADS.values()):
        G = gen_spider(kind, k, head)
        part = find_spider_partition(G)
        h = head.n if head is not None else 0
        _require(part is not None and len(part.C) == k and len(part.X) == k and len(part.H) == h, G, f"{kind.value} spider of weight {k}")
        checked += 1

    for kind, k, head, side, replacement in itertools.product(SpiderKind, (2, 3), ("empty", "K1", "K2"), Side, Replacement):
        G = gen_quasi_spider(kind, k, HEADS[head], side, 0, replacement)
        part = find_quasi_spider(G)
        _require(part is not None and part.quasi is not None and part.quasi.replacement is replacement and part.quasi.original_side is side,
                 G, f"{kind.value} quasi-spider, {side.value} replaced by {replacement.value}")
        checked += 1
    return checked


def suite_p4tidy(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(options.max_n):
        _require(is_p4_tidy(G) == is_p4_tidy_definitional(G), G, "structural and definitional P4-tidy tests disagree")
        checked += 1
    return checked


def suite_spider_theorem(options: SuiteOptions) -> int:
    checked = 0
    for kind, k, head in itertools.product(SpiderKind, (2, 3, 4), ("empty", "K1", "K2", "K2bar", "P3")):
        G = gen_spider(kind, k, HEADS[head])
        result = exists_oldoind(G)
        _require(not result.found, G, f"spider has the set {result.set}")
        checked += 1
    return checked


def suite_quasi_spider_theorem(options: SuiteOptions) -> int:
    Z = base_graph("Z")
    checked = 0
    for kind, k, head, side, replacement in itertools.product(SpiderKind, (2, 3), ("empty", "K1", "K2"), Side, Replacement):
        for index in range(k):
            G = gen_quasi_spider(kind, k, HEADS[head], side, index, replacement)
            found = exists_oldoind(G).found
            _require(found == is_isomorphic(G, Z), G, "quasi-spider accepted" if found else "Z rejected")
            checked += 1
    return checked


def suite_p4tidy_decider(options: SuiteOptions) -> int:
    checked = 0
    co_connected = set()
    for G in _classes(options.max_n, connected_only=True):
        if not is_p4_tidy(G):
            continue
        decision = decide_p4tidy(G)
        _require(decision.accepted == exists_oldoind(G).found, G, "decider and search disagree")
        if decision.accepted:
            _require(verify_oldoind(G, decision.witness).valid, G, "witness fails")
            if G.n > 1 and is_connected(complement(G)):
                co_connected.add(recognize_base(G))
        checked += 1

    expected = {name for name in ("P5", "Z") if base_graph(name).n <= options.max_n}
    _require(co_connected == expected, None, f"co-connected graphs accepted: {sorted(map(str, co_connected))}")
    return checked


def _base_names(derivation) -> Iterator[str]:
    if derivation.case == "base":
        yield derivation.params["name"]
    for child in derivation.children:
        yield from _base_names(child)


def suite_cograph_decider(options: SuiteOptions) -> int:
    checked = 0
    bases = set()
    for G in _classes(options.max_n, connected_only=True):
        if not is_cograph(G):
            continue
        decision = decide_cograph(G)
        _require(decision.accepted == exists_oldoind(G).found, G, "decider and search disagree")
        if decision.accepted:
            bases.update(_base_names(decision.derivation))
        checked += 1

    _require(bases <= {"K2", "K3"}, None, f"unexpected bases {sorted(bases)}")
    return checked


def suite_prism_decider(options: SuiteOptions) -> int:
    checked = 0
    for G in _classes(min(options.max_n, 6), connected_only=True):
        if not is_cograph(G):
            continue
        prism = complementary_prism(G)
        decision = decide_prism_cograph(G)
        result = min_oldoind(prism)
        _require(decision.accepted == result.found, G, "prism decider and search disagree")

        witnesses = [decision.prism] if decision.accepted else []
        if result.found:
            witnesses.append(PrismWitness.from_set(G, result.set))
        for witness in witnesses:
            _require(verify_oldoind(prism, witness.as_set).valid, G, f"prism witness {witness.as_set} fails")
            audit = audit_prism_set(G, witness)
            _require(not audit.hypotheses_met or audit.passed, G, f"audit fails on {witness.as_set}: {audit.as_dict}")
        checked += 1
    return checked


def suite_universal_base(options: SuiteOptions) -> int:
    checked = 0
    for m in range(1, 5):
        G = gen_named("K1_join_mK2bar", m)
        prism = decide_prism_cograph(G).prism
        _require(prism is not None and len(prism.S0) == 1 and prism.S1bar.bits == G.full << G.n, G, "universal vertex base")
        checked += 1

    for G in _classes(min(options.max_n, 6), connected_only=True):
        if G.n < 2 or len(universal_vertices(G)) != 1 or not is_cograph(G):
            continue
        if G.n % 2 and is_isomorphic(G, gen_named("K1_join_mK2bar", G.n // 2)):
            continue
        _require(not decide_prism_cograph(G).accepted, G, "prism decider accepts")
        _require(not exists_oldoind(complementary_prism(G)).found, G, "search finds a prism set")
        checked += 1
    return checked


def suite_reduction(options: SuiteOptions) -> int:
    graph, gadget = build_gadget(EXAMPLE_X3C)
    _require(graph.n == 33 and graph.m == 36, graph, "worked instance gadget size")
    _require(x3c_bruteforce(EXAMPLE_X3C) == [0, 2], graph, "worked instance cover")
    D = cover_to_set(EXAMPLE_X3C, gadget, [0, 2])
    _require(len(D) == 24 and set_to_cover(EXAMPLE_X3C, gadget, D) == [0, 2], graph, "worked instance translation")
    checked = 1

    grounds = (3, 6) if options.max_n >= 6 else (3,)
    for ground in grounds:
        for inst in enumerate_x3c_instances(ground, 3):
            graph, gadget = build_gadget(inst)
            cover = x3c_bruteforce(inst)
            result = exists_oldoind(graph, rule=RingPatternRule(gadget))
            _require((cover is not None) == result.found, graph, f"cover {cover} but search {result.status.value}")
            if cover is not None:
                cover_to_set(inst, gadget, cover)
                _require(inst.is_exact_cover(set_to_cover(inst, gadget, result.set)), graph, "extracted cover")
            checked += 1
    return checked


def _fixture_reports() -> str:
    reports = []
    for name in BASE_CATALOG:
        G = base_graph(name)
        decision = decide_p4tidy(G)
        reports.append(Report(["decide", "p4tidy"], "yes" if decision.accepted else "no", encode_graph6(G),
                              decision.witness.as_list if decision.witness else None, None, decision.derivation.as_dict))
    for m in range(1, 4):
        G = gen_named("K1_join_mK2bar", m)
        decision = decide_prism_cograph(G)
        reports.append(Report(["decide", "prism-cograph"], "yes", encode_graph6(G), decision.witness.as_list, decision.prism.as_dict, decision.derivation.as_dict))
    return "\n".join(dumps(report) for report in reports)


def suite_determinism(options: SuiteOptions) -> int:
    first, second = _fixture_reports(), _fixture_reports()
    _require(first == second, None, "reports differ between runs")

    G = gen_spider(SpiderKind.THIN, 3, complete(1))
    parallel, serial = exists_oldoind(G, workers=2), exists_oldoind(G)
    _require((parallel.status, parallel.set) == (serial.status, serial.set), G, "parallel and serial search differ")
    Z = base_graph("Z_join_K1")
    parallel, serial = min_oldoind(Z, workers=2), min_oldoind(Z)
    _require((parallel.status, parallel.set) == (serial.status, serial.set), Z, "parallel and serial minimum differ")
    return 3


SUITES: Dict[str, Callable[[SuiteOptions], int]] = {
    "codec": suite_codec,
    "graph-laws": suite_graph_laws,
    "canonical": suite_canonical,
    "oracle-consistency": suite_oracle_consistency,
    "girth5": suite_girth5,
    "necessary": suite_necessary,
    "cograph": suite_cograph,
    "spider": suite_spider,
    "p4tidy": suite_p4tidy,
    "spider-theorem": suite_spider_theorem,
    "quasi-spider-theorem": suite_quasi_spider_theorem,
    "p4tidy-decider": suite_p4tidy_decider,
    "cograph-decider": suite_cograph_decider,
    "prism-decider": suite_prism_decider,
    "universal-base": suite_universal_base,
    "reduction": suite_reduction,
    "determinism": suite_determinism,
}


LOCAL_SUITES = ("determinism",)
"""Suites that start worker processes themselves."""


def run_suite(name: str, options: SuiteOptions) -> SuiteResult:
    logger.info(f"running suite {name}")
    try:
        checked = SUITES[name](options)
    except Counterexample as failure:
        graph6 = encode_graph6(failure.graph) if failure.graph is not None else None
        logger.warning(f"suite {name} failed: {failure.detail} ({graph6})")
        return SuiteResult(name, False, 0, graph6, failure.detail)
    except OldoindError as error:
        logger.warning(f"suite {name} raised {error.kind}: {error}")
        return SuiteResult(name, False, 0, None, f"{error.kind}: {error}")

    logger.info(f"suite {name} passed, {checked} checks")
    return SuiteResult(name, True, checked)


def _run_suite(args) -> SuiteResult:
    return run_suite(*args)


def run_selftest(options: SuiteOptions, suites: Optional[Sequence[str]] = None, workers: int = 1) -> List[SuiteResult]:
    """
    Run the named suites, all if none are given, in the order of SUITES.

    Results are identical for every worker count.
    """
    names = [name for name in SUITES if suites is None or name in suites]
    if workers <= 1:
        return [run_suite(name, options) for name in names]

    # pool workers cannot start pools of their own
    pooled = [name for name in names if name not in LOCAL_SUITES]
    with multiprocessing.Pool(workers) as pool:
        results = dict(zip(pooled, pool.map(_run_suite, [(name, options) for name in pooled])))
    for name in names:
        if name in LOCAL_SUITES:
            results[name] = run_suite(name, options)

    return [results[name] for name in names]

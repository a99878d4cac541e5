#!/usr/bin/env python3

import argparse
import datetime
import logging
import os
import sys
from typing import List, Optional

import pytz

from oldoind import ClassMismatch, InvalidInput, OldoindError, ParseError, PreconditionViolated, Report
from oldoind.classes import Replacement, Side, SpiderKind, gen_named, gen_quasi_spider, gen_spider, is_cograph, is_p4_tidy, parse_head
from oldoind.config import ArgConfParser
from oldoind.consume import CONSUMERS
from oldoind.deciders import Decision, decide_cograph, decide_p4tidy, decide_prism_cograph
from oldoind.formats import encode_graph6, parse_vertex_list, read_graph
from oldoind.graph import Graph, complementary_prism
from oldoind.hardness import build_gadget, cover_to_set, parse_x3c, set_to_cover, x3c_bruteforce
from oldoind.selftest import SUITES, SuiteOptions, run_selftest
from oldoind.solve import SolveStatus, exists_oldoind, min_oldoind
from oldoind.verify import verify_oldoind

logger = logging.getLogger("oldoind")

COMMANDS = ("verify", "solve", "decide", "gen", "prism", "x3c", "selftest")
CLASSES = ("auto", "p4tidy", "cograph", "prism-cograph")
X3C_ACTIONS = ("build", "to-set", "to-cover", "solve")


class Runner:
    """
    A single invocation of the oldoind command line.
    """
    parser = ArgConfParser(
        prog="oldoind",
        description="Verify, search and decide open-independent open-locating-dominating sets",
        config_dest="config",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )

    # generic options
    parser.add_argument("command", help="command to run", choices=COMMANDS)
    parser.add_argument("params", help="command parameters, e.g. a generator family and its sizes", nargs="*", default=[])
    parser.add_argument("-v", "--verbose", help="increase output verbosity", action="count", default=0)
    parser.add_argument("--config", help="configuration file", default="etc/oldoind.ini", type=str)
    parser.add_argument("--export-config", help="write the effective configuration to this file", default=None, type=str)

    # graph input options
    input_options = parser.add_argument_group("input")
    input_options.add_argument("-g", "--graph", help="graph as graph6 or edge list text", default=None, type=str)
    input_options.add_argument("-i", "--input", help="file to read the graph from, - for stdin", default="-", type=str)
    input_options.add_argument("--set", help="vertex set, separated by spaces or commas", default=None, type=str)

    # oracle options
    solver_options = parser.add_argument_group("solver")
    solver_options.add_argument("--min", help="search a minimum set", action="store_true")
    solver_options.add_argument("--budget", help="maximum number of search nodes", default=None, type=int)
    solver_options.add_argument("--workers", help="worker processes", default=int(os.environ.get("OLDOIND_WORKERS", 1)), type=int)

    # decider options
    decide_options = parser.add_argument_group("decide")
    decide_options.add_argument("--class", help="graph class to decide on", dest="graph_class", default="auto", choices=CLASSES)
    decide_options.add_argument("--oracle-max-n", help="largest graph for the search fallback of --class auto", default=16, type=int)

    # generator options
    generate_options = parser.add_argument_group("generate")
    generate_options.add_argument("--head", help="spider head: a catalog name, P<n>, K<n> or K<n>bar", default=None, type=str)
    generate_options.add_argument("--side", help="quasi-spider side of the replaced vertex", default="C", choices=[s.value for s in Side])
    generate_options.add_argument("--index", help="quasi-spider index of the replaced vertex", default=0, type=int)
    generate_options.add_argument("--replacement", help="quasi-spider twin pair", default="K2", choices=[r.value for r in Replacement])

    # reduction options
    x3c_options = parser.add_argument_group("x3c")
    x3c_options.add_argument("--instance", help="X3C instance file", default="etc/x3c-example.txt", type=str)
    x3c_options.add_argument("--cover", help="1-based set indices of an exact cover", default=None, type=str)

    # report options
    report_options = parser.add_argument_group("report")
    report_options.add_argument("--format", help="report format", default="json", choices=list(CONSUMERS))
    report_options.add_argument("-o", "--output", help="report file, - for stdout", default="-", type=str)
    report_options.add_argument("--timing", help="add timestamps and elapsed time to the report", action="store_true")

    # self-test options
    selftest_options = parser.add_argument_group("selftest")
    selftest_options.add_argument("--max-n", help="largest vertex count of enumerated graphs", default=7, type=int)
    selftest_options.add_argument("--seed", help="seed for random samples", default=0, type=int)
    selftest_options.add_argument("--samples", help="random candidate sets or graphs per check", default=1000, type=int)
    selftest_options.add_argument("--suite", help="suites to run, all if empty", default=[], nargs="*", choices=list(SUITES))
    selftest_options.add_argument("--inject-fault", help="swap in a broken verifier to demonstrate failure reports", action="store_true")

    def __init__(self, args: Optional[List[str]] = None):
        self.args = Runner.parser.parse_args(args)

        # logging levels increase in steps of 10, start with warning
        logging_level = max(0, logging.WARN - (self.args.verbose * 10))
        logging_stderr = logging.StreamHandler()
        logging_stderr.setLevel(logging_level)
        logging.basicConfig(level=logging.DEBUG, handlers=[logging_stderr])

        # export configuration
        if self.args.export_config:
            with open(self.args.export_config, "w") as config_export_file:
                Runner.parser.write_config(self.args, config_export_file)

    @property
    def command(self) -> List[str]:
        return [self.args.command] + list(self.args.params)

    def read_text(self) -> str:
        if self.args.graph is not None:
            return self.args.graph
        if self.args.input == "-":
            return sys.stdin.read()
        with open(self.args.input) as f:
            return f.read()

    def read_graph(self) -> Graph:
        return read_graph(self.read_text())

    def read_set(self, G: Graph):
        if self.args.set is None:
            raise InvalidInput("no vertex set given, use --set")
        return parse_vertex_list(self.args.set, G.n)

    def _int_params(self, params: List[str]) -> List[int]:
        try:
            return [int(p) for p in params]
        except ValueError:
            raise InvalidInput(f"expected integer parameters, got {params}")

    def cmd_verify(self) -> Report:
        G = self.read_graph()
        S = self.read_set(G)
        verdict = verify_oldoind(G, S)
        return Report(self.command, "valid" if verdict.valid else "invalid", encode_graph6(G), S.as_list, details=verdict.as_dict)

    def cmd_solve(self) -> Report:
        G = self.read_graph()
        search = min_oldoind if self.args.min else exists_oldoind
        result = search(G, budget=self.args.budget, workers=self.args.workers)

        if result.status is SolveStatus.BUDGET_EXCEEDED:
            logger.warning(f"no decision within {self.args.budget} nodes")
        return Report(self.command, result.status.value, encode_graph6(G), result.set.as_list if result.found else None, details=result.as_dict)

    def _decide(self, G: Graph, graph_class: str) -> Decision:
        deciders = {"p4tidy": decide_p4tidy, "cograph": decide_cograph, "prism-cograph": decide_prism_cograph}
        try:
            return deciders[graph_class](G)
        except PreconditionViolated as error:
            raise ClassMismatch(f"input does not fit --class {graph_class}: {error}")

    def cmd_decide(self) -> Report:
        G = self.read_graph()
        graph_class = self.args.graph_class

        if graph_class == "auto":
            if is_cograph(G):
                graph_class = "cograph"
            elif is_p4_tidy(G):
                graph_class = "p4tidy"
            elif G.n <= self.args.oracle_max_n:
                logger.warning(f"input is neither a cograph nor P4-tidy, falling back to search on {G.n} vertices")
                result = exists_oldoind(G, budget=self.args.budget, workers=self.args.workers)
                verdict = {SolveStatus.FOUND: "yes", SolveStatus.ABSENT: "no"}.get(result.status, result.status.value)
                return Report(self.command, verdict, encode_graph6(G), result.set.as_list if result.found else None,
                              details={"class": "search", **result.as_dict})
            else:
                raise ClassMismatch(f"input with {G.n} vertices is neither a cograph nor P4-tidy and too large for search")

        decision = self._decide(G, graph_class)
        logger.info(f"{graph_class} decider: {decision.derivation.case}")
        return Report(self.command, "yes" if decision.accepted else "no", encode_graph6(G),
                      decision.witness.as_list if decision.accepted else None,
                      decision.prism.as_dict if decision.prism else None,
                      decision.derivation.as_dict,
                      {"class": graph_class})

    def cmd_gen(self) -> Report:
        if not self.args.params:
            raise InvalidInput("gen needs a family name")
        family, *params = self.args.params

        if family in ("spider", "quasi-spider"):
            if len(params) != 2:
                raise InvalidInput(f"{family} takes a kind and a weight, e.g. thin 3")
            kind, (k,) = params[0], self._int_params(params[1:])
            try:
                kind = SpiderKind(kind)
            except ValueError:
                raise InvalidInput(f"unknown spider kind {kind}")
            head = parse_head(self.args.head)
            if family == "spider":
                G = gen_spider(kind, k, head)
            else:
                G = gen_quasi_spider(kind, k, head, self.args.side, self.args.index, self.args.replacement)
        else:
            G = gen_named(family, *self._int_params(params))

        return Report(self.command, "generated", encode_graph6(G), details={"graph6": encode_graph6(G), "n": G.n, "m": G.m})

    def cmd_prism(self) -> Report:
        G = self.read_graph()
        P = complementary_prism(G)
        return Report(self.command, "generated", encode_graph6(G), details={"graph6": encode_graph6(P), "n": P.n, "m": P.m})

    def cmd_x3c(self) -> Report:
        action = self.args.params[0] if self.args.params else "build"
        if action not in X3C_ACTIONS:
            raise InvalidInput(f"unknown x3c action {action}, choose from {', '.join(X3C_ACTIONS)}")

        with open(self.args.instance) as f:
            inst = parse_x3c(f.read())
        graph, gadget = build_gadget(inst)
        graph6 = encode_graph6(graph)

        if action == "build":
            return Report(self.command, "generated", graph6, details={"graph6": graph6, "n": graph.n, "m": graph.m, "map": gadget.to_json})

        if action == "solve":
            cover = x3c_bruteforce(inst)
            return Report(self.command, "yes" if cover is not None else "no", graph6,
                          details={"cover": [j + 1 for j in cover] if cover is not None else None})

        if action == "to-set":
            if self.args.cover is None:
                raise InvalidInput("to-set needs --cover")
            try:
                cover = [int(j) - 1 for j in self.args.cover.replace(",", " ").split()]
            except ValueError:
                raise ParseError(f"invalid cover {self.args.cover!r}", 0)
            D = cover_to_set(inst, gadget, cover)
            return Report(self.command, "valid", graph6, D.as_list, details={"names": [gadget.name(v) for v in D]})

        D = self.read_set(graph)
        cover = set_to_cover(inst, gadget, D)
        return Report(self.command, "valid", graph6, D.as_list, details={"cover": [j + 1 for j in cover]})

    def cmd_selftest(self) -> Report:
        options = SuiteOptions(self.args.max_n, self.args.seed, self.args.samples, self.args.inject_fault)
        results = run_selftest(options, self.args.suite or None, self.args.workers)
        passed = all(result.passed for result in results)
        return Report(self.command, "pass" if passed else "fail", details={"suites": [result.as_dict for result in results]})

    def run(self) -> Report:
        """
        Run the requested command.

        Returns
        -------
        Report
            The command's report; errors are reported with verdict "error".
        """
        started = datetime.datetime.now(tz=pytz.utc)
        try:
            report = getattr(self, f"cmd_{self.args.command}")()
        except OldoindError as error:
            logger.critical(f"{error.kind}: {error}")
            details = {"error": error.kind, "message": str(error)}
            if isinstance(error, ParseError):
                details["offset"] = error.offset
            report = Report(self.command, "error", details=details)
        except OSError as error:
            logger.critical(f"{error}")
            report = Report(self.command, "error", details={"error": "io-error", "message": str(error)})

        if self.args.timing:
            report.stamp(started, datetime.datetime.now(tz=pytz.utc))
        return report

    def main(self):
        """
        Run the command, publish its report and exit with its code.
        """
        report = self.run()

        binary = self.args.format == "cbor"
        if self.args.output == "-":
            out = sys.stdout.buffer if binary else sys.stdout
            CONSUMERS[self.args.format](out).add(report)
        else:
            with open(self.args.output, "wb" if binary else "w") as out:
                CONSUMERS[self.args.format](out).add(report)

        exit(report.exit_code)


if __name__ == "__main__":
    runner = Runner()
    runner.main()

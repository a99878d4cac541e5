import json

import cbor2 as cbor
import pytest

from oldoind.__main__ import Runner
from oldoind.canon import is_isomorphic
from oldoind.classes import SpiderKind, base_graph, complete, cycle, gen_spider, path
from oldoind.consume import uncborify
from oldoind.formats import decode_graph6, encode_graph6
from oldoind.graph import complementary_prism
from oldoind.verify import verify_oldoind


def run(*args):
    return Runner(list(args) + ["--config", ""]).run()


def main(capsys, *args):
    with pytest.raises(SystemExit) as info:
        Runner(list(args) + ["--config", ""]).main()
    return info.value.code, capsys.readouterr().out


def test_verify():
    report = run("verify", "-g", "DhC", "--set", "0 1 3 4")
    assert report.verdict == "valid"
    assert report.input == "DhC"
    assert report.witness == [0, 1, 3, 4]
    assert report.exit_code == 0

    report = run("verify", "-g", "A_", "--set", "0,1")
    assert report.verdict == "valid"

    report = run("verify", "-g", encode_graph6(cycle(4)), "--set", "0 1")
    assert report.verdict == "invalid"
    assert report.details["violation"] == "not-distinguished"
    assert report.details["witnesses"] == [0, 2]
    assert report.exit_code == 1

    # star centered at 0: leaves 1 and 2 both see only 0
    report = run("verify", "-g", "Bo", "--set", "0 1")
    assert report.verdict == "invalid"
    assert report.details["violation"] == "not-distinguished"
    assert report.details["witnesses"] == [1, 2]


def test_verify_errors():
    report = run("verify", "-g", "D h", "--set", "0")
    assert report.verdict == "error"
    assert report.details["error"] == "parse-error"
    assert report.details["offset"] == 1
    assert report.exit_code == 2

    report = run("verify", "-g", "DhC", "--set", "0 9")
    assert report.details["error"] == "invalid-input"

    report = run("verify", "-g", "DhC")
    assert report.details["error"] == "invalid-input"


def test_verify_edge_list_file(tmp_path):
    graph = tmp_path / "k2.txt"
    graph.write_text("2 1\n0 1\n")
    report = run("verify", "-i", str(graph), "--set", "0 1")
    assert report.verdict == "valid"
    assert report.input == "A_"


def test_solve():
    report = run("solve", "-g", "Bw", "--min")
    assert report.verdict == "found"
    assert report.details["size"] == 2

    report = run("solve", "-g", encode_graph6(path(4)))
    assert report.verdict == "absent"
    assert report.exit_code == 1


def test_solve_budget(tmp_path):
    report = run("x3c", "build", "--instance", str(_example_instance(tmp_path)))
    gadget = report.details["graph6"]

    report = run("solve", "-g", gadget, "--budget", "3")
    assert report.verdict == "budget-exceeded"
    assert report.exit_code == 2


def test_decide():
    report = run("decide", "-g", encode_graph6(path(3)), "--class", "prism-cograph")
    assert report.verdict == "yes"
    assert report.derivation["case"] == "universal-base"
    assert report.witnesses == {"S0": [1], "S1bar": [3, 4, 5]}

    report = run("decide", "-g", encode_graph6(cycle(5)), "--class", "p4tidy")
    assert report.verdict == "no"
    assert report.exit_code == 1

    report = run("decide", "-g", encode_graph6(path(4)), "--class", "cograph")
    assert report.verdict == "error"
    assert report.details["error"] == "class-mismatch"


def test_decide_auto():
    report = run("decide", "-g", encode_graph6(complete(3)))
    assert report.details["class"] == "cograph"
    assert report.verdict == "yes"

    report = run("decide", "-g", "DhC")
    assert report.details["class"] == "p4tidy"

    report = run("decide", "-g", encode_graph6(cycle(6)))
    assert report.details["class"] == "search"
    assert report.verdict == "yes"
    assert verify_oldoind(cycle(6), report.witness).valid

    report = run("decide", "-g", encode_graph6(cycle(6)), "--oracle-max-n", "5")
    assert report.details["error"] == "class-mismatch"


def test_decided_witness_reverifies():
    G = complementary_prism(path(3))
    report = run("decide", "-g", encode_graph6(path(3)), "--class", "prism-cograph")
    assert verify_oldoind(G, report.witness).valid

    report = run("decide", "-g", "Dqg")
    again = run("verify", "-g", "Dqg", "--set", " ".join(map(str, report.witness)))
    assert again.verdict == "valid"


def test_gen():
    report = run("gen", "spider", "thin", "3", "--head", "K1")
    assert decode_graph6(report.details["graph6"]) == gen_spider(SpiderKind.THIN, 3, complete(1))
    assert report.details["n"] == 7

    report = run("gen", "quasi-spider", "thin", "2", "--side", "X", "--replacement", "K2")
    assert is_isomorphic(decode_graph6(report.details["graph6"]), base_graph("Z"))

    report = run("gen", "R", "1", "1")
    assert report.details["graph6"] == "Bw"

    report = run("gen", "cycle", "x")
    assert report.details["error"] == "invalid-input"

    report = run("gen", "spider", "wide", "3")
    assert report.details["error"] == "invalid-input"


def test_prism():
    report = run("prism", "-g", encode_graph6(path(3)))
    assert report.details["n"] == 6
    assert decode_graph6(report.details["graph6"]) == complementary_prism(path(3))


def _example_instance(tmp_path):
    instance = tmp_path / "example_x3c.txt"
    instance.write_text("6 3\n1 2 4\n2 4 6\n3 5 6\n")
    return instance


def test_x3c(tmp_path):
    instance = str(_example_instance(tmp_path))

    report = run("x3c", "build", "--instance", instance)
    assert report.details["n"] == 33 and report.details["m"] == 36
    assert report.details["map"]["x_1"] == 0

    report = run("x3c", "solve", "--instance", instance)
    assert report.verdict == "yes"
    assert report.details["cover"] == [1, 3]

    report = run("x3c", "to-set", "--instance", instance, "--cover", "1 3")
    assert len(report.witness) == 24

    back = run("x3c", "to-cover", "--instance", instance, "--set", " ".join(map(str, report.witness)))
    assert back.details["cover"] == [1, 3]

    report = run("x3c", "to-set", "--instance", instance, "--cover", "1 2")
    assert report.details["error"] == "not-an-exact-cover"

    report = run("x3c", "shrink", "--instance", instance)
    assert report.details["error"] == "invalid-input"


def test_missing_file():
    report = run("verify", "-i", "/nonexistent/graph.txt", "--set", "0")
    assert report.verdict == "error"
    assert report.details["error"] == "io-error"


def test_main_json(capsys):
    code, out = main(capsys, "verify", "-g", "DhC", "--set", "0 1 3 4")
    assert code == 0
    report = json.loads(out)
    assert list(report) == ["schema", "command", "input", "verdict", "witness", "witnesses", "derivation", "details", "timing"]
    assert report["schema"] == "oldoind/1"
    assert report["command"] == ["verify"]


def test_main_text(capsys):
    code, out = main(capsys, "solve", "-g", encode_graph6(path(4)), "--format", "text")
    assert code == 1
    assert "verdict: absent" in out


def test_main_output_file(tmp_path):
    output = tmp_path / "report.cbor"
    with pytest.raises(SystemExit):
        Runner(["solve", "-g", "Bw", "--format", "cbor", "-o", str(output), "--config", "", "--timing"]).main()

    report = cbor.loads(output.read_bytes(), tag_hook=uncborify)
    assert report[3] == "found"
    assert report[8]["elapsed"].total_seconds() >= 0


def test_reports_are_deterministic(capsys):
    _, first = main(capsys, "decide", "-g", "Eqjw")
    _, second = main(capsys, "decide", "-g", "Eqjw")
    assert first == second


def test_timing():
    report = run("gen", "path", "3", "--timing")
    assert report.timing["started"].tzinfo is not None
    assert report.as_dict["timing"]["elapsed"].total_seconds() >= 0


def test_export_config(tmp_path):
    config = tmp_path / "exported.ini"
    Runner(["selftest", "--config", "", "--max-n", "4", "--export-config", str(config)])

    text = config.read_text()
    assert "[selftest]" in text
    assert "max_n = 4" in text

    runner = Runner(["selftest", "--config", str(config)])
    assert runner.args.max_n == 4

    runner = Runner(["selftest", "--config", str(config), "--max-n", "5"])
    assert runner.args.max_n == 5


if __name__ == "__main__":
    pytest.main([__file__])

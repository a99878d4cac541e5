import pytest

from oldoind.classes import cycle
from oldoind.selftest import SUITES, SuiteOptions, SuiteResult, literal_oldoind, run_selftest, run_suite

FAST = SuiteOptions(max_n=5, seed=0, samples=20)


def test_literal_oldoind():
    assert literal_oldoind(cycle(6), [0, 1, 3, 4])
    assert not literal_oldoind(cycle(4), [0, 1])
    assert not literal_oldoind(cycle(4), [0, 1, 2, 3])


@pytest.mark.parametrize("name", [
    "codec",
    "graph-laws",
    "canonical",
    "oracle-consistency",
    "girth5",
    "necessary",
    "cograph",
    "spider",
    "p4tidy",
    "p4tidy-decider",
    "cograph-decider",
    "prism-decider",
    "universal-base",
])
def test_fast_suites_pass(name):
    result = run_suite(name, FAST)
    assert result.passed, result.as_dict
    assert result.checked > 0


def test_injected_fault_is_reported():
    result = run_suite("oracle-consistency", SuiteOptions(max_n=5, samples=200, inject_fault=True))
    assert not result.passed
    assert result.counterexample is not None
    assert "verifier disagrees" in result.detail
    assert result.as_dict["result"] == "fail"
    assert result.as_dict["counterexample"] == result.counterexample


def test_result_as_dict():
    assert SuiteResult("codec", True, 12).as_dict == {"suite": "codec", "result": "pass", "checked": 12}


def test_run_selftest_order():
    results = run_selftest(FAST, ["cograph", "codec"])
    assert [result.name for result in results] == ["codec", "cograph"]


@pytest.mark.slow
def test_parallel_selftest_matches_serial():
    names = ["codec", "cograph", "determinism"]
    serial = run_selftest(FAST, names)
    parallel = run_selftest(FAST, names, workers=2)
    assert [r.as_dict for r in serial] == [r.as_dict for r in parallel]


@pytest.mark.slow
def test_all_suites_pass():
    results = run_selftest(SuiteOptions(max_n=7, samples=1000))
    assert [result.name for result in results] == list(SUITES)
    failed = [result.as_dict for result in results if not result.passed]
    assert not failed


if __name__ == "__main__":
    pytest.main([__file__])

import datetime
import io
import json

import cbor2 as cbor
import pytest
import pytz

from oldoind import Report
from oldoind.consume import CONSUMERS, CBORConsumer, JSONConsumer, TextConsumer, dumps, jsonify, uncborify
from oldoind.graph import VertexSet
from oldoind.solve import SolveStatus


def report():
    return Report(["solve"], "found", "DhC", [0, 1, 3, 4], details={"status": "found", "size": 4, "nodes_explored": 9})


def stamped():
    r = report()
    started = datetime.datetime(2024, 5, 1, 12, 0, tzinfo=pytz.utc)
    r.stamp(started, started + datetime.timedelta(seconds=1.5))
    return r


def test_jsonify():
    assert jsonify(VertexSet.of(5, [3, 1])) == [1, 3]
    assert jsonify(SolveStatus.ABSENT) == "absent"
    assert jsonify(datetime.timedelta(seconds=2)) == 2.0
    with pytest.raises(TypeError):
        jsonify(object())


def test_dumps_is_deterministic():
    assert dumps(report()) == dumps(report())
    decoded = json.loads(dumps(stamped()))
    assert list(decoded) == Report.header
    assert decoded["timing"] == {"started": "2024-05-01T12:00:00+00:00", "elapsed": 1.5}


def test_json_consumer():
    out = io.StringIO()
    consumer = JSONConsumer(out)
    consumer.add(report())
    consumer.add(report())

    lines = out.getvalue().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["witness"] == [0, 1, 3, 4]


def test_text_consumer():
    out = io.StringIO()
    TextConsumer(out).add(report())
    text = out.getvalue()

    assert "verdict: found" in text
    assert "witness: 0 1 3 4" in text
    assert "  size: 4" in text
    # empty fields are left out
    assert "derivation" not in text


def test_text_consumer_nested_lists():
    out = io.StringIO()
    TextConsumer(out).add(Report(["selftest"], "pass", details={"suites": [{"suite": "codec", "result": "pass"}], "empty": []}))
    text = out.getvalue()
    assert "  suites:" in text
    assert "    - 0:" in text
    assert "      suite: codec" in text
    assert "  empty: (empty)" in text


def test_cbor_consumer():
    out = io.BytesIO()
    CBORConsumer(out).add(stamped())

    decoded = cbor.loads(out.getvalue(), tag_hook=uncborify)
    assert decoded[0] == "oldoind/1"
    assert decoded[3] == "found"
    assert decoded[4] == [0, 1, 3, 4]
    assert decoded[8]["elapsed"] == datetime.timedelta(seconds=1.5)
    assert decoded[8]["started"] == datetime.datetime(2024, 5, 1, 12, 0, tzinfo=datetime.timezone.utc)


def test_consumer_registry():
    assert set(CONSUMERS) == {"json", "text", "cbor"}


if __name__ == "__main__":
    pytest.main([__file__])

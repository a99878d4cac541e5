import datetime
import json
import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, BinaryIO, List, TextIO

import cbor2 as cbor

from oldoind import AbstractMessage
from oldoind.graph import VertexSet

logger = logging.getLogger(__name__)


def jsonify(o):
    """Helper function to convert non-native types to JSON serializable values."""
    if isinstance(o, datetime.datetime):
        o: datetime.datetime
        return o.isoformat()
    if isinstance(o, datetime.timedelta):
        o: datetime.timedelta
        return o.total_seconds()
    if isinstance(o, VertexSet):
        return o.as_list
    if isinstance(o, Enum):
        return o.value

    raise TypeError(f"Object of type {type(o)} is not JSON serializable")


def cborify(encoder, o):
    """Helper function to convert non-native types to CBOR serializable values."""
    if isinstance(o, datetime.timedelta):
        o: datetime.timedelta
        encoder.encode(cbor.CBORTag(1337, o.total_seconds()))
    elif isinstance(o, VertexSet):
        encoder.encode(o.as_list)
    elif isinstance(o, Enum):
        encoder.encode(o.value)


def uncborify(decoder, tag, shareable_index=None):
    """Helper function to convert CBOR tags to their original datatype."""
    if tag.tag == 1337:
        return datetime.timedelta(seconds=tag.value)

    return tag


def dumps(report: AbstractMessage) -> str:
    """Deterministic JSON rendering of a report."""
    return json.dumps(report.as_dict, default=jsonify)


def _render(key: str, value: Any, depth: int) -> List[str]:
    pad = "  " * depth
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"]
        for k, v in value.items():
            lines += _render(str(k), v, depth + 1)
        return lines
    if isinstance(value, list) and value and isinstance(value[0], dict):
        lines = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            lines += _render(f"- {i}", v, depth + 1)
        return lines
    if isinstance(value, list):
        value = " ".join(str(v) for v in value) if value else "(empty)"
    elif isinstance(value, (datetime.datetime, datetime.timedelta)):
        value = jsonify(value)
    return [f"{pad}{key}: {value}"]


class AbstractConsumer(ABC):
    """Abstract base class for report consumers."""

    @abstractmethod
    def add(self, report: AbstractMessage):
        """Add a report to the consumer."""
        pass


class JSONConsumer(AbstractConsumer):
    """
    Writes every report as a single JSON line.

    Parameters
    ----------
    out: typing.TextIO
        The stream to write to.
    """

    def __init__(self, out: TextIO):
        self.out = out

    def add(self, report: AbstractMessage):
        self.out.write(dumps(report) + "\n")
        self.out.flush()

        logger.debug(f"published {report} via json")


class TextConsumer(AbstractConsumer):
    """
    Writes a human readable rendering of every report; empty fields are skipped.

    Parameters
    ----------
    out: typing.TextIO
        The stream to write to.
    """

    def __init__(self, out: TextIO):
        self.out = out

    def add(self, report: AbstractMessage):
        lines = []
        for key, value in report.as_dict.items():
            if value is None:
                continue
            lines += _render(key, value, 0)
        self.out.write("\n".join(lines) + "\n")
        self.out.flush()


class CBORConsumer(AbstractConsumer):
    """
    Writes every report as a CBOR encoded list in header order.

    Parameters
    ----------
    out: typing.BinaryIO
        The binary stream to write to.
    """

    def __init__(self, out: BinaryIO):
        self.out = out

    def add(self, report: AbstractMessage):
        payload = cbor.dumps(
            report.as_list,
            timezone=datetime.timezone.utc,
            datetime_as_timestamp=True,
            default=cborify,
        )
        self.out.write(payload)
        self.out.flush()

        logger.debug(f"published {report} via cbor, {len(payload)} bytes")


CONSUMERS = {
    "json": JSONConsumer,
    "text": TextConsumer,
    "cbor": CBORConsumer,
}

import logging
import re
from typing import Iterator, List

from oldoind import CapacityExceeded, ParseError
from oldoind.graph import MAX_VERTICES, Graph, VertexSet, from_edges

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"
EDGE_LIST_PATTERN = re.compile(r"^\s*\d+\s")


def _graph6_bits(G: Graph) -> Iterator[int]:
    # upper triangle, column by column
    for j in range(1, G.n):
        column = G.adj[j]
        for i in range(j):
            yield column >> i & 1


def encode_graph6(G: Graph) -> str:
    """
    Encode G as a graph6 line without header and trailing newline.

    Parameters
    ----------
    G: Graph
        The graph to encode.

    Returns
    -------
    str
    """
    if G.n <= 62:
        out = [chr(G.n + 63)]
    else:
        out = ["~"] + [chr((G.n >> shift & 0x3F) + 63) for shift in (12, 6, 0)]

    chunk, filled = 0, 0
    for bit in _graph6_bits(G):
        chunk = chunk << 1 | bit
        filled += 1
        if filled == 6:
            out.append(chr(chunk + 63))
            chunk, filled = 0, 0
    if filled:
        out.append(chr((chunk << (6 - filled)) + 63))

    return "".join(out)


def decode_graph6(line: str) -> Graph:
    """
    Decode a single graph6 line.

    Parameters
    ----------
    line: str
        graph6 text, optionally prefixed by the >>graph6<< header.

    Returns
    -------
    Graph

    Raises
    ------
    ParseError
        On malformed header, characters outside 63..126 or a body of the wrong length.
    CapacityExceeded
        If the encoded graph has more than MAX_VERTICES vertices.
    """
    offset = len(GRAPH6_HEADER) if line.startswith(GRAPH6_HEADER) else 0
    data = line[offset:].rstrip("\r\n")

    for pos, char in enumerate(data):
        if not 63 <= ord(char) <= 126:
            raise ParseError(f"invalid graph6 character {char!r}", offset + pos)
    if not data:
        raise ParseError("missing graph6 size header", offset)

    values = [ord(char) - 63 for char in data]
    if values[0] < 63:
        n, body = values[0], 1
    elif len(values) >= 4 and values[1] < 63:
        n, body = values[1] << 12 | values[2] << 6 | values[3], 4
    elif len(values) >= 4:
        raise CapacityExceeded(f"graph6 8-byte header exceeds {MAX_VERTICES} vertices")
    else:
        raise ParseError("truncated graph6 size header", offset + len(values))

    if n > MAX_VERTICES:
        raise CapacityExceeded(f"graph6 line encodes {n} vertices, the limit is {MAX_VERTICES}")

    bit_count = n * (n - 1) // 2
    expected = (bit_count + 5) // 6
    if len(values) - body < expected:
        raise ParseError(f"graph6 body too short for {n} vertices", offset + len(values))
    if len(values) - body > expected:
        raise ParseError(f"graph6 body too long for {n} vertices", offset + body + expected)

    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            value = values[body + k // 6]
            if value >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1

    padding = 6 * expected - bit_count
    if padding and values[-1] & ((1 << padding) - 1):
        raise ParseError("nonzero graph6 padding bits", offset + len(values) - 1)

    return Graph(n, tuple(adj))


def iter_graph6(text: str) -> Iterator[Graph]:
    """Decode a corpus of graph6 lines, skipping blank lines."""
    for line in text.splitlines():
        if line.strip():
            yield decode_graph6(line.strip())


def parse_edge_list(text: str) -> Graph:
    """
    Parse the edge list format: a line "n m" followed by m lines "u v".

    Raises
    ------
    ParseError
        With the byte offset of the offending line.
    """
    offset = 0
    rows: List[tuple] = []
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            fields = stripped.split()
            if len(fields) != 2 or not all(f.isdigit() for f in fields):
                raise ParseError(f"expected two non-negative integers, got {stripped!r}", offset)
            rows.append((int(fields[0]), int(fields[1]), offset))
        offset += len(line.encode())

    if not rows:
        raise ParseError("empty edge list", 0)

    n, m, _ = rows[0]
    if len(rows) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(rows) - 1}", rows[-1][2] if len(rows) > 1 else offset)
    if n > MAX_VERTICES:
        raise CapacityExceeded(f"edge list announces {n} vertices, the limit is {MAX_VERTICES}")

    for u, v, at in rows[1:]:
        if u >= n or v >= n:
            raise ParseError(f"edge {u}-{v} has an endpoint outside [0, {n})", at)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", at)

    return from_edges(n, ((u, v) for u, v, _ in rows[1:]))


def format_edge_list(G: Graph) -> str:
    edges = G.edges()
    return "".join([f"{G.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])


def read_graph(text: str) -> Graph:
    """
    Read a graph, auto-detecting the format.

    A first line starting with a number followed by whitespace is an edge
    list, anything else is decoded as graph6.
    """
    if EDGE_LIST_PATTERN.match(text):
        logger.debug("input detected as edge list")
        return parse_edge_list(text)

    line = text.strip().splitlines()[0] if text.strip() else ""
    logger.debug("input detected as graph6")
    return decode_graph6(line)


def parse_vertex_list(text: str, n: int) -> VertexSet:
    """Parse vertices separated by whitespace or commas."""
    vertices = []
    offset = 0
    for token in re.split(r"([\s,]+)", text):
        if token and not re.fullmatch(r"[\s,]+", token):
            if not token.isdigit():
                raise ParseError(f"invalid vertex {token!r}", offset)
            vertices.append(int(token))
        offset += len(token)
    return VertexSet.of(n, vertices)

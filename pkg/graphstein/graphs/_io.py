"""
Reading and writing graphs as plain text.

The format has a header line ``n=<count>`` followed by one edge per line
as ``i j`` (0-based, i < j, whitespace separated). Empty lines and lines
starting with ``#`` are ignored. One file holds one graph; a directory of
such files holds a batch of samples.
"""

import os
import logging

from .._errors import ParseError
from ._graph import Graph


logger = logging.getLogger("graphstein")

GRAPH_EXTS = ".txt", ".graph"


def read_graph(file):
    """Read a graph from a filename or a text file object."""
    if isinstance(file, (str, os.PathLike)):
        filename = os.fspath(file)
        with open(file, "rb") as f:
            text = decode_text(f.read(), filename)
        return parse_graph(text, filename)
    return parse_graph(file.read(), getattr(file, "name", None))


def decode_text(raw, filename=None):
    """Decode the bytes of a text file, raising ParseError if not UTF-8."""
    try:
        return raw.decode()
    except UnicodeDecodeError as err:
        msg = f"not valid UTF-8 text: {err.reason} at byte {err.start}"
        raise ParseError(msg, None, filename) from None


def parse_graph(text, filename=None):
    """Parse the text representation of a graph."""
    n = None
    edges = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            key, eq, val = line.partition("=")
            if not eq or key.strip() != "n":
                raise ParseError("expected header 'n=<count>'", lineno, filename)
            try:
                n = int(val)
            except ValueError:
                raise ParseError(f"invalid vertex count {val.strip()!r}", lineno, filename)
            if n < 1:
                raise ParseError(f"vertex count must be positive, got {n}", lineno, filename)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'i j', got {line!r}", lineno, filename)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno, filename)
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"vertex index out of range for n={n}", lineno, filename)
        if i >= j:
            raise ParseError(f"expected i < j, got {i} {j}", lineno, filename)
        if (i, j) in edges:
            raise ParseError(f"duplicate edge {i} {j}", lineno, filename)
        edges.add((i, j))
    if n is None:
        raise ParseError("missing header 'n=<count>'", None, filename)
    return Graph.from_edges(n, edges)


def format_graph(x):
    """Get the text representation of a graph."""
    lines = [f"n={x.n}"]
    lines.extend(f"{i} {j}" for i, j in x.edges())
    return "\n".join(lines) + "\n"


def write_graph(x, file):
    """Write a graph to a filename or a text file object."""
    text = format_graph(x)
    if isinstance(file, (str, os.PathLike)):
        with open(file, "wb") as f:
            f.write(text.encode())
    else:
        file.write(text)


def write_graphs(graphs, dirname, prefix="sample"):
    """Write a batch of graphs to a directory, one file per graph, with
    zero-padded names so that the lexicographic order is the batch order.
    Returns the list of filenames.
    """
    os.makedirs(dirname, exist_ok=True)
    width = max(4, len(str(len(graphs))))
    filenames = []
    for index, x in enumerate(graphs):
        filename = os.path.join(dirname, f"{prefix}{index:0{width}d}.txt")
        write_graph(x, filename)
        filenames.append(filename)
    logger.info(f"Wrote {len(graphs)} graphs to {dirname}")
    return filenames

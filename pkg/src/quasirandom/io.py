"""Edge-list files and block sidecars.

Format: first line ``"n m"``, then ``m`` lines ``"u v"`` with
``0 <= u < v < n``; ASCII, LF line endings.
"""

from __future__ import annotations

import json
from pathlib import Path

from .generators import Blocks
from .graph import Graph


class GraphFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedLineError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


def _ints(text: str, line: int, count: int) -> list[int]:
    parts = text.split()
    if len(parts) != count:
        raise MalformedLineError(line, f"expected {count} integers, got {text!r}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise MalformedLineError(line, f"non-integer token in {text!r}") from None


def parse_graph(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedLineError(1, "missing header line 'n m'")
    n, m = _ints(lines[0], 1, 2)
    if n < 0 or m < 0:
        raise MalformedLineError(1, "n and m must be non-negative")
    if len(lines) - 1 < m:
        raise MalformedLineError(len(lines) + 1, f"header declares {m} edges, found {len(lines) - 1}")
    if len(lines) - 1 > m:
        raise MalformedLineError(m + 2, f"header declares {m} edges, found extra lines")
    seen: set[tuple[int, int]] = set()
    edges = []
    for idx, raw in enumerate(lines[1:], start=2):
        u, v = _ints(raw, idx, 2)
        if u == v:
            raise SelfLoopError(idx, f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(idx, f"vertex index out of range [0, {n}) in {raw!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(idx, f"duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def load_graph(path) -> Graph:
    return parse_graph(Path(path).read_bytes().decode("ascii"))


def save_graph(g: Graph, path) -> None:
    Path(path).write_bytes(format_graph(g).encode("ascii"))


def blocks_path(graph_path) -> Path:
    p = Path(graph_path)
    return p.with_name(p.name + ".blocks.json")


def save_blocks(blocks: Blocks, path) -> None:
    Path(path).write_text(json.dumps(blocks.to_json()) + "\n")


def load_blocks(path) -> Blocks:
    return Blocks.from_json(json.loads(Path(path).read_text()))

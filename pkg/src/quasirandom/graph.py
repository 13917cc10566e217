"""Bitset-backed simple graphs and vertex subsets.

Adjacency rows and vertex subsets are Python integers used as bitsets:
bit ``v`` of ``adj[u]`` is set iff ``uv`` is an edge.  Neighbourhood
intersection is a single ``&`` and cardinality is ``int.bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Union

import numpy as np


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


@dataclass(frozen=True)
class VertexSet:
    """An immutable subset of ``[0, n)`` stored as a bitmask."""

    bits: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        return cls(mask_of(vertices))

    @classmethod
    def range(cls, start: int, stop: int) -> "VertexSet":
        if stop <= start:
            return cls(0)
        return cls(((1 << (stop - start)) - 1) << start)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and v >= 0 and bool(self.bits >> int(v) & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & ~other.bits)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return not self.bits & other.bits

    def issubset(self, other: "VertexSet") -> bool:
        return not self.bits & ~other.bits

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))

    def to_indicator(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=bool)
        out[self.to_list()] = True
        return out

    def __repr__(self) -> str:
        return f"VertexSet({self.to_list()})"


VertexSetLike = Union[VertexSet, Iterable[int], int]


def as_vertex_set(s: VertexSetLike) -> VertexSet:
    """Coerce a ``VertexSet``, raw bitmask or iterable of vertices."""
    if isinstance(s, VertexSet):
        return s
    if isinstance(s, (int, np.integer)):
        return VertexSet(int(s))
    if isinstance(s, np.ndarray) and s.dtype == bool:
        return VertexSet.of(np.flatnonzero(s))
    return VertexSet.of(s)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on ``[0, n)`` with bitset adjacency rows."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {u} has bits outside [0, {self.n})")
            if row >> u & 1:
                raise ValueError(f"self-loop at vertex {u}")
            for v in iter_bits(row >> (u + 1) << (u + 1)):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    # construction ---------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside [0, {n})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, a: np.ndarray) -> "Graph":
        """Build from a symmetric 0/1 matrix with zero diagonal."""
        a = np.asarray(a).astype(bool)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix must be symmetric")
        if a.diagonal().any():
            raise ValueError("adjacency matrix must have zero diagonal")
        if n == 0:
            return cls(0, ())
        packed = np.packbits(a, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        g = cls.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", rows)
        a = a.copy()
        a.setflags(write=False)
        g.__dict__["matrix"] = a
        return g

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    # views ---------------------------------------------------------------

    @cached_property
    def matrix(self) -> np.ndarray:
        """Boolean adjacency matrix (read-only)."""
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, row in enumerate(self.adj):
            a[u, list(iter_bits(row))] = True
        a.setflags(write=False)
        return a

    @property
    def vertices(self) -> VertexSet:
        return VertexSet.range(0, self.n)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            out.extend((u, v) for v in iter_bits(row >> (u + 1) << (u + 1)))
        return out

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int, within: VertexSetLike | None = None) -> int:
        if within is None:
            return self.adj[v].bit_count()
        return (self.adj[v] & as_vertex_set(within).bits).bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def e(self, s: VertexSetLike) -> int:
        """Number of (unordered) edges inside ``s``."""
        bits = as_vertex_set(s).bits
        return sum((self.adj[v] & bits).bit_count() for v in iter_bits(bits)) // 2

    def e_between(self, s: VertexSetLike, t: VertexSetLike) -> int:
        """``sum_{s in S, t in T} 1_G(s, t)``; edges inside ``S & T`` count twice."""
        sb, tb = as_vertex_set(s).bits, as_vertex_set(t).bits
        return sum((self.adj[v] & tb).bit_count() for v in iter_bits(sb))

    def density_between(self, s: VertexSetLike, t: VertexSetLike) -> float:
        s, t = as_vertex_set(s), as_vertex_set(t)
        if not s.size or not t.size:
            return 0.0
        return self.e_between(s, t) / (s.size * t.size)

    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return self.edge_count / (self.n * (self.n - 1) / 2)

    def induced_subgraph(self, s: VertexSetLike) -> "Graph":
        """``G[S]`` relabelled to ``[0, |S|)`` in increasing vertex order."""
        order = as_vertex_set(s).to_list()
        index = {v: i for i, v in enumerate(order)}
        rows = []
        for v in order:
            rows.append(mask_of(index[w] for w in iter_bits(self.adj[v]) if w in index))
        return Graph(len(order), tuple(rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def induced_subgraph(g: Graph, s: VertexSetLike) -> Graph:
    return g.induced_subgraph(s)

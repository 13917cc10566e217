"""Small pattern graphs H (at most ten vertices) and a named library."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

MAX_PATTERN_ORDER = 10


@dataclass(frozen=True)
class Pattern:
    """A pattern graph on ``[0, r)`` given by its edge list."""

    r: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.r <= MAX_PATTERN_ORDER:
            raise ValueError(f"pattern order must be in [1, {MAX_PATTERN_ORDER}], got {self.r}")
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"pattern self-loop at {u}")
            if not (0 <= u < self.r and 0 <= v < self.r):
                raise ValueError(f"pattern edge ({u}, {v}) outside [0, {self.r})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate pattern edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def nbr(self) -> tuple[int, ...]:
        rows = [0] * self.r
        for u, v in self.edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return tuple(rows)

    def degree(self, v: int) -> int:
        return self.nbr[v].bit_count()

    @property
    def has_isolated_vertices(self) -> bool:
        return any(row == 0 for row in self.nbr)

    @cached_property
    def girth(self) -> float:
        """Length of a shortest cycle, ``math.inf`` for forests."""
        best = math.inf
        for root in range(self.r):
            dist = {root: 0}
            parent = {root: -1}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in range(self.r):
                    if not self.nbr[u] >> w & 1:
                        continue
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        queue.append(w)
                    elif parent[u] != w:
                        best = min(best, dist[u] + dist[w] + 1)
        return best

    @property
    def is_clique(self) -> bool:
        return self.m == self.r * (self.r - 1) // 2

    @cached_property
    def automorphism_count(self) -> int:
        edge_set = set(self.edges)
        count = 0
        for perm in itertools.permutations(range(self.r)):
            if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in edge_set for u, v in self.edges):
                count += 1
        return count

    def search_order(self) -> list[int]:
        """Vertex order for DFS embedding: highest degree first, then
        vertices with most already-placed neighbours (ties by degree)."""
        remaining = set(range(self.r))
        order: list[int] = []
        placed = 0
        while remaining:
            v = max(
                remaining,
                key=lambda x: ((self.nbr[x] & placed).bit_count(), self.degree(x), -x),
            )
            order.append(v)
            placed |= 1 << v
            remaining.remove(v)
        return order

    def label(self) -> str:
        return self.name or f"H(r={self.r},m={self.m})"


def complete(r: int) -> Pattern:
    return Pattern(r, tuple(itertools.combinations(range(r), 2)), f"K{r}")


def cycle(k: int) -> Pattern:
    return Pattern(k, tuple((i, (i + 1) % k) for i in range(k)), f"C{k}")


def path(k: int) -> Pattern:
    """Path on ``k`` vertices (``k - 1`` edges)."""
    return Pattern(k, tuple((i, i + 1) for i in range(k - 1)), f"P{k}")


def complete_bipartite(a: int, b: int) -> Pattern:
    return Pattern(a + b, tuple((i, a + j) for i in range(a) for j in range(b)), f"K{a}{b}")


def star(leaves: int) -> Pattern:
    return Pattern(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)), f"S{leaves}")


def petersen() -> Pattern:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Pattern(10, tuple(outer + spokes + inner), "petersen")


_LIBRARY = {
    "K2": lambda: complete(2),
    "K3": lambda: complete(3),
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    "C4": lambda: cycle(4),
    "C5": lambda: cycle(5),
    "C6": lambda: cycle(6),
    "C8": lambda: cycle(8),
    "K33": lambda: complete_bipartite(3, 3),
    "K23": lambda: complete_bipartite(2, 3),
    "P3": lambda: path(3),
    "P4": lambda: path(4),
    "path3": lambda: path(3),
    "S3": lambda: star(3),
    "petersen": petersen,
}


def pattern_names() -> list[str]:
    return sorted(_LIBRARY)


def get_pattern(name_or_path: str) -> Pattern:
    """Look up a library pattern by name, or read an edge-list pattern file."""
    if name_or_path in _LIBRARY:
        return _LIBRARY[name_or_path]()
    p = Path(name_or_path)
    if p.exists():
        from .io import load_graph

        g = load_graph(p)
        return Pattern(g.n, tuple(g.edges()), p.stem)
    raise KeyError(
        f"unknown pattern {name_or_path!r}; choose one of {', '.join(pattern_names())} or pass a file"
    )

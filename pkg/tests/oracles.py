"""Brute-force reference implementations used as independent oracles.

Nothing here imports the search code under test: graphs are read through
their adjacency matrix only and every count is a plain enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def adj(g) -> np.ndarray:
    return np.asarray(g.matrix, dtype=bool)


def edges_ok(a, h_edges, phi) -> bool:
    return all(a[phi[u], phi[v]] for u, v in h_edges)


def labeled_copies(h_edges, r, a, vertices) -> int:
    return sum(edges_ok(a, h_edges, phi) for phi in itertools.permutations(list(vertices), r))


def homomorphisms(h_edges, r, a, targets) -> int:
    return sum(edges_ok(a, h_edges, phi) for phi in itertools.product(*[list(t) for t in targets]))


def partite_averaged(h_edges, r, a, parts) -> int:
    """Injective copies whose image meets every part exactly once."""
    total = 0
    for pi in itertools.permutations(range(r)):
        for phi in itertools.product(*[list(parts[pi[v]]) for v in range(r)]):
            total += edges_ok(a, h_edges, phi)
    return total


def partite_ordered(h_edges, r, a, parts, pi) -> int:
    return sum(edges_ok(a, h_edges, phi) for phi in itertools.product(*[list(parts[pi[v]]) for v in range(r)]))


def subsets(vertices):
    vertices = list(vertices)
    for k in range(len(vertices) + 1):
        yield from itertools.combinations(vertices, k)


def hereditary_defect(h_edges, r, m, a, p) -> Fraction:
    n = a.shape[0]
    best = Fraction(0)
    for s in subsets(range(n)):
        dev = abs(labeled_copies(h_edges, r, a, s) - p**m * len(s) ** r)
        best = max(best, dev)
    return best / n**r


def partite_defect(h_edges, r, m, a, p, ordered: bool) -> Fraction:
    """Max over all labelings V -> {unused, part 0..r-1}."""
    n = a.shape[0]
    best = Fraction(0)
    fact = math.factorial(r)
    for lab in itertools.product(range(r + 1), repeat=n):
        parts = [[v for v in range(n) if lab[v] == j + 1] for j in range(r)]
        prod = math.prod(len(x) for x in parts)
        if ordered:
            for pi in itertools.permutations(range(r)):
                c = partite_ordered(h_edges, r, a, parts, pi)
                best = max(best, abs(c - p**m * prod))
        else:
            c = partite_averaged(h_edges, r, a, parts)
            best = max(best, abs(c - p**m * fact * prod))
    return best / n**r


def max_excess(a, rows, cols, q, sign) -> Fraction:
    """``max sign * (e(A', B') - q|A'||B'|)`` over all subpairs."""
    best = Fraction(0)
    for x in subsets(rows):
        for y in subsets(cols):
            e = int(a[np.ix_(list(x), list(y))].sum()) if x and y else 0
            best = max(best, sign * (e - q * len(x) * len(y)))
    return best


def girth(r, h_edges) -> float:
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(r))
    g.add_edges_from(h_edges)
    return nx.girth(g)

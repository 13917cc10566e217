"""Seeded graph generators.

All randomness flows through :func:`rng_for`, which builds a NumPy
``Generator(PCG64(SeedSequence(seed)))``.  The algorithm and the draw order
below are fixed per ``GENERATOR_VERSION``: a seed and parameter set always
reproduce the same graph bit for bit.  Every generator takes its own
generator object, so nothing touches global state.

Draw order (version 1): one ``rng.random((n, n))`` matrix; pair ``u < v`` is
an edge iff ``U[u, v] < P[u, v]`` where ``P`` holds the pair probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .graph import Graph, VertexSet

GENERATOR_VERSION = 1
PRNG_NAME = "numpy.PCG64+SeedSequence"
SEED_MAX = 2**64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def rng_for(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))


def child_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent, prefix-stable sub-streams of a master seed."""
    return np.random.SeedSequence(check_seed(seed)).spawn(count)


@dataclass(frozen=True)
class Blocks:
    """Sidecar block labels for planted generators (``{"blocks": [[...], ...]}``)."""

    blocks: tuple[tuple[int, ...], ...]

    def as_sets(self) -> list[VertexSet]:
        return [VertexSet.of(b) for b in self.blocks]

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict) -> "Blocks":
        return cls(tuple(tuple(int(v) for v in b) for b in data["blocks"]))


@dataclass(frozen=True)
class WeightedTemplate:
    """k x k symmetric weight matrix with block sizes (a blow-up recipe).

    Weights may be floats or :class:`fractions.Fraction`; the template
    analysis module keeps them exact.
    """

    weights: tuple[tuple[Real, ...], ...]
    block_sizes: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        w = tuple(tuple(row) for row in self.weights)
        k = len(w)
        if k == 0 or any(len(row) != k for row in w):
            raise ValueError("weights must be a non-empty square matrix")
        for i in range(k):
            for j in range(k):
                if not 0 <= w[i][j] <= 1:
                    raise ValueError(f"weight [{i}][{j}] = {w[i][j]} outside [0, 1]")
                if w[i][j] != w[j][i]:
                    raise ValueError(f"weights not symmetric at [{i}][{j}]")
        sizes = tuple(int(s) for s in self.block_sizes) if self.block_sizes else (1,) * k
        if len(sizes) != k or any(s <= 0 for s in sizes):
            raise ValueError("block_sizes must be k positive integers")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.weights)

    @classmethod
    def two_block(cls, p, eps, n: int = 2) -> "WeightedTemplate":
        """Loops weighted ``p - eps``, the cross edge ``p + eps``; halves of ``n``."""
        return cls(((p - eps, p + eps), (p + eps, p - eps)), (n - n // 2, n // 2))


def _sample_upper(probs: np.ndarray, rng: np.random.Generator) -> Graph:
    n = probs.shape[0]
    draws = rng.random((n, n))
    upper = np.triu(draws < probs, k=1)
    return Graph.from_matrix(upper | upper.T)


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph G(n, p)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return _sample_upper(np.full((n, n), float(p)), rng_for(seed))


def expand_template(t: WeightedTemplate, seed: int) -> tuple[Graph, Blocks]:
    """Blow up a template: block ``i`` gets ``block_sizes[i]`` consecutive
    vertices and each pair across blocks ``i, j`` is an edge with
    probability ``weights[i][j]``."""
    sizes = t.block_sizes
    n = sum(sizes)
    if n < 2:
        raise ValueError("template must expand to at least 2 vertices")
    label = np.repeat(np.arange(t.k), sizes)
    w = np.array([[float(x) for x in row] for row in t.weights])
    probs = w[label[:, None], label[None, :]]
    g = _sample_upper(probs, rng_for(seed))
    starts = np.concatenate([[0], np.cumsum(sizes)])
    blocks = Blocks(tuple(tuple(range(starts[i], starts[i + 1])) for i in range(t.k)))
    return g, blocks


def build_four_block_counterexample(n: int, seed: int) -> tuple[Graph, Blocks]:
    """Density-1/2 graph with about n^3/8 labelled triangles that is far
    from quasirandom.

    Blocks V1..V4 of n/4 consecutive vertices: V1, V2 are cliques, V3, V4
    independent, V3-V4 complete bipartite, and (V1 u V2)-(V3 u V4) random
    with probability 1/2.  No edges between V1 and V2.
    """
    if n < 8 or n % 4:
        raise ValueError(f"n must be a multiple of 4 and at least 8, got {n}")
    q = n // 4
    half = Fraction(1, 2)
    zero, one = Fraction(0), Fraction(1)
    t = WeightedTemplate(
        (
            (one, zero, half, half),
            (zero, one, half, half),
            (half, half, zero, one),
            (half, half, one, zero),
        ),
        (q, q, q, q),
    )
    return expand_template(t, seed)


def random_split(rng: np.random.Generator, vertices: Sequence[int], parts: int) -> list[list[int]]:
    """Seeded shuffle then round-robin into ``parts`` near-equal parts."""
    order = list(vertices)
    rng.shuffle(order)
    return [sorted(order[i::parts]) for i in range(parts)]

"""Exact counting kernels: homomorphisms, labelled copies, partite and
cross-class clique counts, clique-discrepancy profiles, and the small
numerical inequalities the quasirandomness arguments lean on.

Conventions
-----------
* A *labelled copy* of H is an injective edge-preserving map V(H) -> V(G);
  K_r inside K_n therefore has the falling factorial n(n-1)...(n-r+1).
* A *homomorphism* need not be injective.
* Counts are Python ints (arbitrary precision, never wrap).
"""

from __future__ import annotations

import bisect
import itertools
import math
import warnings
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, VertexSet, VertexSetLike, as_vertex_set, iter_bits
from .patterns import Pattern


class RecoveryWarning(RuntimeWarning):
    """Vandermonde recovery residual above tolerance (ill-conditioned input)."""


def _full(g: Graph) -> int:
    return (1 << g.n) - 1


def _within(g: Graph, s: VertexSetLike | None) -> int:
    if s is None:
        return _full(g)
    bits = as_vertex_set(s).bits
    if bits >> g.n:
        raise ValueError("vertex set not contained in [0, n)")
    return bits


# ---------------------------------------------------------------------------
# embedding search


def _plan(h: Pattern):
    order = h.search_order()
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[w] for w in iter_bits(h.nbr[v]) if pos[w] < k] for k, v in enumerate(order)]
    return order, back


def _count_maps(h: Pattern, g: Graph, targets: Sequence[int], injective: bool) -> int:
    order, back = _plan(h)
    last = h.r - 1
    adj = g.adj
    img = [0] * h.r
    tgt = [targets[v] for v in order]

    def rec(k: int, used: int) -> int:
        cand = tgt[k]
        for j in back[k]:
            cand &= adj[img[j]]
        if injective:
            cand &= ~used
        if k == last:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            img[k] = low.bit_length() - 1
            total += rec(k + 1, used | low)
            cand ^= low
        return total

    return rec(0, 0)


def count_homomorphisms(h: Pattern, g: Graph, targets: Sequence[VertexSetLike] | None = None) -> int:
    """Edge-preserving maps V(H) -> V(G), vertex ``i`` landing in ``targets[i]``."""
    if targets is None:
        tmask = [_full(g)] * h.r
    else:
        if len(targets) != h.r:
            raise ValueError(f"need {h.r} target sets, got {len(targets)}")
        tmask = [_within(g, t) for t in targets]
    return _count_maps(h, g, tmask, injective=False)


def count_labeled_copies(h: Pattern, g: Graph, s: VertexSetLike | None = None) -> int:
    """Injective edge-preserving maps V(H) -> S."""
    bits = _within(g, s)
    if bits.bit_count() < h.r:
        return 0
    if h.is_clique and h.r >= 2:
        return clique_count(g, h.r, bits) * math.factorial(h.r)
    if h.r == 4 and h.m == 4 and all(h.degree(v) == 2 for v in range(4)):
        return _four_cycle_copies(g, bits)
    return _count_maps(h, g, [bits] * h.r, injective=True)


def _four_cycle_copies(g: Graph, bits: int) -> int:
    """Closed 4-walks minus the degenerate ones: tr(A^4) - 2 sum d^2 + sum d."""
    idx = list(iter_bits(bits))
    if len(idx) > 50_000:
        raise ValueError("four-cycle fast path overflows int64 beyond 50000 vertices")
    a = g.matrix[np.ix_(idx, idx)].astype(np.int64)
    a2 = a @ a
    deg = a.sum(axis=1)
    return int((a2 * a2).sum()) - 2 * int((deg * deg).sum()) + int(deg.sum())


def copy_set_counts(h: Pattern, g: Graph, s: VertexSetLike | None = None) -> dict[int, int]:
    """Labelled copies of H grouped by image vertex set (bitmask -> count)."""
    bits = _within(g, s)
    out: dict[int, int] = {}
    if h.is_clique and h.r >= 2:
        fact = math.factorial(h.r)
        for clique in iter_cliques(g, h.r, bits):
            out[clique] = fact
        return out
    order, back = _plan(h)
    last = h.r - 1
    adj = g.adj
    img = [0] * h.r

    def rec(k: int, used: int) -> None:
        cand = bits & ~used
        for j in back[k]:
            cand &= adj[img[j]]
        while cand:
            low = cand & -cand
            if k == last:
                key = used | low
                out[key] = out.get(key, 0) + 1
            else:
                img[k] = low.bit_length() - 1
                rec(k + 1, used | low)
            cand ^= low

    rec(0, 0)
    return out


# ---------------------------------------------------------------------------
# cliques


def iter_cliques(g: Graph, r: int, within: VertexSetLike | None = None) -> Iterator[int]:
    """Yield every r-clique inside ``within`` once, as a bitmask."""
    bits = _within(g, within)
    adj = g.adj

    def rec(cand: int, acc: int, need: int) -> Iterator[int]:
        if need == 0:
            yield acc
            return
        while cand.bit_count() >= need:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            yield from rec(cand & adj[v], acc | low, need - 1)

    if r <= 0:
        yield 0
        return
    yield from rec(bits, 0, r)


def clique_count(g: Graph, r: int, within: VertexSetLike | None = None) -> int:
    """Number of (unlabelled) r-cliques inside ``within``."""
    bits = _within(g, within)
    if r == 0:
        return 1
    if r == 1:
        return bits.bit_count()
    adj = g.adj
    if r == 2:
        return sum((adj[v] & bits).bit_count() for v in iter_bits(bits)) // 2

    def rec(cand: int, need: int) -> int:
        if need == 2:
            return sum((adj[v] & cand).bit_count() for v in iter_bits(cand)) // 2
        total = 0
        while cand.bit_count() >= need:
            low = cand & -cand
            cand ^= low
            total += rec(cand & adj[low.bit_length() - 1], need - 1)
        return total

    return rec(bits, r)


# ---------------------------------------------------------------------------
# partite counts


def _check_parts(g: Graph, parts: Sequence[VertexSetLike]) -> list[int]:
    masks = [_within(g, p) for p in parts]
    seen = 0
    for i, m in enumerate(masks):
        if m & seen:
            raise ValueError(f"part {i} overlaps an earlier part")
        seen |= m
    return masks


def count_partite(h: Pattern, g: Graph, parts: Sequence[VertexSetLike], mode="averaged") -> int:
    """Labelled copies of H with exactly one vertex in each part.

    ``mode="averaged"`` counts every such copy (all assignments of pattern
    vertices to parts).  Passing a permutation ``pi`` (sequence with
    ``pi[v]`` the part index of pattern vertex ``v``) counts copies whose
    vertex ``v`` lands in ``parts[pi[v]]``.
    """
    masks = _check_parts(g, parts)
    if len(masks) != h.r:
        raise ValueError(f"need {h.r} parts, got {len(masks)}")
    if mode != "averaged":
        pi = list(mode)
        if sorted(pi) != list(range(h.r)):
            raise ValueError(f"not a permutation of range({h.r}): {pi}")
        return _count_maps(h, g, [masks[pi[v]] for v in range(h.r)], injective=False)

    part_of = {}
    for i, m in enumerate(masks):
        for v in iter_bits(m):
            part_of[v] = i
    order, back = _plan(h)
    last = h.r - 1
    adj = g.adj
    img = [0] * h.r

    def rec(k: int, used_parts: int) -> int:
        avail = 0
        for i, m in enumerate(masks):
            if not used_parts >> i & 1:
                avail |= m
        cand = avail
        for j in back[k]:
            cand &= adj[img[j]]
        if k == last:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            img[k] = v
            total += rec(k + 1, used_parts | 1 << part_of[v])
            cand ^= low
        return total

    return rec(0, 0)


def partite_count_via_inclusion_exclusion(h: Pattern, g: Graph, parts: Sequence[VertexSetLike]) -> int:
    """``sum_{S subset [r]} (-1)^{r-|S|} N_H(U_S)`` with ``U_S`` the union of the chosen parts."""
    masks = _check_parts(g, parts)
    if len(masks) != h.r:
        raise ValueError(f"need {h.r} parts, got {len(masks)}")
    r = len(masks)
    total = 0
    for sel in range(1, 1 << r):
        union = 0
        for i in range(r):
            if sel >> i & 1:
                union |= masks[i]
        sign = -1 if (r - sel.bit_count()) % 2 else 1
        total += sign * count_labeled_copies(h, g, union)
    return total


# ---------------------------------------------------------------------------
# cross-class cliques and Vandermonde recovery


@dataclass(frozen=True)
class ClassCountVector:
    """``counts[i]`` = labelled r-cliques with exactly i vertices in X, r-i in Y."""

    r: int
    counts: tuple

    def total(self):
        return sum(self.counts)


def count_cross_cliques(g: Graph, x: VertexSetLike, y: VertexSetLike, r: int) -> ClassCountVector:
    xb, yb = _within(g, x), _within(g, y)
    if xb & yb:
        raise ValueError("X and Y must be disjoint")
    counts = [0] * (r + 1)
    for clique in iter_cliques(g, r, xb | yb):
        counts[(clique & xb).bit_count()] += 1
    fact = math.factorial(r)
    return ClassCountVector(r, tuple(c * fact for c in counts))


def expected_cross_cliques(p, r: int, x_size: int, y_size: int) -> tuple:
    """``C(r, i) p^{C(r,2)} |X|^i |Y|^{r-i}`` for i = 0..r."""
    base = p ** math.comb(r, 2)
    return tuple(math.comb(r, i) * base * x_size**i * y_size ** (r - i) for i in range(r + 1))


@lru_cache(maxsize=None)
def vandermonde_matrix(r: int) -> tuple[tuple[Fraction, ...], ...]:
    """``a_{ji} = q_j^i`` with ``q_j = j/(r+1)``, j = 1..r+1, i = 0..r."""
    return tuple(tuple(Fraction(j, r + 1) ** i for i in range(r + 1)) for j in range(1, r + 2))


@lru_cache(maxsize=None)
def vandermonde_inverse(r: int) -> tuple[tuple[Fraction, ...], ...]:
    a = [list(row) + [Fraction(int(i == j)) for j in range(r + 1)] for i, row in enumerate(vandermonde_matrix(r))]
    size = r + 1
    for col in range(size):
        piv = next(i for i in range(col, size) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for i in range(size):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [vi - f * vc for vi, vc in zip(a[i], a[col])]
    return tuple(tuple(row[size:]) for row in a)


def inverse_max_entry(r: int) -> Fraction:
    """``|a|``: largest absolute entry of the inverse Vandermonde matrix."""
    return max(abs(v) for row in vandermonde_inverse(r) for v in row)


def forward_evaluate(x: Sequence, r: int) -> tuple:
    """``z_j = sum_i q_j^i x_i``: expected mixed counts after keeping each
    X-vertex with probability q_j."""
    if len(x) != r + 1:
        raise ValueError(f"need {r + 1} coordinates")
    return tuple(sum(a * xi for a, xi in zip(row, x)) for row in vandermonde_matrix(r))


def vandermonde_recover(observed: Sequence, r: int, rtol: float = 1e-6) -> ClassCountVector:
    """Solve ``A x = z`` exactly (rational arithmetic on the given inputs).

    Integer/Fraction inputs give Fraction outputs; float inputs are
    converted exactly and the solution is rounded back to float.
    """
    if len(observed) != r + 1:
        raise ValueError(f"need {r + 1} observations for r = {r}")
    exact = all(isinstance(z, Rational) for z in observed)
    z = [Fraction(v) for v in observed]
    inv = vandermonde_inverse(r)
    x = [sum(a * zj for a, zj in zip(row, z)) for row in inv]
    if exact:
        return ClassCountVector(r, tuple(x))
    xf = tuple(float(v) for v in x)
    back = forward_evaluate(xf, r)
    scale = max(max(abs(float(v)) for v in z), 1e-300)
    resid = max(abs(float(b) - float(zz)) for b, zz in zip(back, z)) / scale
    if resid > rtol:
        warnings.warn(f"Vandermonde recovery relative residual {resid:.3g} exceeds {rtol:g}", RecoveryWarning)
    return ClassCountVector(r, xf)


# ---------------------------------------------------------------------------
# clique discrepancy


@dataclass(frozen=True)
class DiscrepancyProfile:
    """Per-vertex ``c_U(u)`` and ``disc_U(u)`` over ``vertices`` (sorted)."""

    vertices: tuple[int, ...]
    clique_counts: tuple[int, ...]
    disc: tuple
    target: object

    @property
    def total(self):
        return sum(self.disc)


def vertex_clique_profile(g: Graph, u_set: VertexSetLike, r: int, p) -> DiscrepancyProfile:
    """``c_U(u)`` = r-cliques inside U through u; ``disc_U(u) = |c_U(u) -
    p^{C(r,2)} |U|^{r-1} / (r-1)!|``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    bits = _within(g, u_set)
    verts = tuple(iter_bits(bits))
    counts = dict.fromkeys(verts, 0)
    for clique in iter_cliques(g, r, bits):
        for v in iter_bits(clique):
            counts[v] += 1
    size = len(verts)
    target = p ** math.comb(r, 2) * size ** (r - 1) / math.factorial(r - 1)
    c = tuple(counts[v] for v in verts)
    return DiscrepancyProfile(verts, c, tuple(abs(ci - target) for ci in c), target)


def pair_clique_count(g: Graph, u: int, v: int, r: int) -> int:
    """(r-1)-sets S avoiding u, v with both ``{u} + S`` and ``{v} + S`` cliques."""
    if u == v:
        raise ValueError("u and v must differ")
    common = g.adj[u] & g.adj[v] & ~(1 << u | 1 << v)
    return clique_count(g, r - 1, common)


def pair_discrepancy(g: Graph, u: int, v: int, r: int, p):
    """``disc(u, v) = |c(u, v) - p^{C(r,2)} d(v)^{r-1} / (r-1)!|``."""
    target = p ** math.comb(r, 2) * g.degree(v) ** (r - 1) / math.factorial(r - 1)
    return abs(pair_clique_count(g, u, v, r) - target)


def degree_power_discrepancy(g: Graph, r: int) -> int:
    """``sum over ordered pairs (u, v) of |d(v)^{r-1} - d(u)^{r-1}|`` (exact)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    vals = sorted(d ** (r - 1) for d in g.degrees())
    n = len(vals)
    # sum_{i<j} (x_j - x_i) over sorted values, doubled for ordered pairs
    return 2 * sum((2 * i - n + 1) * x for i, x in enumerate(vals))


# ---------------------------------------------------------------------------
# Kruskal-Katona and power sums


def _kk_x(edge_count: int):
    disc = 1 + 8 * edge_count
    root = math.isqrt(disc)
    if root * root == disc:
        return Fraction(1 + root, 2)
    return None


def generalized_binomial(x, r: int):
    out = 1
    for i in range(r):
        out = out * (x - i)
    return out / math.factorial(r)


def kk_clique_upper_bound(edge_count: int, r: int) -> float | None:
    """``C(x, r)`` for the real ``x >= r`` with ``C(x, 2) = edge_count``.

    Returns ``None`` when ``edge_count < C(r, 2)`` (then ``x < r`` and the
    bound is not available in this form).
    """
    if edge_count < math.comb(r, 2):
        return None
    x = (1 + math.sqrt(1 + 8 * edge_count)) / 2
    return float(generalized_binomial(x, r))


def kk_bound_holds(edge_count: int, clique_total: int, r: int) -> bool:
    """Exact ``clique_total <= C(x, r)``.

    ``x`` is rational when ``1 + 8e`` is a perfect square; otherwise it is
    a quadratic irrational and the comparison runs at 60 significant digits,
    far below any possible gap to an integer.
    """
    if edge_count < math.comb(r, 2):
        return clique_total == 0
    x = _kk_x(edge_count)
    if x is not None:
        return clique_total <= generalized_binomial(x, r)
    with localcontext() as ctx:
        ctx.prec = 60
        xd = (1 + (Decimal(1 + 8 * edge_count)).sqrt()) / 2
        return Decimal(clique_total) <= generalized_binomial(xd, r)


def power_sum_gap(a: Sequence, b: Sequence, s: int):
    """Return ``(lhs, rhs1, rhs2)`` with

    * ``lhs  = sum_{i,j} |b_j^s - a_i^s|``
    * ``rhs1 = n sum_j b_j^s - sum_j b_j^{s-1} sum_i a_i``
    * ``rhs2 = sum_j b_j^{s-1} (sum_j b_j - sum_i a_i)``

    Both ``lhs >= rhs1`` and ``lhs >= rhs2`` hold for non-negative input.
    """
    if len(a) != len(b):
        raise ValueError("a and b must have equal length")
    if s < 1 or int(s) != s:
        raise ValueError("s must be a positive integer")
    if any(v < 0 for v in itertools.chain(a, b)):
        raise ValueError("entries must be non-negative")
    n = len(a)
    a_s = sorted(v**s for v in a)
    b_s = [v**s for v in b]
    # sum_{i,j} |b_j^s - a_i^s| via prefix sums over sorted a^s
    prefix = [0]
    for v in a_s:
        prefix.append(prefix[-1] + v)
    total_a = prefix[-1]
    lhs = 0
    for bv in b_s:
        k = bisect.bisect_right(a_s, bv)
        lhs += (bv * k - prefix[k]) + ((total_a - prefix[k]) - bv * (n - k))
    sum_b_pow = sum(b_s)
    sum_b_prev = sum(v ** (s - 1) for v in b)
    sum_a, sum_b = sum(a), sum(b)
    rhs1 = n * sum_b_pow - sum_b_prev * sum_a
    rhs2 = sum_b_prev * (sum_b - sum_a)
    return lhs, rhs1, rhs2

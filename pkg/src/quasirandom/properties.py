"""Defects of a graph with respect to the count properties P, P*, Q and R.

A defect is the largest normalised deviation ``|count - expected| / n^r``
over the witnesses examined (``r`` = pattern order), where

* P (global):      count = N_H(V(G)),              expected = p^m n^r
* P* (hereditary): count = N_H(S),                 expected = p^m |S|^r
* Q (partite):     count = copies with one vertex
                   in each of r disjoint parts,    expected = p^m r! prod |V_i|
* R (ordered):     count = copies with vertex v
                   in part pi(v),                  expected = p^m prod |V_i|

Counts are labelled copies (injective maps), so for H = K_2 the count on
``S`` is ``2 e(S)`` and is compared with ``p |S|^2``.  All deviations are
exact rationals; ``p`` is converted with :func:`as_fraction`.

Exact mode enumerates every witness; sampled mode examines the whole
vertex set plus seeded random witnesses (optionally improved by local
search) and therefore only ever reports a lower bound on the exact defect.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._exact import as_fraction, fraction_str
from .counting import copy_set_counts, count_labeled_copies, count_partite
from .generators import child_seeds, rng_for
from .graph import Graph, VertexSet, VertexSetLike, as_vertex_set
from .patterns import Pattern, complete

FAMILIES = ("P", "Pstar", "Q", "R")

HEREDITARY_EXACT_MAX_N = 24
PARTITE_EXACT_MAX_ASSIGNMENTS = 1 << 21
_INT_LIMIT = 1 << 62


class ExactModeTooLarge(ValueError):
    """Raised when an exact enumeration is requested beyond its size cap."""


@dataclass(frozen=True)
class PropertyKind:
    family: str
    pattern: Pattern
    p: Fraction

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        object.__setattr__(self, "p", as_fraction(self.p))
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class DefectReport:
    kind: PropertyKind
    n: int
    count: int
    expected: Fraction
    witness: tuple[VertexSet, ...]
    mode: str
    perm: tuple[int, ...] | None = None
    samples: int | None = None
    seed: int | None = None
    local_search: bool = False

    @property
    def deviation(self) -> Fraction:
        return abs(self.count - self.expected)

    @property
    def defect(self) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return self.deviation / self.n**self.kind.pattern.r

    def to_json(self) -> dict:
        if self.kind.family in ("P", "Pstar"):
            witness = self.witness[0].to_list()
        else:
            witness = [w.to_list() for w in self.witness]
        out = {
            "kind": self.kind.family,
            "pattern": self.kind.pattern.label(),
            "p": fraction_str(self.kind.p),
            "defect": float(self.defect),
            "defect_exact": fraction_str(self.defect),
            "count": self.count,
            "expected": fraction_str(self.expected),
            "n": self.n,
            "witness": witness,
            "mode": self.mode,
        }
        if self.perm is not None:
            out["perm"] = list(self.perm)
        if self.mode == "sampled":
            out["samples"] = self.samples
            out["seed"] = self.seed
            out["local_search"] = self.local_search
        return out


def expected_count(kind: PropertyKind, witness: Sequence[VertexSet]) -> Fraction:
    h = kind.pattern
    base = kind.p**h.m
    if kind.family in ("P", "Pstar"):
        return base * witness[0].size**h.r
    prod = math.prod(w.size for w in witness)
    if kind.family == "Q":
        return base * math.factorial(h.r) * prod
    return base * prod


def witness_count(g: Graph, kind: PropertyKind, witness: Sequence[VertexSet], perm=None) -> int:
    """Recount copies on a witness by direct search (independent of the
    enumeration used to find it)."""
    h = kind.pattern
    if kind.family in ("P", "Pstar"):
        return count_labeled_copies(h, g, witness[0])
    if kind.family == "Q":
        return count_partite(h, g, witness, "averaged")
    return count_partite(h, g, witness, perm)


def recheck(g: Graph, report: DefectReport) -> bool:
    """Witness honesty: the stored witness reproduces count and defect."""
    count = witness_count(g, report.kind, report.witness, report.perm)
    return count == report.count and expected_count(report.kind, report.witness) == report.expected


def _report(g, kind, witness, count, mode, **extra) -> DefectReport:
    witness = tuple(witness)
    return DefectReport(kind, g.n, int(count), expected_count(kind, witness), witness, mode, **extra)


# ---------------------------------------------------------------------------
# P and P*


def defect_global(g: Graph, h: Pattern, p) -> DefectReport:
    kind = PropertyKind("P", h, p)
    full = g.vertices
    return _report(g, kind, [full], count_labeled_copies(h, g, full), "exact")


def subset_copy_table(h: Pattern, g: Graph) -> np.ndarray:
    """``table[mask]`` = labelled copies of H inside the vertex set ``mask``,
    for all 2^n masks (subset-sum transform of per-vertex-set counts)."""
    n = g.n
    table = np.zeros(1 << n, dtype=np.int64)
    for mask, c in copy_set_counts(h, g).items():
        table[mask] += c
    for i in range(n):
        view = table.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return table


def _argmax_deviation(table: np.ndarray, sizes: np.ndarray, p: Fraction, m: int, r: int) -> int:
    a, b = p.numerator, p.denominator
    top_count = int(table.max()) if table.size else 0
    top_size = int(sizes.max()) if sizes.size else 0
    if b**m * max(top_count, 1) < _INT_LIMIT and a**m * max(top_size, 1) ** r < _INT_LIMIT:
        dev = np.abs(b**m * table - a**m * sizes**r)
        return int(np.argmax(dev))
    # float screening, exact decision among the leading candidates
    dev = np.abs(table - float(p) ** m * sizes.astype(np.float64) ** r)
    k = min(16, dev.size)
    cand = np.argpartition(dev, -k)[-k:]
    return int(max(sorted(cand), key=lambda i: abs(int(table[i]) - p**m * int(sizes[i]) ** r)))


def _hereditary_exact(g: Graph, h: Pattern, kind: PropertyKind) -> DefectReport:
    if g.n > HEREDITARY_EXACT_MAX_N:
        raise ExactModeTooLarge(f"exact hereditary mode needs n <= {HEREDITARY_EXACT_MAX_N}, got {g.n}")
    table = subset_copy_table(h, g)
    sizes = np.bitwise_count(np.arange(1 << g.n, dtype=np.uint32)).astype(np.int64)
    best = _argmax_deviation(table, sizes, kind.p, h.m, h.r)
    witness = VertexSet(best)
    count = int(table[best])
    if count != count_labeled_copies(h, g, witness):
        raise AssertionError("subset table disagrees with direct count")
    return _report(g, kind, [witness], count, "exact")


class _SubsetCounter:
    """Copy counts on vertex subsets given as boolean indicators, with
    incremental single-vertex toggles for K_2 and K_3."""

    def __init__(self, g: Graph, h: Pattern):
        self.g, self.h = g, h
        self.fast = h.is_clique and h.r in (2, 3)
        if self.fast:
            self.A = g.matrix.astype(np.int64)

    def count(self, s: np.ndarray) -> int:
        if self.fast:
            idx = np.flatnonzero(s)
            sub = self.g.matrix[np.ix_(idx, idx)]
            if self.h.r == 2:
                return int(sub.sum())
            f = sub.astype(np.float32)
            sq = (f @ f).astype(np.int64)
            return int((sq * sub).sum())
        return count_labeled_copies(self.h, self.g, VertexSet.of(np.flatnonzero(s)))

    def climb(self, s: np.ndarray, p: Fraction, max_steps: int) -> np.ndarray:
        """Steepest single-vertex add/remove ascent on |deviation|."""
        s = s.copy()
        h = self.h
        target = p**h.m
        pf = float(target)
        size = int(s.sum())
        count = self.count(s)
        if not self.fast:
            return self._climb_generic(s, target, max_steps)
        A = self.A
        deg = A @ s.astype(np.int64)
        if h.r == 3:
            P = (A * s) @ A
            w = ((A * s) * P).sum(axis=1)
        cur = abs(count - target * size**h.r)
        for _ in range(max_steps):
            sign = np.where(s, -1, 1)
            gain = 2 * deg if h.r == 2 else 3 * w
            new_count = count + sign * gain
            new_size = size + sign
            score = np.abs(new_count - pf * new_size.astype(np.float64) ** h.r)
            u = int(np.argmax(score))
            cand = abs(int(new_count[u]) - target * int(new_size[u]) ** h.r)
            if cand <= cur:
                break
            su = int(sign[u])
            if h.r == 3:
                w += su * 2 * A[:, u] * P[u, :]
                P += su * np.outer(A[:, u], A[:, u])
            deg += su * A[:, u]
            s[u] = not s[u]
            count, size, cur = int(new_count[u]), int(new_size[u]), cand
        return s

    def _climb_generic(self, s, target, max_steps):
        h = self.h
        size = int(s.sum())
        cur = abs(self.count(s) - target * size**h.r)
        for _ in range(max_steps):
            best_u, best_val = -1, cur
            for u in range(len(s)):
                s[u] = not s[u]
                val = abs(self.count(s) - target * int(s.sum()) ** h.r)
                s[u] = not s[u]
                if val > best_val:
                    best_u, best_val = u, val
            if best_u < 0:
                break
            s[best_u] = not s[best_u]
            cur = best_val
        return s


def _hereditary_sampled(g, h, kind, samples, seed, local_search) -> DefectReport:
    counter = _SubsetCounter(g, h)
    target = kind.p**h.m
    n = g.n
    best_s = np.ones(n, dtype=bool)
    best_count = counter.count(best_s)
    best_dev = abs(best_count - target * n**h.r)
    for ss in child_seeds(seed, samples):
        rng = rng_for(ss)
        k = int(rng.integers(1, n + 1))
        s = np.zeros(n, dtype=bool)
        s[rng.choice(n, size=k, replace=False)] = True
        if local_search:
            s = counter.climb(s, kind.p, 5 * n)
        c = counter.count(s)
        dev = abs(c - target * int(s.sum()) ** h.r)
        if dev > best_dev:
            best_s, best_count, best_dev = s, c, dev
    witness = VertexSet.of(np.flatnonzero(best_s))
    return _report(
        g, kind, [witness], best_count, "sampled", samples=samples, seed=seed, local_search=local_search
    )


def defect_hereditary(
    g: Graph,
    h: Pattern,
    p,
    mode: str = "exact",
    samples: int = 1000,
    seed: int = 0,
    local_search: bool = False,
) -> DefectReport:
    """Largest ``|N_H(S) - p^m |S|^r| / n^r`` over subsets S.

    ``mode="exact"`` scans all 2^n subsets (n <= 24); ``mode="sampled"``
    scans the full set plus ``samples`` random subsets (uniform size, then
    uniform subset) drawn from per-sample child streams of ``seed``, each
    optionally improved by steepest add/remove ascent for up to 5n steps.
    """
    kind = PropertyKind("Pstar", h, p)
    if mode == "exact":
        return _hereditary_exact(g, h, kind)
    if mode == "sampled":
        return _hereditary_sampled(g, h, kind, samples, seed, local_search)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Q and R


def _perm_tensor(A: np.ndarray, h: Pattern, pi: Sequence[int]) -> np.ndarray:
    """``T[a_0, ..., a_{r-1}] = prod_{uv in E(H)} A[a_{pi(u)}, a_{pi(v)}]``."""
    n, r = A.shape[0], h.r
    t = np.ones((n,) * r, dtype=np.float64)
    for u, v in h.edges:
        i, j = pi[u], pi[v]
        shape = [1] * r
        shape[i] = shape[j] = n
        t = t * A.reshape(shape)
    return t


def _all_perms(r: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(r)))


def _partite_tensor(g: Graph, h: Pattern, perm: Sequence[int] | None) -> np.ndarray:
    """Identity-placement tensor for R (``perm``), or the sum over all
    placements for Q (``perm is None``)."""
    A = g.matrix.astype(np.float64)
    if perm is not None:
        return _perm_tensor(A, h, perm)
    return sum(_perm_tensor(A, h, pi) for pi in _all_perms(h.r))


@dataclass
class _ScanBest:
    scaled: int = -1
    parts: list = field(default_factory=list)


def _partite_exact_scan(g: Graph, h: Pattern, p: Fraction, tensor: np.ndarray, factor: int) -> _ScanBest:
    """Exact maximum of ``|<tensor, V_1 x ... x V_r> - p^m factor prod|V_i||``
    over ordered r-tuples of disjoint parts.

    The first r-1 parts are enumerated (r^n labelings); the deviation is
    linear in the indicator of the last part, so its optimum is the set of
    free vertices with positive (or negative) marginal.
    """
    n, r = g.n, h.r
    total = r**n
    if total > PARTITE_EXACT_MAX_ASSIGNMENTS:
        raise ExactModeTooLarge(
            f"exact partite mode enumerates r^n = {total} labelings (cap {PARTITE_EXACT_MAX_ASSIGNMENTS})"
        )
    a, b = p.numerator, p.denominator
    m = h.m
    bound = math.factorial(r) * n ** (r + 1)
    if max(a, b) ** m * bound >= _INT_LIMIT:
        raise ExactModeTooLarge("p has too large a denominator for the exact integer scan")
    bm, am = b**m, a**m * factor
    W0 = tensor.reshape(n, -1)
    powers = r ** np.arange(n, dtype=np.int64)
    chunk = max(256, (1 << 22) // n ** (r - 1))
    best = _ScanBest()
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        labels = (idx[:, None] // powers[None, :]) % r  # 0 = free, j = part j-1
        K = len(idx)
        M = (labels == 1).astype(np.float64) @ W0
        for j in range(2, r):
            M = (labels == j).astype(np.float64)[:, None, :] @ M.reshape(K, n, -1)
        t = np.rint(M.reshape(K, n)).astype(np.int64)
        free = labels == 0
        prod = np.ones(K, dtype=np.int64)
        for j in range(1, r):
            prod *= (labels == j).sum(axis=1)
        d = bm * t - am * prod[:, None]
        pos = np.where(free & (d > 0), d, 0).sum(axis=1)
        neg = -np.where(free & (d < 0), d, 0).sum(axis=1)
        val = np.maximum(pos, neg)
        k = int(np.argmax(val))
        if int(val[k]) > best.scaled:
            best.scaled = int(val[k])
            last = free[k] & ((d[k] > 0) if pos[k] >= neg[k] else (d[k] < 0))
            best.parts = [VertexSet.of(np.flatnonzero(labels[k] == j)) for j in range(1, r)]
            best.parts.append(VertexSet.of(np.flatnonzero(last)))
    return best


def _best_response(tensor: np.ndarray, parts, target: float, rounds: int = 3):
    """Alternately re-optimise each part given the others (the deviation is
    linear in each part's indicator); never decreases |deviation|."""
    r = len(parts)
    parts = [x.copy() for x in parts]
    for _ in range(rounds):
        for j in range(r):
            others = [parts[i] for i in range(r) if i != j]
            free = ~np.logical_or.reduce(others)
            marg = np.moveaxis(tensor, j, -1)
            for x in others:
                marg = np.tensordot(x.astype(np.float64), marg, axes=([0], [0]))
            d = marg - target * math.prod(int(x.sum()) for x in others)
            pos, neg = free & (d > 0), free & (d < 0)
            cur = abs(d[parts[j]].sum())
            up, down = d[pos].sum(), -d[neg].sum()
            cand, val = (pos, up) if up >= down else (neg, down)
            if val > cur + 1e-9:
                parts[j] = cand
    return parts


def _partite_sampled(g, h, kind, perms, samples, seed, local_search):
    """Random labelings into r parts plus an unused class; with local search
    each tuple is improved by best response on the scan tensor."""
    n, r = g.n, h.r
    target = kind.p**h.m
    is_q = kind.family == "Q"
    factor = math.factorial(r) if is_q else 1
    tensor = None
    if local_search:
        if n**r > 4_000_000:
            raise ExactModeTooLarge("local search for partite defects needs n^r <= 4e6")
        tensor = _partite_tensor(g, h, None if is_q else perms[0])
    best = (Fraction(-1), None, None, 0)
    for ss in child_seeds(seed, samples):
        labels = rng_for(ss).integers(0, r + 1, size=n)
        parts = [labels == j + 1 for j in range(r)]
        if tensor is not None:
            parts = _best_response(tensor, parts, float(target) * factor)
        vs = [VertexSet.of(np.flatnonzero(x)) for x in parts]
        prod = math.prod(v.size for v in vs)
        for pi in [None] if is_q else perms:
            c = count_partite(h, g, vs, "averaged" if is_q else pi)
            dev = abs(c - target * factor * prod)
            if dev > best[0]:
                best = (dev, vs, pi, c)
    return best


def defect_partite(
    g: Graph, h: Pattern, p, mode: str = "exact", samples: int = 1000, seed: int = 0, local_search: bool = False
) -> DefectReport:
    """Largest ``|N_H(V_1..V_r) - p^m r! prod|V_i|| / n^r`` over disjoint parts."""
    kind = PropertyKind("Q", h, p)
    _check_order(g, h)
    if mode == "exact":
        best = _partite_exact_scan(g, h, kind.p, _partite_tensor(g, h, None), math.factorial(h.r))
        rep = _report(g, kind, best.parts, count_partite(h, g, best.parts, "averaged"), "exact")
        if rep.deviation * kind.p.denominator**h.m != best.scaled:
            raise AssertionError("partite scan disagrees with direct recount")
        return rep
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    _, parts, _, count = _partite_sampled(g, h, kind, None, samples, seed, local_search)
    return _report(g, kind, parts, count, "sampled", samples=samples, seed=seed, local_search=local_search)


def defect_ordered_partite(
    g: Graph,
    h: Pattern,
    p,
    perm: Sequence[int] | None = None,
    mode: str = "exact",
    samples: int = 1000,
    seed: int = 0,
    local_search: bool = False,
) -> DefectReport:
    """Largest ``|N_pi(V_1..V_r) - p^m prod|V_i|| / n^r`` over disjoint parts
    and over ``perm`` (all bijections when ``None``).

    Exact mode with ``perm=None`` scans the identity only: reordering the
    parts turns any bijection into the identity, and the scan already
    ranges over ordered tuples.
    """
    kind = PropertyKind("R", h, p)
    _check_order(g, h)
    if perm is not None and sorted(perm) != list(range(h.r)):
        raise ValueError(f"perm must be a permutation of 0..{h.r - 1}")
    perms = _all_perms(h.r) if perm is None else [tuple(perm)]
    if mode == "exact":
        pi = perms[0]
        best = _partite_exact_scan(g, h, kind.p, _partite_tensor(g, h, pi), 1)
        rep = _report(g, kind, best.parts, count_partite(h, g, best.parts, pi), "exact", perm=pi)
        if rep.deviation * kind.p.denominator**h.m != best.scaled:
            raise AssertionError("ordered partite scan disagrees with direct recount")
        return rep
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    _, parts, pi, count = _partite_sampled(g, h, kind, perms, samples, seed, local_search)
    return _report(
        g, kind, parts, count, "sampled", perm=tuple(pi), samples=samples, seed=seed, local_search=local_search
    )


def _check_order(g: Graph, h: Pattern) -> None:
    if h.r < 2:
        raise ValueError("partite defects need a pattern on at least 2 vertices")
    if h.r > g.n:
        raise ValueError(f"pattern order {h.r} exceeds n = {g.n}")


# ---------------------------------------------------------------------------
# transfer between P*_2 and P*_r


@dataclass(frozen=True)
class TransferCheck:
    gamma_hat: Fraction
    rho_hat: Fraction
    r: int

    @property
    def ratio(self) -> Fraction | None:
        return self.rho_hat / self.gamma_hat if self.gamma_hat else None

    @property
    def holds(self) -> bool:
        return self.rho_hat <= self.r**2 * self.gamma_hat


def counting_transfer_check(g: Graph, r: int, p) -> TransferCheck:
    """Exact P*_2 and P*_r (clique) defects; the second never exceeds
    ``r^2`` times the first."""
    if g.n > 20:
        raise ExactModeTooLarge("counting_transfer_check runs in exact mode (n <= 20)")
    gamma = defect_hereditary(g, complete(2), p, "exact").defect
    rho = defect_hereditary(g, complete(r), p, "exact").defect
    return TransferCheck(gamma, rho, r)


# ---------------------------------------------------------------------------
# halving a deviating set; random split


def edge_deviation(g: Graph, s: VertexSetLike, q) -> Fraction:
    """Signed ``e(S) - q C(|S|, 2)``."""
    s = as_vertex_set(s)
    return g.e(s) - as_fraction(q) * math.comb(s.size, 2)


@dataclass(frozen=True)
class HalvingResult:
    subset: VertexSet
    deviation: Fraction
    original: Fraction
    threshold: Fraction

    @property
    def below_threshold(self) -> bool:
        return abs(self.deviation) < self.threshold


def egps_halve(g: Graph, s: VertexSetLike, q=None, seed: int = 0, retries: int = 16) -> HalvingResult:
    """From a set ``s`` whose edge count deviates by ``D`` from
    ``q C(|s|, 2)``, find a set of exactly ``n // 2`` vertices deviating by
    at least ``D / 5`` (``q`` defaults to the density of ``g``).

    Greedy resizing toward ``n // 2`` in the direction of the original
    deviation, then best-swap ascent at fixed size.  Retry 0 is fully
    greedy; later retries pick randomly among the three best moves.  The
    best candidate is returned; ``below_threshold`` flags a miss.
    """
    s = as_vertex_set(s)
    n = g.n
    q = as_fraction(q) if q is not None else Fraction(g.edge_count, math.comb(n, 2))
    orig = edge_deviation(g, s, q)
    threshold = abs(orig) / 5
    half = n // 2
    if s.size == half:
        return HalvingResult(s, orig, orig, threshold)
    A = g.matrix.astype(np.int64)
    qf = float(q)
    best: HalvingResult | None = None
    for attempt, ss in enumerate(child_seeds(seed, retries)):
        rng = rng_for(ss)
        for sign in (1 if orig >= 0 else -1, -1 if orig >= 0 else 1):
            x = s.to_indicator(n)
            deg = A @ x.astype(np.int64)

            def pick(scores, allowed):
                idx = np.flatnonzero(allowed)
                order = idx[np.argsort(-scores[idx], kind="stable")]
                if attempt == 0:
                    return int(order[0])
                return int(rng.choice(order[: min(3, len(order))]))

            while x.sum() != half:
                size = int(x.sum())
                if size < half:
                    u = pick(sign * (deg - qf * size), ~x)
                    x[u] = True
                    deg += A[:, u]
                else:
                    u = pick(-sign * (deg - qf * (size - 1)), x)
                    x[u] = False
                    deg -= A[:, u]
            for _ in range(4 * n):
                ins, outs = np.flatnonzero(x), np.flatnonzero(~x)
                if not len(ins) or not len(outs):
                    break
                # swapping u out and v in changes e(S) by deg(v) - A[u, v] - deg(u)
                gain = sign * (deg[outs][None, :] - A[np.ix_(ins, outs)] - deg[ins][:, None])
                iu, iv = np.unravel_index(int(np.argmax(gain)), gain.shape)
                if gain[iu, iv] <= 0:
                    break
                u, v = int(ins[iu]), int(outs[iv])
                x[u], x[v] = False, True
                deg += A[:, v] - A[:, u]
            cand = VertexSet.of(np.flatnonzero(x))
            dev = edge_deviation(g, cand, q)
            if best is None or abs(dev) > abs(best.deviation):
                best = HalvingResult(cand, dev, orig, threshold)
    return best


@dataclass(frozen=True)
class SplitResult:
    x: VertexSet
    y: VertexSet
    e_x: int
    e_y: int
    gap_untrimmed: int

    @property
    def gap(self) -> int:
        return self.e_x - self.e_y


def split_deviation_experiment(g: Graph, s: VertexSetLike, seed: int) -> SplitResult:
    """Random split: A keeps each vertex with probability 1/2, ``X = S & A``
    and Y keeps each vertex outside A with probability 1/2.  The larger of
    X, Y is then trimmed by deleting uniformly random vertices until
    ``|X| = |Y|``.  ``gap = e(X) - e(Y)`` after trimming.
    """
    s = as_vertex_set(s).to_indicator(g.n)
    rng = rng_for(seed)
    a = rng.random(g.n) < 0.5
    x = s & a
    y = ~a & (rng.random(g.n) < 0.5)
    e = lambda m: g.e(VertexSet.of(np.flatnonzero(m)))  # noqa: E731
    gap0 = e(x) - e(y)
    while x.sum() != y.sum():
        big = x if x.sum() > y.sum() else y
        big[int(rng.choice(np.flatnonzero(big)))] = False
    xs, ys = VertexSet.of(np.flatnonzero(x)), VertexSet.of(np.flatnonzero(y))
    return SplitResult(xs, ys, g.e(xs), g.e(ys), gap0)

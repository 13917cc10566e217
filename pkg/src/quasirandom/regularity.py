"""Lower/upper regular pairs, witness transformations and the density
increment.

Conventions
-----------
For vertex sets ``A'``, ``B'`` the *excess* over a reference density ``q``
is ``e(A', B') - q |A'| |B'|``.  A pair ``(A, B)`` is

* lower-(q, eps)-regular if every ``A' <= A``, ``B' <= B`` has
  excess ``>= -eps |A| |B|``;
* upper-(q, eps)-regular if every subpair has excess ``<= eps |A| |B|``.

A witness is a subpair breaking this strictly.  Densities, excesses and
thresholds are exact :class:`~fractions.Fraction` values.

For a fixed ``A'`` the excess is a sum of independent per-vertex terms over
``B'``, so the extremal ``B'`` is a sign split.  Exact search therefore only
enumerates subsets of the smaller side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._exact import as_fraction, fraction_str
from .counting import count_homomorphisms, count_labeled_copies
from .generators import child_seeds, random_split, rng_for
from .graph import Graph, VertexSet, VertexSetLike, as_vertex_set
from .patterns import Pattern

LOWER, UPPER = "lower", "upper"
EXACT_MAX_SIDE = 20
AUTO_EXACT_MAX_SIDE = 14
SINGLE_SET_EXACT_MAX = 20
HEURISTIC_RESTARTS = 32
_CHUNK = 1 << 15


def _sign(direction: str) -> int:
    if direction == UPPER:
        return 1
    if direction == LOWER:
        return -1
    raise ValueError(f"direction must be {LOWER!r} or {UPPER!r}")


def exact_density(g: Graph, a: VertexSetLike, b: VertexSetLike) -> Fraction:
    a, b = as_vertex_set(a), as_vertex_set(b)
    if not a.size or not b.size:
        return Fraction(0)
    return Fraction(g.e_between(a, b), a.size * b.size)


def pair_excess(g: Graph, a: VertexSetLike, b: VertexSetLike, q) -> Fraction:
    a, b = as_vertex_set(a), as_vertex_set(b)
    return g.e_between(a, b) - as_fraction(q) * a.size * b.size


@dataclass(frozen=True)
class RegularityWitness:
    a_prime: VertexSet
    b_prime: VertexSet
    direction: str
    host_a: VertexSet
    host_b: VertexSet
    q: Fraction
    eps: Fraction
    excess: Fraction

    @classmethod
    def build(cls, g, a_prime, b_prime, direction, host_a, host_b, q, eps) -> "RegularityWitness":
        a_prime, b_prime = as_vertex_set(a_prime), as_vertex_set(b_prime)
        q, eps = as_fraction(q), as_fraction(eps)
        return cls(
            a_prime, b_prime, direction, as_vertex_set(host_a), as_vertex_set(host_b), q, eps,
            pair_excess(g, a_prime, b_prime, q),
        )

    @property
    def density(self) -> Fraction:
        size = self.a_prime.size * self.b_prime.size
        return (self.excess + self.q * size) / size if size else Fraction(0)

    @property
    def threshold(self) -> Fraction:
        return self.eps * self.host_a.size * self.host_b.size

    def violates(self) -> bool:
        return _sign(self.direction) * self.excess > self.threshold

    def recheck(self, g: Graph) -> bool:
        return (
            self.a_prime.issubset(self.host_a)
            and self.b_prime.issubset(self.host_b)
            and pair_excess(g, self.a_prime, self.b_prime, self.q) == self.excess
            and self.violates()
        )

    def to_json(self) -> dict:
        return {
            "a_prime": self.a_prime.to_list(),
            "b_prime": self.b_prime.to_list(),
            "direction": self.direction,
            "q": fraction_str(self.q),
            "eps": fraction_str(self.eps),
            "density": fraction_str(self.density),
        }


# ---------------------------------------------------------------------------
# extremal subpair search


def _block(g: Graph, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    return g.matrix[np.ix_(rows, cols)].astype(np.int64)


def _split(values: np.ndarray, sign: int, allowed: np.ndarray | None = None) -> np.ndarray:
    chosen = sign * values > 0
    return chosen if allowed is None else chosen & allowed


def _subset_rows(start: int, stop: int, k: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return ((idx[:, None] >> np.arange(k, dtype=np.int64)[None, :]) & 1).astype(bool)


def _exact_extremal(M: np.ndarray, q: Fraction, sign: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``x`` and columns ``y`` maximising ``sign * (x^T M y - q|x||y|)``."""
    k, cols = M.shape
    a, b = q.numerator, q.denominator
    if b * max(1, k * cols) >= 1 << 62 or a * max(1, k * cols) >= 1 << 62:
        raise ValueError("reference density has too large a denominator")
    best_val, best_x = -1, None
    Mf = M.astype(np.float64)
    for start in range(0, 1 << k, _CHUNK):
        X = _subset_rows(start, min(1 << k, start + _CHUNK), k)
        counts = np.rint(X.astype(np.float64) @ Mf).astype(np.int64)
        scaled = sign * (b * counts - a * X.sum(axis=1, dtype=np.int64)[:, None])
        val = np.where(scaled > 0, scaled, 0).sum(axis=1)
        i = int(np.argmax(val))
        if int(val[i]) > best_val:
            best_val, best_x = int(val[i]), X[i]
    y = _split(best_x.astype(np.int64) @ M * b - a * int(best_x.sum()), sign)
    return best_x, y


def _respond(M: np.ndarray, qf: float, x: np.ndarray, sign: int) -> np.ndarray:
    return _split(x.astype(np.float64) @ M - qf * x.sum(), sign)


def _climb(M: np.ndarray, qf: float, sign: int, x: np.ndarray, rounds: int = 100):
    """Alternating best response; each half-step cannot lower the objective."""
    y = _respond(M, qf, x, sign)
    for _ in range(rounds):
        nx = _respond(M.T, qf, y, sign)
        ny = _respond(M, qf, nx, sign)
        if np.array_equal(nx, x) and np.array_equal(ny, y):
            break
        x, y = nx, ny
    return x, y


def _heuristic_extremal(M, q, sign, strategy, seed):
    qf = float(q)
    deg = M.sum(axis=1)
    k = M.shape[0]
    order = np.argsort(sign * -deg, kind="stable")
    start = np.zeros(k, dtype=bool)
    start[order[: max(1, k // 4)]] = True
    starts = [start]
    if strategy == "hill-climb":
        for ss in child_seeds(seed, HEURISTIC_RESTARTS):
            starts.append(rng_for(ss).random(k) < 0.5)
    results = [_climb(M, qf, sign, s) for s in starts]

    def key(xy):
        x, y = xy
        val = sign * (Fraction(int(x.astype(np.int64) @ M @ y.astype(np.int64))) - q * int(x.sum()) * int(y.sum()))
        return (val, tuple(-np.flatnonzero(x)), tuple(-np.flatnonzero(y)))

    return max(results, key=key)


def extremal_subpair(
    g: Graph, a: VertexSetLike, b: VertexSetLike, q, direction: str, strategy: str = "auto", seed: int = 0
) -> tuple[VertexSet, VertexSet]:
    """Subpair with the largest excess (``upper``) or deficit (``lower``).

    ``exact`` enumerates the subsets of the smaller side (at most
    ``EXACT_MAX_SIDE`` vertices).  ``hill-climb`` runs alternating best
    response from a degree-split start plus 32 seeded random starts;
    ``degree-split`` uses the degree-split start only.  ``auto`` is exact
    when the smaller side has at most ``AUTO_EXACT_MAX_SIDE`` vertices.
    """
    a, b = as_vertex_set(a), as_vertex_set(b)
    sign = _sign(direction)
    q = as_fraction(q)
    rows, cols = a.to_list(), b.to_list()
    swap = len(rows) > len(cols)
    if swap:
        rows, cols = cols, rows
    if strategy == "auto":
        strategy = "exact" if len(rows) <= AUTO_EXACT_MAX_SIDE else "hill-climb"
    if not rows or not cols:
        return VertexSet(0), VertexSet(0)
    M = _block(g, rows, cols)
    if strategy == "exact":
        if len(rows) > EXACT_MAX_SIDE:
            raise ValueError(f"exact search needs a side of at most {EXACT_MAX_SIDE} vertices")
        x, y = _exact_extremal(M, q, sign)
    elif strategy in ("hill-climb", "degree-split"):
        x, y = _heuristic_extremal(M, q, sign, strategy, seed)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    xs = VertexSet.of(np.asarray(rows)[x].tolist())
    ys = VertexSet.of(np.asarray(cols)[y].tolist())
    return (ys, xs) if swap else (xs, ys)


def _check_pair(a: VertexSet, b: VertexSet) -> None:
    if not a.size or not b.size:
        raise ValueError("both sides of a pair must be non-empty")
    if not a.isdisjoint(b):
        raise ValueError("pair sides must be disjoint")


def find_irregularity_witness(
    g: Graph,
    a: VertexSetLike,
    b: VertexSetLike,
    q,
    eps,
    direction: str,
    strategy: str = "auto",
    seed: int = 0,
) -> RegularityWitness | None:
    """A subpair showing ``(a, b)`` is not lower/upper-(q, eps)-regular.

    ``None`` from the exact strategy proves regularity; from a heuristic
    strategy it only means nothing was found.
    """
    a, b = as_vertex_set(a), as_vertex_set(b)
    _check_pair(a, b)
    ap, bp = extremal_subpair(g, a, b, q, direction, strategy, seed)
    w = RegularityWitness.build(g, ap, bp, direction, a, b, q, eps)
    return w if w.violates() else None


def irregularity(g: Graph, a: VertexSetLike, b: VertexSetLike, q, direction: str) -> Fraction:
    """Exact ``max sign*excess / (|A||B|)``: the pair is lower/upper-(q, eps)
    regular exactly when ``eps >= irregularity``."""
    a, b = as_vertex_set(a), as_vertex_set(b)
    _check_pair(a, b)
    ap, bp = extremal_subpair(g, a, b, q, direction, "exact")
    return max(Fraction(0), _sign(direction) * pair_excess(g, ap, bp, q)) / (a.size * b.size)


def certify_regular(g: Graph, a, b, q, eps, direction: str) -> bool:
    return find_irregularity_witness(g, a, b, q, eps, direction, "exact") is None


def _flip(direction: str) -> str:
    return UPPER if direction == LOWER else LOWER


def convert_lower_to_upper_witness(
    g: Graph, a: VertexSetLike, b: VertexSetLike, witness: RegularityWitness
) -> RegularityWitness:
    """From a witness against lower-(d(A,B), eps)-regularity, a witness
    against upper-(d(A,B), eps/2)-regularity (and with lower/upper swapped).

    The excesses of ``(A', B')``, ``(A - A', B)`` and ``(A', B - B')`` at
    ``q = d(A, B)`` sum to zero, so one of the last two carries at least
    half of the first one's deficit.  Ties go to the larger product of sizes.
    """
    a, b = as_vertex_set(a), as_vertex_set(b)
    d = exact_density(g, a, b)
    w = RegularityWitness.build(g, witness.a_prime, witness.b_prime, witness.direction, a, b, d, witness.eps)
    if not w.violates() or not (w.a_prime.issubset(a) and w.b_prime.issubset(b)):
        raise ValueError("witness does not violate regularity at the pair density")
    target = _flip(w.direction)
    half = w.eps / 2
    cands = [
        RegularityWitness.build(g, a - w.a_prime, b, target, a, b, d, half),
        RegularityWitness.build(g, w.a_prime, b - w.b_prime, target, a, b, d, half),
    ]
    good = [c for c in cands if c.violates()]
    if not good:
        raise AssertionError("neither complementary pair violates; excess identity broken")
    return max(good, key=lambda c: c.a_prime.size * c.b_prime.size)


def equalize_witness(
    g: Graph, a: VertexSetLike, b: VertexSetLike, q, gamma, witness: RegularityWitness
) -> RegularityWitness:
    """Equal-size subpair with ``d >= q + gamma min(|A|/|A'|, |B|/|B'|)``
    (upper) or ``d <= q - gamma min(...)`` (lower).

    Keeps the smaller witness side and takes that many vertices of the
    other side with the most (upper) or fewest (lower) neighbours in it.
    """
    a, b = as_vertex_set(a), as_vertex_set(b)
    q, gamma = as_fraction(q), as_fraction(gamma)
    sign = _sign(witness.direction)
    a0, b0 = witness.a_prime, witness.b_prime
    if sign * pair_excess(g, a0, b0, q) < gamma * a.size * b.size:
        raise ValueError("witness does not violate (q, gamma)-regularity")
    keep, other = (a0, b0) if a0.size <= b0.size else (b0, a0)
    ranked = sorted(other, key=lambda v: (-sign * g.degree(v, keep), v))
    picked = VertexSet.of(ranked[: keep.size])
    a1, b1 = (keep, picked) if a0.size <= b0.size else (picked, keep)
    out = RegularityWitness.build(g, a1, b1, witness.direction, a, b, q, gamma)
    bound = q + sign * gamma * min(Fraction(a.size, a1.size), Fraction(b.size, b1.size))
    if sign * (out.density - bound) < 0:
        raise AssertionError("equalised witness misses the density bound")
    return out


# ---------------------------------------------------------------------------
# counting lemma


def counting_lower_bound(densities: dict, eps, part_sizes: Sequence[int]) -> Fraction:
    """``(prod p_ij - m eps) prod |V_i|`` with ``m`` = number of pattern edges."""
    prod = Fraction(1)
    for value in densities.values():
        value = as_fraction(value)
        if not 0 <= value <= 1:
            raise ValueError(f"edge density {value} outside [0, 1]")
        prod *= value
    eps = as_fraction(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return (prod - len(densities) * eps) * math.prod(part_sizes)


@dataclass(frozen=True)
class CountingLemmaCheck:
    certified: bool
    hom_count: int
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.hom_count >= self.bound


def check_counting_lemma(
    g: Graph, h: Pattern, parts: Sequence[VertexSetLike], eps, densities: dict | None = None
) -> CountingLemmaCheck:
    """Certify every pattern-edge pair lower-(p_ij, eps)-regular exactly
    (``p_ij`` defaults to ``d(V_i, V_j)``) and compare the homomorphism
    count with :func:`counting_lower_bound`."""
    parts = [as_vertex_set(s) for s in parts]
    if len(parts) != h.r:
        raise ValueError(f"need {h.r} parts")
    if densities is None:
        densities = {(i, j): exact_density(g, parts[i], parts[j]) for i, j in h.edges}
    certified = all(
        certify_regular(g, parts[i], parts[j], densities[(i, j)], eps, LOWER) for i, j in h.edges
    )
    return CountingLemmaCheck(
        certified,
        count_homomorphisms(h, g, parts),
        counting_lower_bound(densities, eps, [s.size for s in parts]),
    )


# ---------------------------------------------------------------------------
# single-set regularity


def set_density(g: Graph, u: VertexSetLike) -> Fraction:
    u = as_vertex_set(u)
    if u.size < 2:
        return Fraction(0)
    return Fraction(g.e(u), math.comb(u.size, 2))


def _single_extremal_exact(M: np.ndarray, d: Fraction):
    k = M.shape[0]
    a, b = d.numerator, d.denominator
    best = (-1, None, None)
    Mf = M.astype(np.float64)
    for start in range(0, 1 << k, _CHUNK):
        X = _subset_rows(start, min(1 << k, start + _CHUNK), k)
        counts = np.rint(X.astype(np.float64) @ Mf).astype(np.int64)
        scaled = b * counts - a * X.sum(axis=1, dtype=np.int64)[:, None]
        scaled[X] = 0
        for sign in (1, -1):
            val = np.where(sign * scaled > 0, sign * scaled, 0).sum(axis=1)
            i = int(np.argmax(val))
            if int(val[i]) > best[0]:
                best = (int(val[i]), X[i], (sign * scaled[i] > 0))
    return best[1], best[2]


def _single_extremal_heuristic(M: np.ndarray, d: float, seed: int):
    k = M.shape[0]
    starts = []
    deg = M.sum(axis=1)
    order = np.argsort(-deg, kind="stable")
    top = np.zeros(k, dtype=bool)
    top[order[: max(1, k // 4)]] = True
    starts.append(top)
    for ss in child_seeds(seed, 8):
        starts.append(rng_for(ss).random(k) < 0.5)
    best = (-1.0, None, None)
    for x in starts:
        for sign in (1, -1):
            cx = x.copy()
            for _ in range(100):
                y = (sign * (cx.astype(np.float64) @ M - d * cx.sum()) > 0) & ~cx
                nx = (sign * (M @ y.astype(np.float64) - d * y.sum()) > 0) & ~y
                if np.array_equal(nx, cx):
                    break
                cx = nx
            val = sign * (float(cx.astype(np.float64) @ M @ y) - d * cx.sum() * y.sum())
            if val > best[0]:
                best = (val, cx, y)
    return best[1], best[2]


def single_set_witness(g: Graph, u: VertexSetLike, eps, seed: int = 0) -> tuple[VertexSet, VertexSet] | None:
    """Disjoint ``A', B' <= U`` with ``|e(A', B') - d(U)|A'||B'|| > eps |U|^2``,
    exact when ``|U| <= SINGLE_SET_EXACT_MAX``."""
    u = as_vertex_set(u)
    verts = u.to_list()
    d = set_density(g, u)
    M = _block(g, verts, verts)
    if u.size <= SINGLE_SET_EXACT_MAX:
        x, y = _single_extremal_exact(M, d)
    else:
        x, y = _single_extremal_heuristic(M, float(d), seed)
    ap = VertexSet.of(np.asarray(verts)[x].tolist())
    bp = VertexSet.of(np.asarray(verts)[y].tolist())
    if abs(pair_excess(g, ap, bp, d)) > as_fraction(eps) * u.size**2:
        return ap, bp
    return None


@dataclass(frozen=True)
class RegularSubset:
    vertices: VertexSet
    regular: bool
    exact: bool

    @property
    def certified(self) -> bool:
        return self.regular and self.exact


def _size_floor(u_size: int, eps: Fraction) -> int:
    levels = math.ceil(4 / eps**2)
    if levels >= u_size.bit_length():
        return 4
    return max(4, math.ceil(u_size / (1 << levels)))


def find_regular_subset(g: Graph, u: VertexSetLike, eps, seed: int = 0) -> RegularSubset:
    """Iterated bisection: while the certifier finds a witness pair, keep
    the half of U built around the denser witness side.  Stops at the size
    floor ``max(4, |U| / 2^ceil(4/eps^2))`` and then reports ``regular=False``.
    """
    cur = as_vertex_set(u)
    if cur.size < 4:
        raise ValueError("U must have at least 4 vertices")
    eps = as_fraction(eps)
    floor = _size_floor(cur.size, eps)
    while True:
        w = single_set_witness(g, cur, eps, seed)
        exact = cur.size <= SINGLE_SET_EXACT_MAX
        if w is None:
            return RegularSubset(cur, True, exact)
        half = (cur.size + 1) // 2
        if half < floor or half == cur.size:
            return RegularSubset(cur, False, exact)
        core = max(w, key=lambda s: (set_density(g, s), s.size))
        ranked = sorted(cur, key=lambda v: (v not in core, -g.degree(v, core), v))
        cur = VertexSet.of(ranked[:half])


# ---------------------------------------------------------------------------
# density increment


@dataclass(frozen=True)
class IncrementParams:
    p: Fraction
    m: int
    r: int

    @classmethod
    def for_pattern(cls, h: Pattern, p) -> "IncrementParams":
        return cls(as_fraction(p), h.m, h.r)

    @property
    def gamma(self) -> Fraction:
        return self.p ** (self.m - 1) / (4 * self.r**3)

    @property
    def alpha_exit(self) -> Fraction:
        return Fraction(1, 16 * self.m * self.r)

    def upsilon(self, alpha) -> Fraction:
        return self.p**self.m * alpha / (4 * self.r)

    def eta(self, alpha) -> Fraction:
        return Fraction(1, 10**5) * alpha**2 * self.p ** (2 * self.m) / self.m**2

    def kappa(self, alpha) -> Fraction:
        return 2 * self.m * self.eta(alpha) / self.p ** (self.m - 1)

    def delta_bound(self, alpha, size: int, n: int) -> Fraction:
        return alpha * self.m * self.p**self.m * Fraction(size, n) ** self.r / (4 * self.r * self.r**self.r)

    def to_json(self) -> dict:
        return {"p": fraction_str(self.p), "m": self.m, "r": self.r, "gamma": float(self.gamma)}


@dataclass(frozen=True)
class IncrementState:
    a: VertexSet
    b: VertexSet
    alpha: Fraction
    density: Fraction
    params: IncrementParams
    iteration: int = 0
    beta: Fraction | None = None
    branch: str = "start"

    @classmethod
    def initial(cls, g: Graph, a, b, params: IncrementParams) -> "IncrementState":
        a, b = as_vertex_set(a), as_vertex_set(b)
        if a.size != b.size:
            raise ValueError("A and B must have equal size")
        d = exact_density(g, a, b)
        return cls(a, b, abs(d / params.p - 1), d, params)

    @property
    def dense(self) -> bool:
        return self.density >= self.params.p

    def record(self) -> dict:
        return {
            "iter": self.iteration,
            "size": self.a.size,
            "alpha": float(self.alpha),
            "alpha_exact": fraction_str(self.alpha),
            "beta": None if self.beta is None else float(self.beta),
            "branch": self.branch,
        }


@dataclass(frozen=True)
class AmplifiedWitness:
    state: IncrementState
    required: Fraction

    @property
    def holds(self) -> bool:
        return self.state.alpha >= self.required


@dataclass(frozen=True)
class PreconditionUnmet:
    which: tuple[str, ...]


@dataclass(frozen=True)
class NoWitnessFound:
    pairs_searched: int
    exhaustive: bool


StepOutcome = AmplifiedWitness | PreconditionUnmet | NoWitnessFound


def check_preconditions(g: Graph, state: IncrementState, delta_q) -> tuple[str, ...]:
    prm = state.params
    unmet = []
    if state.alpha <= 0:
        unmet.append("alpha_positive")
    if as_fraction(delta_q) > prm.delta_bound(state.alpha, state.a.size, g.n):
        unmet.append("delta")
    if state.alpha > prm.alpha_exit:
        unmet.append("alpha")
    return tuple(unmet)


def density_increment_step(
    g: Graph,
    state: IncrementState,
    delta_q=0,
    seed: int = 0,
    strategy: str = "auto",
    enforce_preconditions: bool = True,
) -> StepOutcome:
    """One amplification of ``alpha = |d(A, B)/p - 1|``.

    A is split into ``r // 2`` parts and B into ``ceil(r / 2)`` parts
    (seeded shuffle, round robin).  Cross pairs are searched for
    irregularity at the pair density and threshold ``upsilon``; a witness is
    lifted to (A, B), converted to the opposite direction and equalised.
    Same-side pairs are searched at ``(1 -+ alpha) p`` and equalised
    directly.  Every candidate is checked exactly against
    ``alpha' >= (1 + beta) alpha``; the largest ``alpha'`` wins.
    """
    a, b = state.a, state.b
    if a.size != b.size:
        raise ValueError("A and B must have equal size")
    _check_pair(a, b)
    unmet = check_preconditions(g, state, delta_q)
    if "alpha_positive" in unmet or (unmet and enforce_preconditions):
        return PreconditionUnmet(unmet)
    prm, alpha = state.params, state.alpha
    p, r = prm.p, prm.r
    d = exact_density(g, a, b)
    dense = d >= p
    ups = prm.upsilon(alpha)
    cross_dir = LOWER if dense else UPPER
    inner_q = (1 - alpha) * p if dense else (1 + alpha) * p
    rng = rng_for(seed)
    k = r // 2
    parts = [VertexSet.of(x) for x in random_split(rng, a.to_list(), k)]
    parts += [VertexSet.of(x) for x in random_split(rng, b.to_list(), r - k)]
    exhaustive = True
    searched = 0
    found: list[tuple[RegularityWitness, str]] = []
    for i in range(r):
        for j in range(i + 1, r):
            si, sj = parts[i], parts[j]
            if not si.size or not sj.size:
                continue
            searched += 1
            cross = i < k <= j
            q = d if cross else inner_q
            strat = strategy
            if strat == "auto":
                strat = "exact" if min(si.size, sj.size) <= AUTO_EXACT_MAX_SIDE else "hill-climb"
            exhaustive &= strat == "exact"
            w = find_irregularity_witness(g, si, sj, q, ups, cross_dir, strat, seed + searched)
            if w is None:
                continue
            if cross:
                lifted = RegularityWitness.build(
                    g, w.a_prime, w.b_prime, cross_dir, a, b, d, ups * si.size * sj.size / (a.size * b.size)
                )
                flipped = convert_lower_to_upper_witness(g, a, b, lifted)
                out = equalize_witness(g, a, b, d, flipped.eps, flipped)
                found.append((out, "cross"))
            else:
                out = equalize_witness(g, si, sj, inner_q, ups, w)
                found.append((out, "within-A" if j < k else "within-B"))
    best: AmplifiedWitness | None = None
    for w, branch in found:
        new_d = w.density
        new_alpha = abs(new_d / p - 1)
        beta = prm.gamma * Fraction(a.size, w.a_prime.size)
        cand = AmplifiedWitness(
            IncrementState(w.a_prime, w.b_prime, new_alpha, new_d, prm, state.iteration + 1, beta, branch),
            (1 + beta) * alpha,
        )
        if cand.holds and (best is None or cand.state.alpha > best.state.alpha):
            best = cand
    if best is None:
        return NoWitnessFound(searched, exhaustive)
    return best


@dataclass(frozen=True)
class Endgame:
    c: VertexSet
    c1: VertexSet
    c1_regular: bool
    d: VertexSet
    d1: VertexSet
    count: int
    expected: Fraction
    eta: Fraction
    kappa: Fraction

    @property
    def deviation(self) -> Fraction:
        return self.count - self.expected

    def to_json(self, n: int, r: int) -> dict:
        return {
            "c": self.c.size,
            "c1": self.c1.size,
            "c1_regular": self.c1_regular,
            "d": self.d.size,
            "d1": self.d1.size,
            "count": self.count,
            "expected": float(self.expected),
            "normalized_deviation": float(self.deviation / n**r) if n else 0.0,
        }


def run_endgame(g: Graph, h: Pattern, state: IncrementState, seed: int = 0) -> Endgame:
    """Build ``C``, an eta-regular ``C1 <= C``, ``D`` and ``D1`` from the final
    pair and count labelled copies of H in ``C1 | D1``.  For a sparse pair
    the degree conditions are mirrored."""
    prm, alpha = state.params, state.alpha
    p = prm.p
    a, b = state.a, state.b
    sign = 1 if state.dense else -1
    c_cut = (1 + sign * alpha / 2) * p * b.size
    c = VertexSet.of(v for v in a if sign * (g.degree(v, b) - c_cut) >= 0)
    eta, kappa = prm.eta(alpha), prm.kappa(alpha)
    if c.size >= 4:
        sub = find_regular_subset(g, c, eta, seed)
        c1, c1_regular = sub.vertices, sub.regular
    else:
        c1, c1_regular = c, False
    d_cut = (1 + sign * alpha / 4) * p * c1.size
    dset = [v for v in b if sign * (g.degree(v, c1) - d_cut) >= 0]
    d_size = math.ceil(alpha * p ** (prm.m - 1) / (40 * prm.r) * c1.size)
    if dset:
        d_size = max(1, d_size)
    ranked = sorted(dset, key=lambda v: (-sign * g.degree(v, c1), v))
    d1 = VertexSet.of(ranked[:d_size])
    union = c1 | d1
    count = count_labeled_copies(h, g, union)
    return Endgame(c, c1, c1_regular, VertexSet.of(dset), d1, count, p**prm.m * union.size**prm.r, eta, kappa)


@dataclass
class DriverTrace:
    params: IncrementParams
    states: list[IncrementState] = field(default_factory=list)
    stop_reason: str = ""
    endgame: Endgame | None = None
    size_floor: int = 0

    @property
    def alphas(self) -> list[Fraction]:
        return [s.alpha for s in self.states]

    def monotone(self) -> bool:
        return all(x <= y for x, y in zip(self.alphas, self.alphas[1:]))

    def records(self) -> list[dict]:
        return [s.record() for s in self.states]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec) + "\n" for rec in self.records())


def driver_size_floor(n: int, params: IncrementParams, alpha0: Fraction, c_prime=1) -> int:
    """``max(r, c' * eps^(1/2 + 2/(e gamma)) n / 2)`` with ``eps = alpha0 p``."""
    eps = float(alpha0 * params.p)
    expo = 0.5 + 2 / (math.e * float(params.gamma))
    value = 0.0 if eps <= 0 else float(c_prime) * 0.5 * n * math.exp(expo * math.log(min(eps, 1.0)))
    return max(params.r, math.ceil(value))


def increment_driver(
    g: Graph,
    h: Pattern,
    p,
    a0: VertexSetLike,
    b0: VertexSetLike,
    max_iters: int = 50,
    delta_q=0,
    seed: int = 0,
    strategy: str = "auto",
    enforce_preconditions: bool = True,
    c_prime=1,
    run_final: bool = True,
) -> DriverTrace:
    """Repeat :func:`density_increment_step`, taking the amplified pair as
    the next pair.

    Stops on ``alpha > 1/(16 m r)`` (only while preconditions are
    enforced), when the pair would drop below the size floor, when no
    witness is found, or after ``max_iters`` steps.  If the final alpha
    exceeds ``1/(16 m r)`` the endgame is run on the final pair.
    """
    params = IncrementParams.for_pattern(h, p)
    state = IncrementState.initial(g, a0, b0, params)
    if state.alpha <= 0:
        raise ValueError("initial alpha must be positive")
    trace = DriverTrace(params, [state])
    trace.size_floor = driver_size_floor(g.n, params, state.alpha, c_prime)
    for it in range(max_iters):
        if enforce_preconditions and state.alpha > params.alpha_exit:
            trace.stop_reason = "alpha-exit"
            break
        outcome = density_increment_step(g, state, delta_q, seed + it, strategy, enforce_preconditions)
        if isinstance(outcome, PreconditionUnmet):
            trace.stop_reason = "precondition:" + ",".join(outcome.which)
            break
        if isinstance(outcome, NoWitnessFound):
            trace.stop_reason = "no-witness"
            break
        if not outcome.holds:
            raise AssertionError("amplification bound violated")
        if outcome.state.a.size < trace.size_floor:
            trace.stop_reason = "size-floor"
            break
        state = outcome.state
        trace.states.append(state)
    else:
        trace.stop_reason = "max-iters"
    if run_final and state.alpha > params.alpha_exit:
        trace.endgame = run_endgame(g, h, state, seed)
    return trace


def planted_pair(g: Graph, blocks: Iterable[Iterable[int]]) -> tuple[VertexSet, VertexSet]:
    """First two blocks trimmed to a common size."""
    x, y = [sorted(b) for b in list(blocks)[:2]]
    k = min(len(x), len(y))
    return VertexSet.of(x[:k]), VertexSet.of(y[:k])

"""Exact homomorphism densities into weighted templates and the
epsilon-expansion of the two-block perturbation.

The two-block template has loops weighted ``p - eps`` and the cross pair
``p + eps``.  A uniform map ``V(H) -> {+1, -1}`` sends edge ``uv`` to weight
``p + X_e eps`` with ``X_e = -sigma_u sigma_v`` (same block gives -1), so

    t_H = 2^-r  sum_sigma  prod_e (p + X_e eps)

is a polynomial in ``eps`` of degree at most ``m``.  Everything here is
exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import as_fraction, fraction_str
from .generators import WeightedTemplate, expand_template
from .graph import VertexSet
from .patterns import Pattern, complete

MAX_TEMPLATE_MAPS = 10**7


@dataclass(frozen=True)
class EpsPolynomial:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __call__(self, eps) -> Fraction:
        eps = as_fraction(eps)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * eps + c
        return acc

    def first_nonzero(self, start: int = 1) -> int | None:
        for i in range(start, len(self.coeffs)):
            if self.coeffs[i]:
                return i
        return None

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_pow(base: Sequence[Fraction], k: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(k):
        out = _poly_mul(out, base)
    return out


def hom_density_weighted(h: Pattern, t: WeightedTemplate) -> Fraction:
    """``k^-r sum_phi prod_{uv in E(H)} w[phi(u)][phi(v)]`` over all maps
    ``V(H) -> [k]`` (block sizes are ignored: uniform block measure)."""
    k, r = t.k, h.r
    if k**r > MAX_TEMPLATE_MAPS:
        raise ValueError(f"k^r = {k**r} maps exceeds the cap {MAX_TEMPLATE_MAPS}")
    w = [[as_fraction(x) for x in row] for row in t.weights]
    scale = math.lcm(*(x.denominator for row in w for x in row))
    iw = [[int(x * scale) for x in row] for row in w]
    total = 0
    for phi in itertools.product(range(k), repeat=r):
        prod = 1
        for u, v in h.edges:
            prod *= iw[phi[u]][phi[v]]
            if not prod:
                break
        total += prod
    return Fraction(total, k**r * scale**h.m)


def same_block_profile(h: Pattern) -> list[int]:
    """``profile[s]`` = number of sign maps with exactly ``s`` same-block edges."""
    profile = [0] * (h.m + 1)
    for bits in range(1 << h.r):
        same = sum(1 for u, v in h.edges if (bits >> u & 1) == (bits >> v & 1))
        profile[same] += 1
    return profile


def epsilon_polynomial(h: Pattern, p) -> EpsPolynomial:
    """Exact expansion of ``2^-r sum_sigma prod_e (p + X_e eps)`` in ``eps``."""
    if h.r > 10:
        raise ValueError("epsilon_polynomial supports patterns on at most 10 vertices")
    p = as_fraction(p)
    minus = [p, Fraction(-1)]
    plus = [p, Fraction(1)]
    total = [Fraction(0)] * (h.m + 1)
    for same, count in enumerate(same_block_profile(h)):
        if not count:
            continue
        term = _poly_mul(_poly_pow(minus, same), _poly_pow(plus, h.m - same))
        for i, c in enumerate(term):
            total[i] += count * c
    return EpsPolynomial(tuple(c / 2**h.r for c in total))


def interpolated_polynomial(h: Pattern, p) -> EpsPolynomial:
    """Independent route: evaluate :func:`hom_density_weighted` on numeric
    two-block templates at ``m + 1`` rational ``eps`` values and
    interpolate (Lagrange, exact)."""
    p = as_fraction(p)
    span = min(p, 1 - p)
    if span <= 0:
        raise ValueError("p must lie strictly between 0 and 1")
    m = h.m
    xs = [span * j / (m + 1) for j in range(m + 1)]
    ys = [hom_density_weighted(h, WeightedTemplate.two_block(p, x)) for x in xs]
    coeffs = [Fraction(0)] * (m + 1)
    for j, (xj, yj) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for i, xi in enumerate(xs):
            if i != j:
                basis = _poly_mul(basis, [-xi, Fraction(1)])
                denom *= xj - xi
        for i, c in enumerate(basis):
            coeffs[i] += yj * c / denom
    return EpsPolynomial(tuple(coeffs))


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def cycle_density_spectral(length: int, t: WeightedTemplate) -> Fraction:
    """``t_{C_k} = tr((W / k_blocks)^k)``: the trace of a matrix power,
    i.e. the sum of k-th powers of the scaled eigenvalues."""
    if length < 3:
        raise ValueError("cycle length must be at least 3")
    k = t.k
    w = [[as_fraction(x) / k for x in row] for row in t.weights]
    acc = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for _ in range(length):
        acc = _mat_mul(acc, w)
    return sum(acc[i][i] for i in range(k))


@dataclass(frozen=True)
class GirthReport:
    pattern: str
    p: Fraction
    girth: int
    polynomial: EpsPolynomial

    @property
    def first_nonzero(self) -> int | None:
        return self.polynomial.first_nonzero(1)

    @property
    def leading_value(self) -> Fraction | None:
        i = self.first_nonzero
        return None if i is None else self.polynomial.coeffs[i]

    @property
    def vanishes(self) -> bool:
        return all(self.polynomial.coeff(i) == 0 for i in range(1, self.girth))

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern,
            "p": fraction_str(self.p),
            "coeffs": [fraction_str(c) for c in self.polynomial.coeffs],
            "girth": self.girth,
            "first_nonzero": self.first_nonzero,
            "vanishes": self.vanishes,
        }


def check_girth_vanishing(h: Pattern, p) -> GirthReport:
    """Coefficients ``1 .. g-1`` of the eps-expansion, ``g`` = girth of ``h``."""
    if h.girth == math.inf:
        raise ValueError("pattern is a forest; girth undefined")
    p = as_fraction(p)
    return GirthReport(h.label(), p, int(h.girth), epsilon_polynomial(h, p))


@dataclass(frozen=True)
class TemplateDefect:
    global_defect: Fraction
    edge_defect: Fraction
    edge_witness: VertexSet
    block_defect: Fraction
    block_density: Fraction

    def to_json(self) -> dict:
        return {
            "global_defect": float(self.global_defect),
            "edge_hereditary_defect": float(self.edge_defect),
            "edge_witness_size": self.edge_witness.size,
            "block_defect": float(self.block_defect),
            "block_density": float(self.block_density),
        }


def empirical_template_defect(
    h: Pattern, p, eps, n: int, seed: int, samples: int = 200, local_search: bool = True
) -> TemplateDefect:
    """Blow the two-block template up to ``n`` vertices and measure the
    global H-defect and the sampled edge-hereditary defect.  The first block
    is also scored directly as an edge witness."""
    from .properties import defect_global, defect_hereditary

    if n % 2:
        raise ValueError("n must be even")
    p, eps = as_fraction(p), as_fraction(eps)
    g, blocks = expand_template(WeightedTemplate.two_block(p, eps, n), seed)
    glob = defect_global(g, h, p)
    edge = defect_hereditary(g, complete(2), p, "sampled", samples, seed, local_search)
    block = VertexSet.of(blocks.blocks[0])
    k2 = 2 * g.e(block)
    block_dev = abs(k2 - p * block.size**2) / Fraction(n * n)
    density = Fraction(g.e(block), math.comb(block.size, 2))
    return TemplateDefect(glob.defect, edge.defect, edge.witness[0], block_dev, density)

"""Acceptance gate: one test per criterion, run at its stated tolerance and
runtime budget.  Each test records a PASS/FAIL line that is printed in the
terminal summary."""

import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
from conftest import random_graph

from quasirandom import experiments as ex
from quasirandom.counting import (
    clique_count,
    count_partite,
    forward_evaluate,
    inverse_max_entry,
    kk_bound_holds,
    kk_clique_upper_bound,
    partite_count_via_inclusion_exclusion,
    power_sum_gap,
    vandermonde_recover,
)
from quasirandom.graph import Graph, VertexSet
from quasirandom.patterns import complete, cycle, get_pattern
from quasirandom.properties import counting_transfer_check, defect_hereditary, defect_ordered_partite, defect_partite
from quasirandom.regularity import LOWER, check_counting_lemma, exact_density, irregularity
from quasirandom.template import check_girth_vanishing, cycle_density_spectral
from quasirandom.generators import WeightedTemplate

RESULTS: dict[int, str] = {}


def verdict(number: int, title: str, ok: bool, elapsed: float, budget: float, detail: str) -> None:
    in_budget = elapsed <= budget
    status = "PASS" if ok and in_budget else "FAIL"
    RESULTS[number] = f"[{status}] criterion {number:>2}: {title} ({detail}; {elapsed:.1f}s of {budget:.0f}s)"
    print(RESULTS[number])
    assert ok, RESULTS[number]
    assert in_budget, RESULTS[number]


def _parts(rng, n, r):
    labels = rng.integers(0, r + 1, n)
    return [VertexSet.of(np.flatnonzero(labels == j + 1)) for j in range(r)]


def test_criterion_01_inclusion_exclusion():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    names = ["K3", "K4", "C4", "P3"]
    mismatches = 0
    for i in range(200):
        h = get_pattern(names[i % 4])
        n = int(rng.integers(h.r, 13))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.9)))
        parts = _parts(rng, n, h.r)
        mismatches += count_partite(h, g, parts) != partite_count_via_inclusion_exclusion(h, g, parts)
    verdict(1, "inclusion-exclusion identity", mismatches == 0, time.perf_counter() - start, 60,
            f"{mismatches} mismatches in 200 instances")


def test_criterion_02_partite_transfer():
    start = time.perf_counter()
    rng = np.random.default_rng(202)
    bad = 0
    for i in range(50):
        h = complete(3) if i % 2 else get_pattern("P3")
        n = int(rng.integers(6, 13))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.8)))
        p = Fraction(int(rng.integers(1, 4)), 4)
        pstar = defect_hereditary(g, h, p).defect
        q = defect_partite(g, h, p).defect
        r = defect_ordered_partite(g, h, p).defect
        bad += not (q <= (2**3 - 1) * pstar and q <= math.factorial(3) * r)
    verdict(2, "Q <= (2^r-1) P* and Q <= r! R", bad == 0, time.perf_counter() - start, 120,
            f"{bad} violations in 50 instances")


def test_criterion_03_counting_transfer():
    start = time.perf_counter()
    rng = np.random.default_rng(303)
    bad = 0
    for i in range(50):
        n = int(rng.integers(8, 15))
        g = random_graph(rng, n, [0.3, 0.5, 0.7][i % 3])
        r = 3 + i % 2
        bad += not counting_transfer_check(g, r, Fraction(1, 2)).holds
    verdict(3, "P*_r <= r^2 P*_2", bad == 0, time.perf_counter() - start, 300, f"{bad} violations in 50 instances")


def test_criterion_04_kruskal_katona():
    start = time.perf_counter()
    rng = np.random.default_rng(404)
    bad = 0
    for n in range(2, 8):
        pairs = list(itertools.combinations(range(n), 2))
        for _ in range(5000):
            keep = rng.random(len(pairs)) < rng.random()
            g = Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])
            m = g.edge_count
            bad += sum(not kk_bound_holds(m, clique_count(g, r), r) for r in range(3, n + 1))
    k6 = Graph.complete(6)
    equality = k6.edge_count == 15 and clique_count(k6, 3) == 20 and kk_clique_upper_bound(15, 3) == 20
    verdict(4, "Kruskal-Katona clique bound", bad == 0 and equality, time.perf_counter() - start, 60,
            f"{bad} violations over 6 x 5000 graphs; K6 equality {equality}")


def test_criterion_05_vandermonde():
    start = time.perf_counter()
    rng = random.Random(505)
    worst_rel = 0.0
    for r in range(1, 7):
        for _ in range(20):
            x = [float(rng.randint(0, 10**12)) for _ in range(r + 1)]
            z = [float(v) for v in forward_evaluate([Fraction(v) for v in x], r)]
            got = vandermonde_recover(z, r).counts
            scale = max(max(abs(v) for v in x), 1.0)
            worst_rel = max(worst_rel, max(abs(a - b) for a, b in zip(got, x)) / scale)
    bad = 0
    for i in range(100):
        r = 1 + i % 6
        x = [rng.randint(0, 10**12) for _ in range(r + 1)]
        delta = Fraction(rng.randint(1, 10**6), rng.randint(1, 1000))
        z = [zj + rng.choice((-1, 1)) * delta for zj in forward_evaluate(x, r)]
        got = vandermonde_recover(z, r).counts
        bound = (r + 1) * inverse_max_entry(r) * delta * (1 + Fraction(1, 10**6))
        bad += max(abs(a - b) for a, b in zip(got, x)) > bound
    ok = worst_rel < 1e-9 and bad == 0
    verdict(5, "Vandermonde recovery", ok, time.perf_counter() - start, 1,
            f"worst relative round-trip error {worst_rel:.2e}; {bad} perturbation-bound violations")


def test_criterion_06_counterexample_separation():
    start = time.perf_counter()
    res = ex.counterexample_separation(64, seed=0, instances=20, samples=200, local_search=True)
    s = res.summary
    ok = s["triangles_within_10pct"] and s["separation_holds"]
    verdict(6, "counterexample separation at n=64", ok, time.perf_counter() - start, 120,
            f"triangle ratio {s['mean_triangle_ratio']:.3f}, min edge defect {s['min_edge_defect']:.4f}, "
            f"min witness overlap {s['min_overlap']:.2f}")


def test_criterion_07_girth_vanishing():
    start = time.perf_counter()
    ps = [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]
    vanish = all(check_girth_vanishing(get_pattern(nm), p).vanishes
                 for nm in ["C4", "C6", "C8", "K33", "K4"] for p in ps)
    eps_grid = [Fraction(k, 12) for k in range(5)]
    c4 = all(
        check_girth_vanishing(cycle(4), p).polynomial(e)
        == p**4 + e**4
        == cycle_density_spectral(4, WeightedTemplate.two_block(p, e))
        for p in ps for e in eps_grid if e <= min(p, 1 - p)
    )
    verdict(7, "girth vanishing and t_C4 = p^4 + eps^4", vanish and c4, time.perf_counter() - start, 10,
            f"vanishing {vanish}; spectral C4 identity {c4}")


def test_criterion_08_theorem1_scaling():
    start = time.perf_counter()
    res = ex.theorem1_scaling(0.5, 1024, [0.02, 0.05, 0.1], samples=500, seed=3, instances=5)
    s = res.summary
    verdict(8, "triangle/edge defect ratio band <= 4", s["within_factor_4"], time.perf_counter() - start, 600,
            f"ratios {s['ratio_min']:.3f}..{s['ratio_max']:.3f}, band {s['band']:.3f}")


def test_criterion_09_increment_soundness():
    start = time.perf_counter()
    res = ex.increment_trace(400, Fraction(1, 2), Fraction(1, 5), seed=9, instances=20)
    s = res.summary
    steps = sum(row[1] for row in res.rows)
    ok = s["all_monotone"] and s["all_amplified"] and steps > 0
    verdict(9, "density increment amplification", ok, time.perf_counter() - start, 300,
            f"{steps} amplified steps over 20 instances, monotone {s['all_monotone']}, "
            f"exact bound {s['all_amplified']}")


def test_criterion_10_counting_lemma():
    start = time.perf_counter()
    rng = np.random.default_rng(1010)
    h = complete(3)
    bad = certified = 0
    for _ in range(50):
        sizes = [int(k) for k in rng.integers(1, 9, 3)]
        g = random_graph(rng, sum(sizes), float(rng.uniform(0.3, 0.9)))
        cuts = np.cumsum([0, *sizes])
        parts = [VertexSet.range(int(cuts[i]), int(cuts[i + 1])) for i in range(3)]
        dens = {(i, j): exact_density(g, parts[i], parts[j]) for i, j in h.edges}
        eps = max(irregularity(g, parts[i], parts[j], dens[(i, j)], LOWER) for i, j in h.edges)
        chk = check_counting_lemma(g, h, parts, eps, dens)
        certified += chk.certified
        bad += not chk.holds
    ok = certified == 50 and bad == 0
    verdict(10, "counting lemma lower bound", ok, time.perf_counter() - start, 120,
            f"{certified} certified, {bad} violations")


def test_criterion_11_power_sums():
    start = time.perf_counter()
    rng = random.Random(1111)
    bad = 0
    for i in range(1000):
        n = rng.randint(1, 50)
        if i % 2:
            a = [Fraction(rng.randint(0, 100), rng.randint(1, 9)) for _ in range(n)]
            b = [Fraction(rng.randint(0, 100), rng.randint(1, 9)) for _ in range(n)]
        else:
            a = [rng.randint(0, 1000) for _ in range(n)]
            b = [rng.randint(0, 1000) for _ in range(n)]
        s = rng.randint(1, 5)
        lhs, rhs1, rhs2 = power_sum_gap(a, b, s)
        bad += not (lhs >= rhs1 and lhs >= rhs2)
    verdict(11, "power-sum inequalities", bad == 0, time.perf_counter() - start, 5,
            f"{bad} violations in 1000 pairs")


def test_criterion_12_split_concentration():
    start = time.perf_counter()
    res = ex.split_concentration(64, seed=0, instances=100)
    s = res.summary
    verdict(12, "split gap mean within 15% of e(S)/4 - e(G)/16", s["within_15pct"], time.perf_counter() - start, 60,
            f"mean gap {s['mean_gap']:.3f} vs target {s['target']:.3f} "
            f"(untrimmed {s['mean_gap_untrimmed']:.3f}, sd {s['stdev_gap']:.2f})")

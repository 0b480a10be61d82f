"""Acceptance criteria, one test each.

Every test prints a single line `criterion N: PASS|FAIL (...)` straight to the
terminal (even without -s) and then asserts.  Run just this file with
`pytest tests/test_acceptance.py -v` to get the 13-line summary.
"""

import time
from fractions import Fraction

import numpy as np
import pytest
from conftest import random_rep, rep_suite

from asklab.graphloci import Graph, all_graphs, graph_rep, limit_congruence_check
from asklab.grouplab import (
    baer_group,
    class_count_naive,
    full_nilpotent,
    general_linear_group,
    heisenberg_group,
    lie_adjoint_rep,
    lie_exp_group,
    lie_inclusion_rep,
    mtheta_orbit_count,
    natural_orbit_count,
    unitriangular_group,
)
from asklab.modrep import ModuleRep, alternating_hull, ask, direct_sum, identity_rep, knuth_dual, saturate
from asklab.qseries import X, laurent_fit
from asklab.shell import BBDecomposition, affine_space, mth_power_identities, theorem_a_check

ID1 = identity_rep()


@pytest.fixture
def verdict(request):
    """verdict(n, ok, elapsed, limit, detail) prints the PASS/FAIL line and asserts."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def _verdict(n, ok, elapsed, limit=None, detail=""):
        timely = limit is None or elapsed < limit
        status = "PASS" if ok and timely else "FAIL"
        bound = f" < {limit:g}s" if limit is not None else ""
        line = f"criterion {n}: {status} ({elapsed:.2f}s{bound}) {detail}".rstrip()
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        assert ok, line
        assert timely, line

    return _verdict


def test_criterion_01_unitriangular_orbits(verdict):
    t0 = time.perf_counter()
    bad = []
    for n in (2, 3, 4):
        for q in (2, 3, 5):
            got = natural_orbit_count(unitriangular_group(n, q), n)
            if got != n * q - n + 1:
                bad.append((n, q, got))
    verdict(1, not bad, time.perf_counter() - t0, 10, f"orbits of U_n on F_q^n = nq-n+1; mismatches {bad}")


def test_criterion_02_gl2_orbits(verdict):
    t0 = time.perf_counter()
    got = {q: natural_orbit_count(general_linear_group(2, q), 2) for q in (2, 3, 5)}
    verdict(2, all(v == 2 for v in got.values()), time.perf_counter() - t0, 30, f"GL_2 orbits {got}")


def test_criterion_03_baer_class_numbers(verdict):
    t0 = time.perf_counter()
    reps = [alternating_hull(ID1), alternating_hull(direct_sum(ID1, ID1)), lie_adjoint_rep(full_nilpotent(3))]
    bad, done = [], 0
    for theta in reps:
        for q in (2, 3, 5):
            if q ** (theta.l + theta.e) > 5**6:
                continue
            k = class_count_naive(baer_group(theta, q))
            done += 1
            if k != ask(theta, q).scaled(theta.e):
                bad.append((theta.name, q, k))
    verdict(3, not bad and done == 9, time.perf_counter() - t0, 120,
            f"k(Baer group) = q^e ask on {done} cases; mismatches {bad}")


def test_criterion_04_heisenberg_class_numbers(verdict):
    t0 = time.perf_counter()
    bad = []
    for theta in (ID1, direct_sum(ID1, ID1), graph_rep(Graph.complete(2))):
        l, d, e = theta.shape
        for q in (2, 3):
            k = class_count_naive(heisenberg_group(theta, q))
            if k != ask(knuth_dual(theta), q, m=2).scaled(l - d + e):
                bad.append((theta.name, q, k))
    u3 = {q: class_count_naive(unitriangular_group(3, q)) for q in (2, 3, 5)}
    ok = not bad and all(k == q * q + q - 1 for q, k in u3.items())
    verdict(4, ok, time.perf_counter() - t0, 120, f"Heisenberg mismatches {bad}; k(U_3) {u3}")


def test_criterion_05_histogram_vs_naive(verdict):
    t0 = time.perf_counter()
    suite = rep_suite()[:6]
    bad = [
        (theta.name, m, q)
        for theta in suite
        for m in (1, 2, 3)
        for q in (2, 3, 4, 5)
        if ask(theta, q, m=m) != ask(theta, q, m=m, naive=True)
    ]
    verdict(5, not bad, time.perf_counter() - t0, 60, f"{len(suite) * 12} cases; mismatches {bad}")


def test_criterion_06_limit_congruence(verdict):
    t0 = time.perf_counter()
    graphs = [g for n in range(4) for g in all_graphs(n)]
    bad = [
        (str(g), q, m)
        for g in graphs
        for q in (2, 3, 5)
        for m in range(1, 5)
        if not limit_congruence_check(g, q, m).holds
    ]
    verdict(6, not bad, time.perf_counter() - t0, 120, f"{len(graphs)} graphs x 3 q x 4 m; failures {bad}")


def test_criterion_07_lie_n3(verdict):
    t0 = time.perf_counter()
    n3 = full_nilpotent(3)
    got = {}
    for q in (5, 7):
        G = lie_exp_group(n3, q)
        got[q] = (natural_orbit_count(G, 3), class_count_naive(G))
    ok = all(
        o == 3 * q - 2 == ask(lie_inclusion_rep(n3), q) and k == q * q + q - 1 == ask(lie_adjoint_rep(n3), q)
        for q, (o, k) in got.items()
    )
    verdict(7, ok, time.perf_counter() - t0, 60, f"(orbits, classes) {got}")


def test_criterion_08_power_identities(verdict):
    t0 = time.perf_counter()
    bad, n = [], 0
    for theta in (ID1, graph_rep(Graph.complete(1))):
        for m in (1, 2):
            for q in (2, 3):
                rep = mth_power_identities(theta, m, q)
                n += len(rep.records)
                if not all(r.status == "pass" for r in rep.records):
                    bad.append((theta.name, m, q))
    verdict(8, not bad and n == 16, time.perf_counter() - t0, 60, f"{n} identities; failures {bad}")


def test_criterion_09_saturation(verdict):
    t0 = time.perf_counter()
    theta = ModuleRep.from_array([[[2]]])
    sat, N = saturate(theta)
    odd = {q: (ask(theta, q), ask(sat, q)) for q in (3, 5, 7, 9)}
    at2 = (ask(theta, 2).fraction(), ask(sat, 2).fraction())
    ok = N == 2 and all(a == b for a, b in odd.values()) and at2 == (2, Fraction(3, 2))
    verdict(9, ok, time.perf_counter() - t0, None, f"equal at q=3,5,7,9; q=2 gives {at2[0]} vs {at2[1]}")


def test_criterion_10_affine_line_pipeline(verdict):
    t0 = time.perf_counter()
    D = BBDecomposition((Graph.complete(1), Graph.empty(0)), (1, 1), "A1")
    rep = theorem_a_check(affine_space(1), D, 3, [2, 3, 5])
    ok = rep.passed and all(r.status == "pass" for r in rep.records)
    verdict(10, ok, time.perf_counter() - t0, 10, f"{len(rep.records)} checks, {len(rep.failures)} failed")


def test_criterion_11_orbit_modes(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    reps = [ID1, alternating_hull(ID1)] + [random_rep(rng) for _ in range(18)]
    bad = []
    for theta in reps:
        for q in (2, 3, 4, 5):
            target = ask(theta, q).scaled(theta.e)
            got = [mtheta_orbit_count(theta, q, mode) for mode in ("bfs", "burnside")]
            if got != [target, target]:
                bad.append((theta.shape, q, got, target))
    verdict(11, not bad, time.perf_counter() - t0, 120, f"{len(reps)} reps x q in 2..5; mismatches {bad}")


def test_criterion_12_algebraic_invariants(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    duals = all(knuth_dual(knuth_dual(t)) == t for t in (random_rep(rng, max_dim=3) for _ in range(50)))
    mult = True
    for _ in range(20):
        a, b = random_rep(rng), random_rep(rng)
        for q in (2, 3):
            mult &= ask(direct_sum(a, b), q).fraction() == ask(a, q).fraction() * ask(b, q).fraction()
    hull = all(
        ask(t, q, m=2).fraction() == ask(alternating_hull(knuth_dual(t)), q).scaled(t.d - t.e)
        for t in rep_suite()
        for q in (2, 3, 4, 5)
    )
    verdict(12, duals and mult and hull, time.perf_counter() - t0, None,
            f"double dual {duals}, direct sum {mult}, hull-dual {hull}")


def test_criterion_13_laurent_fit(verdict):
    t0 = time.perf_counter()
    rep = lie_inclusion_rep(full_nilpotent(3))
    samples = [(q, ask(rep, q).scaled(3)) for q in (2, 3, 5, 7, 9, 11)]
    # five unknowns solved on q = 2, 3, 5, 7, 9; q = 11 is the holdout
    fit = laurent_fit(samples, (0, 4))
    junk = [(q, 1 if q % 3 == 1 else 0) for q in (2, 3, 4, 5, 7, 8)]
    rejected = all(laurent_fit(junk, (0, hi)) is None for hi in range(4))
    ok = fit == 3 * X**4 - 2 * X**3 and rejected
    verdict(13, ok, time.perf_counter() - t0, None, f"fit {fit}; non-polynomial rejected {rejected}")

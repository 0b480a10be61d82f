import numpy as np
import pytest
from conftest import random_rep

from asklab.errors import BudgetExceeded, CharTooSmall, NonIntegral, NotAlternating, NotAnAction, NotClosed
from asklab.graphloci import Graph, graph_rep
from asklab.grouplab import (
    FiniteAction,
    LieData,
    abelian_group,
    baer_group,
    burnside_orbits,
    class_count_naive,
    class_count_structural,
    conjugacy_classes,
    elementary,
    full_nilpotent,
    general_linear_group,
    heisenberg_group,
    lie_adjoint_rep,
    lie_exp_group,
    lie_inclusion_rep,
    lie_validate,
    mtheta_orbit_count,
    natural_orbit_count,
    unitriangular_group,
)
from asklab.modrep import alternating_hull, ask, direct_sum, identity_rep, is_alternating, knuth_dual, zero_rep

HULL = alternating_hull(identity_rep())


def brute_class_count(G):
    """Oracle: classes from the full conjugation table over all h."""
    X = G.elements
    seen = np.zeros(G.order, dtype=bool)
    count = 0
    for idx in range(G.order):
        if seen[idx]:
            continue
        count += 1
        orbit = G.index(G.conjugate(np.broadcast_to(X[idx], X.shape), X))
        seen[orbit] = True
    return count


# -- Baer groups -------------------------------------------------------------------


def test_baer_examples():
    G = baer_group(HULL, 3)
    assert G.order == 27 and class_count_naive(G) == 11
    G = baer_group(HULL, 2)
    assert G.order == 8 and class_count_naive(G) == 5
    assert class_count_naive(baer_group(HULL, 5)) == 29


def test_baer_rejects_non_alternating():
    with pytest.raises(NotAlternating):
        baer_group(identity_rep(), 3)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_baer_commutator_and_center(q):
    theta = alternating_hull(direct_sum(identity_rep(), identity_rep())) if q == 2 else HULL
    G = baer_group(theta, q)
    l, _, e = theta.shape
    F = G.field
    X = G.elements
    rng = np.random.default_rng(q)
    A = X[rng.integers(0, G.order, 50)]
    B = X[rng.integers(0, G.order, 50)]
    comm = G.commutator(A, B)
    # [(a, y), (a', y')] = (0, a * a'), a in the domain slot and a' in the module slot
    C = theta.reduced(F)
    expected = np.zeros((50, e), dtype=np.int64)
    for k in range(l):
        for i in range(l):
            expected = F.add(expected, F.mul(F.mul(A[:, i], B[:, k])[:, None], C[k, i][None, :]))
    assert np.all(comm[:, :l] == 0)
    assert np.array_equal(comm[:, l:], expected)
    center = G.center_mask()
    assert np.all(center[np.all(X[:, :l] == 0, axis=1)])


@pytest.mark.parametrize("q", [2, 3])
def test_small_groups_verified_exhaustively(q):
    for G in (baer_group(HULL, q), heisenberg_group(identity_rep(), q)):
        G.verify(assoc_with=G.elements)
        assert class_count_naive(G) == brute_class_count(G)


def test_class_sizes_sum_to_order_and_commutators_central():
    for G in (baer_group(HULL, 5), heisenberg_group(direct_sum(identity_rep(), identity_rep()), 2)):
        count, labels = conjugacy_classes(G)
        assert np.bincount(labels).sum() == G.order
        assert len(np.unique(labels)) == count
        rng = np.random.default_rng(0)
        A = G.elements[rng.integers(0, G.order, 30)]
        B = G.elements[rng.integers(0, G.order, 30)]
        assert np.all(G.center_mask()[G.index(G.commutator(A, B))])


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_baer_structural(q):
    assert class_count_structural(HULL, q, "baer") == q**2 + q - 1
    if q**3 <= 2**14:
        assert class_count_naive(baer_group(HULL, q)) == q**2 + q - 1


def test_baer_naive_equals_structural_random(rng):
    for _ in range(6):
        theta = alternating_hull(random_rep(rng, max_dim=1))
        for q in (2, 3):
            G = baer_group(theta, q)
            if G.order <= 2**12:
                assert class_count_naive(G) == class_count_structural(theta, q, "baer")


# -- Heisenberg groups -----------------------------------------------------------------


def test_heisenberg_examples():
    G = heisenberg_group(identity_rep(), 3)
    assert G.order == 27 and class_count_naive(G) == 11
    G = heisenberg_group(identity_rep(), 2)
    assert G.order == 8 and class_count_naive(G) == 5


def test_heisenberg_commutator_formula():
    theta = direct_sum(identity_rep(), graph_rep(Graph.complete(2)))
    q = 3
    G = heisenberg_group(theta, q)
    F = G.field
    l, d, e = theta.shape
    rng = np.random.default_rng(5)
    A = G.elements[rng.integers(0, G.order, 40)]
    B = G.elements[rng.integers(0, G.order, 40)]
    comm = G.commutator(A, B)
    C = theta.reduced(F)

    def star(v, a):
        out = np.zeros((len(v), e), dtype=np.int64)
        for k in range(l):
            for i in range(d):
                out = F.add(out, F.mul(F.mul(v[:, i], a[:, k])[:, None], C[k, i][None, :]))
        return out

    a, v = A[:, :l], A[:, l : l + d]
    b, u = B[:, :l], B[:, l : l + d]
    expected = F.sub(star(v, b), star(u, a))
    assert np.all(comm[:, : l + d] == 0)
    assert np.array_equal(comm[:, l + d :], expected)


@pytest.mark.parametrize("theta", [identity_rep(), direct_sum(identity_rep(), identity_rep()), graph_rep(Graph.complete(2))])
@pytest.mark.parametrize("q", [2, 3])
def test_heisenberg_structural(theta, q):
    l, d, e = theta.shape
    k = class_count_naive(heisenberg_group(theta, q))
    assert k == ask(knuth_dual(theta), q, m=2).scaled(l - d + e)
    assert k == class_count_structural(theta, q, "heisenberg")


# -- orbit counting ------------------------------------------------------------------------


@pytest.mark.parametrize("mode", ["bfs", "burnside", "formula"])
@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_mtheta_examples(mode, q):
    assert mtheta_orbit_count(identity_rep(), q, mode) == 2 * q - 1
    assert mtheta_orbit_count(zero_rep(1, 1, 1), q, mode) == q**2


def test_mtheta_modes_agree_random(rng):
    for _ in range(8):
        theta = random_rep(rng)
        for q in (2, 3):
            counts = {mtheta_orbit_count(theta, q, m) for m in ("bfs", "burnside", "formula")}
            assert len(counts) == 1


def test_burnside_trivial_group():
    pts = np.arange(7).reshape(-1, 1)
    action = FiniteAction(np.zeros((1, 1), dtype=np.int64), pts, lambda P, g: P, lambda g, h: g, np.zeros(1))
    assert burnside_orbits(action) == 7


def test_burnside_detects_non_action():
    # g != 0 always shifts by one, so x(gh) != (xg)h
    pts = np.arange(3).reshape(-1, 1)
    G = np.arange(3).reshape(-1, 1)
    action = FiniteAction(G, pts, lambda P, g: (P + 1) % 3 if g[0] else P, lambda g, h: (g + h) % 3,
                          np.zeros(1, dtype=np.int64))
    with pytest.raises(NotAnAction):
        burnside_orbits(action)


def test_burnside_non_integral():
    # Z/2 "acting" on Z/3 by translation: 3 fixed pairs over |G| = 2
    pts = np.arange(3).reshape(-1, 1)
    G = np.array([[0], [1]])
    act = lambda P, g: (P + g[0]) % 3
    action = FiniteAction(G, pts, act, lambda g, h: (g + h) % 2, np.zeros(1, dtype=np.int64))
    with pytest.raises(NonIntegral):
        burnside_orbits(action, check=False)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("q", [2, 3, 5])
def test_unitriangular_orbits(n, q):
    G = unitriangular_group(n, q)
    assert G.order == q ** (n * (n - 1) // 2)
    assert natural_orbit_count(G, n) == n * q - n + 1


@pytest.mark.parametrize("q", [2, 3])
def test_gl2_orbits(q):
    G = general_linear_group(2, q)
    assert G.order == (q**2 - 1) * (q**2 - q)
    assert natural_orbit_count(G, 2) == 2


def test_abelian_class_count():
    assert class_count_naive(abelian_group(3, 3)) == 27


def test_class_count_budget():
    G = heisenberg_group(identity_rep(), 3)
    with pytest.raises(BudgetExceeded):
        class_count_naive(G, max_order=10)


# -- Lie algebras ---------------------------------------------------------------------------


def test_n3_structure_constants():
    L = LieData(3, (elementary(3, 1, 2), elementary(3, 2, 3), elementary(3, 1, 3)))
    s = lie_validate(L)
    assert s[0][1] == [0, 0, 1]
    assert s[1][0] == [0, 0, -1]
    assert all(s[i][k] == [0, 0, 0] for i in range(3) for k in range(3) if {i, k} != {0, 1})


def test_abelian_subalgebra_constants():
    s = lie_validate(LieData(3, (elementary(3, 1, 2), elementary(3, 1, 3))))
    assert all(x == 0 for row in s for col in row for x in col)


def test_not_closed():
    x = np.array(elementary(3, 1, 2)) + np.array(elementary(3, 2, 3))
    with pytest.raises(NotClosed):
        lie_validate(LieData(3, (x.tolist(), elementary(3, 1, 2))))


def test_not_closed_non_integral():
    # [E12, E23] = E13 = (1/2) * (2 E13)
    with pytest.raises(NotClosed):
        lie_validate(LieData(3, (elementary(3, 1, 2), elementary(3, 2, 3), [[0, 0, 2], [0, 0, 0], [0, 0, 0]])))


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_lie_ask_values(q):
    n3 = full_nilpotent(3)
    assert ask(lie_inclusion_rep(n3), q) == 3 * q - 2
    assert ask(lie_adjoint_rep(n3), q) == q**2 + q - 1
    assert ask(lie_inclusion_rep(full_nilpotent(2)), q) == 2 * q - 1
    assert is_alternating(lie_adjoint_rep(n3))


def test_abelian_adjoint_is_zero():
    L = LieData(4, tuple(elementary(4, i, j) for i, j in ((1, 3), (1, 4), (2, 3), (2, 4))))
    assert ask(lie_adjoint_rep(L), 3) == 3**4


def test_exp_group_examples():
    G = lie_exp_group(full_nilpotent(2), 3)
    assert G.order == 3
    G = lie_exp_group(full_nilpotent(3), 5)
    assert G.order == 125
    assert class_count_naive(G) == 29
    assert natural_orbit_count(G, 3) == 13
    with pytest.raises(CharTooSmall):
        lie_exp_group(full_nilpotent(3), 2)


def test_exp_group_n4_class_count():
    n4 = full_nilpotent(4)
    G = lie_exp_group(n4, 5)
    assert G.order == 5**6
    assert class_count_naive(G) == ask(lie_adjoint_rep(n4), 5)
    assert natural_orbit_count(G, 4) == ask(lie_inclusion_rep(n4), 5) == 4 * 5 - 3

"""Linear orbit counting: the abelian actions M_theta and natural matrix actions."""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from asklab.errors import NonIntegral, NotAnAction, check_budget
from asklab.exactcore import field_for
from asklab.grouplab.groups import _orbit_labels, all_tuples, bilinear
from asklab.modrep import ask


@dataclass
class FiniteAction:
    """A right action of a finite group on a finite set of points.

    act(points, g) maps an array of points (rows) under one group element;
    compose(g, h) is the product gh, so that x(gh) = (xg)h.
    """

    group: np.ndarray
    points: np.ndarray
    act: Callable
    compose: Callable
    identity: np.ndarray

    def check(self, samples=4):
        P = self.points
        if not np.array_equal(self.act(P, self.identity), P):
            raise NotAnAction("identity does not act trivially")
        G = self.group
        picks = np.linspace(0, len(G) - 1, num=min(samples, len(G)), dtype=np.int64)
        for i in picks:
            for j in picks:
                g, h = G[i], G[j]
                lhs = self.act(self.act(P, g), h)
                rhs = self.act(P, self.compose(g, h))
                if not np.array_equal(lhs, rhs):
                    raise NotAnAction(f"x(gh) != (xg)h for group rows {i}, {j}")


def burnside_orbits(action, budget=None, check=True):
    """Number of orbits as the average number of fixed points."""
    check_budget(len(action.group) * len(action.points), budget, "fixed-point tests")
    if check:
        action.check()
    P = action.points
    fixed = 0
    for g in action.group:
        fixed += int(np.all(action.act(P, g) == P, axis=1).sum())
    count, rem = divmod(fixed, len(action.group))
    if rem:
        raise NonIntegral(f"{fixed} fixed pairs not divisible by |G| = {len(action.group)}")
    return count


def _keys(X, q):
    return X @ (q ** np.arange(X.shape[1], dtype=np.int64))


def orbits_by_generators(points, gens, act, q):
    """Orbit count of the group generated by `gens` via connected components.

    `points` must be all of F_q^k in all_tuples order so a point's key is
    its row index.
    """
    base = np.arange(len(points))
    src, dst = [], []
    for g in gens:
        src.append(base)
        dst.append(_keys(act(points, g), q))
    return _orbit_labels(len(points), src, dst)[0]


def mtheta_action(theta, q):
    """The action (x, y)a = (x, y + x*a) of F_q^l on F_q^(d+e)."""
    F = field_for(q)
    l, d, e = theta.shape
    T = np.transpose(theta.reduced(F), (1, 0, 2)).copy()  # T[i,k,j] = c[k][i][j]

    def act(P, a):
        x, y = P[:, :d], P[:, d:]
        return np.concatenate([x, F.add(y, bilinear(F, x, a, T))], axis=1)

    def compose(a, b):
        return F.add(a, b)

    return F, act, compose


def mtheta_orbit_count(theta, q, mode="bfs", budget=None):
    """Orbits of M_theta(F_q) on F_q^(d+e).

    bfs: connected components over generators lambda*e_k;
    burnside: fixed points of every group element;
    formula: q^e * ask(theta).
    """
    l, d, e = theta.shape
    F = field_for(q)
    if mode == "formula":
        value = ask(theta, F.pp, budget=budget).scaled(e)
        if value.denominator != 1:
            raise NonIntegral(f"q^e * ask = {value}")
        return value.numerator
    F, act, compose = mtheta_action(theta, F.pp)
    if mode == "bfs":
        check_budget(F.q ** (d + e) * max(l, 1) * F.f, budget)
        points = all_tuples(F.q, d + e)
        gens = []
        for k in range(l):
            for lam in F.additive_basis():
                g = np.zeros(l, dtype=np.int64)
                g[k] = lam
                gens.append(g)
        return orbits_by_generators(points, gens, act, F.q)
    if mode == "burnside":
        check_budget(F.q ** (l + d + e), budget)
        action = FiniteAction(
            all_tuples(F.q, l), all_tuples(F.q, d + e), act, compose, np.zeros(l, dtype=np.int64)
        )
        return burnside_orbits(action, budget)
    raise ValueError(f"unknown mode {mode!r}")


def natural_orbit_count(G, n=None, q=None, budget=None):
    """Orbits of a matrix group on row vectors F_q^n (v -> v g)."""
    F = G.field
    if n is None:
        n = int(round(np.sqrt(G.elements.shape[1])))
    if q is not None and int(q) != F.q:
        raise ValueError("q does not match the group's field")
    gens = G.conjugators().reshape(-1, n, n)
    check_budget(F.q**n * len(gens), budget)
    points = all_tuples(F.q, n)

    def act(P, g):
        return F.matmul(P, g)

    return orbits_by_generators(points, gens, act, F.q)

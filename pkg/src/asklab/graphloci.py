"""
Symmetric matrix spaces attached to graphs and their full-rank loci.

For a simple graph on n vertices, M_G is the module of symmetric n x n
integer matrices x with x_ij = 0 whenever i ~ j.  gamma(G) is its inclusion
into Mat_n(Z), a representation with l = n(n+1)/2 - |edges| and d = e = n.
"""

import json
from dataclasses import dataclass
from itertools import combinations

from asklab.errors import ShapeMismatch
from asklab.exactcore import field_for
from asklab.modrep import ModuleRep, rank_histogram


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        edges = set()
        for edge in self.edges:
            i, j = sorted(edge)
            if i == j:
                raise ShapeMismatch(f"loop at vertex {i}")
            if i < 0 or j >= self.n:
                raise ShapeMismatch(f"edge {edge} has an endpoint outside 0..{self.n - 1}")
            if (i, j) in edges:
                raise ShapeMismatch(f"duplicate edge {edge}")
            edges.add((i, j))
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def of(cls, n, edges=()):
        edge_list = [tuple(e) for e in edges]
        normalised = [tuple(sorted(e)) for e in edge_list]
        if len(set(normalised)) != len(normalised):
            raise ShapeMismatch("duplicate edge")
        return cls(n, frozenset(normalised))

    @classmethod
    def complete(cls, n):
        return cls.of(n, combinations(range(n), 2))

    @classmethod
    def empty(cls, n):
        return cls.of(n)

    @classmethod
    def path(cls, n):
        return cls.of(n, [(i, i + 1) for i in range(n - 1)])

    def adjacent(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    def relabel(self, perm):
        """Image under the vertex map i -> perm[i]."""
        return Graph.of(self.n, [(perm[i], perm[j]) for i, j in self.edges])

    @property
    def module_rank(self):
        return self.n * (self.n + 1) // 2 - len(self.edges)

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    def __str__(self):
        return f"Graph(n={self.n}, edges={sorted(self.edges)})"


def load_graph(raw):
    if isinstance(raw, str):
        raw = json.loads(raw)
    try:
        n = raw["n"]
        edges = raw.get("edges", [])
    except (KeyError, AttributeError):
        raise ShapeMismatch("graph needs fields 'n' and 'edges'") from None
    for e in edges:
        if len(e) != 2:
            raise ShapeMismatch(f"edge {e} must have two endpoints")
    return Graph.of(int(n), edges)


def all_graphs(n):
    """Every labelled simple graph on n vertices."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.of(n, [pr for b, pr in enumerate(pairs) if mask >> b & 1])


def graph_basis(g):
    """Basis positions of M_G: diagonal first, then non-edges i < j."""
    basis = [(i, i) for i in range(g.n)]
    basis += [(i, j) for i, j in combinations(range(g.n), 2) if not g.adjacent(i, j)]
    return basis


def graph_rep(g):
    """The immersive representation gamma(G): M_G -> Mat_n(Z)."""
    n = g.n
    basis = graph_basis(g)
    t = []
    for i, j in basis:
        mat = [[0] * n for _ in range(n)]
        mat[i][j] = mat[j][i] = 1
        t.append(mat)
    return ModuleRep.from_array(t, name=f"gamma{sorted(g.edges)}@{n}", shape=(len(basis), n, n))


def graph_vmax(g, q, budget=None):
    """Number of invertible matrices in M_G over F_q."""
    h = rank_histogram(graph_rep(g), q, budget)
    return h.counts[g.n]


def qadic_valuation_int(x, q):
    """Largest k with q^k | x; None for x == 0."""
    if x == 0:
        return None
    k = 0
    while x % q == 0:
        x //= q
        k += 1
    return k


@dataclass(frozen=True)
class LimitCheck:
    graph: Graph
    q: int
    m: int
    lhs: int  # q^l * ask of the m-th power
    rhs: int  # invertible count
    valuation: object  # exponent of q dividing lhs - rhs, None if equal

    @property
    def holds(self):
        return self.valuation is None or self.valuation >= self.m

    def to_json(self):
        return {
            "graph": self.graph.to_json(),
            "q": self.q,
            "m": self.m,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "congruence_exp": self.valuation,
            "pass": self.holds,
        }


def limit_congruence_check(g, q, m, budget=None):
    """Check q^l * ask(m-th power of gamma(G)) == vmax (mod q^m)."""
    F = field_for(q)
    h = rank_histogram(graph_rep(g), F.pp, budget)
    n = g.n
    lhs = sum(c * F.q ** (m * (n - i)) for i, c in enumerate(h.counts))
    rhs = h.counts[n]
    return LimitCheck(g, F.q, m, lhs, rhs, qadic_valuation_int(lhs - rhs, F.q))

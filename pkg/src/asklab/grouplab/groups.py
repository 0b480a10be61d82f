"""
Explicitly enumerated finite groups.

A GroupTable stores its elements as rows of field codes (coordinate tuples
or flattened matrices) together with vectorised multiplication and
inversion.  Conjugacy classes are found as connected components of the
graph x -- g^-1 x g over a generating set g.
"""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from asklab.errors import BudgetExceeded, NotAlternating, check_budget
from asklab.exactcore import batch_inverse, field_for
from asklab.modrep import is_alternating

# naive class counting refuses groups larger than this by default
MAX_NAIVE_ORDER = 2**14
# hard element cap for matrix group closure
MAX_CLOSURE = 10**6


def bilinear(F, A, B, T):
    """out_j = sum_{s,t} A_s B_t T[s, t, j] over F; A (..., S), B (..., T)."""
    A = np.asarray(A)
    B = np.asarray(B)
    S, U, E = T.shape
    shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-1]) + (E,)
    if F.is_prime_field:
        out = np.einsum("...s,...t,stj->...j", A, B, T, optimize=True)
        return np.broadcast_to(out % F.p, shape).copy()
    out = np.zeros(shape, dtype=np.int64)
    for s, t, j in zip(*np.nonzero(T)):
        term = F.mul(F.mul(A[..., s], B[..., t]), T[s, t, j])
        out[..., j] = F.add(out[..., j], term)
    return out


def all_tuples(q, k):
    """Every vector in F_q^k, row r holding the base-q digits of r (lowest first)."""
    idx = np.arange(q**k, dtype=np.int64)
    out = np.empty((idx.size, k), dtype=np.int64)
    for t in range(k):
        out[:, t] = idx % q
        idx //= q
    return out


class GroupTable:
    def __init__(self, field, elements, mul, inv, identity, kind, generators=None, params=None):
        self.field = field
        self.elements = np.asarray(elements, dtype=np.int64)
        self.mul = mul
        self.inv = inv
        self.identity = np.asarray(identity, dtype=np.int64)
        self.kind = kind
        self.generators = None if generators is None else np.asarray(generators, dtype=np.int64)
        self.params = dict(params or {})
        width = self.elements.shape[1]
        if field.q**width >= 2**62:
            raise BudgetExceeded(field.q**width, 2**62, "element encoding")
        self._weights = field.q ** np.arange(width, dtype=np.int64)
        keys = self.elements @ self._weights
        self._order = np.argsort(keys, kind="stable")
        self._keys = keys[self._order]

    @property
    def order(self):
        return self.elements.shape[0]

    def __len__(self):
        return self.order

    def index(self, X):
        """Positions of the rows of X in `elements`; KeyError if absent."""
        keys = np.asarray(X) @ self._weights
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, len(self._keys) - 1)
        if not np.all(self._keys[pos] == keys):
            raise KeyError("element not in group")
        return self._order[pos]

    def conjugate(self, X, g):
        """g^-1 X g for a single element g."""
        return self.mul(self.mul(self.inv(g), X), g)

    def commutator(self, X, Y):
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(self.inv(self.mul(Y, X)), self.mul(X, Y))

    def conjugators(self):
        return self.generators if self.generators is not None else self.elements

    def verify(self, assoc_with=None):
        """Check identity, inverses, closure and associativity.

        Associativity is checked for all pairs (x, y) against each element of
        `assoc_with` (default: the generators, or the whole group).
        """
        E = self.elements
        check_budget(len(E) ** 2, None, "pairs for group verification")
        one = np.broadcast_to(self.identity, E.shape)
        assert np.array_equal(self.mul(E, one), E), "right identity"
        assert np.array_equal(self.mul(one, E), E), "left identity"
        assert np.array_equal(self.mul(E, self.inv(E)), one), "inverses"
        self.index(self.inv(E))
        zs = self.conjugators() if assoc_with is None else assoc_with
        X = np.repeat(E, len(E), axis=0)
        Y = np.tile(E, (len(E), 1))
        XY = self.mul(X, Y)
        self.index(XY)
        for z in zs:
            lhs = self.mul(XY, z)
            rhs = self.mul(X, self.mul(Y, z))
            assert np.array_equal(lhs, rhs), "associativity"
        return True

    def center_mask(self):
        """Boolean mask of central elements (tested against the generators)."""
        E = self.elements
        mask = np.ones(len(E), dtype=bool)
        for g in self.conjugators():
            mask &= np.all(self.mul(E, g) == self.mul(g, E), axis=1)
        return mask

    def describe(self):
        return {"kind": self.kind, "order": self.order, **self.params}

    def __repr__(self):
        return f"GroupTable(kind={self.kind!r}, order={self.order})"


def _orbit_labels(n, edges_src, edges_dst):
    src = np.concatenate(edges_src) if edges_src else np.zeros(0, dtype=np.int64)
    dst = np.concatenate(edges_dst) if edges_dst else np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    count, labels = connected_components(graph, directed=True, connection="weak")
    return count, labels


def conjugacy_classes(G, max_order=MAX_NAIVE_ORDER):
    """(number of classes, class label of every element)."""
    check_budget(G.order, max_order, "group order")
    X = G.elements
    src, dst = [], []
    base = np.arange(G.order)
    for g in G.conjugators():
        src.append(base)
        dst.append(G.index(G.conjugate(X, g)))
    return _orbit_labels(G.order, src, dst)


def class_count_naive(G, max_order=MAX_NAIVE_ORDER):
    """Number of conjugacy classes by explicit orbit enumeration."""
    return conjugacy_classes(G, max_order)[0]


# -- groups from module representations -------------------------------------


def _coordinate_generators(F, width, blocks):
    """Units lambda * e_t for t in the given coordinate range and an F_p-basis of F_q."""
    gens = []
    for t in blocks:
        for lam in F.additive_basis():
            g = np.zeros(width, dtype=np.int64)
            g[t] = lam
            gens.append(g)
    return np.array(gens, dtype=np.int64).reshape(len(gens), width)


def baer_group(theta, q, budget=None):
    """Baer group on F_q^l x F_q^e of an alternating representation.

    Product (a, y)(a', y') = (a + a', y + y' + beta(a, a')) with
    beta(e_k, e_k') = e_k * e_k' for k < k' and 0 otherwise, so that the
    commutator of (a, y) and (a', y') is (0, a * a').
    """
    if not is_alternating(theta):
        raise NotAlternating(f"{theta!r} is not alternating")
    F = field_for(q)
    l, _, e = theta.shape
    check_budget(F.q ** (l + e), budget)
    C = theta.reduced(F)
    # beta[k, k2, j] = c[k2][k][j] for k < k2: a in the domain slot, a' in the module slot
    beta = np.zeros((l, l, e), dtype=np.int64)
    for k in range(l):
        for k2 in range(k + 1, l):
            beta[k, k2] = C[k2, k]

    def mul(X, Y):
        X, Y = np.broadcast_arrays(X, Y)
        a, y = X[..., :l], X[..., l:]
        b, z = Y[..., :l], Y[..., l:]
        out_y = F.add(F.add(y, z), bilinear(F, a, b, beta))
        return np.concatenate([F.add(a, b), out_y], axis=-1)

    def inv(X):
        a, y = X[..., :l], X[..., l:]
        return np.concatenate([F.neg(a), F.add(F.neg(y), bilinear(F, a, a, beta))], axis=-1)

    gens = _coordinate_generators(F, l + e, range(l + e))
    return GroupTable(
        F,
        all_tuples(F.q, l + e),
        mul,
        inv,
        np.zeros(l + e, dtype=np.int64),
        "baer",
        gens,
        {"theta": theta.name, "q": F.q, "field": F.metadata(), "shape": theta.shape},
    )


def heisenberg_group(theta, q, budget=None):
    """Group on F_q^l x F_q^d x F_q^e with (a,v,w)(a',v',w') = (a+a', v+v', w+w'+v*a')."""
    F = field_for(q)
    l, d, e = theta.shape
    width = l + d + e
    check_budget(F.q**width, budget)
    C = theta.reduced(F)
    # v * a' = sum c[k][i][j] v_i a'_k
    T = np.transpose(C, (1, 0, 2)).copy()

    def mul(X, Y):
        X, Y = np.broadcast_arrays(X, Y)
        a, v, w = X[..., :l], X[..., l : l + d], X[..., l + d :]
        b, u, z = Y[..., :l], Y[..., l : l + d], Y[..., l + d :]
        out_w = F.add(F.add(w, z), bilinear(F, v, b, T))
        return np.concatenate([F.add(a, b), F.add(v, u), out_w], axis=-1)

    def inv(X):
        a, v, w = X[..., :l], X[..., l : l + d], X[..., l + d :]
        out_w = F.add(F.neg(w), bilinear(F, v, a, T))
        return np.concatenate([F.neg(a), F.neg(v), out_w], axis=-1)

    gens = _coordinate_generators(F, width, range(width))
    return GroupTable(
        F,
        all_tuples(F.q, width),
        mul,
        inv,
        np.zeros(width, dtype=np.int64),
        "heisenberg",
        gens,
        {"theta": theta.name, "q": F.q, "field": F.metadata(), "shape": theta.shape},
    )


def abelian_group(q, k):
    """(F_q^k, +) as a GroupTable."""
    F = field_for(q)

    def mul(X, Y):
        return F.add(*np.broadcast_arrays(X, Y))

    gens = _coordinate_generators(F, k, range(k))
    return GroupTable(F, all_tuples(F.q, k), mul, F.neg, np.zeros(k, dtype=np.int64), "abelian", gens, {"q": F.q})


# -- matrix groups -----------------------------------------------------------


def _matrix_ops(F, n):
    def mul(X, Y):
        X, Y = np.broadcast_arrays(X, Y)
        shape = X.shape
        out = F.matmul(X.reshape(-1, n, n), Y.reshape(-1, n, n))
        return out.reshape(shape)

    def inv(X):
        X = np.asarray(X)
        shape = X.shape
        return batch_inverse(F, X.reshape(-1, n, n)).reshape(shape)

    return mul, inv


def matrix_group_closure(F, n, generators, kind="matrix_closure", params=None, cap=MAX_CLOSURE):
    """Breadth-first product closure of invertible n x n matrices over F."""
    gens = np.asarray(generators, dtype=np.int64).reshape(-1, n * n)
    if F.q ** (n * n) >= 2**62:
        raise BudgetExceeded(F.q ** (n * n), 2**62, "matrix encoding")
    weights = F.q ** np.arange(n * n, dtype=np.int64)
    mul, inv = _matrix_ops(F, n)
    ident = np.eye(n, dtype=np.int64).reshape(n * n)
    found = [ident[None]]
    seen = np.array([ident @ weights])
    frontier = ident[None]
    while frontier.size:
        prods = mul(frontier[:, None, :], gens[None, :, :]).reshape(-1, n * n)
        keys = prods @ weights
        keys, first = np.unique(keys, return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = prods[first[fresh]]
        if frontier.size:
            seen = np.union1d(seen, keys[fresh])
            found.append(frontier)
            if seen.size > cap:
                raise BudgetExceeded(seen.size, cap, "group elements")
    elements = np.concatenate(found)
    return GroupTable(F, elements, mul, inv, ident, kind, gens, params or {"n": n, "q": F.q})


def elementary_matrix(F, n, i, j, lam):
    m = np.eye(n, dtype=np.int64)
    m[i, j] = lam
    return m


def unitriangular_group(n, q):
    """U_n(F_q) as the closure of the elementary matrices I + lambda E_ij, i < j."""
    F = field_for(q)
    gens = [
        elementary_matrix(F, n, i, j, lam)
        for i in range(n)
        for j in range(i + 1, n)
        for lam in F.additive_basis()
    ]
    if not gens:
        gens = [np.eye(n, dtype=np.int64)]
    return matrix_group_closure(F, n, gens, "matrix_closure", {"group": "U", "n": n, "q": F.q})


def general_linear_group(n, q, cap=MAX_CLOSURE):
    """GL_n(F_q): elementary transvections plus diag(g, 1, ..., 1), g primitive."""
    F = field_for(q)
    gens = [
        elementary_matrix(F, n, i, j, lam)
        for i in range(n)
        for j in range(n)
        if i != j
        for lam in F.additive_basis()
    ]
    diag = np.eye(n, dtype=np.int64)
    diag[0, 0] = F.primitive_element()
    gens.append(diag)
    return matrix_group_closure(F, n, gens, "matrix_closure", {"group": "GL", "n": n, "q": F.q}, cap)

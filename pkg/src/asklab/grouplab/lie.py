"""
Nilpotent Lie algebras of strictly upper triangular integer matrices.

A LieData holds n and a Z-basis b_1..b_r.  Validation computes integer
structure constants [b_i, b_k] = sum_j s[i][k][j] b_j.
"""

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial

import numpy as np

from asklab.errors import CharTooSmall, NotClosed, NotNilpotentShape, ShapeMismatch, check_budget
from asklab.exactcore import field_for, rank_q
from asklab.grouplab.groups import matrix_group_closure
from asklab.modrep import ModuleRep, is_immersive


def _mat_mul(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def bracket(A, B):
    AB, BA = _mat_mul(A, B), _mat_mul(B, A)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(AB, BA)]


def elementary(n, i, j):
    """E_ij with 1-based indices, as in E_12."""
    m = [[0] * n for _ in range(n)]
    m[i - 1][j - 1] = 1
    return m


@dataclass(frozen=True)
class LieData:
    n: int
    basis: tuple
    name: str = None

    def __post_init__(self):
        basis = tuple(tuple(tuple(int(x) for x in row) for row in b) for b in self.basis)
        for b in basis:
            if len(b) != self.n or any(len(row) != self.n for row in b):
                raise ShapeMismatch(f"basis matrices must be {self.n} x {self.n}")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self):
        return len(self.basis)

    @cached_property
    def structure_constants(self):
        return lie_validate(self)

    def to_json(self):
        out = {"n": self.n, "basis": [[list(r) for r in b] for b in self.basis]}
        if self.name:
            out["name"] = self.name
        return out


def load_lie(raw):
    if isinstance(raw, str):
        raw = json.loads(raw)
    try:
        return LieData(int(raw["n"]), tuple(raw["basis"]), raw.get("name"))
    except KeyError as exc:
        raise ShapeMismatch(f"missing field {exc.args[0]!r}") from None


def full_nilpotent(n):
    """n_n with basis E_ij, i < j, ordered by superdiagonal then row."""
    basis = [elementary(n, i, i + k) for k in range(1, n) for i in range(1, n - k + 1)]
    return LieData(n, tuple(basis), f"n{n}")


def _coordinates(vectors, target):
    """Solve sum c_t vectors[t] = target over Q; None if not in the span."""
    r, m = len(vectors), len(target)
    M = [[Fraction(vectors[t][s]) for t in range(r)] + [Fraction(target[s])] for s in range(m)]
    row = 0
    pivots = []
    for c in range(r):
        piv = next((i for i in range(row, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][c]
        M[row] = [v * inv for v in M[row]]
        for i in range(m):
            if i != row and M[i][c]:
                t = M[i][c]
                M[i] = [a - t * b for a, b in zip(M[i], M[row])]
        pivots.append(c)
        row += 1
    if any(M[i][r] != 0 for i in range(row, m)):
        return None
    sol = [Fraction(0)] * r
    for i, c in enumerate(pivots):
        sol[c] = M[i][r]
    return sol


def lie_validate(L):
    """Check shape, independence and bracket closure; return s[i][k][j]."""
    n = L.n
    for t, b in enumerate(L.basis):
        for i in range(n):
            for j in range(i + 1):
                if b[i][j]:
                    raise NotNilpotentShape(f"basis element {t} has entry at ({i},{j})")
    flat = [[x for row in b for x in row] for b in L.basis]
    if flat and rank_q(flat) != len(flat):
        raise NotNilpotentShape("basis is linearly dependent over Q")
    r = L.dim
    s = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for k in range(r):
            br = bracket(L.basis[i], L.basis[k])
            coords = _coordinates(flat, [x for row in br for x in row])
            if coords is None:
                raise NotClosed(f"[b{i}, b{k}] leaves the span", pair=(i, k))
            if any(c.denominator != 1 for c in coords):
                raise NotClosed(f"[b{i}, b{k}] has non-integral coordinates", pair=(i, k))
            s[i][k] = [int(c) for c in coords]
    return s


def lie_inclusion_rep(L):
    """The inclusion g -> Mat_n(Z): c[k][i][j] = (b_k)_ij."""
    lie_validate(L)
    rep = ModuleRep.from_array(
        [[list(r) for r in b] for b in L.basis],
        name=f"iota({L.name})" if L.name else None,
        shape=(L.dim, L.n, L.n),
    )
    if not is_immersive(rep):
        warnings.warn("basis does not span a saturated lattice; inclusion is not immersive")
    return rep


def lie_adjoint_rep(L):
    """a -> (x -> [x, a]): c[k][i][j] = s[i][k][j]."""
    s = lie_validate(L)
    r = L.dim
    t = [[[s[i][k][j] for j in range(r)] for i in range(r)] for k in range(r)]
    return ModuleRep.from_array(t, name=f"ad({L.name})" if L.name else None, shape=(r, r, r))


def exp_matrix(F, N):
    """exp of a nilpotent matrix over F by the truncated series (needs p >= n)."""
    n = N.shape[0]
    out = np.eye(n, dtype=np.int64)
    power = np.eye(n, dtype=np.int64)
    for k in range(1, n):
        power = F.matmul(power, N)
        coef = int(F.inv(F.from_int(factorial(k))))
        out = F.add(out, F.mul(power, coef))
    return out


def lie_exp_group(L, q, budget=None):
    """Closure of {exp(c b_i) : c in F_q} inside U_n(F_q)."""
    F = field_for(q)
    if F.p < L.n:
        raise CharTooSmall(f"p = {F.p} < n = {L.n}: exp has non-invertible denominators")
    lie_validate(L)
    expected = F.q**L.dim
    check_budget(expected, budget)
    gens = []
    for b in L.basis:
        B = F.from_int(np.array(b, dtype=object))
        for c in range(1, F.q):
            gens.append(exp_matrix(F, F.mul(B, c)))
    if not gens:
        gens = [np.eye(L.n, dtype=np.int64)]
    G = matrix_group_closure(
        F, L.n, gens, "lie_exp", {"lie": L.name, "n": L.n, "q": F.q, "expected_order": expected}
    )
    if G.order != expected:
        warnings.warn(f"exp group has order {G.order}, expected {expected}")
    return G

"""
Finite free module representations over Z and their invariants over F_q.

A module representation M -> Hom(V, W) with ranks (l, d, e) is stored as an
integer tensor c[k][i][j] (k < l module, i < d domain, j < e codomain), so
that the bilinear map is (x * a)_j = sum_{i,k} c[k][i][j] x_i a_k and a
module element a gives the d x e matrix sum_k a_k c[k].

The average size of the kernel of a representation over F_q is stored as
the unreduced pair (N, l) meaning N / q^l, where
N = sum_{a in F_q^l} q^(d - rank(a theta)).
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from asklab.errors import ShapeMismatch, check_budget
from asklab.exactcore import (
    PrimePower,
    batch_rank,
    field_for,
    rank_q,
    saturation_basis,
    smith_invariants,
)

CHUNK = 1 << 14


@dataclass(frozen=True)
class ModuleRep:
    l: int
    d: int
    e: int
    tensor: tuple
    name: str = field(default=None, compare=False)

    def __post_init__(self):
        validate_tensor(self.l, self.d, self.e, self.tensor)

    @classmethod
    def from_array(cls, arr, name=None, shape=None):
        """Build from a nested list/array indexed [k][i][j].

        `shape` must be given when some rank is zero and cannot be inferred.
        """
        if shape is None:
            a = np.asarray(arr, dtype=object)
            if a.ndim != 3:
                raise ShapeMismatch("tensor must be 3-dimensional; pass shape=")
            shape = a.shape
        l, d, e = shape
        tensor = _freeze(arr, l, d, e)
        return cls(l, d, e, tensor, name)

    def __getitem__(self, idx):
        k, i, j = idx
        return self.tensor[k][i][j]

    @property
    def shape(self):
        return (self.l, self.d, self.e)

    def array(self):
        """The tensor as an int64 numpy array (raises on overflow)."""
        return np.array(self.tensor, dtype=np.int64).reshape(self.shape)

    def reduced(self, F):
        """Tensor reduced into field codes of F, shape (l, d, e)."""
        out = np.zeros(self.shape, dtype=np.int64)
        for k, sl in enumerate(self.tensor):
            for i, row in enumerate(sl):
                for j, c in enumerate(row):
                    if c:
                        out[k, i, j] = c % F.p
        return out

    def flatten(self):
        """The l x (d*e) integer matrix of basis images."""
        return [[c for row in sl for c in row] for sl in self.tensor]

    def renamed(self, name):
        return ModuleRep(self.l, self.d, self.e, self.tensor, name)

    def to_json(self):
        def enc(c):
            return c if abs(c) < 2**63 else str(c)

        out = {"l": self.l, "d": self.d, "e": self.e}
        if self.name is not None:
            out = {"name": self.name, **out}
        out["tensor"] = [[[enc(c) for c in row] for row in sl] for sl in self.tensor]
        return out

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"ModuleRep({label}l={self.l}, d={self.d}, e={self.e})"


def _freeze(arr, l, d, e):
    out = []
    for k in range(l):
        sl = arr[k]
        out.append(tuple(tuple(int(sl[i][j]) for j in range(e)) for i in range(d)))
    return tuple(out)


def validate_tensor(l, d, e, tensor):
    for name, v in (("l", l), ("d", d), ("e", e)):
        if not isinstance(v, int) or v < 0:
            raise ShapeMismatch(f"rank {name} must be a non-negative integer, got {v!r}")
    if len(tensor) != l:
        raise ShapeMismatch(f"expected {l} module slices, got {len(tensor)}", where=())
    for k, sl in enumerate(tensor):
        if len(sl) != d:
            raise ShapeMismatch(f"expected {d} rows, got {len(sl)}", where=(k,))
        for i, row in enumerate(sl):
            if len(row) != e:
                raise ShapeMismatch(f"expected {e} entries, got {len(row)}", where=(k, i))
            for j, c in enumerate(row):
                if isinstance(c, bool) or not isinstance(c, int):
                    raise ShapeMismatch(f"non-integer entry {c!r}", where=(k, i, j))


def _parse_int(x, where):
    if isinstance(x, bool):
        raise ShapeMismatch(f"non-integer entry {x!r}", where=where)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ShapeMismatch(f"non-integer entry {x!r}", where=where)


def load_rep(raw):
    """Validate raw JSON-like data {"l","d","e","tensor",["name"]}."""
    if isinstance(raw, str):
        raw = json.loads(raw)
    try:
        l, d, e = raw["l"], raw["d"], raw["e"]
        data = raw["tensor"]
    except KeyError as exc:
        raise ShapeMismatch(f"missing field {exc.args[0]!r}") from None
    if not isinstance(data, list) or len(data) != l:
        raise ShapeMismatch(f"expected {l} module slices", where=())
    tensor = []
    for k, sl in enumerate(data):
        if not isinstance(sl, list) or len(sl) != d:
            raise ShapeMismatch(f"expected {d} rows", where=(k,))
        rows = []
        for i, row in enumerate(sl):
            if not isinstance(row, list) or len(row) != e:
                raise ShapeMismatch(f"expected {e} entries", where=(k, i))
            rows.append(tuple(_parse_int(x, (k, i, j)) for j, x in enumerate(row)))
        tensor.append(tuple(rows))
    return ModuleRep(l, d, e, tuple(tensor), raw.get("name"))


validate = load_rep


# -- constructions ----------------------------------------------------------


def zero_rep(l, d, e, name=None):
    return ModuleRep(l, d, e, tuple(((0,) * e,) * d for _ in range(l)), name)


def identity_rep(n=1):
    """a -> a * I_n (so identity_rep(1) is id_1)."""
    t = [[[int(i == j) for j in range(n)] for i in range(n)]]
    return ModuleRep.from_array(t, name=f"id{n}" if n > 1 else "id1", shape=(1, n, n))


def _empty(l, d, e):
    return [[[0] * e for _ in range(d)] for _ in range(l)]


def mth_power(theta, m):
    """a -> (a theta)^{+m}: block-diagonal replication on V and W."""
    if m < 1:
        raise ValueError("m must be >= 1")
    l, d, e = theta.shape
    t = _empty(l, m * d, m * e)
    for k in range(l):
        for b in range(m):
            for i in range(d):
                for j in range(e):
                    t[k][b * d + i][b * e + j] = theta.tensor[k][i][j]
    name = f"{m}^({theta.name})" if theta.name else None
    return ModuleRep.from_array(t, name=name, shape=(l, m * d, m * e))


def knuth_dual(theta):
    """W* -> Hom(V, M*): swap the module and codomain axes."""
    l, d, e = theta.shape
    t = [[[theta.tensor[k][i][j] for k in range(l)] for i in range(d)] for j in range(e)]
    name = f"({theta.name})*" if theta.name else None
    return ModuleRep.from_array(t, name=name, shape=(e, d, l))


def alternating_hull(theta):
    """V+M -> Hom(V+M, W), (x,a) -> ((x',a') -> x'(a theta) - x(a' theta)).

    Coordinates on V+M list the V-part first, then the M-part.
    """
    l, d, e = theta.shape
    n = d + l
    t = _empty(n, n, e)
    for k in range(l):
        for i in range(d):
            for j in range(e):
                c = theta.tensor[k][i][j]
                t[d + k][i][j] = c
                t[i][d + k][j] = -c
    name = f"Lambda({theta.name})" if theta.name else None
    return ModuleRep.from_array(t, name=name, shape=(n, n, e))


def direct_sum(theta, other):
    l1, d1, e1 = theta.shape
    l2, d2, e2 = other.shape
    t = _empty(l1 + l2, d1 + d2, e1 + e2)
    for k in range(l1):
        for i in range(d1):
            for j in range(e1):
                t[k][i][j] = theta.tensor[k][i][j]
    for k in range(l2):
        for i in range(d2):
            for j in range(e2):
                t[l1 + k][d1 + i][e1 + j] = other.tensor[k][i][j]
    name = None
    if theta.name and other.name:
        name = f"{theta.name}+{other.name}"
    return ModuleRep.from_array(t, name=name, shape=(l1 + l2, d1 + d2, e1 + e2))


def is_alternating(theta):
    l, d, e = theta.shape
    if l != d:
        return False
    c = theta.tensor
    for k in range(l):
        for j in range(e):
            if c[k][k][j]:
                return False
        for i in range(k + 1, l):
            for j in range(e):
                if c[k][i][j] != -c[i][k][j]:
                    return False
    return True


def is_immersive(theta):
    """Injective with free cokernel: rank l over Q and all invariant factors 1."""
    if theta.l == 0:
        return True
    A = theta.flatten()
    if rank_q(A) != theta.l:
        return False
    return all(x == 1 for x in smith_invariants(A))


def saturate(theta):
    """Drop the kernel and saturate the image inside Hom(V, W).

    Returns (theta_sat, N) where N is the index of the image lattice in its
    saturation; ask values agree for every q coprime to N.
    """
    d, e = theta.d, theta.e
    if theta.l == 0 or d * e == 0:
        return zero_rep(0, d, e, theta.name), 1
    basis, index = saturation_basis(theta.flatten())
    t = [[row[i * e : (i + 1) * e] for i in range(d)] for row in basis.tolist()]
    name = f"sat({theta.name})" if theta.name else None
    return ModuleRep.from_array(t, name=name, shape=(len(t), d, e)), index


# -- invariants over F_q ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class AskValue:
    """ask = numerator / q^denom_exp, kept unreduced."""

    q: PrimePower
    numerator: int
    denom_exp: int

    def fraction(self):
        return Fraction(self.numerator, self.q.q**self.denom_exp)

    def __eq__(self, other):
        if isinstance(other, AskValue):
            return (
                self.numerator * other.q.q**other.denom_exp
                == other.numerator * self.q.q**self.denom_exp
            )
        if isinstance(other, (int, Fraction)):
            return self.numerator == other * self.q.q**self.denom_exp
        return NotImplemented

    def __hash__(self):
        return hash(self.fraction())

    def scaled(self, k):
        """q^k * self as an exact Fraction."""
        return self.fraction() * Fraction(self.q.q) ** k

    def __str__(self):
        return str(self.fraction())

    def __repr__(self):
        return f"AskValue(q={self.q.q}, {self.numerator}/{self.q.q}^{self.denom_exp})"


@dataclass(frozen=True)
class RankHistogram:
    """counts[i] = #{a in F_q^l : rank(a theta) = i}."""

    q: PrimePower
    l: int
    d: int
    counts: tuple

    def relabeled(self, m):
        """Histogram of the m-th power: rank i becomes rank m*i."""
        out = [0] * (m * (len(self.counts) - 1) + 1)
        for i, c in enumerate(self.counts):
            out[m * i] = c
        return RankHistogram(self.q, self.l, m * self.d, tuple(out))


def _digits(idx, q, n):
    out = np.empty((idx.size, n), dtype=np.int64)
    r = idx.copy()
    for k in range(n):
        out[:, k] = r % q
        r //= q
    return out


def _chunk_ranks(F, C, start, stop):
    """Ranks of a theta for module codes start..stop-1 (base-q digits, a_0 lowest)."""
    l, d, e = C.shape
    a = _digits(np.arange(start, stop, dtype=np.int64), F.q, l)
    if F.is_prime_field:
        mats = (a @ C.reshape(l, d * e)) % F.p
    else:
        mats = F.dot(a[:, :, None], C.reshape(l, d * e)[None], axis=1)
    mats = mats.reshape(-1, d, e)
    if d > e:
        mats = np.swapaxes(mats, 1, 2)
    return batch_rank(F, mats)


def _hist_worker(args):
    p, f, C, start, stop, width = args
    F = field_for(PrimePower(p, f))
    ranks = _chunk_ranks(F, C, start, stop)
    return np.bincount(ranks, minlength=width)


def rank_histogram(theta, q, budget=None, workers=1):
    """Counts of module points of each rank over F_q.

    With workers > 1 the enumeration is split into contiguous ranges handled
    by separate processes; the reduction is integer addition, so the result
    does not depend on the partition.
    """
    F = field_for(q)
    l, d, e = theta.shape
    total = F.q**l
    check_budget(total, budget)
    width = min(d, e) + 1
    counts = np.zeros(width, dtype=np.int64)
    if d == 0 or e == 0:
        counts[0] = total
        return RankHistogram(F.pp, l, d, tuple(int(c) for c in counts))
    C = theta.reduced(F)
    jobs = [(F.p, F.f, C, s, min(s + CHUNK, total), width) for s in range(0, total, CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_hist_worker, jobs))
    else:
        parts = [np.bincount(_chunk_ranks(F, C, s, t), minlength=width) for _, _, _, s, t, _ in jobs]
    for part in parts:
        counts += part
    return RankHistogram(F.pp, l, d, tuple(int(c) for c in counts))


def ask_from_histogram(h, m=1):
    """ask of the m-th power: q^-l * sum_i h[i] q^(m(d-i))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    q = h.q.q
    N = sum(c * q ** (m * (h.d - i)) for i, c in enumerate(h.counts))
    return AskValue(h.q, N, h.l)


def _ask_naive(theta, q, budget=None):
    """Direct sum of kernel sizes, one matrix at a time through batch_rank."""
    F = field_for(q)
    l, d, e = theta.shape
    total = F.q**l
    check_budget(total, budget)
    if d == 0 or e == 0:
        return AskValue(F.pp, total * F.q**d, l)
    C = theta.reduced(F)
    N = 0
    for s in range(0, total, CHUNK):
        ranks = _chunk_ranks(F, C, s, min(s + CHUNK, total))
        N += sum(F.q ** (d - int(r)) for r in ranks)
    return AskValue(F.pp, N, l)


def ask(theta, q, m=1, naive=False, budget=None, workers=1):
    """Average size of the kernel of the m-th power of theta over F_q.

    The default path builds the rank histogram once; naive=True blows up the
    representation and sums kernel sizes directly (for cross-validation).
    """
    if naive:
        rep = theta if m == 1 else mth_power(theta, m)
        return _ask_naive(rep, q, budget)
    return ask_from_histogram(rank_histogram(theta, q, budget, workers), m)


def vmax_count(theta, q, budget=None, workers=1):
    """Number of module points with a theta of rank d (the top stratum)."""
    h = rank_histogram(theta, q, budget, workers)
    return h.counts[theta.d] if theta.d < len(h.counts) else 0


def qpow_scaled_int(value, k):
    """q^k * value as an int; raises ValueError if not integral."""
    x = value.scaled(k)
    if x.denominator != 1:
        raise ValueError(f"{x} is not an integer")
    return x.numerator


"""
Integer matrix normal forms with Python (arbitrary precision) integers.

Matrices are lists of rows.  Nothing here uses floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import prod


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def of(cls, rows, cols=None):
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged integer matrix")
        return cls(len(rows), cols, tuple(rows))

    def tolist(self):
        return [list(r) for r in self.entries]


def _as_rows(A):
    if isinstance(A, IntMatrix):
        return A.tolist(), A.cols
    rows = [[int(x) for x in r] for r in A]
    return rows, (len(rows[0]) if rows else 0)


def rank_q(A):
    """Rank over Q by fraction Gaussian elimination."""
    rows, ncols = _as_rows(A)
    M = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                t = M[i][c] / M[r][c]
                M[i] = [a - t * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def smith_form(A):
    """Return (D, Vinv) with D the Smith diagonal and Vinv unimodular.

    If U A V = diag(D) is the Smith decomposition, Vinv = V^{-1}, so the
    row space of A is spanned by D[i] * Vinv[i].
    """
    S, n = _as_rows(A)
    m = len(S)
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        S[t], S[i] = S[i], S[t]
        if j != t:
            for row in S:
                row[t], row[j] = row[j], row[t]
            Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        while True:
            piv = S[t][t]
            done = True
            for i in range(t + 1, m):
                k = S[i][t] // piv
                if k:
                    S[i] = [a - k * b for a, b in zip(S[i], S[t])]
                if S[i][t]:
                    done = False
            for j in range(t + 1, n):
                k = S[t][j] // piv
                if k:
                    # column j -= k * column t; inverse row op on Vinv
                    for row in S:
                        row[j] -= k * row[t]
                    Vinv[t] = [a + k * b for a, b in zip(Vinv[t], Vinv[j])]
                if S[t][j]:
                    done = False
            if done:
                # enforce divisibility into the remaining block
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                S[t] = [a + b for a, b in zip(S[t], S[bad])]
                continue
            # bring the smallest remaining entry of row/column t to the pivot
            cands = [(abs(S[i][t]), i, t) for i in range(t, m) if S[i][t]]
            cands += [(abs(S[t][j]), t, j) for j in range(t, n) if S[t][j]]
            _, i, j = min(cands)
            if i != t:
                S[t], S[i] = S[i], S[t]
            if j != t:
                for row in S:
                    row[t], row[j] = row[j], row[t]
                Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
        diag.append(S[t][t])
        t += 1
    return diag, Vinv


def smith_invariants(A):
    """Nonzero invariant factors d_1 | d_2 | ... | d_r of an integer matrix."""
    diag, _ = smith_form(A)
    return tuple(diag)


def hermite_rows(A):
    """Row-style Hermite normal form, zero rows removed."""
    H, n = _as_rows(A)
    r = 0
    for c in range(n):
        rest = [i for i in range(r, len(H)) if H[i][c]]
        if not rest:
            continue
        while len(rest) > 1:
            i = min(rest, key=lambda i: abs(H[i][c]))
            for k in rest:
                if k != i:
                    t = H[k][c] // H[i][c]
                    H[k] = [a - t * b for a, b in zip(H[k], H[i])]
            rest = [k for k in rest if H[k][c]]
        i = rest[0]
        H[r], H[i] = H[i], H[r]
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
        for k in range(r):
            t = H[k][c] // H[r][c]
            if t:
                H[k] = [a - t * b for a, b in zip(H[k], H[r])]
        r += 1
    return [row for row in H[:r]]


def saturation_basis(A):
    """Basis of the saturation of the row lattice of A, and its index.

    Returns (basis, N) where basis (in Hermite form) spans
    {v : k v in L for some k >= 1} and N = [saturation : L].
    """
    diag, Vinv = smith_form(A)
    basis = hermite_rows(Vinv[: len(diag)]) if diag else []
    _, n = _as_rows(A)
    return IntMatrix.of(basis, n), prod(diag)


def is_saturated(A):
    return all(d == 1 for d in smith_invariants(A))

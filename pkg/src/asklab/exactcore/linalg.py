"""Linear algebra over F_q: ranks (batched) and matrix inverses."""

from dataclasses import dataclass

import numpy as np

from asklab.exactcore.fields import FiniteField, field_for


def batch_rank(F, A):
    """Ranks of a stack of matrices over F.

    A has shape (B, r, c) and holds field codes.  Gaussian elimination runs
    column by column on all B matrices at once; the pivot in each column is
    the smallest admissible row index.
    """
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 3:
        raise ValueError("expected an array of shape (B, rows, cols)")
    B, R, C = A.shape
    rank = np.zeros(B, dtype=np.int64)
    if B == 0 or R == 0 or C == 0:
        return rank
    rows = np.arange(R)
    for c in range(C):
        live = np.nonzero(rank < R)[0]
        if live.size == 0:
            break
        sub = A[live]
        rk = rank[live]
        cand = (sub[:, :, c] != 0) & (rows[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        live = live[has]
        sub = sub[has]
        rk = rk[has]
        piv = cand[has].argmax(axis=1)
        n = np.arange(live.size)
        # move the pivot row into position rk
        prow = sub[n, piv].copy()
        sub[n, piv] = sub[n, rk]
        prow = F.mul(F.inv(prow[:, c])[:, None], prow)
        sub[n, rk] = prow
        # clear column c below the pivot
        below = rows[None, :] > rk[:, None]
        factors = np.where(below, sub[:, :, c], 0)
        sub = F.sub(sub, F.mul(factors[:, :, None], prow[:, None, :]))
        A[live] = sub
        rank[live] += 1
    return rank


def rank(F, A):
    """Rank of a single matrix over F."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return int(batch_rank(F, A[None])[0])


def batch_inverse(F, A):
    """Inverses of a stack of invertible square matrices (B, n, n)."""
    A = np.asarray(A, dtype=np.int64)
    B, n, _ = A.shape
    aug = np.concatenate([A, np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n))], axis=2)
    idx = np.arange(B)
    for c in range(n):
        cand = aug[:, c:, c] != 0
        if not cand.any(axis=1).all():
            raise ZeroDivisionError("singular matrix in batch_inverse")
        piv = cand.argmax(axis=1) + c
        prow = aug[idx, piv].copy()
        aug[idx, piv] = aug[idx, c]
        prow = F.mul(F.inv(prow[:, c])[:, None], prow)
        aug[idx, c] = prow
        factors = aug[:, :, c].copy()
        factors[:, c] = 0
        aug = F.sub(aug, F.mul(factors[:, :, None], prow[:, None, :]))
    return aug[:, :, n:]


@dataclass(frozen=True, eq=False)
class FqMatrix:
    """A matrix of field codes tied to its field."""

    field: FiniteField
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int64)
        if entries.ndim != 2:
            raise ValueError("FqMatrix entries must be 2-d")
        if entries.size and (entries.min() < 0 or entries.max() >= self.field.q):
            raise ValueError("entries are not codes of this field")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_ints(cls, q, rows):
        F = field_for(q)
        return cls(F, F.from_int(np.array(rows, dtype=object)))

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @property
    def T(self):
        return FqMatrix(self.field, self.entries.T)

    def rank(self):
        return rank(self.field, self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and np.array_equal(self.entries, other.entries)
        )


def fq_rank(A):
    """Rank of an FqMatrix.  The left kernel has q**(rows - rank) elements."""
    return A.rank()

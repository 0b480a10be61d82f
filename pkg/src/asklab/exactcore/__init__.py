"""Finite fields, linear algebra over F_q and integer normal forms."""

from asklab.exactcore.fields import (
    FiniteField,
    PrimePower,
    as_prime_power,
    field_for,
    is_prime,
    make_field,
    smallest_irreducible,
)
from asklab.exactcore.linalg import FqMatrix, batch_inverse, batch_rank, fq_rank, rank
from asklab.exactcore.normalforms import (
    IntMatrix,
    hermite_rows,
    is_saturated,
    rank_q,
    saturation_basis,
    smith_form,
    smith_invariants,
)

__all__ = [
    "FiniteField",
    "FqMatrix",
    "IntMatrix",
    "PrimePower",
    "as_prime_power",
    "batch_inverse",
    "batch_rank",
    "field_for",
    "fq_rank",
    "hermite_rows",
    "is_prime",
    "is_saturated",
    "make_field",
    "rank",
    "rank_q",
    "saturation_basis",
    "smallest_irreducible",
    "smith_form",
    "smith_invariants",
]

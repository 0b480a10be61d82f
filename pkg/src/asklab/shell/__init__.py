"""Command line, file formats, point counts, decomposition pipeline and the verification battery."""

from asklab.shell.pipeline import (
    BBDecomposition,
    hm_combination,
    load_decomposition,
    mth_power_identities,
    theorem_a_check,
)
from asklab.shell.report import CheckRecord, VerificationReport
from asklab.shell.schemes import AffineScheme, affine_count, affine_space, load_scheme, product_scheme

__all__ = [
    "AffineScheme",
    "BBDecomposition",
    "CheckRecord",
    "VerificationReport",
    "affine_count",
    "affine_space",
    "hm_combination",
    "load_decomposition",
    "load_scheme",
    "mth_power_identities",
    "product_scheme",
    "theorem_a_check",
]

"""Exact computations around average sizes of kernels and unipotent group counts."""

__version__ = "0.1.0"

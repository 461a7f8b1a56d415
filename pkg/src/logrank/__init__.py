"""Exact structural ranks, determinantal representations, multiplicative
relations, Siegel-lemma kernels and p-adic logarithms, with certificates."""

__version__ = "0.1.0"

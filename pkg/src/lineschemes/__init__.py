"""Exact point schemes and line schemes of quadratic algebras on four generators."""

__version__ = "0.1.0"

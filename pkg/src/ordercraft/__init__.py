"""Sparse elimination orderings: fill, FLOPs, exact search, arrangements and reductions."""

__version__ = "0.1.0"

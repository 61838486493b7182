"""Exact (inv, maj) generating functions on permutations and their CLT behavior."""

__version__ = "0.1.0"

"""Exact computations with braid varieties, weave diagrams, toric charts,
finite-field point counts, and weave-derived cluster coordinates."""

__version__ = "0.1.0"

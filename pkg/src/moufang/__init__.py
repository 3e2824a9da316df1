"""Exact-arithmetic models of generalized polygons and flag buildings, with
the epimorphisms induced by field valuations."""

__version__ = "0.1.0"

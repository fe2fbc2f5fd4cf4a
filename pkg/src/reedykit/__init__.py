"""Exact computations with enriched Reedy categories over rational chain complexes."""

__version__ = "0.1.0"

"""Exact path homology of digraphs and its Borel-type equivariant version."""

__version__ = "0.1.0"

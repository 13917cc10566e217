"""Quasirandom graph properties: subgraph counts, count-based defects,
regularity witnesses and the two-block template expansion."""

from .graph import Graph, VertexSet
from .patterns import Pattern, get_pattern

__version__ = "0.1.0"

__all__ = ["Graph", "VertexSet", "Pattern", "get_pattern", "__version__"]

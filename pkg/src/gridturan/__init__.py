"""Executable constructions around the Turan number of grids and T x P_t products."""

from gridturan.errors import (
    BudgetExceeded,
    GraphFormatError,
    GridTuranError,
    PreconditionError,
    ResourceLimitError,
)
from gridturan.graph import (
    DegreeStats,
    Graph,
    codegree,
    degree_stats,
    edge_density_alpha,
    format_graph,
    parse_graph,
    peel_min_degree,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DegreeStats",
    "Graph",
    "GraphFormatError",
    "GridTuranError",
    "PreconditionError",
    "ResourceLimitError",
    "codegree",
    "degree_stats",
    "edge_density_alpha",
    "format_graph",
    "parse_graph",
    "peel_min_degree",
]

"""Densest subgraph discovery under edge, clique and pattern density."""

from .coredecomp import CoreDecomposition, decompose, extract_core
from .densest import (
    Density,
    DsResult,
    core_approx,
    core_exact_cds,
    core_exact_pds,
    exact_cds,
    exact_pds,
    inc_approx,
    peel_approx,
    solve,
)
from .graph import Graph, GraphParseError, load_edge_list
from .oracle import OracleLimit, OracleRefused, brute_force_count, brute_force_densest
from .pattern import Pattern, PatternError, parse_pattern

__all__ = [
    "CoreDecomposition", "Density", "DsResult", "Graph", "GraphParseError",
    "OracleLimit", "OracleRefused", "Pattern", "PatternError",
    "brute_force_count", "brute_force_densest", "core_approx", "core_exact_cds",
    "core_exact_pds", "decompose", "exact_cds", "exact_pds", "extract_core",
    "inc_approx", "load_edge_list", "parse_pattern", "peel_approx", "solve",
]

"""Exact generic rigidity, equilibrium stresses and maximum likelihood threshold bounds for small graphs."""
from __future__ import annotations

from .graph import Graph, complete_bipartite, complete_graph, parse_edge_list, parse_graph6
from .mlt import MltReport, grn_star, mlt_bounds
from .rigidity import Framework, find_circuit, gcr, generic_rank, is_circuit, is_d_independent, is_d_rigid
from .stress import circuit_psd_witness, global_rigidity_test, stress_basis, stress_matrix

__version__ = "0.1.0"

__all__ = [
    "Framework",
    "Graph",
    "MltReport",
    "circuit_psd_witness",
    "complete_bipartite",
    "complete_graph",
    "find_circuit",
    "gcr",
    "generic_rank",
    "global_rigidity_test",
    "grn_star",
    "is_circuit",
    "is_d_independent",
    "is_d_rigid",
    "mlt_bounds",
    "parse_edge_list",
    "parse_graph6",
    "stress_basis",
    "stress_matrix",
]

"""Optimal leaf roots of trivially perfect graphs."""
from .construct import LeafRootResult, optimal_leaf_root, recognize_k_leaf_power, rho
from .cotree import Cotree, build_cotree, cotree_to_graph
from .graph import Graph, NotTPGError, is_trivially_perfect, parse_graph, write_graph
from .wtree import CompressedTree, TreeMeta, compute_meta

__all__ = [
    "CompressedTree",
    "Cotree",
    "Graph",
    "LeafRootResult",
    "NotTPGError",
    "TreeMeta",
    "build_cotree",
    "compute_meta",
    "cotree_to_graph",
    "is_trivially_perfect",
    "optimal_leaf_root",
    "parse_graph",
    "recognize_k_leaf_power",
    "rho",
    "write_graph",
]

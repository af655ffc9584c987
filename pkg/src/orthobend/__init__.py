"""Bend-minimal orthogonal representations of plane series-parallel 4-graphs."""

from .bend_budgets import Annotations, bottom_up
from .pipeline import minimize, prepare
from .plane_graph import GraphError, PlaneGraph, parse_plane_graph
from .representation import OrthogonalRepresentation, check_representation
from .spq_tree import SpqTree, build_spq_tree

__all__ = [
    "Annotations",
    "GraphError",
    "OrthogonalRepresentation",
    "PlaneGraph",
    "SpqTree",
    "bottom_up",
    "build_spq_tree",
    "check_representation",
    "minimize",
    "parse_plane_graph",
    "prepare",
]

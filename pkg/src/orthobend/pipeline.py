"""Glue from a plane graph to its tree, annotations and bend-minimal representation."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Optional

from .bend_budgets import Annotations, bottom_up
from .plane_graph import GraphError, PlaneGraph, dummy_candidates
from .spq_tree import SpqTree, build_spq_tree

# Augmentation tries at most this many dummy placements when minimizing.
MAX_DUMMY_CANDIDATES = 64


@dataclass
class Prepared:
    """A graph ready for the tree algorithms.

    Attributes:
        original: The input graph.
        graph: The graph the tree is built on (with the dummy edge, if any).
        tree: Its SPQ*-tree.
        dummy: Whether ``graph`` carries an augmentation edge.
    """

    original: PlaneGraph
    graph: PlaneGraph
    tree: SpqTree
    dummy: bool


def _candidates(g: PlaneGraph, ref: Optional[int]):
    if g.is_biconnected():
        yield Prepared(g, g, build_spq_tree(g, ref), False)
        return
    for h in dummy_candidates(g):
        try:
            t = build_spq_tree(h, h.default_reference())
        except GraphError:
            continue
        yield Prepared(g, h, t, True)


def prepare(g: PlaneGraph, ref: Optional[int] = None) -> Prepared:
    """Build the tree, adding one dummy edge when ``g`` is not biconnected.

    Raises:
        GraphError: If no tree can be built.
    """
    for p in _candidates(g, ref):
        return p
    raise GraphError("no dummy edge on the external face makes the graph two-terminal series-parallel")


def prepare_all(g: PlaneGraph, ref: Optional[int] = None,
                limit: int = MAX_DUMMY_CANDIDATES) -> list[Prepared]:
    """Every usable preparation, one per dummy placement (at most ``limit``)."""
    out = list(islice(_candidates(g, ref), limit))
    if not out:
        raise GraphError("no dummy edge on the external face makes the graph two-terminal series-parallel")
    return out


@dataclass
class Minimized:
    """Result of bend minimization.

    Attributes:
        prepared: The preparation that produced the optimum.
        ann: Bottom-up annotations of its tree.
        bends: Minimum number of bends of the input graph.
        rep: Representation of the input graph.
        work_rep: Representation of the working graph (with the dummy edge).
        build: The builder's bookkeeping for ``work_rep``.
    """

    prepared: Prepared
    ann: Annotations
    bends: int
    rep: object
    work_rep: object
    build: object


def budget(g: PlaneGraph, ref: Optional[int] = None) -> tuple[Prepared, Annotations]:
    """Best preparation and its annotations (fewest total bends)."""
    best = None
    for p in prepare_all(g, ref, 1 if g.is_biconnected() else MAX_DUMMY_CANDIDATES):
        ann = bottom_up(p.tree)
        if best is None or ann.total < best[1].total:
            best = (p, ann)
    return best


def minimize(g: PlaneGraph, ref: Optional[int] = None, rng=None) -> Minimized:
    """Bend-minimal representation of ``g`` preserving its embedding."""
    from .representation_builder import build_representation, trivial_representation

    if g.m < 2:
        h = trivial_representation(g)
        return Minimized(None, None, 0, h, h, None)
    p, ann = budget(g, ref)
    res = build_representation(p.tree, ann, rng=rng)
    return Minimized(p, ann, ann.total, res.original_rep, res.rep, res)

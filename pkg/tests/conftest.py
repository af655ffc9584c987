"""Shared graph builders for the test suite."""

from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from orthobend.plane_graph import PlaneGraph, build_graph, parse_plane_graph

sys.path.insert(0, os.path.dirname(__file__))

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def cycle(k: int, side: str = "right") -> PlaneGraph:
    """Cycle on vertices 0..k-1 with edge i joining i and i+1."""
    edges = [(i, i, (i + 1) % k) for i in range(k)]
    rot = {i: [(i - 1) % k, i] for i in range(k)}
    return build_graph(range(k), edges, rot, (0, side))


def path(k: int) -> PlaneGraph:
    """Path with ``k`` edges on vertices 0..k."""
    edges = [(i, i, i + 1) for i in range(k)]
    rot = {0: [0], k: [k - 1]}
    for i in range(1, k):
        rot[i] = [i - 1, i]
    return build_graph(range(k + 1), edges, rot, (0, "right"))


def single_edge() -> PlaneGraph:
    return build_graph([0, 1], [(0, 0, 1)], {0: [0], 1: [0]}, (0, "right"))


def theta(lengths: list[int]) -> PlaneGraph:
    """Parallel paths of the given lengths between poles 0 and 1, left to right."""
    verts = [0, 1]
    edges = []
    rot = {0: [], 1: []}
    firsts, lasts = [], []
    for ln in lengths:
        prev = 0
        for j in range(ln):
            nxt = 1 if j == ln - 1 else len(verts)
            if nxt != 1:
                verts.append(nxt)
                rot[nxt] = []
            e = len(edges)
            edges.append((e, prev, nxt))
            if prev == 0:
                firsts.append(e)
            else:
                rot[prev].append(e)
            if nxt == 1:
                lasts.append(e)
            else:
                rot[nxt].insert(0, e)
            prev = nxt
    rot[0] = firsts
    rot[1] = lasts[::-1]
    return build_graph(verts, edges, rot, (firsts[0], "left"))


def golden() -> PlaneGraph:
    return parse_plane_graph((DATA / "golden11.json").read_text())


@pytest.fixture
def golden_graph() -> PlaneGraph:
    return golden()


class _TermBuilder:
    """Embeds SP terms: ("Q", length), ("S", [terms]), ("P", [terms left to right])."""

    def __init__(self) -> None:
        self.rot: dict[int, list[int]] = {}
        self.edges: list[tuple[int, int, int]] = []

    def vertex(self) -> int:
        v = len(self.rot)
        self.rot[v] = []
        return v

    def edge(self, a: int, b: int) -> int:
        e = len(self.edges)
        self.edges.append((e, a, b))
        return e

    def embed(self, term, a: int, b: int) -> tuple[list[int], list[int]]:
        """Embed ``term`` between a and b; return its edge blocks at a and at b.

        Blocks are listed clockwise at ``a`` and clockwise at ``b``.
        """
        kind, body = term
        if kind == "Q":
            vs = [a] + [self.vertex() for _ in range(body - 1)] + [b]
            es = [self.edge(vs[i], vs[i + 1]) for i in range(body)]
            for i in range(1, len(vs) - 1):
                self.rot[vs[i]] = [es[i], es[i - 1]]
            return [es[0]], [es[-1]]
        if kind == "P":
            blocks = [self.embed(c, a, b) for c in body]
            return (sum((x[0] for x in blocks), []),
                    sum((x[1] for x in reversed(blocks)), []))
        xs = [a] + [self.vertex() for _ in range(len(body) - 1)] + [b]
        blocks = [self.embed(c, xs[i], xs[i + 1]) for i, c in enumerate(body)]
        for i in range(1, len(xs) - 1):
            self.rot[xs[i]] = blocks[i][0] + blocks[i - 1][1]
        return blocks[0][0], blocks[-1][1]


def sp_graph(term) -> PlaneGraph:
    """Graph of ``term`` closed by a reference edge 0 -> 1 on its right."""
    b = _TermBuilder()
    s, t = b.vertex(), b.vertex()
    ref = b.edge(s, t)
    at_s, at_t = b.embed(term, s, t)
    b.rot[s] = at_s + [ref]
    b.rot[t] = [ref] + at_t
    return build_graph(sorted(b.rot), b.edges, b.rot, (ref, "right"), reference=ref)


def Qn(k: int):
    return ("Q", k)


def Sn(*children):
    return ("S", list(children))


def Pn(*children):
    return ("P", list(children))

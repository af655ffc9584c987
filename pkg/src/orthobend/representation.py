"""Orthogonal representations: angle labels per corner and bend strings per edge.

Angles are stored in units of 90 degrees, one value per slot (see
``plane_graph``). A bend string lists turns met when walking the edge from
its first endpoint to its second one: ``R`` is a right turn, ``L`` a left
turn.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .plane_graph import PlaneGraph

_SWAP = str.maketrans("LR", "RL")


def reverse_bends(bends: str) -> str:
    """Bend string of the opposite traversal direction."""
    return bends[::-1].translate(_SWAP)


def bend_turns(bends: str) -> int:
    """Right turns minus left turns of a bend string."""
    return bends.count("R") - bends.count("L")


@dataclass
class OrthogonalRepresentation:
    """Angle labeling of a plane graph plus bend strings.

    Attributes:
        g: The plane graph.
        angles: Per vertex, one angle (units of 90 degrees) per slot.
        bends: Per edge, the bend string in stored direction.
    """

    g: PlaneGraph
    angles: list[list[int]]
    bends: list[str]

    def copy(self) -> "OrthogonalRepresentation":
        return OrthogonalRepresentation(self.g, [list(a) for a in self.angles], list(self.bends))

    def total_bends(self, include_dummy: bool = False) -> int:
        g = self.g
        return sum(len(b) for e, b in enumerate(self.bends) if include_dummy or not g.dummy[e])

    def dart_turns(self, d: int) -> int:
        """Turns contributed by the bends of dart ``d`` (right minus left)."""
        t = bend_turns(self.bends[d >> 1])
        return -t if d & 1 else t

    def right_angle(self, w: int, e_in: int, e_out: int) -> int:
        """Angle units on the right when passing ``w`` from ``e_in`` to ``e_out``."""
        g = self.g
        deg = len(g.rot[w])
        i = g.pos(e_out, w)
        j = g.pos(e_in, w)
        a = self.angles[w]
        total = 0
        while True:
            total += a[i]
            i = (i + 1) % deg
            if i == j:
                return total

    def face_sum(self, f: int) -> int:
        """Right turns minus left turns around face ``f`` (corners and bends)."""
        g = self.g
        s = 0
        for d in g.faces[f]:
            h, i = g.corner_slot(d)
            s += 2 - self.angles[h][i] + self.dart_turns(d)
        return s

    def check(self) -> tuple[bool, list[str]]:
        """Validate H1 (360 degrees per vertex) and H2 (face turn sums)."""
        g = self.g
        bad: list[str] = []
        for v in range(g.n):
            a = self.angles[v]
            if len(a) != g.degree(v):
                bad.append(f"H1: vertex {g.vertex_names[v]!r} has {len(a)} angles for degree {g.degree(v)}")
                continue
            if any(x < 1 or x > 4 for x in a):
                bad.append(f"H1: vertex {g.vertex_names[v]!r} has an angle outside 90..360")
            if g.degree(v) and sum(a) != 4:
                bad.append(f"H1: angles at vertex {g.vertex_names[v]!r} sum to {90 * sum(a)}")
        for e, b in enumerate(self.bends):
            if any(c not in "LR" for c in b):
                bad.append(f"bend string of edge {g.edge_names[e]!r} is malformed")
        if g.m:
            for f in range(len(g.faces)):
                want = -4 if f == g.external_face else 4
                got = self.face_sum(f)
                if got != want:
                    bad.append(f"H2: face {f} has turn sum {got}, expected {want}")
        return not bad, bad

    def to_dict(self) -> dict[str, Any]:
        g = self.g
        verts = []
        for v in range(g.n):
            verts.append({
                "id": g.vertex_names[v],
                "angles": [
                    {"from": g.edge_names[g.rot[v][i]],
                     "to": g.edge_names[g.rot[v][(i + 1) % len(g.rot[v])]],
                     "degrees": 90 * a}
                    for i, a in enumerate(self.angles[v])
                ],
            })
        edges = [{"id": g.edge_names[e], "u": g.vertex_names[g.eu[e]], "v": g.vertex_names[g.ev[e]],
                  "bends": self.bends[e], "subdivisions": len(self.bends[e])}
                 for e in range(g.m)]
        return {"vertices": verts, "edges": edges, "total_bends": self.total_bends()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check_representation(h: OrthogonalRepresentation) -> tuple[bool, list[str]]:
    """True iff H1 and H2 hold; otherwise the list of violations."""
    return h.check()

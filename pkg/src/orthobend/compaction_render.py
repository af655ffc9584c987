"""Grid coordinates for an orthogonal representation, plus SVG and JSON output.

Compaction works on a port graph: every vertex has four ports (N, E, S, W)
and each edge segment leaves its endpoints through opposite ports. Bends are
turned into vertices, the drawing is enclosed in a frame joined by one
bridge, every face is cut into rectangles, and coordinates come from
longest paths over the classes of vertically (horizontally) aligned
vertices.
"""

from __future__ import annotations

import bisect
import json
from collections import deque
from dataclasses import dataclass
from typing import Any

from .representation import OrthogonalRepresentation

N, E, S, W = 0, 1, 2, 3
_STEP = {N: (0, 1), E: (1, 0), S: (0, -1), W: (-1, 0)}


class CompactionError(RuntimeError):
    """The representation could not be realized (invalid input or a bug)."""


@dataclass
class GridDrawing:
    """Integer grid drawing.

    Attributes:
        vertex_names: Names of the original vertices.
        edge_names: Names of the original edges.
        pos: Per vertex, its (x, y) point; y grows upward.
        polylines: Per edge, points from its first to its second endpoint;
            interior points are exactly the bends.
    """

    vertex_names: list[Any]
    edge_names: list[Any]
    pos: list[tuple[int, int]]
    polylines: list[list[tuple[int, int]]]

    @property
    def bend_count(self) -> int:
        return sum(len(p) - 2 for p in self.polylines)

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": n, "x": p[0], "y": p[1]} for n, p in zip(self.vertex_names, self.pos)],
            "edges": [{"id": n, "points": [list(q) for q in pl]}
                      for n, pl in zip(self.edge_names, self.polylines)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _PortGraph:
    """Vertices with four ports; edges oriented ``a -> b`` along ``dir``."""

    def __init__(self) -> None:
        self.port: list[list[int]] = []
        self.ea: list[int] = []
        self.eb: list[int] = []
        self.edir: list[int] = []
        self.label: list[int] = []

    def add_vertex(self) -> int:
        self.port.append([-1, -1, -1, -1])
        return len(self.port) - 1

    def add_edge(self, a: int, b: int, d: int, label: int) -> int:
        k = len(self.ea)
        if self.port[a][d] != -1 or self.port[b][(d + 2) % 4] != -1:
            raise CompactionError("port already in use")
        self.ea.append(a)
        self.eb.append(b)
        self.edir.append(d)
        self.label.append(label)
        self.port[a][d] = k
        self.port[b][(d + 2) % 4] = k
        return k

    def split(self, k: int) -> int:
        """Insert a vertex in the middle of edge ``k``; returns it."""
        a, b, d = self.ea[k], self.eb[k], self.edir[k]
        z = self.add_vertex()
        self.eb[k] = z
        self.port[z][(d + 2) % 4] = k
        self.port[b][(d + 2) % 4] = -1
        self.add_edge(z, b, d, self.label[k])
        return z

    def other(self, k: int, v: int) -> int:
        return self.eb[k] if self.ea[k] == v else self.ea[k]

    def next_corner(self, v: int, d_out: int) -> tuple[int, int, int]:
        """Follow the port ``d_out`` of ``v``; return (head, turn, next out port)."""
        k = self.port[v][d_out]
        h = self.other(k, v)
        back = (d_out + 2) % 4
        for turn, nd in ((1, (d_out + 1) % 4), (0, d_out), (-1, (d_out + 3) % 4)):
            if self.port[h][nd] != -1:
                return h, turn, nd
        return h, -2, back


def _directions(h: OrthogonalRepresentation) -> list[int]:
    """Direction of every dart ``2e`` (first endpoint to second, first segment)."""
    g = h.g
    dart_dir = [-1] * (2 * g.m)
    if g.m == 0:
        return dart_dir
    dart_dir[0] = E
    queue = deque([0])
    while queue:
        d0 = queue.popleft()
        # Leaving direction at the tail fixes all other darts at the tail.
        e = d0 >> 1
        v = g.ev[e] if d0 & 1 else g.eu[e]
        r = g.rot[v]
        i0 = g.pos(e, v)
        cur = dart_dir[d0]
        for step in range(len(r)):
            i = (i0 + step) % len(r)
            e2 = r[i]
            d2 = g.dart_from(e2, v)
            if dart_dir[d2] == -1:
                dart_dir[d2] = cur
                queue.append(d2)
            elif dart_dir[d2] != cur:
                raise CompactionError("angles are inconsistent around a vertex")
            cur = (cur + h.angles[v][i]) % 4
        # The far end of each dart: the reverse dart leaves the head.
        for e2 in r:
            d2 = g.dart_from(e2, v)
            b = h.bends[e2] if not d2 & 1 else h.bends[e2][::-1].translate(str.maketrans("LR", "RL"))
            dd = dart_dir[d2]
            for c in b:
                dd = (dd + (1 if c == "R" else 3)) % 4
            rev = d2 ^ 1
            want = (dd + 2) % 4
            if dart_dir[rev] == -1:
                dart_dir[rev] = want
                queue.append(rev)
            elif dart_dir[rev] != want:
                raise CompactionError("bends are inconsistent with the angles")
    return dart_dir


def _port_graph(h: OrthogonalRepresentation) -> tuple[_PortGraph, list[int]]:
    g = h.g
    dirs = _directions(h)
    pg = _PortGraph()
    for _ in range(g.n):
        pg.add_vertex()
    for e in range(g.m):
        a, b = g.eu[e], g.ev[e]
        d = dirs[2 * e]
        cur = a
        for c in h.bends[e]:
            w = pg.add_vertex()
            pg.add_edge(cur, w, d, e)
            d = (d + (1 if c == "R" else 3)) % 4
            cur = w
        pg.add_edge(cur, b, d, e)
    return pg, dirs


def _faces(pg: _PortGraph) -> list[list[tuple[int, int, int]]]:
    """Faces as cyclic lists of corners (vertex, turn, out port)."""
    seen = set()
    faces = []
    for v in range(len(pg.port)):
        for d in range(4):
            if pg.port[v][d] == -1 or (v, d) in seen:
                continue
            face = []
            cv, cd = v, d
            while (cv, cd) not in seen:
                seen.add((cv, cd))
                h, turn, nd = pg.next_corner(cv, cd)
                face.append((h, turn, nd))
                cv, cd = h, nd
            faces.append(face)
    return faces


def _add_frame(pg: _PortGraph, h: OrthogonalRepresentation) -> None:
    """Enclose the drawing in a rectangle joined by one bridge edge."""
    faces = _faces(pg)
    ext = None
    for f in faces:
        if sum(t for _, t, _ in f) == -4:
            ext = f
            break
    if ext is None:
        raise CompactionError("no face with turn sum -4")
    # A corner of at least 180 degrees leaves room for the bridge.
    for v, turn, d_out in ext:
        if turn <= 0:
            break
    else:
        raise CompactionError("external face without a reflex or flat corner")
    dd = (d_out + 1) % 4
    while pg.port[v][dd] != -1:
        dd = (dd + 1) % 4
    z = pg.add_vertex()
    pg.add_edge(v, z, dd, -1)
    c = [pg.add_vertex() for _ in range(4)]
    pg.add_edge(z, c[0], (dd + 1) % 4, -1)
    pg.add_edge(c[0], c[1], (dd + 2) % 4, -1)
    pg.add_edge(c[1], c[2], (dd + 3) % 4, -1)
    pg.add_edge(c[2], c[3], dd % 4, -1)
    pg.add_edge(c[3], z, (dd + 1) % 4, -1)


def _rectangulate(pg: _PortGraph) -> None:
    """Cut every internal face into rectangles."""
    for face in _faces(pg):
        total = sum(t for _, t, _ in face)
        if total == -4:
            continue
        seq = [[v, t, d] for v, t, d in face if t != 0]
        stalled = 0
        while any(c[1] < 0 for c in seq):
            stack: list[list[int]] = []
            changed = False
            for c in seq:
                stack.append(c)
                while (len(stack) >= 3 and stack[-3][1] < 0
                       and stack[-2][1] == 1 and stack[-1][1] == 1):
                    r, _, b = stack[-3], stack[-2], stack[-1]
                    z = pg.split(pg.port[b[0]][b[2]])
                    nd = (r[2] + 1) % 4
                    pg.add_edge(r[0], z, nd, -1)
                    del stack[-2:]
                    r[1] += 1
                    r[2] = nd
                    if r[1] == 0:
                        stack.pop()
                    # The split point is a convex corner of the remainder.
                    stack.append([z, 1, b[2]])
                    changed = True
            seq = stack
            if not changed:
                stalled += 1
                if stalled > len(seq) + 1:
                    raise CompactionError("face cannot be rectangulated")
            seq = seq[1:] + seq[:1]


def _longest_path(n: int, classes: list[int], arcs: list[tuple[int, int]]) -> list[int]:
    succ: dict[int, list[int]] = {}
    indeg: dict[int, int] = {c: 0 for c in set(classes)}
    for a, b in arcs:
        succ.setdefault(a, []).append(b)
        indeg[b] += 1
    level = {c: 0 for c in indeg}
    queue = deque(sorted(c for c, k in indeg.items() if k == 0))
    done = 0
    while queue:
        a = queue.popleft()
        done += 1
        for b in succ.get(a, ()):
            if level[a] + 1 > level[b]:
                level[b] = level[a] + 1
            indeg[b] -= 1
            if indeg[b] == 0:
                queue.append(b)
    if done != len(indeg):
        raise CompactionError("coordinate constraints are cyclic")
    return [level[classes[v]] for v in range(n)]


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _coordinates(pg: _PortGraph) -> list[tuple[int, int]]:
    n = len(pg.port)
    coords = []
    for along in (E, N):
        parent = list(range(n))
        # Vertices joined by edges perpendicular to ``along`` share the coordinate.
        for k in range(len(pg.ea)):
            if pg.edir[k] % 2 != along % 2:
                a, b = _find(parent, pg.ea[k]), _find(parent, pg.eb[k])
                if a != b:
                    parent[a] = b
        classes = [_find(parent, v) for v in range(n)]
        arcs = []
        for k in range(len(pg.ea)):
            d = pg.edir[k]
            if d == along:
                arcs.append((classes[pg.ea[k]], classes[pg.eb[k]]))
            elif d == (along + 2) % 4:
                arcs.append((classes[pg.eb[k]], classes[pg.ea[k]]))
        coords.append(_longest_path(n, classes, arcs))
    return list(zip(coords[0], coords[1]))


def compact(h: OrthogonalRepresentation, check: bool = True) -> GridDrawing:
    """Planar grid drawing realizing ``h``.

    Raises:
        CompactionError: If ``h`` is invalid or the result has a crossing.
    """
    g = h.g
    ok, bad = h.check()
    if not ok:
        raise CompactionError("invalid representation: " + "; ".join(bad[:3]))
    if g.m == 0:
        return GridDrawing(list(g.vertex_names), [], [(0, 0)] * g.n, [])
    pg, dirs = _port_graph(h)
    _add_frame(pg, h)
    _rectangulate(pg)
    xy = _coordinates(pg)
    polylines = []
    for e in range(g.m):
        a = g.eu[e]
        pts = [xy[a]]
        cur, d = a, dirs[2 * e]
        while True:
            k = pg.port[cur][d]
            nxt = pg.other(k, cur)
            if nxt == g.ev[e] and pg.label[k] == e and nxt < g.n:
                pts.append(xy[nxt])
                break
            cur = nxt
            # Continue along the edge: the port carrying the same label.
            for nd in (d, (d + 1) % 4, (d + 3) % 4):
                k2 = pg.port[cur][nd]
                if k2 != -1 and pg.label[k2] == e:
                    if nd != d:
                        pts.append(xy[cur])
                    d = nd
                    break
            else:
                raise CompactionError("lost track of an edge while tracing")
        polylines.append(_dedupe(pts))
    d = GridDrawing(list(g.vertex_names), list(g.edge_names), [xy[v] for v in range(g.n)], polylines)
    d = _normalize(d)
    if check:
        problems = drawing_problems(d, h)
        if problems:
            raise CompactionError("; ".join(problems[:3]))
    return d


def _dedupe(pts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    return out


def _normalize(d: GridDrawing) -> GridDrawing:
    pts = list(d.pos) + [p for pl in d.polylines for p in pl]
    x0 = min(p[0] for p in pts)
    y0 = min(p[1] for p in pts)
    pos = [(x - x0, y - y0) for x, y in d.pos]
    pls = [[(x - x0, y - y0) for x, y in pl] for pl in d.polylines]
    return GridDrawing(d.vertex_names, d.edge_names, pos, pls)


# --------------------------------------------------------------- validation
def _segments(d: GridDrawing):
    for e, pl in enumerate(d.polylines):
        for i in range(len(pl) - 1):
            yield e, i, pl[i], pl[i + 1]


def find_crossings(d: GridDrawing, g=None) -> list[str]:
    """Improper contacts between segments, found by a sweep over x.

    Two segments may only meet at a shared endpoint that is either a common
    vertex of their edges or the bend joining consecutive segments of one
    edge.
    """
    vertex_at = {}
    for v, p in enumerate(d.pos):
        vertex_at.setdefault(p, []).append(v)
    problems = [f"vertices {vs} share point {p}" for p, vs in vertex_at.items() if len(vs) > 1]
    ends = None
    if g is not None:
        ends = [(g.eu[e], g.ev[e]) for e in range(g.m)]
    segs = list(_segments(d))
    nseg = [len(pl) - 1 for pl in d.polylines]

    def allowed(s1, s2, p) -> bool:
        e1, i1, a1, b1 = s1
        e2, i2, a2, b2 = s2
        if p not in (a1, b1) or p not in (a2, b2):
            return False
        if e1 == e2:
            return abs(i1 - i2) == 1
        vs = vertex_at.get(p)
        if not vs:
            return False
        if ends is None:
            return True
        v = vs[0]
        first1 = (p == a1 and i1 == 0) or (p == b1 and i1 == nseg[e1] - 1)
        first2 = (p == a2 and i2 == 0) or (p == b2 and i2 == nseg[e2] - 1)
        return first1 and first2 and v in ends[e1] and v in ends[e2]

    horiz = [s for s in segs if s[2][1] == s[3][1] and s[2] != s[3]]
    vert = [s for s in segs if s[2][0] == s[3][0] and s[2] != s[3]]
    # Collinear overlaps.
    for group, key, coord in ((horiz, 1, 0), (vert, 0, 1)):
        lines: dict[int, list] = {}
        for s in group:
            lo, hi = sorted((s[2][coord], s[3][coord]))
            lines.setdefault(s[2][key], []).append((lo, hi, s))
        for c, items in lines.items():
            items.sort(key=lambda t: (t[0], t[1]))
            reach = None
            for lo, hi, s in items:
                if reach is not None and lo <= reach[0]:
                    p = [0, 0]
                    p[key], p[coord] = c, lo
                    if lo < reach[0] or not allowed(reach[1], s, tuple(p)):
                        problems.append(f"overlapping segments on edges {d.edge_names[reach[1][0]]!r} "
                                        f"and {d.edge_names[s[0]]!r}")
                if reach is None or hi > reach[0]:
                    reach = (hi, s)
    # Horizontal-vertical contacts: sweep over x.
    events = []
    for s in horiz:
        x1, x2 = sorted((s[2][0], s[3][0]))
        events.append((x1, 0, s))
        events.append((x2, 2, s))
    for s in vert:
        events.append((s[2][0], 1, s))
    events.sort(key=lambda t: (t[0], t[1]))
    active_y: list[tuple[int, int]] = []
    by_id: dict[int, tuple] = {}
    for x, kind, s in events:
        sid = id(s)
        if kind == 0:
            bisect.insort(active_y, (s[2][1], sid))
            by_id[sid] = s
        elif kind == 2:
            i = bisect.bisect_left(active_y, (s[2][1], sid))
            del active_y[i]
        else:
            y1, y2 = sorted((s[2][1], s[3][1]))
            i = bisect.bisect_left(active_y, (y1, -1))
            while i < len(active_y) and active_y[i][0] <= y2:
                hs = by_id[active_y[i][1]]
                p = (x, active_y[i][0])
                if not allowed(hs, s, p):
                    problems.append(f"edges {d.edge_names[hs[0]]!r} and {d.edge_names[s[0]]!r} meet at {p}")
                i += 1
    return problems


def read_representation(d: GridDrawing, g) -> tuple[list[list[int]], list[str]]:
    """Angles and bend strings read off the geometry of ``d``."""

    def direction(p, q) -> int:
        if q[0] > p[0]:
            return E
        if q[0] < p[0]:
            return W
        return N if q[1] > p[1] else S

    out_dir = {}
    bends = []
    for e, pl in enumerate(d.polylines):
        out_dir[(e, g.eu[e])] = direction(pl[0], pl[1])
        out_dir[(e, g.ev[e])] = direction(pl[-1], pl[-2])
        s = []
        for i in range(1, len(pl) - 1):
            a, b = direction(pl[i - 1], pl[i]), direction(pl[i], pl[i + 1])
            s.append("R" if (b - a) % 4 == 1 else "L")
        bends.append("".join(s))
    angles = []
    for v in range(g.n):
        r = g.rot[v]
        if len(r) == 1:
            angles.append([4])
            continue
        a = []
        for i in range(len(r)):
            d1 = out_dir[(r[i], v)]
            d2 = out_dir[(r[(i + 1) % len(r)], v)]
            a.append((d2 - d1) % 4 or 4)
        angles.append(a)
    return angles, bends


def drawing_problems(d: GridDrawing, h: OrthogonalRepresentation) -> list[str]:
    """Everything wrong with ``d`` as a realization of ``h``."""
    g = h.g
    problems = find_crossings(d, g)
    for e, pl in enumerate(d.polylines):
        for p, q in zip(pl, pl[1:]):
            if p[0] != q[0] and p[1] != q[1]:
                problems.append(f"edge {g.edge_names[e]!r} has a diagonal segment")
        if pl[0] != d.pos[g.eu[e]] or pl[-1] != d.pos[g.ev[e]]:
            problems.append(f"edge {g.edge_names[e]!r} does not join its endpoints")
    if problems:
        return problems
    angles, bends = read_representation(d, g)
    if bends != list(h.bends):
        problems.append("bend sequences differ from the representation")
    if [list(a) for a in h.angles] != angles:
        problems.append("vertex angles differ from the representation")
    return problems


# --------------------------------------------------------------- SVG
def emit_svg(d: GridDrawing, scale: int = 40, margin: int = 20, labels: bool = True,
             vertex_radius: int = 5, bend_size: int = 4) -> bytes:
    """Deterministic SVG: one polyline per edge, a circle per vertex, a cross per bend."""
    pts = list(d.pos) + [p for pl in d.polylines for p in pl]
    xmax = max((p[0] for p in pts), default=0)
    ymax = max((p[1] for p in pts), default=0)
    width = xmax * scale + 2 * margin
    height = ymax * scale + 2 * margin

    def tx(p) -> tuple[int, int]:
        return margin + p[0] * scale, margin + (ymax - p[1]) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<g fill="none" stroke="#222" stroke-width="2">',
    ]
    for name, pl in zip(d.edge_names, d.polylines):
        coords = " ".join(f"{x},{y}" for x, y in map(tx, pl))
        out.append(f'<polyline data-edge="{_esc(name)}" points="{coords}"/>')
    out.append("</g>")
    out.append('<g stroke="#c00" stroke-width="2">')
    for name, pl in zip(d.edge_names, d.polylines):
        for p in pl[1:-1]:
            x, y = tx(p)
            k = bend_size
            out.append(f'<path data-bend="{_esc(name)}" d="M{x - k},{y - k}L{x + k},{y + k}'
                       f'M{x - k},{y + k}L{x + k},{y - k}"/>')
    out.append("</g>")
    out.append('<g fill="#fff" stroke="#222" stroke-width="2">')
    for name, p in zip(d.vertex_names, d.pos):
        x, y = tx(p)
        out.append(f'<circle data-vertex="{_esc(name)}" cx="{x}" cy="{y}" r="{vertex_radius}"/>')
    out.append("</g>")
    if labels:
        out.append('<g font-family="monospace" font-size="11" fill="#036">')
        for name, p in zip(d.vertex_names, d.pos):
            x, y = tx(p)
            out.append(f'<text x="{x + vertex_radius + 2}" y="{y - vertex_radius - 2}">{_esc(name)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()


def _esc(x: Any) -> str:
    return str(x).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def draw(h: OrthogonalRepresentation, fmt: str = "svg") -> bytes:
    d = compact(h)
    if fmt == "json":
        return (d.to_json() + "\n").encode()
    return emit_svg(d)


__all__ = ["CompactionError", "GridDrawing", "compact", "draw", "drawing_problems", "emit_svg",
           "find_crossings", "read_representation"]

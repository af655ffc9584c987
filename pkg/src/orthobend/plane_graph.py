"""Embedded multigraph model, JSON ingestion, validation and augmentation.

Vertices and edges are stored by integer index. A dart is ``2 * e`` for the
traversal ``eu[e] -> ev[e]`` and ``2 * e + 1`` for the reverse. Rotations are
clockwise. Slot ``(v, i)`` is the wedge swept clockwise from ``rot[v][i]`` to
``rot[v][i + 1]``. A face is the cyclic sequence of darts that keep it on
their right; internal faces are therefore walked clockwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

MAX_DEGREE = 4


class GraphError(ValueError):
    """Raised for malformed or unsupported input graphs."""


@dataclass(frozen=True)
class EdgeChain:
    """A maximal path whose interior vertices have degree two.

    Attributes:
        edges: Edge indices in traversal order.
        vertices: Vertex indices along the chain, ``len(edges) + 1`` of them.
    """

    edges: tuple[int, ...]
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass
class PlaneGraph:
    """A connected plane multigraph with maximum degree four.

    Attributes:
        vertex_names: Original identifiers, indexed by vertex.
        edge_names: Original identifiers, indexed by edge.
        eu: First endpoint of each edge.
        ev: Second endpoint of each edge.
        rot: Clockwise incident edge indices per vertex.
        external_dart: A dart whose right-hand face is the external face.
        reference_edge: Optional reference edge index.
        dummy: Per-edge flag for edges added by augmentation.
    """

    vertex_names: list[Any]
    edge_names: list[Any]
    eu: list[int]
    ev: list[int]
    rot: list[list[int]]
    external_dart: int
    reference_edge: Optional[int] = None
    dummy: list[bool] = field(default_factory=list)

    # Derived data, filled by ``_derive``.
    posu: list[int] = field(default_factory=list, repr=False)
    posv: list[int] = field(default_factory=list, repr=False)
    face_of_dart: list[int] = field(default_factory=list, repr=False)
    faces: list[list[int]] = field(default_factory=list, repr=False)
    external_face: int = -1

    def __post_init__(self) -> None:
        if not self.dummy:
            self.dummy = [False] * len(self.eu)
        self._derive()

    # ------------------------------------------------------------------ basics
    @property
    def n(self) -> int:
        return len(self.vertex_names)

    @property
    def m(self) -> int:
        return len(self.eu)

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def tail(self, d: int) -> int:
        e = d >> 1
        return self.ev[e] if d & 1 else self.eu[e]

    def head(self, d: int) -> int:
        e = d >> 1
        return self.eu[e] if d & 1 else self.ev[e]

    def dart_from(self, e: int, v: int) -> int:
        """Dart of edge ``e`` leaving vertex ``v``."""
        return 2 * e if self.eu[e] == v else 2 * e + 1

    def pos(self, e: int, v: int) -> int:
        """Index of edge ``e`` in the rotation of its endpoint ``v``."""
        return self.posu[e] if self.eu[e] == v else self.posv[e]

    def other(self, e: int, v: int) -> int:
        return self.ev[e] if self.eu[e] == v else self.eu[e]

    def next_dart(self, d: int) -> int:
        """Next dart along the face on the right of ``d``."""
        e = d >> 1
        h = self.eu[e] if d & 1 else self.ev[e]
        r = self.rot[h]
        i = (self.posu[e] if d & 1 else self.posv[e]) - 1
        e2 = r[i]
        return 2 * e2 if self.eu[e2] == h else 2 * e2 + 1

    def corner_slot(self, d: int) -> tuple[int, int]:
        """Corner (vertex, slot) at the head of ``d`` inside its right face."""
        e = d >> 1
        h = self.eu[e] if d & 1 else self.ev[e]
        i = (self.posu[e] if d & 1 else self.posv[e]) - 1
        return h, i % len(self.rot[h])

    def right_face(self, d: int) -> int:
        return self.face_of_dart[d]

    def is_external(self, f: int) -> bool:
        return f == self.external_face

    # ---------------------------------------------------------------- derived
    def _derive(self) -> None:
        n, m = self.n, self.m
        if len(self.ev) != m or len(self.rot) != n or len(self.dummy) != m:
            raise GraphError("inconsistent array lengths")
        posu = [-1] * m
        posv = [-1] * m
        eu, ev = self.eu, self.ev
        for v, r in enumerate(self.rot):
            if len(r) > MAX_DEGREE:
                raise GraphError(f"vertex {self.vertex_names[v]!r} has degree {len(r)} > {MAX_DEGREE}")
            for i, e in enumerate(r):
                if not 0 <= e < m:
                    raise GraphError(f"rotation of {self.vertex_names[v]!r} names unknown edge")
                if eu[e] == v and posu[e] < 0:
                    posu[e] = i
                elif ev[e] == v and posv[e] < 0:
                    posv[e] = i
                else:
                    raise GraphError(
                        f"rotation of {self.vertex_names[v]!r} lists edge {self.edge_names[e]!r} wrongly"
                    )
        for e in range(m):
            if eu[e] == ev[e]:
                raise GraphError(f"self-loop {self.edge_names[e]!r} is not allowed")
            if posu[e] < 0 or posv[e] < 0:
                raise GraphError(f"edge {self.edge_names[e]!r} missing from a rotation")
        self.posu, self.posv = posu, posv
        face_of = [-1] * (2 * m)
        faces: list[list[int]] = []
        for d0 in range(2 * m):
            if face_of[d0] >= 0:
                continue
            fid = len(faces)
            walk = []
            d = d0
            while face_of[d] < 0:
                face_of[d] = fid
                walk.append(d)
                d = self.next_dart(d)
            if d != d0:
                raise GraphError("face trace does not close")
            faces.append(walk)
        self.face_of_dart = face_of
        self.faces = faces
        if m:
            if not 0 <= self.external_dart < 2 * m:
                raise GraphError("external face edge not found")
            self.external_face = face_of[self.external_dart]
        else:
            self.external_face = 0
        self._check_connected_and_euler()
        if self.reference_edge is not None:
            r = self.reference_edge
            if self.external_face not in (face_of[2 * r], face_of[2 * r + 1]):
                raise GraphError("reference edge does not border the external face")

    def _check_connected_and_euler(self) -> None:
        n, m = self.n, self.m
        if n == 0:
            raise GraphError("graph has no vertices")
        seen = [False] * n
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for e in self.rot[v]:
                w = self.other(e, v)
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if not all(seen):
            raise GraphError("graph is not connected")
        f = len(self.faces) if m else 1
        if n - m + f != 2:
            raise GraphError(f"Euler check failed: V - E + F = {n - m + f}")

    # ------------------------------------------------------------------ views
    def face_count(self) -> int:
        return len(self.faces) if self.m else 1

    def is_biconnected(self) -> bool:
        """True when the graph has at least two edges and no cut vertex."""
        if self.m < 2 or self.n < 2:
            return False
        return not articulation_points(self)

    def with_reference(self, ref: Optional[int]) -> "PlaneGraph":
        return PlaneGraph(
            list(self.vertex_names), list(self.edge_names), list(self.eu), list(self.ev),
            [list(r) for r in self.rot], self.external_dart, ref, list(self.dummy),
        )

    def edge_index(self, name: Any) -> int:
        key = str(name)
        for i, nm in enumerate(self.edge_names):
            if str(nm) == key:
                return i
        raise GraphError(f"unknown edge {name!r}")

    def vertex_index(self, name: Any) -> int:
        key = str(name)
        for i, nm in enumerate(self.vertex_names):
            if str(nm) == key:
                return i
        raise GraphError(f"unknown vertex {name!r}")

    def default_reference(self) -> int:
        """Dummy edge if present, else the smallest external edge id."""
        for e, flag in enumerate(self.dummy):
            if flag:
                return e
        ext = {d >> 1 for d in self.faces[self.external_face]}
        return min(ext, key=lambda e: _sort_key(self.edge_names[e]))

    # ---------------------------------------------------------- serialization
    def to_dict(self) -> dict:
        d = self.external_dart
        out: dict[str, Any] = {
            "vertices": list(self.vertex_names),
            "edges": [],
            "rotation": {str(self.vertex_names[v]): [self.edge_names[e] for e in r]
                         for v, r in enumerate(self.rot)},
            "external_face_edge": {"edge": self.edge_names[d >> 1], "side": "left" if d & 1 else "right"},
        }
        for e in range(self.m):
            rec = {"id": self.edge_names[e], "u": self.vertex_names[self.eu[e]],
                   "v": self.vertex_names[self.ev[e]]}
            if self.dummy[e]:
                rec["dummy"] = True
            out["edges"].append(rec)
        if self.reference_edge is not None:
            out["reference_edge"] = self.edge_names[self.reference_edge]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _sort_key(x: Any) -> tuple:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return (0, x, "")
    return (1, 0, str(x))


def from_dict(data: dict) -> PlaneGraph:
    """Build a validated PlaneGraph from the documented JSON structure."""
    try:
        vertices = list(data["vertices"])
        edges = list(data["edges"])
        rotation = dict(data["rotation"])
        ext = data["external_face_edge"]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph: missing {exc}") from None
    vidx: dict[str, int] = {}
    for i, v in enumerate(vertices):
        k = str(v)
        if k in vidx:
            raise GraphError(f"duplicate vertex {v!r}")
        vidx[k] = i
    eidx: dict[str, int] = {}
    eu, ev, names, dummy = [], [], [], []
    for rec in edges:
        try:
            eid, u, v = rec["id"], rec["u"], rec["v"]
        except (KeyError, TypeError):
            raise GraphError(f"malformed edge record {rec!r}") from None
        k = str(eid)
        if k in eidx:
            raise GraphError(f"duplicate edge id {eid!r}")
        if str(u) not in vidx or str(v) not in vidx:
            raise GraphError(f"edge {eid!r} has unknown endpoint")
        eidx[k] = len(names)
        names.append(eid)
        eu.append(vidx[str(u)])
        ev.append(vidx[str(v)])
        dummy.append(bool(rec.get("dummy", False)))
    rot: list[list[int]] = [[] for _ in vertices]
    for key, lst in rotation.items():
        if str(key) not in vidx:
            raise GraphError(f"rotation names unknown vertex {key!r}")
        try:
            rot[vidx[str(key)]] = [eidx[str(x)] for x in lst]
        except KeyError as exc:
            raise GraphError(f"rotation names unknown edge {exc}") from None
    try:
        e_ext = eidx[str(ext["edge"])]
        side = ext["side"]
    except (KeyError, TypeError):
        raise GraphError("external face edge not found") from None
    if side not in ("left", "right"):
        raise GraphError("external face side must be 'left' or 'right'")
    ref = data.get("reference_edge")
    ref_i = None
    if ref is not None:
        if str(ref) not in eidx:
            raise GraphError(f"unknown reference edge {ref!r}")
        ref_i = eidx[str(ref)]
    return PlaneGraph(vertices, names, eu, ev, rot,
                      2 * e_ext + (1 if side == "left" else 0), ref_i, dummy)


def parse_plane_graph(source: bytes | str) -> PlaneGraph:
    """Parse and validate a JSON-encoded plane graph."""
    try:
        data = json.loads(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise GraphError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise GraphError("malformed graph: top level must be an object")
    return from_dict(data)


def articulation_points(g: PlaneGraph) -> set[int]:
    """Cut vertices, computed by an iterative lowpoint search."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    cut: set[int] = set()
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        children = 0
        # frames: (vertex, parent edge, iterator index)
        stack = [(root, -1, 0)]
        while stack:
            v, pe, i = stack[-1]
            r = g.rot[v]
            if i < len(r):
                stack[-1] = (v, pe, i + 1)
                e = r[i]
                if e == pe:
                    continue
                w = g.other(e, v)
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        children += 1
                    stack.append((w, e, 0))
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if p != root and low[v] >= disc[p]:
                        cut.add(p)
        if children > 1:
            cut.add(root)
    return cut


def _blocks(g: PlaneGraph) -> list[set[int]]:
    """Vertex sets of the biconnected blocks (bridges included)."""
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((g.eu[e], g.ev[e]) for e in range(g.m))
    return [set(b) for b in nx.biconnected_components(h)]


def insert_edge(g: PlaneGraph, s: int, slot_s: int, t: int, slot_t: int,
                name: Any, dummy: bool, external_right: bool = True) -> PlaneGraph:
    """Return a copy of ``g`` with edge ``s -> t`` inserted into two corners.

    The new edge goes into the wedge ``slot_s`` at ``s`` and ``slot_t`` at
    ``t``. When ``external_right`` is set, the face on the right of the new
    edge traversed from ``s`` to ``t`` becomes the external face.
    """
    rot = [list(r) for r in g.rot]
    e = g.m
    rot[s].insert(slot_s + 1, e)
    rot[t].insert(slot_t + 1, e)
    ext = 2 * e if external_right else 2 * e + 1
    return PlaneGraph(list(g.vertex_names) , list(g.edge_names) + [name], list(g.eu) + [s],
                      list(g.ev) + [t], rot, ext, e if dummy else g.reference_edge,
                      list(g.dummy) + [dummy])


def external_corner(g: PlaneGraph, v: int) -> Optional[int]:
    """Slot index of the unique external-face corner at ``v``, if any."""
    found = None
    for d in g.faces[g.external_face]:
        h, i = g.corner_slot(d)
        if h == v:
            if found is not None:
                return None
            found = i
    return found


def dummy_candidates(g: PlaneGraph):
    """Yield every graph obtained from ``g`` by one external dummy edge that biconnects it.

    Candidates come in a fixed order: endpoint pairs sorted by degree, then by
    vertex name.

    Raises:
        GraphError: If the block-cut tree is not a path.
    """
    if g.m == 0:
        raise GraphError("a single vertex cannot be augmented")
    blocks = _blocks(g)
    cuts = articulation_points(g)
    if len(blocks) == 1:
        ends = [blocks[0], blocks[0]]
    else:
        count: dict[int, int] = {}
        for b in blocks:
            for c in b & cuts:
                count[c] = count.get(c, 0) + 1
        per_block = [len(b & cuts) for b in blocks]
        if any(k > 2 for k in count.values()) or any(k > 2 for k in per_block):
            raise GraphError("block-cut tree is not a path; one external edge cannot biconnect")
        ends = [b for b, k in zip(blocks, per_block) if k == 1]
        if len(ends) != 2:
            raise GraphError("block-cut tree is not a path; one external edge cannot biconnect")

    def candidates(block: set[int]) -> list[tuple[int, int]]:
        out = []
        for v in block - cuts:
            if g.degree(v) >= MAX_DEGREE:
                continue
            slot = external_corner(g, v)
            if slot is not None:
                out.append((g.degree(v), v, slot))
        out.sort(key=lambda x: (x[0], _sort_key(g.vertex_names[x[1]])))
        return [(v, slot) for _, v, slot in out]

    cs, ct = candidates(ends[0]), candidates(ends[1])
    name = "__dummy__"
    while any(str(x) == name for x in g.edge_names):
        name = "_" + name
    tried = set()
    for s, ss in cs:
        for t, st in ct:
            if s == t or (t, s) in tried:
                continue
            tried.add((s, t))
            yield insert_edge(g, s, ss, t, st, name, True)


def biconnect_augment(g: PlaneGraph, accept=None) -> tuple[PlaneGraph, bool]:
    """Make ``g`` biconnected by one dummy edge on the external face.

    Args:
        g: A connected plane graph.
        accept: Optional predicate on a candidate augmented graph; candidates
            are tried in a fixed order until one is accepted.

    Returns:
        The (possibly new) graph and whether a dummy edge was added.

    Raises:
        GraphError: If no single external edge yields an accepted graph.
    """
    if g.is_biconnected():
        return g, False
    for h in dummy_candidates(g):
        if accept is None or accept(h):
            return h, True
    raise GraphError("no dummy edge on the external face makes the graph two-terminal series-parallel")


def remove_edge(g: PlaneGraph, e: int) -> PlaneGraph:
    """Copy of ``g`` without edge ``e``; the external face is kept."""
    keep = [x for x in range(g.m) if x != e]
    remap = {x: i for i, x in enumerate(keep)}
    rot = [[remap[x] for x in r if x != e] for r in g.rot]
    ext = g.external_dart
    if ext >> 1 == e:
        # Walk to another dart of the same face.
        d = g.next_dart(ext)
        while d >> 1 == e:
            d = g.next_dart(d)
        ext = d
    ext = 2 * remap[ext >> 1] + (ext & 1)
    ref = None if g.reference_edge in (None, e) else remap[g.reference_edge]
    return PlaneGraph(list(g.vertex_names), [g.edge_names[x] for x in keep],
                      [g.eu[x] for x in keep], [g.ev[x] for x in keep], rot, ext, ref,
                      [g.dummy[x] for x in keep])


def build_graph(vertices: Iterable[Any], edges: Iterable[tuple[Any, Any, Any]],
                rotation: dict, external: tuple[Any, str], reference: Any = None) -> PlaneGraph:
    """Convenience constructor from Python values (used by fixtures and tests)."""
    data = {
        "vertices": list(vertices),
        "edges": [{"id": i, "u": u, "v": v} for i, u, v in edges],
        "rotation": {str(k): list(v) for k, v in rotation.items()},
        "external_face_edge": {"edge": external[0], "side": external[1]},
    }
    if reference is not None:
        data["reference_edge"] = reference
    return from_dict(data)

"""SPQ*-tree construction, normalization, P-node classification.

The tree is built by series and parallel reductions of ``G - e`` with the
endpoints of the reference edge ``e`` as terminals, then normalized top-down:
nested series (and non-root parallel) compositions are flattened, runs of
single edges become Q*-chains, every node is oriented from pole ``u`` to pole
``v`` and parallel children are sorted left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .plane_graph import GraphError, PlaneGraph

Q, S, P, ROOT = 0, 1, 2, 3
KIND_NAMES = {Q: "Q*", S: "S", P: "P", ROOT: "Pr"}

_RQ, _RS, _RP = 0, 1, 2


class NotSeriesParallel(GraphError):
    """The graph is not two-terminal series-parallel for the chosen terminals."""


@dataclass(frozen=True)
class PNodeType:
    """Classification of a non-root P-node.

    Coefficients are stored doubled: ``2`` means 1 and ``1`` means 1/2.
    ``d`` and ``d2`` hold the side letters used by the type name.
    """

    family: str  # "P3", "Pio2", "Pio3" or "Pin3"
    lam: int = 0
    beta: int = 0
    d: str = ""
    d2: str = ""
    k_ul: int = 0
    k_ur: int = 0
    k_vl: int = 0
    k_vr: int = 0

    @property
    def gamma(self) -> int:
        return self.lam + self.beta - 2

    @property
    def name(self) -> str:
        if self.family == "P3":
            return "P3"
        if self.family == "Pio2":
            return f"Pio2_{self.lam}{self.beta}"
        if self.family == "Pio3":
            return f"Pio3{self.d}_{self.lam}{self.beta}"
        return f"Pin3{self.d}{self.d2}"

    def coefficients(self) -> dict[str, Fraction]:
        return {k: Fraction(getattr(self, k), 2) for k in ("k_ul", "k_ur", "k_vl", "k_vr")}


def phi(side: str) -> int:
    """Side indicator: 0 for left, 1 for right."""
    return 1 if side == "r" else 0


class SpqTree:
    """Normalized SPQ*-tree with per-node poles and pole statistics.

    Node ids are assigned so that every parent precedes its children; the
    reverse id order is therefore a valid bottom-up order.
    """

    def __init__(self, g: PlaneGraph, ref: int, s: int, t: int) -> None:
        self.g = g
        self.ref = ref
        self.s = s
        self.t = t
        self.kind: list[int] = []
        self.u: list[int] = []
        self.v: list[int] = []
        self.parent: list[int] = []
        self.children: list[list[int]] = []
        self.chain_edges: list[Optional[list[int]]] = []
        self.chain_vertices: list[Optional[list[int]]] = []
        self.uedges: list[list[int]] = []
        self.vedges: list[list[int]] = []
        self.ptype: list[Optional[PNodeType]] = []
        self.root = 0
        self.is_dummy_ref = g.dummy[ref]

    def new_node(self, kind: int, u: int, v: int, parent: int) -> int:
        i = len(self.kind)
        self.kind.append(kind)
        self.u.append(u)
        self.v.append(v)
        self.parent.append(parent)
        self.children.append([])
        self.chain_edges.append(None)
        self.chain_vertices.append(None)
        self.uedges.append([])
        self.vedges.append([])
        self.ptype.append(None)
        return i

    def __len__(self) -> int:
        return len(self.kind)

    # ----------------------------------------------------------------- views
    def indeg(self, node: int, w: int) -> int:
        if w == self.u[node]:
            return len(self.uedges[node])
        return len(self.vedges[node])

    def outdeg(self, node: int, w: int) -> int:
        return self.g.degree(w) - self.indeg(node, w)

    @property
    def eta(self) -> int:
        return self.children[self.root][0]

    @property
    def ref_node(self) -> int:
        return self.children[self.root][1]

    def edges_of(self, node: int) -> list[int]:
        """All edges of the pertinent graph (linear in its size)."""
        out = []
        stack = [node]
        while stack:
            x = stack.pop()
            if self.kind[x] == Q:
                out.extend(self.chain_edges[x])
            else:
                stack.extend(self.children[x])
        return out

    def exposed_edge(self, node: int) -> Optional[int]:
        """First edge of the node's chain, or of the first chain child of an S-node."""
        k = self.kind[node]
        if k == Q:
            return self.chain_edges[node][0]
        if k == S:
            for c in self.children[node]:
                if self.kind[c] == Q:
                    return self.chain_edges[c][0]
        return None

    def exposed_child(self, node: int) -> Optional[int]:
        """The Q*-node that carries the exposed edge, if any."""
        k = self.kind[node]
        if k == Q:
            return node
        if k == S:
            for c in self.children[node]:
                if self.kind[c] == Q:
                    return c
        return None

    def describe(self, node: int) -> str:
        g = self.g
        k = self.kind[node]
        nm = g.vertex_names
        base = f"{KIND_NAMES[k]}({nm[self.u[node]]},{nm[self.v[node]]})"
        if k == Q:
            base += f" len={len(self.chain_edges[node])}"
        if self.ptype[node] is not None:
            base += f" {self.ptype[node].name}"
        return base

    def dump_text(self) -> str:
        lines = []
        stack = [(self.root, 0)]
        while stack:
            x, depth = stack.pop()
            lines.append("  " * depth + f"[{x}] " + self.describe(x))
            for c in reversed(self.children[x]):
                stack.append((c, depth + 1))
        return "\n".join(lines)

    def to_dict(self, node: Optional[int] = None) -> dict:
        g = self.g
        node = self.root if node is None else node
        out: dict = {}
        stack = [(node, out)]
        while stack:
            x, rec = stack.pop()
            rec["id"] = x
            rec["kind"] = KIND_NAMES[self.kind[x]]
            rec["poles"] = [g.vertex_names[self.u[x]], g.vertex_names[self.v[x]]]
            if self.kind[x] == Q:
                rec["edges"] = [g.edge_names[e] for e in self.chain_edges[x]]
            if self.ptype[x] is not None:
                rec["type"] = self.ptype[x].name
            if self.children[x]:
                rec["children"] = []
                for c in self.children[x]:
                    sub: dict = {}
                    rec["children"].append(sub)
                    stack.append((c, sub))
        return out

    def p_nodes(self) -> list[int]:
        return [i for i, k in enumerate(self.kind) if k == P]


def orient_reference(g: PlaneGraph, ref: int) -> tuple[int, int]:
    """Return (s, t) such that the external face lies right of ``s -> t``."""
    if g.face_of_dart[2 * ref] == g.external_face:
        return g.eu[ref], g.ev[ref]
    if g.face_of_dart[2 * ref + 1] == g.external_face:
        return g.ev[ref], g.eu[ref]
    raise GraphError("reference edge is not on the external face")


def _reduce(g: PlaneGraph, ref: int, s: int, t: int):
    """Series-parallel reduction of ``G - ref``; returns the raw tree."""
    rkind: list[int] = []
    rdata: list = []
    ra: list[int] = []
    rb: list[int] = []

    def raw(kind: int, data, a: int, b: int) -> int:
        rkind.append(kind)
        rdata.append(data)
        ra.append(a)
        rb.append(b)
        return len(rkind) - 1

    n = g.n
    adj: list[set[int]] = [set() for _ in range(n)]
    va: list[int] = []
    vb: list[int] = []
    vnode: list[int] = []
    pairs: dict[tuple[int, int], int] = {}
    work: list[int] = []

    def insert(a: int, b: int, node: int) -> None:
        key = (a, b) if a < b else (b, a)
        x = pairs.get(key)
        if x is not None:
            old = vnode[x]
            if rkind[old] == _RP:
                rdata[old].append(node)
            else:
                vnode[x] = raw(_RP, [old, node], va[x], vb[x])
            work.append(a)
            work.append(b)
            return
        x = len(va)
        va.append(a)
        vb.append(b)
        vnode.append(node)
        adj[a].add(x)
        adj[b].add(x)
        pairs[key] = x

    eu, ev = g.eu, g.ev
    for e in range(g.m):
        if e != ref:
            insert(eu[e], ev[e], raw(_RQ, e, eu[e], ev[e]))
    work.extend(range(n))
    removed = [False] * n
    while work:
        x = work.pop()
        if x == s or x == t or removed[x] or len(adj[x]) != 2:
            continue
        e1, e2 = adj[x]
        a = va[e1] if vb[e1] == x else vb[e1]
        b = va[e2] if vb[e2] == x else vb[e2]
        adj[a].discard(e1)
        adj[b].discard(e2)
        del pairs[(a, x) if a < x else (x, a)]
        del pairs[(b, x) if b < x else (x, b)]
        adj[x].clear()
        removed[x] = True
        insert(a, b, raw(_RS, (vnode[e1], vnode[e2], x), a, b))
        work.append(a)
        work.append(b)
    live = [x for x in pairs.values()]
    if len(live) != 1 or {va[live[0]], vb[live[0]]} != {s, t}:
        raise NotSeriesParallel("graph is not two-terminal series-parallel with respect to the reference edge")
    if any(not removed[v] for v in range(n) if v != s and v != t):
        raise NotSeriesParallel("graph is not two-terminal series-parallel with respect to the reference edge")
    return rkind, rdata, ra, rb, vnode[live[0]]


def build_spq_tree(g: PlaneGraph, ref: Optional[int] = None) -> SpqTree:
    """Build the normalized SPQ*-tree of a biconnected plane SP graph.

    Args:
        g: Biconnected plane series-parallel 4-graph.
        ref: Reference edge on the external face; defaults to the graph's
            reference edge or its default.

    Raises:
        NotSeriesParallel: If the decomposition fails.
        GraphError: If the reference edge is not on the external face.
    """
    if ref is None:
        ref = g.reference_edge if g.reference_edge is not None else g.default_reference()
    s, t = orient_reference(g, ref)
    if g.m < 2:
        raise NotSeriesParallel("graph needs at least two edges")
    rkind, rdata, ra, rb, top = _reduce(g, ref, s, t)
    tree = SpqTree(g, ref, s, t)
    root = tree.new_node(ROOT, s, t, -1)
    tree.root = root
    eta_slot = tree.new_node(Q, s, t, root)  # placeholder replaced below
    # Stack items: (raw node, u, v, parent, index in parent's children).
    tree.children[root] = [eta_slot, -1]
    stack = [(top, s, t, root, 0, True)]
    first = True
    while stack:
        r, u, v, par, idx, root_child = stack.pop()
        k = rkind[r]
        if first:
            node = eta_slot
            first = False
        else:
            node = None
        if k == _RP:
            if node is None:
                node = tree.new_node(P, u, v, par)
            else:
                tree.kind[node] = P
            for c in rdata[r]:
                tree.children[node].append(-1)
                stack.append((c, u, v, node, len(tree.children[node]) - 1, False))
        else:
            # Flatten the series structure into an oriented sequence.
            seq: list[tuple[int, int, int]] = []
            fl = [(r, u, v)]
            while fl:
                x, a, b = fl.pop()
                if rkind[x] == _RS:
                    c1, c2, mid = rdata[x]
                    if ra[x] == a:
                        fl.append((c2, mid, b))
                        fl.append((c1, a, mid))
                    else:
                        fl.append((c1, mid, b))
                        fl.append((c2, a, mid))
                else:
                    seq.append((x, a, b))
            # Group runs of single edges into chains.
            groups: list = []
            for x, a, b in seq:
                if rkind[x] == _RQ:
                    if groups and groups[-1][0] == "chain":
                        groups[-1][1].append(rdata[x])
                        groups[-1][2].append(b)
                    else:
                        groups.append(("chain", [rdata[x]], [a, b]))
                else:
                    groups.append(("raw", x, a, b))
            if len(groups) == 1 and groups[0][0] == "chain":
                if node is None:
                    node = tree.new_node(Q, u, v, par)
                else:
                    tree.kind[node] = Q
                tree.chain_edges[node] = groups[0][1]
                tree.chain_vertices[node] = groups[0][2]
            else:
                if node is None:
                    node = tree.new_node(S, u, v, par)
                else:
                    tree.kind[node] = S
                for grp in groups:
                    if grp[0] == "chain":
                        c = tree.new_node(Q, grp[2][0], grp[2][-1], node)
                        tree.chain_edges[c] = grp[1]
                        tree.chain_vertices[c] = grp[2]
                        tree.children[node].append(c)
                    else:
                        tree.children[node].append(-1)
                        stack.append((grp[1], grp[2], grp[3], node, len(tree.children[node]) - 1, False))
        if par != root or idx != 0 or not root_child:
            tree.children[par][idx] = node
    refq = tree.new_node(Q, s, t, root)
    tree.chain_edges[refq] = [ref]
    tree.chain_vertices[refq] = [s, t]
    tree.children[root] = [eta_slot, refq]
    _finish(tree)
    return tree


def _finish(tree: SpqTree) -> None:
    """Bottom-up pole edges, P-child ordering, classification."""
    g = tree.g
    order = range(len(tree.kind) - 1, -1, -1)
    for x in order:
        k = tree.kind[x]
        if k == Q:
            tree.uedges[x] = [tree.chain_edges[x][0]]
            tree.vedges[x] = [tree.chain_edges[x][-1]]
        elif k == S:
            ch = tree.children[x]
            tree.uedges[x] = list(tree.uedges[ch[0]])
            tree.vedges[x] = list(tree.vedges[ch[-1]])
        elif k == P:
            _order_p_children(tree, x)
            ue, ve = [], []
            for c in tree.children[x]:
                ue.extend(tree.uedges[c])
                ve.extend(tree.vedges[c])
            tree.uedges[x] = ue
            tree.vedges[x] = ve
            tree.ptype[x] = classify_p_node(tree, x)
        else:
            tree.uedges[x] = [tree.ref] + tree.uedges[tree.children[x][0]]
            tree.vedges[x] = [tree.ref] + tree.vedges[tree.children[x][0]]


def _order_p_children(tree: SpqTree, x: int) -> None:
    """Sort P-children left to right from the clockwise rotation at ``u``."""
    g = tree.g
    u, v = tree.u[x], tree.v[x]
    ch = tree.children[x]
    owner_u: dict[int, int] = {}
    for c in ch:
        for e in tree.uedges[c]:
            owner_u[e] = c
    r = g.rot[u]
    d = len(r)
    # Start right after the block of outside edges (edges not in the node).
    start = None
    for i in range(d):
        if r[i] not in owner_u and r[(i + 1) % d] in owner_u:
            start = (i + 1) % d
            break
    if start is None:
        # Only the root's child may own every edge at a pole; the reference
        # edge is outside it, so this cannot happen for non-root nodes.
        raise GraphError("P-node pole without outside edges")
    key = {}
    for i in range(d):
        e = r[(start + i) % d]
        c = owner_u.get(e)
        if c is not None and c not in key:
            key[c] = i
    ch.sort(key=lambda c: key[c])
    # Consistency at v: clockwise after the outside block, right to left.
    owner_v = {e: c for c in ch for e in tree.vedges[c]}
    rv = g.rot[v]
    dv = len(rv)
    seen: list[int] = []
    for i in range(dv):
        if rv[i] not in owner_v and rv[(i + 1) % dv] in owner_v:
            for j in range(dv):
                c = owner_v.get(rv[(i + 1 + j) % dv])
                if c is not None and (not seen or seen[-1] != c):
                    seen.append(c)
            break
    if seen != list(reversed(ch)):
        raise GraphError("embedding is inconsistent with a series-parallel drawing")


def classify_p_node(tree: SpqTree, x: int) -> PNodeType:
    """Type of a non-root P-node with coefficients derived from pole degrees."""
    ch = tree.children[x]
    u, v = tree.u[x], tree.v[x]
    g = tree.g
    if len(ch) == 3:
        return PNodeType("P3")
    if len(ch) != 2:
        raise GraphError("P-node with more than three children")
    l, r = ch
    out_u = g.degree(u) - sum(len(tree.uedges[c]) for c in ch)
    out_v = g.degree(v) - sum(len(tree.vedges[c]) for c in ch)

    def k(child: int, w: int, outw: int) -> int:
        ind = len(tree.uedges[child]) if w == u else len(tree.vedges[child])
        return 2 if (ind == 1 and outw == 1) else 1

    kul, kur = k(l, u, out_u), k(r, u, out_u)
    kvl, kvr = k(l, v, out_v), k(r, v, out_v)
    in_u = len(tree.uedges[l]) + len(tree.uedges[r])
    in_v = len(tree.vedges[l]) + len(tree.vedges[r])
    if in_u == 2 and in_v == 2:
        lam, beta = sorted((out_u, out_v))
        return PNodeType("Pio2", lam, beta, "", "", kul, kur, kvl, kvr)
    if in_u == 3 and in_v == 3:
        du = "l" if len(tree.uedges[l]) == 2 else "r"
        dv = "l" if len(tree.vedges[l]) == 2 else "r"
        a, b = sorted((dv, du))
        return PNodeType("Pin3", 0, 0, a, b, kul, kur, kvl, kvr)
    # One pole has indegree three.
    if in_u == 3:
        side = "l" if len(tree.uedges[l]) == 2 else "r"
        other_out = out_v
    else:
        side = "l" if len(tree.vedges[l]) == 2 else "r"
        other_out = out_u
    return PNodeType("Pio3", 1, other_out, side, "", kul, kur, kvl, kvr)

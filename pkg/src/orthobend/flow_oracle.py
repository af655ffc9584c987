"""Min-cost-flow bend minimization and a random plane SP 4-graph generator.

The oracle does not use the tree machinery: it solves the classical network
where vertices send angle units into faces and faces exchange bend units.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Optional

from .plane_graph import GraphError, PlaneGraph
from .representation import OrthogonalRepresentation, check_representation

__all__ = [
    "FlowNetwork",
    "GeneratorSpec",
    "build_network",
    "check_representation",
    "flow_min_bends",
    "generate_sp",
    "min_cost_flow",
]

_INF = float("inf")


@dataclass
class FlowNetwork:
    """Node supplies (positive) or demands (negative) and arcs (tail, head, capacity, cost).

    Vertex nodes come first, then one node per face.
    """

    n_nodes: int
    supply: list[int]
    arcs: list[tuple[int, int, int, int]]


def build_network(g: PlaneGraph) -> FlowNetwork:
    """Network whose minimum cost equals the minimum number of bends.

    One unit of vertex-to-face flow is a 90 degree slice of a corner beyond
    the mandatory first one; one unit between faces is a bend.
    """
    n, nf = g.n, len(g.faces)
    supply = [4 - g.degree(v) for v in range(n)] + [0] * nf
    for f, darts in enumerate(g.faces):
        deg = len(darts)
        supply[n + f] = -(deg + 4 if f == g.external_face else deg - 4)
    arcs = []
    for f, darts in enumerate(g.faces):
        for d in darts:
            h, _ = g.corner_slot(d)
            arcs.append((h, n + f, 3, 0))
    big = 4 * (g.m + g.n) + 8
    for e in range(g.m):
        f1, f2 = g.face_of_dart[2 * e], g.face_of_dart[2 * e + 1]
        if f1 != f2:
            arcs.append((n + f1, n + f2, big, 1))
            arcs.append((n + f2, n + f1, big, 1))
    return FlowNetwork(n + nf, supply, arcs)


def min_cost_flow(net: FlowNetwork) -> tuple[int, list[int]]:
    """Successive shortest paths with Dijkstra and node potentials.

    Returns the minimum cost and the flow on each arc.

    Raises:
        GraphError: If the supplies cannot be routed.
    """
    if sum(net.supply) != 0:
        raise GraphError("network supplies do not balance")
    N = net.n_nodes + 2
    src, snk = N - 2, N - 1
    head: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    adj: list[list[int]] = [[] for _ in range(N)]

    def add(a: int, b: int, c: int, w: int) -> int:
        i = len(head)
        head.extend((b, a))
        cap.extend((c, 0))
        cost.extend((w, -w))
        adj[a].append(i)
        adj[b].append(i + 1)
        return i

    ids = [add(a, b, c, w) for a, b, c, w in net.arcs]
    need = 0
    for v, s in enumerate(net.supply):
        if s > 0:
            add(src, v, s, 0)
            need += s
        elif s < 0:
            add(v, snk, -s, 0)
    pot = [0] * N  # all costs are non-negative initially
    total = 0
    sent = 0
    while sent < need:
        dist = [_INF] * N
        prev = [-1] * N
        dist[src] = 0
        pq = [(0, src)]
        while pq:
            d, x = heapq.heappop(pq)
            if d > dist[x]:
                continue
            for i in adj[x]:
                if cap[i] <= 0:
                    continue
                y = head[i]
                nd = d + cost[i] + pot[x] - pot[y]
                if nd < dist[y]:
                    dist[y] = nd
                    prev[y] = i
                    heapq.heappush(pq, (nd, y))
        if dist[snk] == _INF:
            raise GraphError("flow network is infeasible")
        for x in range(N):
            if dist[x] < _INF:
                pot[x] += dist[x]
        push = need - sent
        y = snk
        while y != src:
            i = prev[y]
            push = min(push, cap[i])
            y = head[i ^ 1]
        y = snk
        while y != src:
            i = prev[y]
            cap[i] -= push
            cap[i ^ 1] += push
            total += push * cost[i]
            y = head[i ^ 1]
        sent += push
    flows = [cap[i + 1] for i in ids]
    return total, flows


def flow_min_bends(g: PlaneGraph) -> int:
    """Minimum number of bends over all representations preserving the embedding."""
    if g.m == 0:
        return 0
    return min_cost_flow(build_network(g))[0]


def flow_representation(g: PlaneGraph) -> OrthogonalRepresentation:
    """A bend-minimal representation read off the optimal flow (bends unordered)."""
    net = build_network(g)
    _, flows = min_cost_flow(net)
    angles = [[0] * g.degree(v) for v in range(g.n)]
    k = 0
    for f, darts in enumerate(g.faces):
        for d in darts:
            h, i = g.corner_slot(d)
            angles[h][i] = 1 + flows[k]
            k += 1
    # A unit from the face right of dart 2e to the one on its left is a bend
    # that is convex on the left, i.e. a right turn along 2e.
    counts = [0] * g.m
    for e in range(g.m):
        if g.face_of_dart[2 * e] != g.face_of_dart[2 * e + 1]:
            counts[e] = flows[k] - flows[k + 1]
            k += 2
    bends = ["L" * -c if c < 0 else "R" * c for c in counts]
    return OrthogonalRepresentation(g, angles, bends)


# --------------------------------------------------------------- generator
@dataclass
class GeneratorSpec:
    """Parameters of the random series-parallel generator.

    Attributes:
        n: Target vertex count (at least 2; the result may overshoot slightly).
        seed: Random seed.
        p_parallel: Probability that a growth step is a parallel composition.
        width: Weights for the number of new paths of a parallel step (1 or 2).
        length: Weights for the number of edges of a new path or series step.
        drop_reference: Remove one external edge at the end, which usually
            leaves a graph that is connected but not biconnected.
    """

    n: int
    seed: int = 0
    p_parallel: float = 0.5
    width: dict[int, float] = field(default_factory=lambda: {1: 3.0, 2: 1.0})
    length: dict[int, float] = field(default_factory=lambda: {1: 1.0, 2: 3.0, 3: 2.0, 4: 1.0})
    drop_reference: bool = False


def _pick(rng: random.Random, weights: dict[int, float]) -> int:
    keys = sorted(weights)
    return rng.choices(keys, [weights[k] for k in keys])[0]


class _Builder:
    """Mutable embedded multigraph grown by series and parallel steps."""

    def __init__(self) -> None:
        self.eu = [0, 0]
        self.ev = [1, 1]
        self.rot = [[0, 1], [1, 0]]
        self.ext = (0, 0)  # (edge, 0 for eu->ev | 1 for ev->eu)

    def subdivide(self, e: int) -> int:
        a, b = self.eu[e], self.ev[e]
        w = len(self.rot)
        e2 = len(self.eu)
        self.ev[e] = w
        self.eu.append(w)
        self.ev.append(b)
        rb = self.rot[b]
        rb[rb.index(e)] = e2
        self.rot.append([e, e2])
        if self.ext[0] == e and self.ext[1] == 1:
            self.ext = (e2, 1)
        return e2

    def parallel(self, e: int, side: int) -> int:
        """New edge beside ``e`` in the face right of its dart ``side``."""
        a, b = (self.eu[e], self.ev[e]) if side == 0 else (self.ev[e], self.eu[e])
        e2 = len(self.eu)
        self.eu.append(a)
        self.ev.append(b)
        ra, rb = self.rot[a], self.rot[b]
        ra.insert(ra.index(e) + 1, e2)
        rb.insert(rb.index(e), e2)
        if self.ext == (e, side):
            self.ext = (e2, 0)
        return e2

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def graph(self) -> PlaneGraph:
        n = len(self.rot)
        return PlaneGraph(list(range(n)), list(range(len(self.eu))), list(self.eu), list(self.ev),
                          [list(r) for r in self.rot], 2 * self.ext[0] + self.ext[1])


def generate_sp(spec: GeneratorSpec) -> PlaneGraph:
    """Random embedded series-parallel 4-graph, deterministic per seed.

    Raises:
        ValueError: If the spec asks for fewer than two vertices.
    """
    if spec.n < 2:
        raise ValueError("generator needs at least two vertices")
    rng = random.Random(spec.seed)
    b = _Builder()
    if spec.n == 2:
        b.parallel(0, 0)
    while len(b.rot) < spec.n:
        e = rng.randrange(len(b.eu))
        u, v = b.eu[e], b.ev[e]
        if rng.random() < spec.p_parallel and b.degree(u) < 4 and b.degree(v) < 4:
            k = min(_pick(rng, spec.width), 4 - b.degree(u), 4 - b.degree(v))
            for _ in range(k):
                side = rng.randrange(2)
                e2 = b.parallel(e, side)
                for _ in range(_pick(rng, spec.length) - 1):
                    e2 = b.subdivide(e2)
        else:
            for _ in range(_pick(rng, spec.length) - 1):
                e = b.subdivide(e)
    g = b.graph()
    if spec.drop_reference:
        g = _drop_external_edge(g, rng)
    return g


def _drop_external_edge(g: PlaneGraph, rng: random.Random) -> PlaneGraph:
    from .plane_graph import remove_edge

    ext = sorted({d >> 1 for d in g.faces[g.external_face]})
    rng.shuffle(ext)
    for e in ext:
        if g.face_of_dart[2 * e] == g.face_of_dart[2 * e + 1]:
            continue
        try:
            h = remove_edge(g, e)
        except GraphError:
            continue
        return _renumber(h)
    return g


def _renumber(g: PlaneGraph) -> PlaneGraph:
    return PlaneGraph(list(g.vertex_names), list(range(g.m)), list(g.eu), list(g.ev),
                      [list(r) for r in g.rot], g.external_dart, None, list(g.dummy))


def random_instance(seed: int, max_n: int = 30, rng: Optional[random.Random] = None) -> PlaneGraph:
    """Instance for oracle comparisons, with varied shape parameters."""
    r = rng or random.Random(seed)
    spec = GeneratorSpec(
        n=r.randint(2, max_n),
        seed=r.randrange(1 << 30),
        p_parallel=r.choice([0.3, 0.5, 0.7]),
        width={1: 3.0, 2: r.choice([0.0, 1.0, 2.0])},
        length={1: r.choice([0.5, 1.0, 3.0]), 2: 3.0, 3: 2.0, 4: 1.0},
        drop_reference=r.random() < 0.25,
    )
    return generate_sp(spec)

"""Top-down construction of a bend-minimal orthogonal representation.

Every node receives a target spirality (doubled) and a number of bends it
must absorb beyond its cumulative budget. The targets are pushed down to the
chains, which realize them by turns at their interior vertices and, when
needed, by bends on their first edge. Pole angles of two-child P-nodes come
from the chosen angle variables; the reference edge closes the last internal
face.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, Sequence

from .bend_budgets import Annotations, bottom_up
from .plane_graph import PlaneGraph, remove_edge
from .representation import OrthogonalRepresentation, reverse_bends
from .spirality_intervals import RootWindow, SpiralityInterval
from .spq_tree import P, Q, ROOT, S, SpqTree

ROOT_TARGET = 8  # doubled spirality 4


class BuildError(RuntimeError):
    """Internal inconsistency during construction (an implementation bug)."""


# --------------------------------------------------------------- cost model
def child_cost(ann: Annotations, c: int, sigma: int) -> Optional[int]:
    """Bends beyond the cumulative budget that node ``c`` needs for ``sigma``.

    Nodes with an exposed edge pay one bend per unit outside their interval.
    Nodes without one pay one bend per unit up to their flexibility
    breakpoint; other targets are unreachable (None).
    """
    lo, hi = ann.lo[c], ann.hi[c]
    if (sigma - lo) % 2:
        return None
    if lo <= sigma <= hi:
        return 0
    if sigma > hi:
        d, cap = (sigma - hi) // 2, ann.bp[c]
    else:
        d, cap = (lo - sigma) // 2, ann.bm[c]
    if ann.exposed[c] or d <= cap:
        return d
    return None


def _closest(lo: int, hi: int, target: int, rng: Optional[random.Random]) -> int:
    if rng is not None:
        return lo + 2 * rng.randrange((hi - lo) // 2 + 1)
    c = min(max(target, lo), hi)
    if (c - lo) % 2:
        c -= 1
    return c


def choose_root_spirality(i_eta: SpiralityInterval, window: RootWindow, is_dummy: bool = False,
                          rng: Optional[random.Random] = None) -> tuple[int, int]:
    """Target spirality of the root child and the bends on the reference edge.

    Returns doubled spirality and bend count. Inside the window the value
    closest to 4 wins, ties toward the smaller value.
    """
    if is_dummy:
        return _closest(i_eta.lo, i_eta.hi, ROOT_TARGET, rng), 0
    both = i_eta.intersect(window.interval)
    if both is not None:
        lo, hi = both.lo, both.hi
        if (lo - i_eta.lo) % 2:
            lo += 1
        if (hi - i_eta.lo) % 2:
            hi -= 1
        if lo <= hi:
            return _closest(lo, hi, ROOT_TARGET, rng), 0
    if i_eta.hi < window.lo:
        gap = window.lo - i_eta.hi
        return i_eta.hi, (gap + 1) // 2
    gap = i_eta.lo - window.hi
    return i_eta.lo, (gap + 1) // 2


def distribute_series(sigma: int, intervals: Sequence[SpiralityInterval],
                      rng: Optional[random.Random] = None) -> list[int]:
    """Split ``sigma`` among series children: start at maxima, then lower greedily."""
    out = [iv.hi for iv in intervals]
    slack = sum(out) - sigma
    lo_sum = sum(iv.lo for iv in intervals)
    if slack < 0 or sigma < lo_sum or slack % 2:
        raise BuildError(f"series target {sigma} outside [{lo_sum}, {sum(out)}]")
    order = list(range(len(out)))
    if rng is not None:
        rng.shuffle(order)
        for k, i in enumerate(order[:-1]):
            room = out[i] - intervals[i].lo
            rest = sum(out[j] - intervals[j].lo for j in order[k + 1:])
            need_min = max(0, slack - rest)
            step = need_min + 2 * rng.randrange((min(room, slack) - need_min) // 2 + 1)
            out[i] -= step
            slack -= step
        i = order[-1]
        out[i] -= slack
        return out
    for i in order:
        dec = min(slack, out[i] - intervals[i].lo)
        out[i] -= dec
        slack -= dec
    return out


def distribute_p3(sigma: int) -> tuple[int, int, int]:
    """Child targets of a three-child P-node (doubled units)."""
    return sigma + 4, sigma, sigma - 4


def p2_alpha_options(t: SpqTree, x: int) -> list[tuple[int, int, int, int]]:
    """Admissible (alpha_u^l, alpha_u^r, alpha_v^l, alpha_v^r), lexicographic order."""
    g = t.g
    per = []
    for w in (t.u[x], t.v[x]):
        if g.degree(w) >= 4:
            per.append([(1, 1)])
        else:
            per.append([(0, 1), (1, 0), (1, 1)])
    return [a + b for a, b in product(per[0], per[1])]


def p2_child_spiralities(t: SpqTree, x: int, sigma: int,
                         alpha: tuple[int, int, int, int]) -> tuple[int, int]:
    pt = t.ptype[x]
    aul, aur, avl, avr = alpha
    return (sigma + pt.k_ul * aul + pt.k_vl * avl,
            sigma - pt.k_ur * aur - pt.k_vr * avr)


def distribute_p2(t: SpqTree, ann: Annotations, x: int, sigma: int, extra: int = 0,
                  rng: Optional[random.Random] = None):
    """Angle variables and child targets of a two-child P-node.

    Returns (alpha, sigma_l, sigma_r, extra_l, extra_r): the cheapest
    admissible alpha, first in lexicographic order unless ``rng`` is given.
    """
    l, r = t.children[x]
    best = None
    ties = []
    for alpha in p2_alpha_options(t, x):
        sl, sr = p2_child_spiralities(t, x, sigma, alpha)
        cl = child_cost(ann, l, sl)
        cr = child_cost(ann, r, sr)
        if cl is None or cr is None:
            continue
        cand = (cl + cr, alpha, sl, sr, cl, cr)
        if best is None or cand[0] < best[0]:
            best = cand
            ties = [cand]
        elif cand[0] == best[0]:
            ties.append(cand)
    if best is None:
        raise BuildError(f"no admissible angle assignment at node {x} for spirality {sigma}")
    if rng is not None:
        best = rng.choice(ties)
    if best[0] != ann.b[x] + extra:
        raise BuildError(f"node {x} realizes {best[0]} bends, expected {ann.b[x] + extra}")
    return best[1], best[2], best[3], best[4], best[5]


# --------------------------------------------------------------- top-down
@dataclass
class Plan:
    """Top-down decisions: per-node targets and extra bends, angle variables."""

    sigma: list[Optional[int]]
    extra: list[int]
    alpha: dict[int, tuple[int, int, int, int]] = field(default_factory=dict)
    root_bends: int = 0


def _series_plan(t: SpqTree, ann: Annotations, x: int, sigma: int, extra: int,
                 rng: Optional[random.Random]) -> list[tuple[int, int, int]]:
    ch = t.children[x]
    ivs = [ann.interval(c) for c in ch]
    if ann.exposed[x]:
        q = t.exposed_child(x)
        k = ch.index(q)
        ivs[k] = ivs[k].widen(extra)
        vals = distribute_series(sigma, ivs, rng)
        out = []
        total = 0
        for c, s in zip(ch, vals):
            cost = child_cost(ann, c, s)
            if cost is None or (c != q and cost):
                raise BuildError(f"series child {c} cannot take spirality {s}")
            total += cost
            out.append((c, s, cost))
        if total != extra:
            raise BuildError(f"series node {x} places {total} bends, expected {extra}")
        return out
    lo_sum = sum(iv.lo for iv in ivs)
    hi_sum = sum(iv.hi for iv in ivs)
    if lo_sum <= sigma <= hi_sum:
        if extra:
            raise BuildError(f"series node {x} given extra bends inside its interval")
        vals = distribute_series(sigma, ivs, rng)
        return [(c, s, 0) for c, s in zip(ch, vals)]
    up = sigma > hi_sum
    units = (sigma - hi_sum) // 2 if up else (lo_sum - sigma) // 2
    if units != extra:
        raise BuildError(f"series node {x} needs {units} bends, was given {extra}")
    caps = [ann.bp[c] if up else ann.bm[c] for c in ch]
    take = [0] * len(ch)
    order = list(range(len(ch)))
    if rng is not None:
        rng.shuffle(order)
    rest = units
    for i in order:
        k = min(caps[i], rest)
        take[i] = k
        rest -= k
    if rest:
        raise BuildError(f"series node {x} lacks flexibility for {units} bends")
    out = []
    for c, iv, k in zip(ch, ivs, take):
        out.append((c, iv.hi + 2 * k if up else iv.lo - 2 * k, k))
    return out


def top_down(t: SpqTree, ann: Annotations, rng: Optional[random.Random] = None) -> Plan:
    """Assign a target spirality and extra bends to every non-root node."""
    n = len(t)
    plan = Plan([None] * n, [0] * n)
    eta = t.eta
    s_eta, rb = choose_root_spirality(ann.interval(eta), ann.window, t.is_dummy_ref, rng)
    plan.root_bends = rb
    cost = child_cost(ann, eta, s_eta)
    if cost != 0:
        raise BuildError("root child target outside its interval")
    stack = [(eta, s_eta, 0)]
    while stack:
        x, sigma, extra = stack.pop()
        plan.sigma[x] = sigma
        plan.extra[x] = extra
        ann.target[x] = sigma
        k = t.kind[x]
        if k == Q:
            continue
        if k == S:
            for c, s, e in _series_plan(t, ann, x, sigma, extra, rng):
                stack.append((c, s, e))
        elif t.ptype[x].family == "P3":
            total = 0
            for c, s in zip(t.children[x], distribute_p3(sigma)):
                cst = child_cost(ann, c, s)
                if cst is None:
                    raise BuildError(f"three-child P-node {x} child {c} cannot reach {s}")
                total += cst
                stack.append((c, s, cst))
            if total != ann.b[x] + extra:
                raise BuildError(f"node {x} realizes {total} bends, expected {ann.b[x] + extra}")
        else:
            alpha, sl, sr, cl, cr = distribute_p2(t, ann, x, sigma, extra, rng)
            plan.alpha[x] = alpha
            l, r = t.children[x]
            stack.append((l, sl, cl))
            stack.append((r, sr, cr))
    return plan


# --------------------------------------------------------------- assembly
def _turn_string(count: int) -> str:
    return "R" * count if count >= 0 else "L" * (-count)


def _stored(g: PlaneGraph, e: int, start: int, traversal: str) -> str:
    return traversal if g.eu[e] == start else reverse_bends(traversal)


def _realize_chain(t: SpqTree, x: int, sigma: int, extra: int, angles: list[list[int]],
                   bends: list[str], rng: Optional[random.Random]) -> None:
    g = t.g
    if sigma % 2:
        raise BuildError(f"chain node {x} given a semi-integer spirality")
    edges = t.chain_edges[x]
    verts = t.chain_vertices[x]
    interior = len(edges) - 1
    k = abs(sigma) // 2
    sign = 1 if sigma >= 0 else -1
    on_vertices = min(k, interior)
    on_edges = k - on_vertices
    if on_edges != extra:
        raise BuildError(f"chain node {x} needs {on_edges} bends, was given {extra}")
    if rng is None:
        turning = set(range(on_vertices))
        per_edge = [0] * len(edges)
        per_edge[0] = on_edges
    else:
        turning = set(rng.sample(range(interior), on_vertices))
        per_edge = [0] * len(edges)
        for _ in range(on_edges):
            per_edge[rng.randrange(len(edges))] += 1
    for i in range(interior):
        w = verts[i + 1]
        turn = sign if i in turning else 0
        out = g.pos(edges[i + 1], w)
        a = angles[w]
        a[out] = 2 - turn
        a[1 - out] = 2 + turn
    for e, c, a in zip(edges, per_edge, verts):
        bends[e] = _stored(g, e, a, _turn_string(sign * c))


def _pole_angles(t: SpqTree, x: int, alpha: tuple[int, int, int, int],
                 angles: list[list[int]]) -> None:
    g = t.g
    l, r = t.children[x]
    aul, aur, avl, avr = alpha
    u, v = t.u[x], t.v[x]
    if g.degree(u) == 3:
        cl, cr = t.uedges[l][0], t.uedges[r][0]
        a = angles[u]
        a[g.pos(cl, u) - 1] = 2 - aul
        a[g.pos(cl, u)] = aul + aur
        a[g.pos(cr, u)] = 2 - aur
    if g.degree(v) == 3:
        cl, cr = t.vedges[l][0], t.vedges[r][0]
        a = angles[v]
        a[g.pos(cl, v)] = 2 - avl
        a[g.pos(cr, v) - 1] = 2 - avr
        a[g.pos(cr, v)] = avl + avr


def _close_root(t: SpqTree, angles: list[list[int]], bends: list[str],
                rng: Optional[random.Random]) -> int:
    """Fix free root-pole angles and bend the reference edge; returns its bend count."""
    g = t.g
    ref, s, tt = t.ref, t.s, t.t
    d_ts = g.dart_from(ref, tt)
    face = g.faces[g.face_of_dart[d_ts]]
    partial = 0
    free: list[tuple[int, int]] = []
    for d in face:
        h, i = g.corner_slot(d)
        if angles[h][i] == 0:
            free.append((h, i))
        else:
            partial += 2 - angles[h][i]
        if d >> 1 != ref:
            b = bends[d >> 1]
            turns = b.count("R") - b.count("L")
            partial += -turns if d & 1 else turns
    best = None
    ties = []
    for combo in product((1, 2, 3), repeat=len(free)):
        need = 4 - partial - sum(2 - a for a in combo)
        key = abs(need)
        if best is None or key < best:
            best = key
            ties = [(combo, need)]
        elif key == best:
            ties.append((combo, need))
    combo, need = rng.choice(ties) if rng is not None else ties[0]
    for (h, i), a in zip(free, combo):
        angles[h][i] = a
        angles[h][1 - i] = 4 - a
    bends[ref] = _stored(g, ref, tt, _turn_string(need))
    return abs(need)


@dataclass
class BuildResult:
    """Output of the construction.

    Attributes:
        tree: The tree the construction ran on.
        ann: Its bottom-up annotations.
        plan: Targets and angle variables.
        rep: Representation of the tree's graph.
        original_rep: Representation with the dummy edge removed (same as
            ``rep`` when there is none).
    """

    tree: SpqTree
    ann: Annotations
    plan: Plan
    rep: OrthogonalRepresentation
    original_rep: OrthogonalRepresentation


def assemble(t: SpqTree, ann: Annotations, plan: Plan,
             rng: Optional[random.Random] = None) -> OrthogonalRepresentation:
    """Representation of the tree's graph from the top-down plan."""
    g = t.g
    angles = [[1] * 4 if g.degree(v) == 4 else [0] * g.degree(v) for v in range(g.n)]
    bends = [""] * g.m
    for x in range(len(t)):
        k = t.kind[x]
        if k == Q and x != t.ref_node:
            _realize_chain(t, x, plan.sigma[x], plan.extra[x], angles, bends, rng)
        elif k == P and x in plan.alpha:
            _pole_angles(t, x, plan.alpha[x], angles)
    rb = _close_root(t, angles, bends, rng)
    if not t.is_dummy_ref and rb != ann.b[t.root]:
        raise BuildError(f"reference edge takes {rb} bends, budget is {ann.b[t.root]}")
    for v in range(g.n):
        if 0 in angles[v]:
            raise BuildError(f"vertex {g.vertex_names[v]!r} left without an angle")
    return OrthogonalRepresentation(g, angles, bends)


def strip_dummy(h: OrthogonalRepresentation) -> OrthogonalRepresentation:
    """Drop dummy edges, merging the two wedges beside each of their ends."""
    g = h.g
    angles = [list(a) for a in h.angles]
    bends = list(h.bends)
    for e in sorted((e for e in range(g.m) if g.dummy[e]), reverse=True):
        for w in (g.eu[e], g.ev[e]):
            i = g.rot[w].index(e)
            a = angles[w]
            a[i - 1] += a[i]
            del a[i]
        g2 = remove_edge(g, e)
        del bends[e]
        # Rotations of g2 drop e in place, so slot indices stay aligned.
        g = g2
    return OrthogonalRepresentation(g, angles, bends)


def build_representation(t: SpqTree, ann: Optional[Annotations] = None,
                         rng: Optional[random.Random] = None, check: bool = True) -> BuildResult:
    """Bend-minimal representation for the tree's graph and for the input graph."""
    if ann is None:
        ann = bottom_up(t)
    plan = top_down(t, ann, rng)
    h = assemble(t, ann, plan, rng)
    if check:
        ok, bad = h.check()
        if not ok:
            raise BuildError("assembled representation is invalid: " + "; ".join(bad[:5]))
    orig = strip_dummy(h) if t.is_dummy_ref else h
    return BuildResult(t, ann, plan, h, orig)


def trivial_representation(g: PlaneGraph) -> OrthogonalRepresentation:
    """Representation of a graph with at most one edge."""
    return OrthogonalRepresentation(g, [[4] * g.degree(v) for v in range(g.n)], [""] * g.m)


# --------------------------------------------------------------- spirality
def _path(t: SpqTree, x: int, pick: Callable[[int], int]) -> list[tuple[int, int]]:
    """Edges (edge, start vertex) of a pole-to-pole path inside node ``x``."""
    out: list[tuple[int, int]] = []
    stack = [x]
    while stack:
        y = stack.pop()
        k = t.kind[y]
        if k == Q:
            vs = t.chain_vertices[y]
            out.extend(zip(t.chain_edges[y], vs))
        elif k == S:
            stack.extend(reversed(t.children[y]))
        else:
            stack.append(pick(y))
    return out


def _alias_edges(t: SpqTree, x: int) -> tuple[list[Optional[int]], list[Optional[int]]]:
    """Outside edges carrying the left and right alias at each pole."""
    g = t.g
    res = []
    for w, block, at_u in ((t.u[x], t.uedges[x], True), (t.v[x], t.vedges[x], False)):
        if len(block) == 1:
            res.append([None, None])
            continue
        inside = set(block)
        r = g.rot[w]
        d = len(r)
        first = last = None
        for i in range(d):
            if r[i] in inside and r[i - 1] not in inside:
                first = i
            if r[i] in inside and r[(i + 1) % d] not in inside:
                last = i
        before, after = r[first - 1], r[(last + 1) % d]
        res.append([before, after] if at_u else [after, before])
    return res[0], res[1]


def measure_spirality(h: OrthogonalRepresentation, t: SpqTree, x: int,
                      pick: Optional[Callable[[int], int]] = None) -> int:
    """Doubled spirality of node ``x`` in ``h`` along the path chosen by ``pick``.

    ``pick`` maps each P-node on the way to one of its children; the default
    takes the leftmost child.
    """
    if t.kind[x] == ROOT:
        raise ValueError("spirality is not defined for the root")
    g = h.g
    if pick is None:
        pick = lambda y: t.children[y][0]  # noqa: E731
    steps = _path(t, x, pick)
    core = 0
    for i, (e, a) in enumerate(steps):
        b = h.bends[e]
        turns = b.count("R") - b.count("L")
        core += turns if g.eu[e] == a else -turns
        if i:
            w = a
            core += 2 - h.right_angle(w, steps[i - 1][0], e)
    first, last = steps[0][0], steps[-1][0]
    au, av = _alias_edges(t, x)
    total = 0
    for ou, ov in zip(au, av):
        n = core
        if ou is not None:
            n += 2 - h.right_angle(t.u[x], ou, first)
        if ov is not None:
            n += 2 - h.right_angle(t.v[x], last, ov)
        total += n
    return total


def random_pick(t: SpqTree, rng: random.Random) -> Callable[[int], int]:
    return lambda y: rng.choice(t.children[y])


# --------------------------------------------------------------- substitution
class SubstitutionError(ValueError):
    """Raised when the two components have different spiralities."""


def substitute(h: OrthogonalRepresentation, t: SpqTree, x: int,
               h2: OrthogonalRepresentation) -> OrthogonalRepresentation:
    """Replace node ``x``'s component of ``h`` by the one of ``h2``.

    Both representations must be of the tree's graph. Pole angles follow the
    rule: keep ``h``'s when the node has indegree one at the pole, else take
    ``h2``'s for every wedge touching the node.
    """
    if measure_spirality(h, t, x) != measure_spirality(h2, t, x):
        raise SubstitutionError("components have different spiralities")
    g = t.g
    out = h.copy()
    edges = t.edges_of(x)
    inside = set(edges)
    verts = set()
    for e in edges:
        out.bends[e] = h2.bends[e]
        verts.add(g.eu[e])
        verts.add(g.ev[e])
    u, v = t.u[x], t.v[x]
    for w in verts:
        if w != u and w != v:
            out.angles[w] = list(h2.angles[w])
    for w in (u, v):
        if t.indeg(x, w) == 1:
            continue
        r = g.rot[w]
        d = len(r)
        for i in range(d):
            if r[i] in inside or r[(i + 1) % d] in inside:
                out.angles[w][i] = h2.angles[w][i]
    return out

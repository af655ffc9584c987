"""Brute-force oracles that share no code with the interval and budget formulas.

The enumeration oracles state each composition rule directly (every angle
choice at the poles, every split of the bends among the children) and
collect the spiralities that come out.

``ComponentModel`` states the spirality of a component directly from its
definition (turns along a spine, averaged over alias vertices) as a linear
function of angle and bend variables, and asks an integer program for the
extreme values. It only uses the plane graph (rotation and faces) and the
edge set and poles of a tree node.
"""

from __future__ import annotations

from collections import deque
from itertools import product
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from orthobend.plane_graph import PlaneGraph
from orthobend.spirality_intervals import SpiralityInterval


class ComponentModel:
    """All orthogonal representations of one component, seen from the outside.

    Every vertex keeps its full rotation: slots next to outside edges only
    need to leave at least 90 degrees. Faces fully inside the component obey
    the face rule; the outer face of the component is unconstrained.
    """

    def __init__(self, g: PlaneGraph, edges: list[int], u: int, v: int,
                 outer: Optional[int] = None) -> None:
        self.g = g
        self.u, self.v = u, v
        inside = set(edges)
        self.edges = sorted(inside)
        verts = sorted({g.eu[e] for e in inside} | {g.ev[e] for e in inside})
        col = 0
        self.slot = {}
        for w in verts:
            for i in range(g.degree(w)):
                self.slot[(w, i)] = col
                col += 1
        self.bend = {}
        for e in self.edges:
            self.bend[e] = (col, col + 1)  # right, left turns along eu->ev
            col += 2
        self.ncols = col
        rows, lo, hi = [], [], []

        def row() -> np.ndarray:
            return np.zeros(self.ncols)

        for w in verts:
            r = row()
            for i in range(g.degree(w)):
                r[self.slot[(w, i)]] = 1
            rows.append(r), lo.append(4), hi.append(4)
        for f, darts in enumerate(g.faces):
            if all((d >> 1) in inside for d in darts):
                want = -4 if f == outer else 4
                r = row()
                const = 0
                for d in darts:
                    h, i = g.corner_slot(d)
                    const += 2
                    r[self.slot[(h, i)]] -= 1
                    self._add_turn(r, d, 1)
                rows.append(r), lo.append(want - const), hi.append(want - const)
        self.rows, self.lo, self.hi = rows, lo, hi
        self.sigma_row, self.sigma_const = self._spirality_row(inside)
        self.bend_row = row()
        for e in self.edges:
            self.bend_row[list(self.bend[e])] = 1

    def _add_turn(self, r: np.ndarray, d: int, k: int) -> None:
        rc, lc = self.bend[d >> 1]
        if d & 1:
            rc, lc = lc, rc
        r[rc] += k
        r[lc] -= k

    def _right_wedge(self, r: np.ndarray, w: int, e_in: int, e_out: int, k: int) -> None:
        """Add ``k`` times the angle on the right when passing ``w`` from e_in to e_out."""
        g = self.g
        deg = g.degree(w)
        i, j = g.pos(e_out, w), g.pos(e_in, w)
        while True:
            r[self.slot[(w, i)]] += k
            i = (i + 1) % deg
            if i == j:
                return

    def _path(self, inside: set[int]) -> list[int]:
        """Darts of a shortest pole-to-pole path inside the component."""
        g = self.g
        prev = {self.u: None}
        q = deque([self.u])
        while q and self.v not in prev:
            x = q.popleft()
            for e in g.rot[x]:
                y = g.other(e, x)
                if e in inside and y not in prev:
                    prev[y] = (x, e)
                    if y != self.v:
                        q.append(y)
        darts = []
        x = self.v
        while prev[x] is not None:
            a, e = prev[x]
            darts.append(g.dart_from(e, a))
            x = a
        return darts[::-1]

    def _spirality_row(self, inside: set[int]) -> tuple[np.ndarray, int]:
        """Doubled spirality as (coefficients, constant)."""
        g = self.g
        r = np.zeros(self.ncols)
        const = 0
        darts = self._path(inside)
        for d in darts:
            self._add_turn(r, d, 2)
        for d1, d2 in zip(darts, darts[1:]):
            w = g.head(d1)
            const += 4
            self._right_wedge(r, w, d1 >> 1, d2 >> 1, -2)
        for pole, edge, first in ((self.u, darts[0] >> 1, True), (self.v, darts[-1] >> 1, False)):
            ins = [e for e in g.rot[pole] if e in inside]
            outs = [e for e in g.rot[pole] if e not in inside]
            if len(ins) == 1 or not outs:
                continue
            wgt = 2 // len(outs)
            for o in outs:
                const += 2 * wgt
                if first:
                    self._right_wedge(r, pole, o, edge, -wgt)
                else:
                    self._right_wedge(r, pole, edge, o, -wgt)
        return r, const

    # ------------------------------------------------------------ queries
    def _solve(self, c: np.ndarray, extra: list[tuple[np.ndarray, float, float]],
               max_bends: int) -> Optional[float]:
        rows = self.rows + [self.bend_row] + [x[0] for x in extra]
        lo = self.lo + [0] + [x[1] for x in extra]
        hi = self.hi + [max_bends] + [x[2] for x in extra]
        lb = np.zeros(self.ncols)
        ub = np.full(self.ncols, float(max_bends))
        for col in self.slot.values():
            lb[col], ub[col] = 1, 4
        res = milp(c, constraints=LinearConstraint(np.array(rows), lo, hi),
                   integrality=np.ones(self.ncols), bounds=Bounds(lb, ub))
        if res.status != 0:
            return None
        return res.fun

    def extreme(self, maximize: bool, max_bends: int = 0) -> Optional[int]:
        """Largest (smallest) doubled spirality with at most ``max_bends`` bends."""
        c = -self.sigma_row if maximize else self.sigma_row
        val = self._solve(c, [], max_bends)
        if val is None:
            return None
        return int(round((-val if maximize else val) + self.sigma_const))

    def feasible(self, sigma2: int, max_bends: int = 0) -> bool:
        target = sigma2 - self.sigma_const
        return self._solve(np.zeros(self.ncols), [(self.sigma_row, target, target)], max_bends) is not None

    def min_bends(self, limit: int = 40) -> Optional[int]:
        """Fewest bends of any representation of the component."""
        val = self._solve(self.bend_row.copy(), [], limit)
        return None if val is None else int(round(val))


def component_model(t, x: int) -> ComponentModel:
    """Model of the pertinent graph of tree node ``x``."""
    return ComponentModel(t.g, t.edges_of(x), t.u[x], t.v[x])


def ip_min_bends(g: PlaneGraph, limit: int = 40) -> int:
    """Whole-graph bend minimum as an integer program (cross-checks the flow oracle)."""
    model = ComponentModel(g, list(range(g.m)), g.eu[0], g.ev[0], outer=g.external_face)
    return model.min_bends(limit)


# ------------------------------------------------------------ enumeration oracles
def as_set(iv: Optional[SpiralityInterval]) -> set[int]:
    return set() if iv is None else set(range(iv.lo, iv.hi + 1, 2))


def brute_p2_sets(pt, left: set[int], right: set[int]) -> set[int]:
    """Doubled spiralities of a two-child P-node, given child spirality sets.

    A pole whose coefficients include a half has degree four, so both of its
    outer angles are 90 degrees; otherwise at least one of them is.
    """
    per_pole = []
    for kl, kr in ((pt.k_ul, pt.k_ur), (pt.k_vl, pt.k_vr)):
        if min(kl, kr) == 1:
            per_pole.append([(1, 1)])
        else:
            per_pole.append([(0, 1), (1, 0), (1, 1)])
    out = set()
    for (aul, aur), (avl, avr) in product(*per_pole):
        need_l = pt.k_ul * aul + pt.k_vl * avl
        need_r = pt.k_ur * aur + pt.k_vr * avr
        out |= {sl - need_l for sl in left} & {sr + need_r for sr in right}
    return out


def brute_p2(pt, il: SpiralityInterval, ir: SpiralityInterval) -> set[int]:
    return brute_p2_sets(pt, as_set(il), as_set(ir))


def brute_p3_sets(left: set[int], center: set[int], right: set[int]) -> set[int]:
    return {s for s in center if s + 4 in left and s - 4 in right}


def brute_p3(il, ic, ir) -> set[int]:
    return brute_p3_sets(as_set(il), as_set(ic), as_set(ir))


def reachable(iv: SpiralityInterval, bends: int, caps: Optional[tuple[int, int]] = None) -> set[int]:
    """Spiralities of a child with ``bends`` extra bends.

    A child with an exposed edge moves one unit per bend either way. A child
    without one stops moving up after ``caps[0]`` bends and down after
    ``caps[1]``.
    """
    up = down = bends
    if caps is not None:
        up, down = min(bends, caps[0]), min(bends, caps[1])
    return set(range(iv.lo - 2 * down, iv.hi + 2 * up + 1, 2))


def brute_budget(combine, intervals: Sequence[SpiralityInterval],
                 caps: Sequence[Optional[tuple[int, int]]], limit: int = 12) -> tuple[int, set[int]]:
    """Fewest extra bends over all splits among the children, and the spiralities reached."""
    k = len(intervals)
    for b in range(limit + 1):
        got: set[int] = set()
        for split in product(range(b + 1), repeat=k):
            if sum(split) != b:
                continue
            sets = [reachable(iv, s, c) for iv, s, c in zip(intervals, split, caps)]
            got |= combine(*sets)
        if got:
            return b, got
    raise AssertionError("no budget found within the limit")

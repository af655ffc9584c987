"""Bottom-up bend budgets, post-budget intervals and flexibility breakpoints.

Budgets are bend counts (plain integers); intervals and distances stay in
doubled spirality units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .spirality_intervals import (
    RootWindow,
    SpiralityInterval,
    interval_p2,
    interval_p3,
    interval_qstar,
    p2_bounds,
    p2_window,
    root_window,
)
from .spq_tree import P, Q, ROOT, S, PNodeType, SpqTree


class BudgetError(RuntimeError):
    """Internal inconsistency in the budget computation."""


def interval_distance(a: SpiralityInterval, b: SpiralityInterval) -> int:
    """Doubled distance between two intervals; zero when they intersect."""
    return _dist(a.lo, a.hi, b.lo, b.hi)


def _dist(alo: int, ahi: int, blo: int, bhi: int) -> int:
    if max(alo, blo) <= min(ahi, bhi):
        return 0
    return min(abs(ahi - blo), abs(bhi - alo))


def _half(x2: int) -> int:
    if x2 % 2:
        raise BudgetError("odd doubled distance where a bend count was expected")
    return x2 // 2


def budget_p3(il: SpiralityInterval, ic: SpiralityInterval,
              ir: SpiralityInterval) -> tuple[int, SpiralityInterval]:
    """Budget and post-budget interval of a three-child P-node.

    The shifted intervals are renamed so that ``z`` holds the largest minimum
    and ``x`` the smallest maximum (ties broken left, center, right).
    """
    sh = [(il.lo - 4, il.hi - 4), (ic.lo, ic.hi), (ir.lo + 4, ir.hi + 4)]
    z = max(range(3), key=lambda i: (sh[i][0], -i))
    x = min(range(3), key=lambda i: (sh[i][1], i))
    if z == x or sh[z][0] <= sh[x][1]:
        raise BudgetError("budget_p3 called on intersecting intervals")
    y = 3 - z - x
    b = _half(sh[z][0] - sh[x][1])
    lo = max(sh[x][1], sh[y][0])
    hi = min(sh[z][0], sh[y][1])
    return b, SpiralityInterval(lo, hi)


def p3_roles(il: SpiralityInterval, ic: SpiralityInterval, ir: SpiralityInterval) -> tuple[int, int, int]:
    """Indices (x, y, z) of the renamed shifted intervals."""
    sh = [(il.lo - 4, il.hi - 4), (ic.lo, ic.hi), (ir.lo + 4, ir.hi + 4)]
    z = max(range(3), key=lambda i: (sh[i][0], -i))
    x = min(range(3), key=lambda i: (sh[i][1], i))
    return x, 3 - z - x, z


def flexibility_breakpoints(il: SpiralityInterval, ir: SpiralityInterval,
                            own: Optional[SpiralityInterval] = None,
                            cap_l: Optional[tuple[int, int]] = None,
                            cap_r: Optional[tuple[int, int]] = None) -> tuple[int, int]:
    """Positive and negative flexibility breakpoints of a Pio2_22 node.

    Without ``own`` this is |M_r + 2 - M_l| and |m_l - 2 - m_r|. When the node
    carries its own budget, ``own`` is its post-budget interval and the
    breakpoints count the slope-one stretch beyond that interval. ``cap_l``
    and ``cap_r`` give (b+, b-) of an unexposed child, whose own slope-one
    stretch bounds the node's.
    """
    if own is None:
        return _half(abs(ir.hi + 4 - il.hi)), _half(abs(il.lo - 4 - ir.lo))
    # Child spiralities are sigma + 1 and sigma - 1 (doubled: +-2).
    up = max(il.hi - 2, ir.hi + 2)
    dn = min(il.lo - 2, ir.lo + 2)
    if cap_l is not None:
        up = min(up, il.hi - 2 + 2 * cap_l[0])
        dn = max(dn, il.lo - 2 - 2 * cap_l[1])
    if cap_r is not None:
        up = min(up, ir.hi + 2 + 2 * cap_r[0])
        dn = max(dn, ir.lo + 2 - 2 * cap_r[1])
    return max(0, _half(up - own.hi)), max(0, _half(own.lo - dn))


def budget_p2(ptype: PNodeType, il: SpiralityInterval, ir: SpiralityInterval,
              exposed_l: bool, exposed_r: bool,
              bp_l: Optional[tuple[int, int]] = None,
              bp_r: Optional[tuple[int, int]] = None) -> tuple[int, SpiralityInterval]:
    """Budget and post-budget interval of a two-child P-node.

    Args:
        ptype: Node type.
        il, ir: Children's (post-budget) intervals.
        exposed_l, exposed_r: Whether each child has an exposed edge.
        bp_l, bp_r: (b+, b-) of an unexposed child.
    """
    if not (exposed_l or exposed_r):
        raise BudgetError("two-child P-node without any exposed child")
    wlo, whi = p2_window(ptype)
    dlo, dhi = il.lo - ir.hi, il.hi - ir.lo
    b2 = _dist(dlo, dhi, wlo, whi)
    if b2 == 0:
        raise BudgetError("budget_p2 called on a representable node")
    b = _half(b2)
    m, M = p2_bounds(ptype, il, ir)
    if exposed_l and exposed_r:
        return b, SpiralityInterval(m - b2, M + b2)
    if not exposed_l:
        bplus, bminus = bp_l
        if dhi < 6:
            return b, SpiralityInterval(m - b2, M + 2 * min(bplus, b))
        return b, SpiralityInterval(m - 2 * min(bminus, b), M + b2)
    # The right child moves against the node: too small a difference lowers
    # it (its b-), too large a difference raises it (its b+).
    bplus, bminus = bp_r
    if dlo > 6:
        return b, SpiralityInterval(m - b2, M + 2 * min(bplus, b))
    return b, SpiralityInterval(m - 2 * min(bminus, b), M + b2)


def budget_root(i_eta: SpiralityInterval, window: RootWindow, is_dummy: bool) -> int:
    """Bends needed on the reference edge: zero for a dummy edge."""
    if is_dummy:
        return 0
    return _half(interval_distance(i_eta, window.interval))


@dataclass
class Annotations:
    """Per-node results of the bottom-up visit (arrays indexed by node id)."""

    lo: list[int]
    hi: list[int]
    b: list[int]
    B: list[int]
    bp: list[int]
    bm: list[int]
    exposed: list[bool]
    rect: list[bool]
    window: Optional[RootWindow] = None
    target: list[Optional[int]] = field(default_factory=list)

    def interval(self, x: int) -> SpiralityInterval:
        return SpiralityInterval(self.lo[x], self.hi[x])

    @property
    def total(self) -> int:
        return self.B[0]


def bottom_up(t: SpqTree) -> Annotations:
    """Annotate every node with its budget, cumulative budget and interval."""
    n = len(t)
    lo = [0] * n
    hi = [0] * n
    b = [0] * n
    B = [0] * n
    bp = [0] * n
    bm = [0] * n
    exposed = [False] * n
    rect = [True] * n
    kind, children = t.kind, t.children
    for x in range(n - 1, -1, -1):
        k = kind[x]
        if k == Q:
            ell = len(t.chain_edges[x]) - 1
            lo[x], hi[x] = -2 * ell, 2 * ell
            exposed[x] = True
        elif k == S:
            ch = children[x]
            slo = shi = sB = 0
            has_q = False
            for c in ch:
                slo += lo[c]
                shi += hi[c]
                sB += B[c]
                if kind[c] == Q:
                    has_q = True
            lo[x], hi[x], B[x] = slo, shi, sB
            exposed[x] = has_q
            if not has_q:
                bp[x] = sum(bp[c] for c in ch)
                bm[x] = sum(bm[c] for c in ch)
        elif k == P:
            ch = children[x]
            pt = t.ptype[x]
            ivs = [SpiralityInterval(lo[c], hi[c]) for c in ch]
            sB = sum(B[c] for c in ch)
            if pt.family == "P3":
                iv = interval_p3(*ivs)
                if iv is None:
                    bb, iv = budget_p3(*ivs)
                    rect[x] = False
                else:
                    bb = 0
            else:
                iv = interval_p2(pt, *ivs)
                if iv is None:
                    l, r = ch
                    bb, iv = budget_p2(pt, ivs[0], ivs[1], exposed[l], exposed[r],
                                       (bp[l], bm[l]), (bp[r], bm[r]))
                    rect[x] = False
                else:
                    bb = 0
                if pt.family == "Pio2" and pt.lam == 2 and pt.beta == 2:
                    l, r = ch
                    bp[x], bm[x] = flexibility_breakpoints(
                        ivs[0], ivs[1], iv,
                        None if exposed[l] else (bp[l], bm[l]),
                        None if exposed[r] else (bp[r], bm[r]))
            lo[x], hi[x] = iv.lo, iv.hi
            b[x] = bb
            B[x] = bb + sB
        else:
            eta = children[x][0]
            win = root_window(t)
            ieta = SpiralityInterval(lo[eta], hi[eta])
            rb = budget_root(ieta, win, t.is_dummy_ref)
            rect[x] = t.is_dummy_ref or ieta.intersect(win.interval) is not None
            b[x] = rb
            B[x] = rb + B[eta]
            lo[x], hi[x] = 0, 0
            ann_window = win
    ann = Annotations(lo, hi, b, B, bp, bm, exposed, rect)
    ann.window = ann_window
    ann.target = [None] * n
    return ann

"""Representability intervals and the rectilinear planarity test.

All spiralities are doubled integers, so semi-integer values stay exact. An
interval ``[lo, hi]`` contains the values ``lo, lo + 2, ..., hi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .spq_tree import P, Q, ROOT, S, PNodeType, SpqTree, phi


@dataclass(frozen=True)
class SpiralityInterval:
    """Closed interval of doubled spiralities with a fixed parity."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if (self.hi - self.lo) % 2:
            raise ValueError("interval endpoints differ in parity")

    @property
    def parity(self) -> str:
        return "odd" if self.lo % 2 else "even"

    @classmethod
    def of(cls, lo, hi) -> "SpiralityInterval":
        """Build from undoubled values (ints, Fractions or floats with .5)."""
        return cls(int(Fraction(lo) * 2), int(Fraction(hi) * 2))

    def undoubled(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.lo, 2), Fraction(self.hi, 2)

    def contains(self, x: int) -> bool:
        return self.lo <= x <= self.hi and (x - self.lo) % 2 == 0

    def widen(self, bends: int) -> "SpiralityInterval":
        return SpiralityInterval(self.lo - 2 * bends, self.hi + 2 * bends)

    def shift(self, d: int) -> "SpiralityInterval":
        return SpiralityInterval(self.lo + d, self.hi + d)

    def intersect(self, other: "SpiralityInterval") -> Optional["SpiralityInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return SpiralityInterval(lo, hi) if lo <= hi else None

    def __str__(self) -> str:
        return f"[{fmt(self.lo)},{fmt(self.hi)}]"


def fmt(x2: int) -> str:
    """Format a doubled value as an integer or a half."""
    return str(x2 // 2) if x2 % 2 == 0 else f"{x2}/2"


@dataclass(frozen=True)
class RootWindow:
    """Admissible spiralities for the non-reference child of the root."""

    interval: SpiralityInterval

    @property
    def lo(self) -> int:
        return self.interval.lo

    @property
    def hi(self) -> int:
        return self.interval.hi


def interval_qstar(length: int) -> SpiralityInterval:
    """Chain of ``length`` edges: [-length + 1, length - 1]."""
    if length < 1:
        raise ValueError("chain length must be positive")
    return SpiralityInterval(-2 * (length - 1), 2 * (length - 1))


def interval_series(children: Sequence[SpiralityInterval]) -> SpiralityInterval:
    """Componentwise sum of the children's intervals."""
    return SpiralityInterval(sum(c.lo for c in children), sum(c.hi for c in children))


def interval_p3(il: SpiralityInterval, ic: SpiralityInterval,
                ir: SpiralityInterval) -> Optional[SpiralityInterval]:
    """Three-child P-node: left shifted down by 2 meets center and right shifted up by 2."""
    lo = max(il.lo - 4, ic.lo, ir.lo + 4)
    hi = min(il.hi - 4, ic.hi, ir.hi + 4)
    return SpiralityInterval(lo, hi) if lo <= hi else None


def p2_window(ptype: PNodeType) -> tuple[int, int]:
    """Doubled window that the difference of child spiralities must meet."""
    if ptype.family == "Pio2":
        return 4, 8 - 2 * ptype.gamma
    if ptype.family == "Pio3":
        return 5, 7 - 2 * ptype.gamma
    if ptype.family == "Pin3":
        return 6, 6
    raise ValueError("not a two-child P-node")


def p2_bounds(ptype: PNodeType, il: SpiralityInterval, ir: SpiralityInterval) -> tuple[int, int]:
    """Table interval endpoints (m, M) in doubled units, even when m > M."""
    ml, Ml, mr, Mr = il.lo, il.hi, ir.lo, ir.hi
    g = ptype.gamma
    if ptype.family == "Pio2":
        return max(ml - 4, mr) + g, min(Ml, Mr + 4) - g
    if ptype.family == "Pio3":
        f = phi(ptype.d)
        return max(ml - 3, mr + 2) + g - f, min(Ml - 1, Mr + 4) - g - f
    if ptype.family == "Pin3":
        f = phi(ptype.d) + phi(ptype.d2)
        return max(ml - 2, mr + 4) - f, min(Ml - 2, Mr + 4) - f
    raise ValueError("not a two-child P-node")


def p2_condition(ptype: PNodeType, il: SpiralityInterval, ir: SpiralityInterval) -> bool:
    lo, hi = p2_window(ptype)
    return max(il.lo - ir.hi, lo) <= min(il.hi - ir.lo, hi)


def interval_p2(ptype: PNodeType, il: SpiralityInterval,
                ir: SpiralityInterval) -> Optional[SpiralityInterval]:
    """Two-child P-node interval, or None when the condition fails."""
    if not p2_condition(ptype, il, ir):
        return None
    m, M = p2_bounds(ptype, il, ir)
    return SpiralityInterval(m, M)


def root_window_for(indeg_u: int, indeg_v: int) -> RootWindow:
    ones = (indeg_u == 1) + (indeg_v == 1)
    if ones == 2:
        return RootWindow(SpiralityInterval(4, 12))
    if ones == 1:
        return RootWindow(SpiralityInterval(6, 10))
    return RootWindow(SpiralityInterval(8, 8))


def root_window(t: SpqTree) -> RootWindow:
    """Window for the root child, from the pole indegrees of that child."""
    eta = t.eta
    return root_window_for(t.indeg(eta, t.s), t.indeg(eta, t.t))


def node_intervals(t: SpqTree) -> list[Optional[SpiralityInterval]]:
    """Bottom-up representability intervals; None marks a failed condition."""
    out: list[Optional[SpiralityInterval]] = [None] * len(t)
    for x in range(len(t) - 1, -1, -1):
        k = t.kind[x]
        if k == Q:
            out[x] = interval_qstar(len(t.chain_edges[x]))
            continue
        if k == ROOT:
            continue
        ch = [out[c] for c in t.children[x]]
        if any(c is None for c in ch):
            continue
        if k == S:
            out[x] = interval_series(ch)
        elif t.ptype[x].family == "P3":
            out[x] = interval_p3(*ch)
        else:
            out[x] = interval_p2(t.ptype[x], *ch)
    return out


def rectilinear_test_tree(t: SpqTree) -> tuple[bool, list[Optional[SpiralityInterval]]]:
    """Rectilinear planarity of the tree's graph plus per-node intervals."""
    iv = node_intervals(t)
    eta = iv[t.eta]
    if eta is None:
        return False, iv
    if t.is_dummy_ref:
        return True, iv
    return eta.intersect(root_window(t).interval) is not None, iv


def rectilinear_test(g) -> tuple[bool, list[Optional[SpiralityInterval]]]:
    """Test whether ``g`` admits an embedding-preserving drawing without bends."""
    from .pipeline import prepare_all

    first = None
    for p in prepare_all(g):
        res = rectilinear_test_tree(p.tree)
        if res[0]:
            return res
        first = first or res
    return first

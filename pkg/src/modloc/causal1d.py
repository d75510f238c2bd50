"""Exact calculus of causally complete regions in 1+1 dimensional Minkowski space.

Regions are finite unions of closed boxes in lightcone coordinates
u = x0 - x1, v = x0 + x1, with infinite endpoints allowed.  Two events are
causally related (x ~ y) when (x - y)^2 <= 0, boundary light rays included,
so the causal complement of O is the closed set

    O' = R^2 minus (O + V+) minus (O + V-)

with V+- the open light cones.  All set operations run on the grid of
elementary pieces cut out by the box endpoints (open intervals and single
points on each axis).  Only comparisons of endpoints are involved, so the
results are exact.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

log = logging.getLogger(__name__)

INF = math.inf


@dataclass(frozen=True)
class Event:
    x0: float
    x1: float

    @property
    def u(self) -> float:
        return self.x0 - self.x1

    @property
    def v(self) -> float:
        return self.x0 + self.x1

    @classmethod
    def from_uv(cls, u: float, v: float) -> "Event":
        return cls((u + v) / 2, (v - u) / 2)


@dataclass(frozen=True, order=True)
class LightconeBox:
    u1: float
    u2: float
    v1: float
    v2: float

    def __post_init__(self):
        for name in ("u1", "u2", "v1", "v2"):
            x = float(getattr(self, name))
            if math.isnan(x):
                raise ValueError("NaN endpoint")
            object.__setattr__(self, name, x + 0.0)  # drops -0.0
        if not (self.u1 <= self.u2 and self.v1 <= self.v2):
            raise ValueError(f"empty box {self}")
        if self.u1 == INF or self.u2 == -INF or self.v1 == INF or self.v2 == -INF:
            raise ValueError("box endpoints must keep the box inside R^2")

    def contains_uv(self, u: float, v: float) -> bool:
        return self.u1 <= u <= self.u2 and self.v1 <= v <= self.v2

    def contains_box(self, o: "LightconeBox") -> bool:
        return self.u1 <= o.u1 and o.u2 <= self.u2 and self.v1 <= o.v1 and o.v2 <= self.v2

    def to_dict(self) -> dict:
        f = lambda x: None if math.isinf(x) else x
        return {"u": [f(self.u1), f(self.u2)], "v": [f(self.v1), f(self.v2)]}

    @classmethod
    def from_dict(cls, d: dict) -> "LightconeBox":
        (u1, u2), (v1, v2) = d["u"], d["v"]
        lo = lambda x: -INF if x is None else float(x)
        hi = lambda x: INF if x is None else float(x)
        return cls(lo(u1), hi(u2), lo(v1), hi(v2))


# -- piece grids ---------------------------------------------------------------


class _Axis:
    """Elementary pieces of a line cut at sorted breakpoints b_0 < ... < b_{k-1}.

    Piece 2j+1 is the point b_j; piece 2j is the open interval (b_{j-1}, b_j)
    with b_{-1} = -inf and b_k = +inf.
    """

    def __init__(self, breaks: Iterable[float]):
        b = sorted({float(x) for x in breaks if not math.isinf(x)})
        self.breaks = np.array(b, dtype=float)
        k = len(b)
        self.n = 2 * k + 1
        lo = np.empty(self.n)
        hi = np.empty(self.n)
        ext = np.concatenate([[-INF], self.breaks, [INF]])
        lo[0::2] = ext[:-1]
        hi[0::2] = ext[1:]
        lo[1::2] = self.breaks
        hi[1::2] = self.breaks
        self.lo = lo
        self.hi = hi
        self.is_point = np.zeros(self.n, dtype=bool)
        self.is_point[1::2] = True

    def closed(self, a: float, b: float) -> np.ndarray:
        """Pieces inside [a, b]."""
        return (self.lo >= a) & (self.hi <= b)

    def greater(self, a: float) -> np.ndarray:
        """Pieces inside (a, inf)."""
        return np.where(self.is_point, self.lo > a, self.lo >= a)

    def less(self, b: float) -> np.ndarray:
        """Pieces inside (-inf, b)."""
        return np.where(self.is_point, self.hi < b, self.hi <= b)

    def run_closure(self, i: int, j: int) -> Tuple[float, float]:
        """Closure of the union of pieces i..j (consecutive)."""
        return float(self.lo[i]), float(self.hi[j])

    def sample(self, i: int) -> float:
        """A representative coordinate inside piece i."""
        lo, hi = self.lo[i], self.hi[i]
        if lo == hi:
            return float(lo)
        if math.isinf(lo) and math.isinf(hi):
            return 0.0
        if math.isinf(lo):
            return float(hi - 1.0)
        if math.isinf(hi):
            return float(lo + 1.0)
        return float((lo + hi) / 2)


class _Grid:
    def __init__(self, boxes: Iterable[LightconeBox]):
        boxes = list(boxes)
        self.U = _Axis([x for b in boxes for x in (b.u1, b.u2)])
        self.V = _Axis([x for b in boxes for x in (b.v1, b.v2)])

    def fill(self, boxes: Iterable[LightconeBox]) -> np.ndarray:
        G = np.zeros((self.U.n, self.V.n), dtype=bool)
        for b in boxes:
            G |= np.outer(self.U.closed(b.u1, b.u2), self.V.closed(b.v1, b.v2))
        return G

    def chronological(self, boxes: Iterable[LightconeBox]) -> np.ndarray:
        """Cells of (O + V+) u (O + V-), both cones open."""
        G = np.zeros((self.U.n, self.V.n), dtype=bool)
        for b in boxes:
            G |= np.outer(self.U.greater(b.u1), self.V.greater(b.v1))
            G |= np.outer(self.U.less(b.u2), self.V.less(b.v2))
        return G

    def boxes(self, G: np.ndarray) -> Tuple[LightconeBox, ...]:
        """Closed boxes whose union is the (closed) set G."""
        out: List[LightconeBox] = []
        nu = G.shape[0]
        i = 0
        while i < nu:
            col = G[i]
            j = i
            while j + 1 < nu and np.array_equal(G[j + 1], col):
                j += 1
            if col.any():
                u1, u2 = self.U.run_closure(i, j)
                idx = np.flatnonzero(col)
                # split the true pieces of the column into consecutive runs
                cuts = np.flatnonzero(np.diff(idx) > 1)
                starts = np.concatenate([[idx[0]], idx[cuts + 1]])
                ends = np.concatenate([idx[cuts], [idx[-1]]])
                for s, e in zip(starts, ends):
                    v1, v2 = self.V.run_closure(int(s), int(e))
                    out.append(LightconeBox(u1, u2, v1, v2))
            i = j + 1
        return _prune(out)


def _prune(boxes: Sequence[LightconeBox]) -> Tuple[LightconeBox, ...]:
    uniq = sorted(set(boxes))
    keep = []
    for i, b in enumerate(uniq):
        if any(j != i and o.contains_box(b) and o != b for j, o in enumerate(uniq)):
            continue
        keep.append(b)
    return tuple(keep)


# -- regions -----------------------------------------------------------------


class CausalRegion:
    """Closed finite union of lightcone boxes, stored in canonical form."""

    __slots__ = ("cells",)

    def __init__(self, boxes: Iterable[LightconeBox] = (), canonical: bool = False):
        boxes = tuple(boxes)
        if not canonical:
            g = _Grid(boxes)
            boxes = g.boxes(g.fill(boxes))
        object.__setattr__(self, "cells", boxes)

    def __setattr__(self, *a):
        raise AttributeError("CausalRegion is immutable")

    # constructors
    @classmethod
    def empty(cls) -> "CausalRegion":
        return cls((), canonical=True)

    @classmethod
    def full(cls) -> "CausalRegion":
        return cls((LightconeBox(-INF, INF, -INF, INF),), canonical=True)

    @classmethod
    def point(cls, x0: float, x1: float) -> "CausalRegion":
        e = Event(x0, x1)
        return cls((LightconeBox(e.u, e.u, e.v, e.v),))

    @classmethod
    def box(cls, u1, u2, v1, v2) -> "CausalRegion":
        return cls((LightconeBox(u1, u2, v1, v2),))

    @classmethod
    def right_wedge(cls) -> "CausalRegion":
        return spatial_completion([(0.0, INF)])

    @classmethod
    def left_wedge(cls) -> "CausalRegion":
        return spatial_completion([(-INF, 0.0)])

    # predicates
    def is_empty(self) -> bool:
        return not self.cells

    def is_full(self) -> bool:
        return self.cells == (LightconeBox(-INF, INF, -INF, INF),)

    def is_point(self) -> bool:
        return len(self.cells) == 1 and self.cells[0].u1 == self.cells[0].u2 and self.cells[0].v1 == self.cells[0].v2

    def contains_uv(self, u: float, v: float) -> bool:
        return any(b.contains_uv(u, v) for b in self.cells)

    def contains(self, x0: float, x1: float) -> bool:
        return self.contains_uv(x0 - x1, x0 + x1)

    def is_complete(self) -> bool:
        return causal_completion(self) == self

    def __eq__(self, other):
        return isinstance(other, CausalRegion) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __le__(self, other: "CausalRegion") -> bool:
        return region_subset(self, other)

    def __repr__(self):
        return f"CausalRegion({describe(self)})"

    def to_json(self) -> str:
        return json.dumps([b.to_dict() for b in self.cells])

    @classmethod
    def from_json(cls, text: str) -> "CausalRegion":
        return cls(LightconeBox.from_dict(d) for d in json.loads(text))


def describe(O: CausalRegion) -> str:
    if O.is_empty():
        return "empty"
    if O.is_full():
        return "full"
    if O.is_point():
        e = Event.from_uv(O.cells[0].u1, O.cells[0].v1)
        return f"point({_num(e.x0)},{_num(e.x1)})"
    return O.to_json()


def _num(x: float) -> str:
    return repr(float(x)).rstrip("0").rstrip(".") if float(x) != int(x) else str(int(x))


def _grid_of(*regions: CausalRegion, extra: Iterable[LightconeBox] = ()) -> _Grid:
    return _Grid([b for O in regions for b in O.cells] + list(extra))


def region_union(O1: CausalRegion, O2: CausalRegion) -> CausalRegion:
    """Set union (not causally completed)."""
    return CausalRegion(O1.cells + O2.cells)


def region_meet(O1: CausalRegion, O2: CausalRegion) -> CausalRegion:
    g = _grid_of(O1, O2)
    G = g.fill(O1.cells) & g.fill(O2.cells)
    return CausalRegion(g.boxes(G), canonical=True)


def region_subset(O1: CausalRegion, O2: CausalRegion) -> bool:
    g = _grid_of(O1, O2)
    return not np.any(g.fill(O1.cells) & ~g.fill(O2.cells))


def causal_complement(O: CausalRegion) -> CausalRegion:
    if O.is_empty():
        return CausalRegion.full()
    g = _grid_of(O)
    G = ~g.chronological(O.cells)
    return CausalRegion(g.boxes(G), canonical=True)


def causal_completion(O: CausalRegion) -> CausalRegion:
    return causal_complement(causal_complement(O))


def region_join(O1: CausalRegion, O2: CausalRegion) -> CausalRegion:
    return causal_completion(region_union(O1, O2))


def region_separated(O1: CausalRegion, O2: CausalRegion) -> bool:
    """O1 <= O2', exact."""
    return region_subset(O1, causal_complement(O2))


def spatially_separated(A: Sequence[Tuple[float, float]], B: Sequence[Tuple[float, float]],
                        x: Tuple[float, float] = (0.0, 0.0), y: Tuple[float, float] = (0.0, 0.0)) -> bool:
    """Spatial form of c(A)+x <= (c(B)+y)'.

    B must avoid the open enlargement of A + (x1 - y1) by |x0 - y0| on both
    sides; lightlike contact is allowed.
    """
    s = x[1] - y[1]
    r = abs(x[0] - y[0])
    for a1, a2 in _normalize_intervals(A):
        lo, hi = a1 + s - r, a2 + s + r
        for b1, b2 in _normalize_intervals(B):
            if b2 > lo and b1 < hi:
                return False
    return True


# -- spatial completion ------------------------------------------------------


def _normalize_intervals(A: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    ivs = sorted((float(a), float(b)) for a, b in A)
    for a, b in ivs:
        if a > b:
            raise ValueError(f"interval [{a}, {b}] has a > b")
    merged: List[Tuple[float, float]] = []
    for a, b in ivs:
        if merged and a <= merged[-1][1]:
            log.info("merging overlapping intervals [%g, %g] and [%g, %g]", merged[-1][0], merged[-1][1], a, b)
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def spatial_completion(A: Sequence[Tuple[float, float]]) -> CausalRegion:
    """c(A) = ({0} x A)'' for a finite union of closed intervals and half-lines."""
    boxes = []
    for a, b in _normalize_intervals(A):
        if a == -INF and b == INF:
            return CausalRegion.full()
        boxes.append(LightconeBox(-b, -a, a, b))
    return CausalRegion(boxes)


# -- time slices ---------------------------------------------------------------


def _merge_closed(ivs: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    ivs = sorted(ivs)
    out: List[Tuple[float, float]] = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def time_slice(O: CausalRegion, t: float, chronological: bool = True) -> List[Tuple[float, float]]:
    """Spatial intervals on the line x0 = t.

    With chronological=True the slice of the closure of O u (O + V+) u (O + V-)
    is returned, which for O = c(A) + x gives A + x1 + |t - x0| [-1, 1].
    With chronological=False it is the plain slice of O.
    """
    ivs: List[Tuple[float, float]] = []
    for b in O.cells:
        # on the line: u = t - x1, v = t + x1
        lo = max(t - b.u2, b.v1 - t)
        hi = min(t - b.u1, b.v2 - t)
        if lo <= hi:
            ivs.append((lo, hi))
        if chronological:
            lo, hi = b.v1 - t, t - b.u1
            if lo < hi:
                ivs.append((lo, hi))
            lo, hi = t - b.u2, b.v2 - t
            if lo < hi:
                ivs.append((lo, hi))
    return _merge_closed(ivs)


# -- Poincare action -----------------------------------------------------------


@dataclass(frozen=True)
class PoincareElement1d:
    """x -> L x + a with L = boost(rapidity) composed with optional P and T."""

    rapidity: float = 0.0
    a0: float = 0.0
    a1: float = 0.0
    parity: bool = False
    time_reflection: bool = False

    def apply_uv(self, u: float, v: float) -> Tuple[float, float]:
        if self.parity:
            u, v = v, u
        if self.time_reflection:
            u, v = -v, -u
        u, v = math.exp(-self.rapidity) * u, math.exp(self.rapidity) * v
        return u + (self.a0 - self.a1), v + (self.a0 + self.a1)

    def apply_event(self, x: Event) -> Event:
        return Event.from_uv(*self.apply_uv(x.u, x.v))

    def apply_box(self, b: LightconeBox) -> LightconeBox:
        u1, u2, v1, v2 = b.u1, b.u2, b.v1, b.v2
        if self.parity:
            u1, u2, v1, v2 = v1, v2, u1, u2
        if self.time_reflection:
            u1, u2, v1, v2 = -v2, -v1, -u2, -u1
        eu, ev = math.exp(-self.rapidity), math.exp(self.rapidity)
        du, dv = self.a0 - self.a1, self.a0 + self.a1
        sc = lambda x, k, d: x if math.isinf(x) else k * x + d
        return LightconeBox(sc(u1, eu, du), sc(u2, eu, du), sc(v1, ev, dv), sc(v2, ev, dv))


def poincare_apply(g: PoincareElement1d, O: CausalRegion) -> CausalRegion:
    return CausalRegion(g.apply_box(b) for b in O.cells)


def translate(O: CausalRegion, a0: float, a1: float) -> CausalRegion:
    return poincare_apply(PoincareElement1d(a0=a0, a1=a1), O)


def boost(O: CausalRegion, t: float) -> CausalRegion:
    return poincare_apply(PoincareElement1d(rapidity=t), O)


# -- brute-force oracles (used by tests and the self-check) -------------------


def timelike_to_box(u: float, v: float, b: LightconeBox, clip: float = 1e9) -> bool:
    """Is (u, v) strictly timelike to some point of b?  Checked on the corners.

    (u - yu)(v - yv) is bilinear in y, so its maximum over a box is attained
    at a corner; infinite sides are clipped far away.
    """
    cu = [max(min(b.u1, clip), -clip), max(min(b.u2, clip), -clip)]
    cv = [max(min(b.v1, clip), -clip), max(min(b.v2, clip), -clip)]
    return any((u - yu) * (v - yv) > 0 for yu in cu for yv in cv)


def complement_oracle(O: CausalRegion, u: float, v: float) -> bool:
    return not any(timelike_to_box(u, v, b) for b in O.cells)


def distributivity_witness() -> Tuple[CausalRegion, CausalRegion, CausalRegion]:
    """Three complete regions with O1 & (O2 v O3) != (O1 & O2) v (O1 & O3).

    O2, O3 are two timelike points; their join is the double cone between
    them, which contains O1 while O1 meets neither point.
    """
    O2 = CausalRegion.point(-1.0, 0.0)
    O3 = CausalRegion.point(1.0, 0.0)
    O1 = spatial_completion([(-0.25, 0.25)])
    return O1, O2, O3


def distributivity_boxes() -> Tuple[CausalRegion, CausalRegion, CausalRegion]:
    """Box version of the witness, given directly in (u, v)."""
    O1 = CausalRegion.box(-1.25, 0.0, 0.0, 1.5)
    O2 = CausalRegion.box(-1.5, -0.25, -1.5, -0.25)
    O3 = CausalRegion.box(0.25, 1.5, -0.5, 0.75)
    return O1, O2, O3

"""Eventually periodic subsets of N0 x N0 \\ {(0,0)}, i.e. sets of idempotents.

The idempotent ``(-a,0,b)`` of FI1 is the point ``(a, b)``.  Smaller
coordinates mean a larger idempotent; the meet of two idempotents is the
componentwise maximum.

A :class:`PeriodicSet` is a finite union of primitives:

* a cell ``{o}``,
* an ``a``-ray ``{o + (m*k, 0)}``, a ``b``-ray ``{o + (0, n*k)}``,
* a ``both``-ray (a grid quadrant) ``{o + (m*k, n*k)}``,

with ``m, n >= 0``.  Descriptions are compared by membership, never by
representation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .core import Triple, mirror

__all__ = [
    "IdemPoint", "Ray", "PeriodicSet", "contains", "union", "maximal_elements",
    "verify_period", "monogenic_idempotents", "meet_closure", "difference",
    "equivalent", "full_semilattice", "EMPTY", "ray_along", "cells",
]

AXES = ("a", "b", "both")


class _PointFields(NamedTuple):
    a: int
    b: int


class IdemPoint(_PointFields):
    __slots__ = ()

    def __new__(cls, a: int, b: int) -> "IdemPoint":
        a, b = int(a), int(b)
        if a < 0 or b < 0:
            raise ValueError(f"coordinates must be non-negative, got ({a},{b})")
        if a + b < 1:
            raise ValueError("(0,0) is not an idempotent of FI1")
        return tuple.__new__(cls, (a, b))

    @classmethod
    def of(cls, t: Triple) -> "IdemPoint":
        if t.p != 0:
            raise ValueError(f"{t} is not idempotent")
        return tuple.__new__(cls, (t.a, t.b))

    def triple(self) -> Triple:
        return tuple.__new__(Triple, (self.a, 0, self.b))

    def swap(self) -> "IdemPoint":
        return tuple.__new__(IdemPoint, (self.b, self.a))

    def below_or_equal(self, other: "IdemPoint") -> bool:
        """Order of idempotents: ``self <= other`` iff self's coordinates dominate."""
        return self.a >= other.a and self.b >= other.b

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


@dataclass(frozen=True)
class Ray:
    origin: IdemPoint
    axis: str
    step: int

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.step < 1:
            raise ValueError("ray step must be positive")

    def __contains__(self, pt) -> bool:
        a, b = pt
        oa, ob = self.origin
        k = self.step
        if self.axis == "a":
            return b == ob and a >= oa and (a - oa) % k == 0
        if self.axis == "b":
            return a == oa and b >= ob and (b - ob) % k == 0
        return a >= oa and b >= ob and (a - oa) % k == 0 and (b - ob) % k == 0

    def swap(self) -> "Ray":
        axis = {"a": "b", "b": "a", "both": "both"}[self.axis]
        return Ray(self.origin.swap(), axis, self.step)


@dataclass(frozen=True)
class PeriodicSet:
    cells: frozenset = frozenset()
    rays: frozenset = frozenset()
    period: int = 1

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(IdemPoint(*c) for c in self.cells))
        object.__setattr__(self, "rays", frozenset(self.rays))
        if self.period < 1:
            raise ValueError("period must be positive")
        for r in self.rays:
            if not isinstance(r, Ray):
                raise TypeError(f"expected Ray, got {r!r}")

    def __contains__(self, pt) -> bool:
        return contains(self, pt)

    @property
    def is_finite(self) -> bool:
        return not self.rays

    def base_extent(self) -> int:
        """Largest coordinate of any cell or ray origin."""
        pts = list(self.cells) + [r.origin for r in self.rays]
        return max((max(p) for p in pts), default=0)

    def steps(self) -> set[int]:
        return {r.step for r in self.rays} | {self.period}

    def points(self, box: int) -> Iterator[IdemPoint]:
        """Members in ``[0, box]^2``, row by row."""
        for a in range(box + 1):
            for b in range(box + 1):
                if (a or b) and contains(self, (a, b)):
                    yield tuple.__new__(IdemPoint, (a, b))

    def points_upto_dindex(self, m: int) -> Iterator[IdemPoint]:
        for d in range(1, m + 1):
            for a in range(d + 1):
                if contains(self, (a, d - a)):
                    yield tuple.__new__(IdemPoint, (a, d - a))

    def swap(self) -> "PeriodicSet":
        """Image under the mirror automorphism."""
        return PeriodicSet(frozenset(c.swap() for c in self.cells),
                           frozenset(r.swap() for r in self.rays), self.period)

    def to_json(self) -> dict:
        return {
            "cells": sorted([list(c) for c in self.cells]),
            "rays": sorted(
                ({"origin": list(r.origin), "axis": r.axis, "step": r.step} for r in self.rays),
                key=lambda d: (d["origin"], d["axis"], d["step"]),
            ),
            "period": self.period,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PeriodicSet":
        cells = frozenset(IdemPoint(*c) for c in obj.get("cells", []))
        rays = frozenset(
            Ray(IdemPoint(*r["origin"]), r["axis"], int(r["step"])) for r in obj.get("rays", [])
        )
        return cls(cells, rays, int(obj.get("period", 1)))

    def __str__(self) -> str:
        parts = [str(c) for c in sorted(self.cells)]
        parts += [f"{r.origin}+{r.step}N[{r.axis}]" for r in sorted(self.rays, key=lambda r: (r.origin, r.axis))]
        return "{" + ", ".join(parts) + "}"


EMPTY = PeriodicSet()


def contains(s: PeriodicSet, e) -> bool:
    if e not in s.cells:
        return any(e in r for r in s.rays)
    return True


def full_semilattice() -> PeriodicSet:
    """All of E(FI1)."""
    return PeriodicSet(
        rays=frozenset({Ray(IdemPoint(1, 0), "both", 1), Ray(IdemPoint(0, 1), "b", 1)})
    )


def union(*sets: PeriodicSet) -> PeriodicSet:
    cells = frozenset().union(*(s.cells for s in sets))
    rays = frozenset().union(*(s.rays for s in sets))
    period = math.lcm(*(s.period for s in sets)) if sets else 1
    # drop cells already covered by a ray
    cells = frozenset(c for c in cells if not any(c in r for r in rays))
    return PeriodicSet(cells, rays, period)


def maximal_elements(s: PeriodicSet) -> set[IdemPoint]:
    """Largest idempotents of ``s`` (points with componentwise-minimal coordinates).

    Every member dominates a cell or a ray origin, so the answer is among those.
    """
    cands = set(s.cells) | {r.origin for r in s.rays}
    return {e for e in cands
            if not any(f != e and e.a >= f.a and e.b >= f.b for f in cands)}


def verify_period(s: PeriodicSet, q: int, box: int) -> bool:
    """Check the strict periodicity condition for ``q`` on ``[0, box]^2``."""
    if q < 1:
        raise ValueError("periodicity must be positive")
    need = s.base_extent() + 2 * q
    if box < need:
        raise ValueError(f"box {box} too small: need at least {need}")
    for pt in s.points(box):
        if not (contains(s, (pt.a + q, pt.b)) and contains(s, (pt.a, pt.b + q))):
            return False
    return True


def monogenic_idempotents(u: Triple) -> PeriodicSet:
    """E(<u>) for a non-idempotent ``u``.

    With ``u = (-a,p,b)`` and ``p > 0`` the semilattice is the grid quadrant
    from ``(a, b)`` with step ``p`` together with the ``a``-ray from
    ``(a+p, b-p)``; the point ``u^-m u^m u^n u^-n`` sits at
    ``(a+m*p, b+(n-1)*p)`` for ``n >= 1`` and at ``(a+m*p, b-p)`` for ``n = 0``.
    Negative displacements go through the mirror.
    """
    if u.p == 0:
        raise ValueError(f"{u} is idempotent")
    if u.p < 0:
        return monogenic_idempotents(mirror(u)).swap()
    a, p, b = u
    rays = {Ray(IdemPoint(a, b), "both", p)}
    # b - p may be 0 here; a + p >= 1 keeps the origin valid
    rays.add(Ray(IdemPoint(a + p, b - p), "a", p))
    return PeriodicSet(frozenset(), frozenset(rays), p)


# --- 1-D pieces: ("pt", c) or ("ray", o, k) ----------------------------------

def _factor(prim) -> tuple[tuple, tuple]:
    """Split a primitive into its two coordinate sets."""
    if isinstance(prim, Ray):
        oa, ob = prim.origin
        k = prim.step
        if prim.axis == "a":
            return ("ray", oa, k), ("pt", ob)
        if prim.axis == "b":
            return ("pt", oa), ("ray", ob, k)
        return ("ray", oa, k), ("ray", ob, k)
    return ("pt", prim.a), ("pt", prim.b)


def _min1(piece) -> int:
    return piece[1]


def _max_set(pieces: list[tuple]) -> list[tuple]:
    """Values of ``max(x_1..x_n)`` with ``x_i`` drawn from ``pieces[i]``."""
    low = max(_min1(p) for p in pieces)
    out = set()
    for p in pieces:
        if p[0] == "pt":
            if p[1] >= low:
                out.add(p)
        else:
            _, o, k = p
            start = o if o >= low else o + -(-(low - o) // k) * k
            out.add(("ray", start, k))
    return sorted(out)


def _product(pa, pb) -> list:
    """Primitives whose union is ``pa x pb``."""
    if pa[0] == "pt" and pb[0] == "pt":
        return [IdemPoint(pa[1], pb[1])]
    if pb[0] == "pt":
        return [Ray(IdemPoint(pa[1], pb[1]), "a", pa[2])]
    if pa[0] == "pt":
        return [Ray(IdemPoint(pa[1], pb[1]), "b", pb[2])]
    ka, kb = pa[2], pb[2]
    k = math.lcm(ka, kb)
    return [Ray(IdemPoint(pa[1] + i * ka, pb[1] + j * kb), "both", k)
            for i in range(k // ka) for j in range(k // kb)]


def _build(prims: Iterable, period: int) -> PeriodicSet:
    cells, rays = set(), set()
    for p in prims:
        (rays if isinstance(p, Ray) else cells).add(p)
    return union(PeriodicSet(frozenset(cells), frozenset(rays), period))


MEET_CLOSURE_LIMIT = 16


def meet_closure(s: PeriodicSet) -> PeriodicSet:
    """Closure of ``s`` under componentwise maxima (the generated semilattice).

    Each primitive is a product of two coordinate sets that are closed under
    max, so the closure is the union, over non-empty families of primitives,
    of the product of the per-coordinate max-sets.
    """
    prims = sorted(s.cells) + sorted(s.rays, key=lambda r: (r.origin, r.axis, r.step))
    if len(prims) > MEET_CLOSURE_LIMIT:
        raise ValueError(f"meet closure supports at most {MEET_CLOSURE_LIMIT} primitives")
    factors = [_factor(p) for p in prims]
    out: list = []
    for r in range(1, len(prims) + 1):
        for family in itertools.combinations(factors, r):
            for pa in _max_set([f[0] for f in family]):
                for pb in _max_set([f[1] for f in family]):
                    out.extend(_product(pa, pb))
    return _build(out, math.lcm(*s.steps()))


def _window(s1: PeriodicSet, s2: PeriodicSet) -> tuple[int, int]:
    threshold = max(s1.base_extent(), s2.base_extent())
    period = math.lcm(*(s1.steps() | s2.steps()))
    return threshold, period


def difference(s1: PeriodicSet, s2: PeriodicSet) -> PeriodicSet:
    """Exact description of ``s1 \\ s2``.

    Beyond every base coordinate of either set, membership in ``s2`` along any
    primitive of ``s1`` repeats with period ``L`` (the lcm of all steps), so a
    single window per eventually-periodic coordinate decides each tail.
    """
    T, L = _window(s1, s2)
    out: list = []
    for c in s1.cells:
        if not contains(s2, c):
            out.append(c)
    for r in s1.rays:
        pa, pb = _factor(r)
        for xa, tail_a in _split(pa, T, L):
            for xb, tail_b in _split(pb, T, L):
                if contains(s2, (xa, xb)):
                    continue
                if tail_a and tail_b:
                    out.append(Ray(IdemPoint(xa, xb), "both", L))
                elif tail_a:
                    out.append(Ray(IdemPoint(xa, xb), "a", L))
                elif tail_b:
                    out.append(Ray(IdemPoint(xa, xb), "b", L))
                else:
                    out.append(IdemPoint(xa, xb))
    return _build(out, L)


def _split(piece, T: int, L: int) -> list[tuple[int, bool]]:
    """Values up to the threshold (as singletons) plus one period of tail starts."""
    if piece[0] == "pt":
        return [(piece[1], False)]
    _, o, k = piece
    vals = []
    v = o
    while v <= T:
        vals.append((v, False))
        v += k
    for _ in range(L // k):
        vals.append((v, True))
        v += k
    return vals


def equivalent(s1: PeriodicSet, s2: PeriodicSet, box: int | None = None) -> bool:
    """Membership equality, tested on a box that suffices for both descriptions."""
    if box is None:
        T, L = _window(s1, s2)
        box = T + 2 * L
    return all(contains(s1, (a, b)) == contains(s2, (a, b))
               for a in range(box + 1) for b in range(box + 1) if a or b)


def ray_along(origin: tuple[int, int], axis: str, step: int = 1) -> PeriodicSet:
    """Single-ray set, e.g. ``ray_along((1, 0), "a")`` is ``{(n, 0) : n >= 1}``."""
    return PeriodicSet(rays=frozenset({Ray(IdemPoint(*origin), axis, step)}), period=step)


def cells(points: Iterable) -> PeriodicSet:
    return PeriodicSet(frozenset(IdemPoint(*p) for p in points))

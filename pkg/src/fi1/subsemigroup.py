"""Inverse subsemigroups of FI1 given by finitely many non-idempotent
generators and an optional eventually periodic family of idempotents.

Everything rests on one fact: the D-index ``a + b`` never decreases under
multiplication.  So ``S`` restricted to D-index at most ``M`` is reached by
products whose every prefix also has D-index at most ``M``, and a bounded
fixpoint computes it exactly.

``S_bar`` (the part generated by non-idempotents) consists of exactly the
products with at least one factor from the non-idempotent generators; it is
an ideal of ``S`` and every element of ``S`` outside it is an idempotent.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable

from .core import Triple, inv, mul
from .errors import CertificationError, DeepeningCapError, EngineError
from .eset import (
    EMPTY, IdemPoint, PeriodicSet, cells, contains, difference, maximal_elements,
    meet_closure, monogenic_idempotents, union,
)

log = logging.getLogger(__name__)

__all__ = [
    "SubsemigroupSpec", "StructureParams", "Claim1Trace",
    "bounded_closure", "sbar_closure", "member", "sbar_member", "structure_params",
    "claim1_trace", "idempotent_semilattice", "sbar_semilattice",
    "theorem_a_generators", "claim_rab", "sbar_complement", "is_finitely_generated",
    "spec_from_elements", "canonical_order",
]

DEEPENING_CAP = 64


def canonical_order(t: Triple) -> tuple[int, int, int]:
    return (t.a + t.b, t.a, t.p)


@dataclass(frozen=True)
class SubsemigroupSpec:
    gens: tuple[Triple, ...]
    idems: PeriodicSet | None = None

    def __post_init__(self):
        gens = tuple(sorted({Triple(*g) for g in self.gens}, key=canonical_order))
        for g in gens:
            if g.p == 0:
                raise ValueError(f"generator {g} is idempotent; put it in idems")
        object.__setattr__(self, "gens", gens)
        if self.idems is not None and not isinstance(self.idems, PeriodicSet):
            raise TypeError("idems must be a PeriodicSet or None")

    @property
    def letters(self) -> tuple[Triple, ...]:
        """Generators followed by their inverses, duplicates removed."""
        out = list(self.gens)
        for g in self.gens:
            if inv(g) not in out:
                out.append(inv(g))
        return tuple(out)

    def max_gen_dindex(self) -> int:
        return max((g.dindex for g in self.gens), default=1)

    def seeds(self, m: int) -> list[Triple]:
        out = [g for g in self.letters if g.dindex <= m]
        if self.idems is not None:
            out.extend(e.triple() for e in self.idems.points_upto_dindex(m))
        return out

    def with_idems(self, extra: PeriodicSet) -> "SubsemigroupSpec":
        idems = extra if self.idems is None else union(self.idems, extra)
        return SubsemigroupSpec(self.gens, idems)

    def to_json(self) -> dict:
        return {
            "gens": [list(g.signed()) for g in self.gens],
            "idems": None if self.idems is None else self.idems.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SubsemigroupSpec":
        gens = tuple(Triple.from_signed(*g) for g in obj.get("gens", []))
        idems = obj.get("idems")
        return cls(gens, None if idems is None else PeriodicSet.from_json(idems))


def spec_from_elements(elements: Iterable[Triple], idems: PeriodicSet | None = None) -> SubsemigroupSpec:
    """Spec generated by arbitrary elements; idempotent ones become cells."""
    elements = list(elements)
    family = cells(IdemPoint.of(t) for t in elements if t.p == 0)
    if idems is not None:
        family = union(family, idems)
    has_idems = bool(family.cells or family.rays)
    return SubsemigroupSpec(tuple(t for t in elements if t.p != 0), family if has_idems else None)


# --- bounded closures ---------------------------------------------------------

_cache: dict[tuple[SubsemigroupSpec, str], tuple[int, frozenset]] = {}
_CACHE_LIMIT = 256


def _compute(spec: SubsemigroupSpec, m: int, kind: str) -> frozenset:
    seeds = spec.seeds(m)
    if kind == "S":
        start = seeds
    else:
        start = [g for g in spec.letters if g.dindex <= m]
    seen = set(start)
    frontier = list(seen)
    two_sided = kind == "Sbar"
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = mul(x, s)
                if y.a + y.b <= m and y not in seen:
                    seen.add(y)
                    nxt.append(y)
                if two_sided:
                    y = mul(s, x)
                    if y.a + y.b <= m and y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _closure_upto(spec: SubsemigroupSpec, m: int, kind: str = "S") -> frozenset:
    """A closure computed at some bound ``>= m``; membership of any ``t`` with
    ``dindex(t) <= m`` can be read off it directly."""
    key = (spec, kind)
    hit = _cache.get(key)
    if hit is not None and hit[0] >= m:
        return hit[1]
    result = _compute(spec, m, kind)
    if len(_cache) >= _CACHE_LIMIT:
        _cache.clear()
    _cache[key] = (m, result)
    return result


def bounded_closure(spec: SubsemigroupSpec, M: int) -> tuple[Triple, ...]:
    """``S`` intersected with ``D_1 u ... u D_M``, sorted by (dindex, a, p)."""
    if M < 1:
        raise ValueError("M must be at least 1")
    full = _closure_upto(spec, M, "S")
    return tuple(sorted((t for t in full if t.a + t.b <= M), key=canonical_order))


def sbar_closure(spec: SubsemigroupSpec, M: int) -> tuple[Triple, ...]:
    """``S_bar`` intersected with ``D_1 u ... u D_M``."""
    if M < 1:
        raise ValueError("M must be at least 1")
    full = _closure_upto(spec, M, "Sbar")
    return tuple(sorted((t for t in full if t.a + t.b <= M), key=canonical_order))


def member(spec: SubsemigroupSpec, t: Triple) -> bool:
    return t in _closure_upto(spec, t.dindex, "S")


def sbar_member(spec: SubsemigroupSpec, t: Triple) -> bool:
    return t in _closure_upto(spec, t.dindex, "Sbar")


def _idempotent_points(spec: SubsemigroupSpec, box: int, kind: str) -> set[IdemPoint]:
    full = _closure_upto(spec, 2 * box, kind)
    return {IdemPoint(t.a, t.b) for t in full if t.p == 0 and t.a <= box and t.b <= box}


# --- structure parameters -----------------------------------------------------

@dataclass(frozen=True)
class StructureParams:
    a_min: int
    b_min: int
    p: int
    alpha: Triple
    beta: Triple
    N: int

    def to_json(self) -> dict:
        return {"a_min": self.a_min, "b_min": self.b_min, "p": self.p,
                "alpha": str(self.alpha), "beta": str(self.beta), "N": self.N}


def structure_params(spec: SubsemigroupSpec, cap: int = DEEPENING_CAP) -> StructureParams:
    """Parameters of ``S_bar``: least reaches, displacement gcd, and the
    shortest elements ``alpha = (-a_min, p, .)`` and ``beta = (., -p, b_min)``.

    The least reaches are read off the generators and their inverses: the
    leftmost non-idempotent factor of a product bounds its left reach from
    below, and the mirror gives the right side.
    """
    if not spec.gens:
        raise ValueError("structure parameters need at least one non-idempotent generator")
    letters = spec.letters
    a_min = min(g.a for g in letters)
    b_min = min(g.b for g in letters)
    p = reduce(math.gcd, (abs(g.p) for g in spec.gens))
    m = spec.max_gen_dindex()
    while True:
        found = _find_alpha_beta(spec, m, a_min, b_min, p)
        if found is not None:
            alpha, beta = found
            return StructureParams(a_min, b_min, p, alpha, beta, beta.a + alpha.b)
        if m >= cap:
            raise DeepeningCapError(
                f"no alpha/beta witnesses up to D-index {m} "
                f"(a_min={a_min}, b_min={b_min}, p={p}); raise the cap"
            )
        m = min(2 * m, cap)
        log.debug("deepening alpha/beta search to M=%d", m)


def _find_alpha_beta(spec, m, a_min, b_min, p):
    full = _closure_upto(spec, m, "S")
    alphas = [t for t in full if t.a + t.b <= m and t.a == a_min and t.p == p]
    betas = [t for t in full if t.a + t.b <= m and t.b == b_min and t.p == -p]
    if not alphas or not betas:
        return None
    return min(alphas, key=lambda t: t.b), min(betas, key=lambda t: t.a)


# --- E(S_bar) as a finite union of monogenic semilattices ---------------------

@dataclass(frozen=True)
class Claim1Trace:
    maximal_idems: tuple[IdemPoint, ...]
    witnesses: tuple[Triple, ...]
    q: int
    X: PeriodicSet
    slice_maxima: dict = field(default_factory=dict)
    slice_witnesses: dict = field(default_factory=dict)
    T1: tuple[Triple, ...] = ()
    search_box: int = 0

    @property
    def semilattice(self) -> PeriodicSet:
        return union(*(monogenic_idempotents(t) for t in self.T1))

    def to_json(self) -> dict:
        return {
            "maximal_idems": [list(e) for e in self.maximal_idems],
            "witnesses": [str(t) for t in self.witnesses],
            "q": self.q,
            "X": self.X.to_json(),
            "slice_maxima": [
                {"i": i, "r": r, "s": s, "maxima": [list(e) for e in sorted(es)]}
                for (i, r, s), es in sorted(self.slice_maxima.items())
            ],
            "slice_witnesses": [
                {"i": i, "r": r, "s": s, "e": list(e), "u": str(u)}
                for (i, r, s, e), u in sorted(self.slice_witnesses.items())
            ],
            "T1": [str(t) for t in self.T1],
            "search_box": self.search_box,
        }


def claim1_trace(spec: SubsemigroupSpec, search_box: int | None = None) -> Claim1Trace:
    if not spec.gens:
        raise ValueError("the monogenic decomposition needs a non-idempotent generator")
    # every idempotent e of S_bar lies below g g^-1 for the first
    # non-idempotent factor g of a product equal to e
    tops: dict[IdemPoint, Triple] = {}
    for g in spec.letters:
        tops.setdefault(IdemPoint.of(mul(g, inv(g))), g)
    maxima = sorted(maximal_elements(cells(tops)))
    witnesses = [tops[e] for e in maxima]
    q = math.lcm(*(abs(t.p) for t in witnesses))
    X = union(*(monogenic_idempotents(t) for t in witnesses))
    if search_box is None:
        search_box = max(max(e) for e in maxima) + 2 * q

    members = _idempotent_points(spec, search_box, "Sbar")
    slices: dict[tuple[int, int, int], list[IdemPoint]] = {}
    outside: set[tuple[int, int, int]] = set()
    for i, e_i in enumerate(maxima):
        for pt in members:
            if pt.a < e_i.a or pt.b < e_i.b:
                continue
            key = (i, (pt.a - e_i.a) % q, (pt.b - e_i.b) % q)
            if key[1:] == (0, 0):
                continue
            slices.setdefault(key, []).append(pt)
            if not contains(X, pt):
                outside.add(key)

    slice_maxima, slice_witnesses = {}, {}
    T1 = list(witnesses)
    for key in sorted(outside):
        pts = set(slices[key])
        tops_ = {e for e in pts if not any(f != e and e.a >= f.a and e.b >= f.b for f in pts)}
        slice_maxima[key] = frozenset(tops_)
        for e in sorted(tops_):
            u = mul(e.triple(), witnesses[key[0]])
            assert u.p != 0 and (u.a, u.b) == (e.a, e.b)
            slice_witnesses[key + (e,)] = u
            if u not in T1:
                T1.append(u)
    return Claim1Trace(tuple(maxima), tuple(witnesses), q, X, slice_maxima,
                       slice_witnesses, tuple(T1), search_box)


def _certify(desc: PeriodicSet, truth: set[IdemPoint], box: int, what: str) -> None:
    for a in range(box + 1):
        for b in range(box + 1):
            if not (a or b):
                continue
            inside = contains(desc, (a, b))
            if inside != ((a, b) in truth):
                raise CertificationError(
                    IdemPoint(a, b),
                    f"{what} description {'contains' if inside else 'misses'} ({a},{b})",
                )


def _check_box(spec: SubsemigroupSpec, box: int) -> None:
    need = 2 * spec.max_gen_dindex()
    if box < need:
        raise ValueError(f"certification box {box} too small: need at least {need}")


def sbar_semilattice(spec: SubsemigroupSpec, box: int) -> PeriodicSet:
    """E(S_bar), certified against bounded closures on ``[0, box]^2``."""
    _check_box(spec, box)
    return _sbar_semilattice(spec, box)[0]


def _sbar_semilattice(spec, box):
    truth = _idempotent_points(spec, box, "Sbar")
    trace = claim1_trace(spec)
    while True:
        desc = trace.semilattice
        try:
            _certify(desc, truth, box, "E(S_bar)")
            return desc, trace
        except CertificationError:
            if trace.search_box >= box:
                raise
            log.info("slice search box %d too small, widening", trace.search_box)
            trace = claim1_trace(spec, min(2 * trace.search_box, box))


def idempotent_semilattice(spec: SubsemigroupSpec, box: int) -> PeriodicSet:
    """E(S) = E(S_bar) together with the semilattice generated by ``idems``."""
    _check_box(spec, box)
    parts = []
    if spec.gens:
        parts.append(_sbar_semilattice(spec, box)[0])
    if spec.idems is not None:
        parts.append(meet_closure(spec.idems))
    desc = union(*parts) if parts else EMPTY
    _certify(desc, _idempotent_points(spec, box, "S"), box, "E(S)")
    return desc


def theorem_a_generators(spec: SubsemigroupSpec, box: int | None = None):
    """Finite generators ``T1 u T2``.

    ``T1`` comes from the monogenic decomposition, ``T2`` is everything in ``S`` up to D-index
    ``N``.  When ``S`` is generated by its non-idempotents these generate
    ``S``; otherwise they generate ``S_bar`` plus the low idempotents of
    ``S``.  Returns ``(trace, T2)``.
    """
    params = structure_params(spec)
    if box is None:
        box = max(2 * spec.max_gen_dindex(), params.N)
    _check_box(spec, box)
    _, trace = _sbar_semilattice(spec, box)
    T2 = bounded_closure(spec, params.N)
    if params.alpha not in T2 or params.beta not in T2:
        raise EngineError("alpha/beta missing from T2")
    return trace, T2


def claim_rab(spec: SubsemigroupSpec, params: StructureParams, a: int, b: int) -> tuple[Triple, ...]:
    """All of ``R_{a,b}`` in ``S_bar``, built from ``(-a,0,b)``, alpha and beta.

    Walks the displacement down by ``p`` (right-multiplying by ``alpha^-1``
    or ``beta``) and up (by ``beta^-1`` or ``alpha``), choosing the factor by
    the same case split that keeps the product inside ``R_{a,b}``.
    """
    if a + b <= params.N:
        raise ValueError(f"need a + b > N = {params.N}, got {a + b}")
    eps = Triple(a, 0, b)
    if not sbar_member(spec, eps):
        raise ValueError(f"{eps} is not in S_bar")
    p = params.p
    b_alpha, a_beta = params.alpha.b, params.beta.a
    x = (a - params.a_min) // p
    y = (b - params.b_min) // p
    alpha_inv, beta_inv = inv(params.alpha), inv(params.beta)

    def step(u, factor, q):
        v = mul(u, factor)
        if (v.a, v.p, v.b) != (a, q * p, b):
            raise EngineError(f"{u}*{factor} = {v} left R_({a},{b})")
        return v

    out = [eps]
    u, q = eps, 0
    while q > -x and q * p <= b:
        u = step(u, alpha_inv if q * p <= b - b_alpha else params.beta, q - 1)
        q -= 1
        out.append(u)
    u, q = eps, 0
    while q < y and -a <= q * p:
        u = step(u, beta_inv if -a + a_beta <= q * p else params.alpha, q + 1)
        q += 1
        out.append(u)
    # every displacement -x <= q <= y must be reached
    expected = {Triple(a, q * p, b) for q in range(-x, y + 1)}
    if set(out) != expected:
        raise EngineError(f"R_({a},{b}) construction reached {sorted(set(out))}, expected {sorted(expected)}")
    return tuple(sorted(out, key=canonical_order))


def sbar_complement(spec: SubsemigroupSpec, box: int):
    """``S \\ S_bar`` (always a set of idempotents).

    Returns ``("finite", triples)`` or ``("infinite", PeriodicSet)``.
    """
    _check_box(spec, box)
    if spec.gens:
        esbar = _sbar_semilattice(spec, box)[0]
    else:
        esbar = EMPTY
    generated = meet_closure(spec.idems) if spec.idems is not None else EMPTY
    diff = difference(generated, esbar)
    truth = _idempotent_points(spec, box, "S") - (
        _idempotent_points(spec, box, "Sbar") if spec.gens else set()
    )
    _certify(diff, truth, box, "S \\ S_bar")
    if diff.is_finite:
        return "finite", tuple(sorted((c.triple() for c in diff.cells), key=canonical_order))
    return "infinite", diff


def is_finitely_generated(spec: SubsemigroupSpec, box: int) -> bool:
    if not spec.gens:
        raise ValueError("finite generation test needs a non-semilattice spec")
    verdict, _ = sbar_complement(spec, box)
    return verdict == "finite"

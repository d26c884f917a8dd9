"""Presentations of inverse subsemigroups of FI1 over idempotent letters.

Every idempotent ``e`` gets a letter ``x_e`` (spelled ``a{a}b{b}``), every
non-idempotent generator a letter ``y``.  The infinite relation families are
materialised on the box ``[0, box]^2`` of idempotents; each family records
that box and how many relations fell outside it.

    >>> spec = SubsemigroupSpec((GENERATOR,))
    >>> built = amalgam_presentation(spec, Presentation.free(("y",)), 2)
    >>> [str(l) for l, r in built.family("P-link").pairs][:2]
    ["y y'", "y y y' y'"]
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import GENERATOR, Triple, Word, eval_word, inv, mul, parse_word
from .errors import EngineError
from .eset import IdemPoint
from .stephen import Presentation, ProbeInstance
from .subsemigroup import SubsemigroupSpec, member, sbar_member

__all__ = [
    "SymbolTable", "RelationFamily", "BuiltPresentation",
    "idem_letter", "generator_letters", "cayley_relations", "idempotent_word",
    "amalgam_presentation", "conjugation_presentation",
    "presentation_consistency_check", "purify", "theorem_c_instance", "box_points",
]

FAMILY_KINDS = ("R-cayley", "Q-sbar", "P-link", "C-conj", "T1-idem", "T2-elim")


def idem_letter(e: IdemPoint) -> str:
    return f"a{e.a}b{e.b}"


def generator_letters(gens: Sequence[Triple]) -> dict[Triple, str]:
    if len(gens) == 1:
        return {gens[0]: "y"}
    return {g: f"y{i}" for i, g in enumerate(gens, 1)}


def box_points(box: int) -> list[IdemPoint]:
    return [IdemPoint(a, b) for a in range(box + 1) for b in range(box + 1) if a + b]


@dataclass(frozen=True)
class SymbolTable:
    """Letter names for idempotents (``x_e``), generators (``y_a``) and the
    extra generators of ``S_bar`` (``Y_1``), with the values they stand for."""

    e_symbols: Mapping[IdemPoint, str]
    a_symbols: Mapping[Triple, str]
    y_extra: Mapping[str, Triple] = field(default_factory=dict)

    def __post_init__(self):
        names = list(self.e_symbols.values()) + list(self.a_symbols.values()) + list(self.y_extra)
        if len(set(names)) != len(names):
            raise ValueError("letter names must be distinct")

    @classmethod
    def build(cls, spec: SubsemigroupSpec, points: Iterable[IdemPoint],
              extra: Mapping[str, Triple] | None = None) -> "SymbolTable":
        return cls({e: idem_letter(e) for e in sorted(points)},
                   generator_letters(spec.gens), dict(extra or {}))

    @property
    def y_letters(self) -> tuple[str, ...]:
        return tuple(self.a_symbols.values()) + tuple(self.y_extra)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.y_letters + tuple(self.e_symbols[e] for e in sorted(self.e_symbols))

    def x(self, e: IdemPoint) -> str:
        try:
            return self.e_symbols[e]
        except KeyError:
            raise KeyError(f"no letter for idempotent {e}") from None

    def assignment(self) -> dict[str, Triple]:
        out = {name: e.triple() for e, name in self.e_symbols.items()}
        out.update({name: t for t, name in self.a_symbols.items()})
        out.update(self.y_extra)
        return out

    def idempotent_of(self) -> dict[str, IdemPoint]:
        return {name: e for e, name in self.e_symbols.items()}

    def word(self, letters: Iterable[tuple[str, int]]) -> Word:
        return Word(self.alphabet, tuple(letters))


@dataclass
class RelationFamily:
    kind: str
    pairs: list[tuple[Word, Word]]
    truncation: int
    omitted: int = 0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown relation family {self.kind!r}")

    def report(self) -> dict:
        return {"kind": self.kind, "relations": len(self.pairs),
                "omitted": self.omitted, "box": self.truncation}


@dataclass
class BuiltPresentation:
    presentation: Presentation
    symbols: SymbolTable
    families: list[RelationFamily]
    box: int

    def family(self, kind: str) -> RelationFamily:
        for fam in self.families:
            if fam.kind == kind:
                return fam
        raise KeyError(kind)

    def report(self) -> dict:
        return {"box": self.box, "families": [f.report() for f in self.families],
                "omitted": sum(f.omitted for f in self.families)}

    def to_json(self) -> dict:
        return self.presentation.to_json()


def _assemble(sym: SymbolTable, families: list[RelationFamily], box: int) -> BuiltPresentation:
    rels = tuple(pair for fam in families for pair in fam.pairs)
    return BuiltPresentation(Presentation(sym.alphabet, rels), sym, families, box)


# --- R: the Cayley table of the semilattice ------------------------------------

def cayley_relations(sym: SymbolTable, box: int, semilattice: Iterable[IdemPoint] | None = None) -> RelationFamily:
    """``x_e x_f = x_{ef}`` for ordered pairs of points in the box
    (restricted to ``semilattice`` when given)."""
    points = box_points(box) if semilattice is None else sorted(
        e for e in semilattice if e.a <= box and e.b <= box)
    for e in points:
        sym.x(e)
    pairs, omitted = [], 0
    for e in points:
        for f in points:
            ef = IdemPoint(max(e.a, f.a), max(e.b, f.b))
            if ef not in sym.e_symbols or ef.a > box or ef.b > box:
                omitted += 1
                continue
            pairs.append((sym.word([(sym.x(e), 1), (sym.x(f), 1)]), sym.word([(sym.x(ef), 1)])))
    return RelationFamily("R-cayley", pairs, box, omitted)


# --- word search ---------------------------------------------------------------

def _letter_order(values: Mapping[str, Triple]) -> list[tuple[str, int, Triple]]:
    # alphabetical by letter, inverse before positive
    out = []
    for name in sorted(values):
        out.append((name, -1, inv(values[name])))
        out.append((name, 1, values[name]))
    return out


def _shortlex_search(values: Mapping[str, Triple], limit: int, goal) -> tuple | None:
    """Shortest, then lexicographically least, letter sequence whose value
    satisfies ``goal``; prefixes never exceed D-index ``limit``."""
    letters = [l for l in _letter_order(values) if l[2].dindex <= limit]
    found: dict[Triple, tuple] = {}
    queue: deque[Triple] = deque()
    for name, sign, t in letters:
        if t not in found:
            found[t] = ((name, sign),)
            queue.append(t)
    while queue:
        t = queue.popleft()
        if goal(t):
            return found[t]
        for name, sign, v in letters:
            s = mul(t, v)
            if s.dindex <= limit and s not in found:
                found[s] = found[t] + ((name, sign),)
                queue.append(s)
    return None


def idempotent_word(spec: SubsemigroupSpec, e: IdemPoint, sym: SymbolTable, normalize: bool = False) -> Word:
    """A word over the ``y`` letters representing ``e``.

    By default the shortest such word, ties broken alphabetically with the
    inverse letter first; ``normalize`` returns ``w1 w1'`` with ``w1`` the
    shortest word in the R-class of ``e``.
    """
    target = e.triple()
    if not sbar_member(spec, target):
        raise ValueError(f"{e} is not an idempotent of the part generated by non-idempotents")
    values = {name: t for t, name in sym.a_symbols.items()}
    values.update(sym.y_extra)
    if normalize:
        seq = _shortlex_search(values, e.a + e.b, lambda t: (t.a, t.b) == (e.a, e.b))
        if seq is not None:
            w1 = sym.word(seq)
            return w1 + w1.inverse()
    else:
        seq = _shortlex_search(values, e.a + e.b, lambda t: t == target)
        if seq is not None:
            return sym.word(seq)
    raise EngineError(f"the y letters do not reach {e}; supply extra generators")


# --- builders ------------------------------------------------------------------

def _idempotents_in_box(spec: SubsemigroupSpec, box: int) -> list[IdemPoint]:
    return [e for e in box_points(box) if member(spec, e.triple())]


def _sbar_relations(sbar_pres: Presentation, sym: SymbolTable, box: int) -> RelationFamily:
    ys = set(sym.y_letters)
    if not set(sbar_pres.alphabet) <= ys:
        raise ValueError(f"presentation letters {sorted(set(sbar_pres.alphabet) - ys)} have no value")
    pairs = [(l.with_alphabet(sym.alphabet), r.with_alphabet(sym.alphabet)) for l, r in sbar_pres.relations]
    if not presentation_consistency_check(Presentation(sym.alphabet, tuple(pairs)), sym.assignment()):
        raise ValueError("supplied presentation has a relation that fails in FI1")
    return RelationFamily("Q-sbar", pairs, box)


def amalgam_presentation(spec: SubsemigroupSpec, sbar_pres: Presentation, box: int,
                         extra: Mapping[str, Triple] | None = None) -> BuiltPresentation:
    """Idempotent letters and ``y`` letters with relations ``R``, ``Q``, ``P``.

    ``sbar_pres`` presents the part generated by non-idempotents over the
    generator letters and ``extra``; it is checked, not trusted.
    """
    points = _idempotents_in_box(spec, box)
    sym = SymbolTable.build(spec, points, extra)
    r = cayley_relations(sym, box, points)
    q = _sbar_relations(sbar_pres, sym, box)
    link = []
    for e in points:
        if sbar_member(spec, e.triple()):
            link.append((idempotent_word(spec, e, sym), sym.word([(sym.x(e), 1)])))
    return _assemble(sym, [r, q, RelationFamily("P-link", link, box)], box)


def _word_over(values: Mapping[str, Triple], target: Triple) -> tuple | None:
    return _shortlex_search(values, target.dindex, lambda t: t == target)


def conjugation_presentation(spec: SubsemigroupSpec, sbar_pres: Presentation, box: int,
                             extra: Mapping[str, Triple] | None = None,
                             extra_words: Mapping[str, str] | None = None) -> BuiltPresentation:
    """Relations ``R``, conjugation ``C`` and ``T = Q' u T1`` over idempotent
    letters and the generator letters only.

    Extra generators are eliminated: each is replaced by ``extra_words[name]``
    or, failing that, the shortest word over the remaining letters with its
    value.
    """
    points = _idempotents_in_box(spec, box)
    sym = SymbolTable.build(spec, points, extra)
    in_es = set(points)
    r = cayley_relations(sym, box, points)

    conj, omitted = [], 0
    for a, ya in sym.a_symbols.items():
        for eps in (1, -1):
            ae, ainv = (a, inv(a)) if eps == 1 else (inv(a), a)
            for e in points:
                g = IdemPoint.of(mul(mul(ainv, e.triple()), ae))
                if g.a > box or g.b > box:
                    omitted += 1
                    continue
                if g not in in_es:
                    raise EngineError(f"conjugate {g} of {e} missing from E(S)")
                lhs = sym.word([(ya, -eps), (sym.x(e), 1), (ya, eps)])
                conj.append((lhs, sym.word([(sym.x(g), 1)])))
    c = RelationFamily("C-conj", conj, box, omitted)

    t1, omitted = [], 0
    for a, ya in sym.a_symbols.items():
        for eps in (1, -1):
            ae = a if eps == 1 else inv(a)
            g = IdemPoint.of(mul(ae, inv(ae)))
            if g not in sym.e_symbols:
                omitted += 1
                continue
            t1.append((sym.word([(ya, eps), (ya, -eps)]), sym.word([(sym.x(g), 1)])))
    t1_fam = RelationFamily("T1-idem", t1, box, omitted)

    # eliminate the extra generators from Q
    base = SymbolTable(sym.e_symbols, sym.a_symbols)
    values = base.assignment()
    defining: dict[str, tuple] = {}
    for name, value in sym.y_extra.items():
        if extra_words and name in extra_words:
            w = parse_word(extra_words[name], base.alphabet)
            if eval_word(w, values) != value:
                raise ValueError(f"defining word for {name} does not evaluate to {value}")
            defining[name] = w.letters
        else:
            seq = _word_over(values, value)
            if seq is None:
                raise EngineError(f"no defining word for extra generator {name}")
            defining[name] = seq
    q = _sbar_relations(sbar_pres, sym, box)

    def substitute(w: Word) -> Word:
        out: list[tuple[str, int]] = []
        for name, sign in w.letters:
            if name in defining:
                piece = defining[name]
                out.extend(piece if sign > 0 else [(n, -s) for n, s in reversed(piece)])
            else:
                out.append((name, sign))
        return base.word(out)

    qprime = [(substitute(l), substitute(rw)) for l, rw in q.pairs]
    t2 = RelationFamily("T2-elim", qprime, box)
    fams = [r, c, t2, t1_fam]
    rels = tuple((l.with_alphabet(base.alphabet), rw.with_alphabet(base.alphabet))
                 for fam in fams for l, rw in fam.pairs)
    return BuiltPresentation(Presentation(base.alphabet, rels), base, fams, box)


def presentation_consistency_check(p: Presentation, assignment: Mapping[str, Triple],
                                   sample: Iterable[int] | None = None) -> bool:
    """True iff every sampled relation holds in FI1 under ``assignment``."""
    missing = set(p.alphabet) - set(assignment)
    if missing:
        raise ValueError(f"assignment misses letters {sorted(missing)}")
    idx = range(len(p.relations)) if sample is None else sample
    return all(eval_word(p.relations[i][0], assignment) == eval_word(p.relations[i][1], assignment)
               for i in idx)


# --- rewriting mixed words -----------------------------------------------------

def purify(w: Word, spec: SubsemigroupSpec, sym: SymbolTable) -> Word:
    """Rewrite a word over idempotent and ``y`` letters into one over ``y``
    letters alone, pushing each idempotent letter into a neighbouring ``y``.

    ``x_e y^d`` becomes ``w_g y^d`` with ``g = e y^d y^-d``, and symmetrically
    on the left.  Words without ``y`` letters are returned unchanged.
    """
    values = sym.assignment()
    idems = sym.idempotent_of()
    letters = list(w.letters)
    if all(n in idems for n, _ in letters):
        return w
    while True:
        for i, (name, _) in enumerate(letters):
            if name not in idems:
                continue
            e = idems[name].triple()
            if i + 1 < len(letters) and letters[i + 1][0] not in idems:
                n, s = letters[i + 1]
                y = values[n] if s > 0 else inv(values[n])
                g = IdemPoint.of(mul(e, mul(y, inv(y))))
                letters[i:i + 1] = idempotent_word(spec, g, sym).letters
                break
            if i > 0 and letters[i - 1][0] not in idems:
                n, s = letters[i - 1]
                y = values[n] if s > 0 else inv(values[n])
                g = IdemPoint.of(mul(mul(inv(y), y), e))
                letters[i:i + 1] = idempotent_word(spec, g, sym).inverse().letters
                break
        else:
            return sym.word(letters)


# --- the desk instance for the label probe -------------------------------------

def theorem_c_instance(box: int = 4, f: tuple[int, int] = (1, 1), g: tuple[int, int] = (2, 2)) -> ProbeInstance:
    """FI1 generated by ``y = x`` with the Cayley relations on the box and the
    single link relation ``w_f = x_f``; the probe word is ``y^-p y^p y^q y^-q``
    representing ``g``."""
    f, g = IdemPoint(*f), IdemPoint(*g)
    spec = SubsemigroupSpec((GENERATOR,))
    sym = SymbolTable.build(spec, box_points(box))
    r = cayley_relations(sym, box)
    link = [(idempotent_word(spec, f, sym), sym.word([(sym.x(f), 1)]))]
    pres = Presentation(sym.alphabet, tuple(r.pairs + link))
    w = sym.word([("y", -1)] * g.a + [("y", 1)] * g.a + [("y", 1)] * g.b + [("y", -1)] * g.b)
    return ProbeInstance(pres, sym.idempotent_of(), f, g, w, truncation=box)

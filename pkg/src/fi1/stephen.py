"""Stephen's procedure for inverse semigroup presentations.

Graphs are inverse: an edge ``u --x--> v`` implies ``v --x'--> u``, so each
pair is stored once, oriented along the positive letter.  Vertices are ints
identified through a union-find forest; after folding, a vertex is named by
its representative.

    >>> g, done = stephen_limit(parse_word("x x'"), Presentation.free(("x",)), 1)
    >>> done, len(g.vertices)
    (True, 2)
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .core import Word, parse_word
from .eset import IdemPoint

__all__ = [
    "Presentation", "SchutzGraph", "ProbeInstance", "ProbeReport",
    "linear_graph", "fold", "expand", "stephen_limit", "in_language",
    "words_equal", "theorem_c_probe", "to_dot",
]

EQUAL, DISTINCT, UNKNOWN = "equal", "distinct", "unknown"


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple[str, ...]
    relations: tuple[tuple[Word, Word], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "relations", tuple((l, r) for l, r in self.relations))
        known = set(self.alphabet)
        for lhs, rhs in self.relations:
            for w in (lhs, rhs):
                missing = w.names() - known
                if missing:
                    raise ValueError(f"relation word {w} uses letters {sorted(missing)} outside the alphabet")

    @classmethod
    def free(cls, alphabet: Sequence[str]) -> "Presentation":
        return cls(tuple(alphabet), ())

    def parse(self, text: str) -> Word:
        return parse_word(text, self.alphabet)

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet),
                "relations": [[str(l), str(r)] for l, r in self.relations]}

    @classmethod
    def from_json(cls, obj: dict) -> "Presentation":
        alphabet = tuple(obj["alphabet"])
        rels = tuple((parse_word(l, alphabet), parse_word(r, alphabet)) for l, r in obj.get("relations", []))
        return cls(alphabet, rels)


class SchutzGraph:
    """Birooted inverse graph under construction."""

    def __init__(self):
        self._parent: list[int] = []
        self._edges: set[tuple[int, str, int]] = set()
        self.root_a = 0
        self.root_b = 0
        self._adj = None

    # union-find
    def find(self, v: int) -> int:
        parent = self._parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def _union(self, u: int, v: int) -> int:
        u, v = self.find(u), self.find(v)
        if u == v:
            return u
        keep, drop = (u, v) if u < v else (v, u)
        self._parent[drop] = keep
        self._adj = None
        return keep

    def add_vertex(self) -> int:
        self._parent.append(len(self._parent))
        self._adj = None
        return len(self._parent) - 1

    def add_edge(self, u: int, letter: str, sign: int, v: int) -> None:
        self._adj = None
        if sign > 0:
            self._edges.add((u, letter, v))
        else:
            self._edges.add((v, letter, u))

    def copy(self) -> "SchutzGraph":
        g = SchutzGraph()
        g._parent = list(self._parent)
        g._edges = set(self._edges)
        g.root_a, g.root_b = self.root_a, self.root_b
        return g

    @property
    def vertices(self) -> list[int]:
        return sorted({self.find(v) for v in range(len(self._parent))})

    @property
    def edges(self) -> list[tuple[int, str, int]]:
        f = self.find
        return sorted({(f(u), l, f(v)) for u, l, v in self._edges})

    @property
    def roots(self) -> tuple[int, int]:
        return self.find(self.root_a), self.find(self.root_b)

    def labels(self) -> set[str]:
        return {l for _, l, _ in self._edges}

    def adjacency(self) -> dict[tuple[int, str, int], int]:
        """Map ``(vertex, letter, sign) -> target``; requires determinism."""
        if self._adj is not None:
            return self._adj
        adj: dict[tuple[int, str, int], int] = {}
        for u, l, v in self.edges:
            for key, tgt in (((u, l, 1), v), ((v, l, -1), u)):
                old = adj.setdefault(key, tgt)
                if old != tgt:
                    raise ValueError(f"graph is not deterministic at {key}")
        self._adj = adj
        return adj

    def is_deterministic(self) -> bool:
        try:
            self.adjacency()
        except ValueError:
            return False
        return True

    def trace(self, start: int, w: Word, adj=None) -> int | None:
        adj = self.adjacency() if adj is None else adj
        v = self.find(start)
        for name, sign in w.letters:
            v = adj.get((v, name, sign))
            if v is None:
                return None
        return v

    def to_json(self) -> dict:
        a, b = self.roots
        return {"vertices": self.vertices, "root_a": a, "root_b": b,
                "edges": [[u, l, v] for u, l, v in self.edges]}

    def __repr__(self) -> str:
        return f"<SchutzGraph {len(self.vertices)} vertices, {len(self.edges)} edges, roots={self.roots}>"


def linear_graph(w: Word) -> SchutzGraph:
    g = SchutzGraph()
    prev = g.add_vertex()
    g.root_a = prev
    for name, sign in w.letters:
        nxt = g.add_vertex()
        g.add_edge(prev, name, sign, nxt)
        prev = nxt
    g.root_b = prev
    return g


def fold(g: SchutzGraph, strategy: str = "fifo") -> SchutzGraph:
    """Complete determination.

    ``strategy`` picks the merge schedule ("fifo" or "lifo"); the result is
    the same up to vertex names.
    """
    if strategy not in ("fifo", "lifo"):
        raise ValueError(f"unknown strategy {strategy!r}")
    h = g.copy()
    find = h.find
    out: dict[int, dict[tuple[str, int], int]] = {}
    pending: deque[tuple[int, int]] = deque()

    def link(u, key, v):
        slot = out.setdefault(u, {})
        old = slot.get(key)
        if old is None:
            slot[key] = v
        elif find(old) != find(v):
            pending.append((old, v))

    for u, l, v in h._edges:
        u, v = find(u), find(v)
        link(u, (l, 1), v)
        link(v, (l, -1), u)

    take = pending.popleft if strategy == "fifo" else pending.pop
    while pending:
        x, y = take()
        x, y = find(x), find(y)
        if x == y:
            continue
        keep = h._union(x, y)
        drop = y if keep == x else x
        for key, tgt in out.pop(drop, {}).items():
            link(keep, key, tgt)

    h._edges = {(find(u), l, find(v)) for u, l, v in h._edges}
    h._adj = None
    return h


def _instances(g: SchutzGraph, pres: Presentation):
    adj = g.adjacency()
    firsts = {(v, name, sign) for (v, name, sign) in adj}
    sides = []
    for lhs, rhs in pres.relations:
        sides.append((lhs, rhs))
        sides.append((rhs, lhs))
    found = []
    seen = set()
    for v in g.vertices:
        for r, s in sides:
            name, sign = r.letters[0]
            if (v, name, sign) not in firsts:
                continue
            end = g.trace(v, r, adj)
            if end is None:
                continue
            if g.trace(v, s, adj) == end:
                continue
            key = (v, s.letters, end)
            if key not in seen:
                seen.add(key)
                found.append((v, s, end))
    return found


def expand(g: SchutzGraph, pres: Presentation) -> SchutzGraph:
    """Complete expansion against a snapshot of the deterministic graph ``g``."""
    return _expand(g, pres)[0]


def _expand(g: SchutzGraph, pres: Presentation) -> tuple[SchutzGraph, int]:
    todo = _instances(g, pres)
    h = g.copy()
    for start, s, end in todo:
        cur = start
        for i, (name, sign) in enumerate(s.letters):
            nxt = end if i == len(s) - 1 else h.add_vertex()
            h.add_edge(cur, name, sign, nxt)
            cur = nxt
    return h, len(todo)


def stephen_limit(
    w: Word,
    pres: Presentation,
    rounds: int,
    observer: Callable[[str, SchutzGraph], None] | None = None,
) -> tuple[SchutzGraph, bool]:
    """Fold the linear graph of ``w``, then alternate expansion and folding.

    Returns the last graph and whether a round found nothing to expand, in
    which case the graph is the Schutzenberger graph of ``w``.
    """
    g = linear_graph(w)
    if observer:
        observer("linear", g)
    g = fold(g)
    if observer:
        observer("fold", g)
    for _ in range(rounds):
        h, n = _expand(g, pres)
        if n == 0:
            return g, True
        if observer:
            observer("expand", h)
        g = fold(h)
        if observer:
            observer("fold", g)
    return g, False


def in_language(g: SchutzGraph, w: Word) -> bool:
    a, b = g.roots
    return g.trace(a, w) == b


def words_equal(pres: Presentation, w: Word, v: Word, rounds: int) -> str:
    """Three-valued word problem: ``"equal"``, ``"distinct"`` or ``"unknown"``.

    Languages only grow along the Stephen sequence, so a membership seen at
    any stage holds in the limit; a non-membership is final only once the
    graph has converged.
    """
    gw, done_w = stephen_limit(w, pres, rounds)
    gv, done_v = stephen_limit(v, pres, rounds)
    v_in_w = in_language(gw, v)
    w_in_v = in_language(gv, w)
    if v_in_w and w_in_v:
        return EQUAL
    if (done_w and not v_in_w) or (done_v and not w_in_v):
        return DISTINCT
    return UNKNOWN


def isomorphic(g: SchutzGraph, h: SchutzGraph) -> bool:
    """Rooted isomorphism of two connected deterministic graphs."""
    ag, ah = g.adjacency(), h.adjacency()
    ra, rb = g.roots
    sa, sb = h.roots
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return False
    m = {ra: sa}
    queue = deque([ra])
    out_g: dict[int, list] = {}
    for (v, l, s), t in ag.items():
        out_g.setdefault(v, []).append((l, s, t))
    while queue:
        v = queue.popleft()
        for l, s, t in out_g.get(v, []):
            t2 = ah.get((m[v], l, s))
            if t2 is None:
                return False
            if t in m:
                if m[t] != t2:
                    return False
            else:
                m[t] = t2
                queue.append(t)
    return len(m) == len(g.vertices) and m.get(rb) == sb and len(set(m.values())) == len(m)


def to_dot(g: SchutzGraph, name: str = "schutzenberger") -> str:
    """Graphviz text: one edge per inverse pair, along the positive letter.

    The start root has a double border, the end root a bold one.
    """
    a, b = g.roots
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for v in g.vertices:
        attrs = []
        if v == a:
            attrs.append("shape=doublecircle")
        if v == b:
            attrs.append("style=bold")
        if attrs:
            lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, l, v in g.edges:
        lines.append(f"  {u} -> {v} [label={json.dumps(l)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- idempotent edge-label probe ---------------------------------------------

@dataclass(frozen=True)
class ProbeInstance:
    pres: Presentation
    idempotent_labels: Mapping[str, IdemPoint]
    f: IdemPoint
    g: IdemPoint
    w: Word
    truncation: int | None = None

    def to_json(self) -> dict:
        return {
            "presentation": self.pres.to_json(),
            "idempotent_labels": {k: list(v) for k, v in sorted(self.idempotent_labels.items())},
            "f": list(self.f), "g": list(self.g), "word": str(self.w),
            "truncation": self.truncation,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ProbeInstance":
        pres = Presentation.from_json(obj["presentation"])
        labels = {k: IdemPoint(*v) for k, v in obj["idempotent_labels"].items()}
        return cls(pres, labels, IdemPoint(*obj["f"]), IdemPoint(*obj["g"]),
                   pres.parse(obj["word"]), obj.get("truncation"))


@dataclass
class ProbeReport:
    g_label_seen: bool
    all_labels_above_f: bool
    labels: set = field(default_factory=set)
    converged: bool = False
    stages: int = 0
    truncation: int | None = None

    def to_json(self) -> dict:
        return {
            "g_label_seen": self.g_label_seen,
            "all_labels_above_f": self.all_labels_above_f,
            "labels": sorted([list(p) for p in self.labels]),
            "converged": self.converged,
            "stages": self.stages,
            "truncation": self.truncation,
        }


def theorem_c_probe(instance: ProbeInstance, rounds: int) -> ProbeReport:
    """Run Stephen's procedure and record every idempotent edge label seen.

    Reports whether some label ``h`` fails ``h >= f`` and whether the label of
    ``g`` ever appeared.
    """
    if not instance.g.below_or_equal(instance.f) or instance.g == instance.f:
        raise ValueError("g must lie strictly below f")
    labels = instance.idempotent_labels
    seen: set[IdemPoint] = set()
    stages = 0

    def watch(_stage, graph):
        nonlocal stages
        stages += 1
        seen.update(labels[l] for l in graph.labels() if l in labels)

    _, converged = stephen_limit(instance.w, instance.pres, rounds, observer=watch)
    return ProbeReport(
        g_label_seen=instance.g in seen,
        all_labels_above_f=all(instance.f.below_or_equal(h) for h in seen),
        labels=seen,
        converged=converged,
        stages=stages,
        truncation=instance.truncation,
    )

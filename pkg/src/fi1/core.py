"""Arithmetic of the monogenic free inverse semigroup in the triple model.

An element is stored as ``Triple(a, p, b)`` with ``a, b >= 0``, ``a + b >= 1``
and ``-a <= p <= b``; it prints as ``(-a,p,b)``, the usual notation.  The free
generator ``x`` is ``(0,1,1)``.

    >>> x = Triple(0, 1, 1)
    >>> str(mul(x, inv(x)))
    '(0,0,1)'
    >>> str(eval_word(parse_word("x' x x x x x' x' x' x x")))
    '(-1,2,3)'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Triple", "Word", "GreenData", "UnassignedLetterError",
    "mul", "inv", "eval_word", "is_idempotent", "leq", "green", "mirror",
    "meet", "mul_batch", "parse_word", "parse_triple", "GENERATOR",
    "canonical_word", "leq_definitional",
]

# checked 64-bit range for every component
INT64_MAX = 2**63 - 1


class UnassignedLetterError(KeyError):
    """A word contains a letter that the assignment does not cover."""

    def __init__(self, letter: str):
        super().__init__(letter)
        self.letter = letter

    def __str__(self) -> str:
        return f"no value assigned to letter {self.letter!r}"


class _TripleFields(NamedTuple):
    a: int
    p: int
    b: int


class Triple(_TripleFields):
    """Element ``(-a, p, b)`` of FI1.

    ``a`` is how far the walk reaches to the left of its start, ``b`` how far
    to the right, ``p`` where it ends.
    """

    __slots__ = ()

    def __new__(cls, a: int, p: int, b: int) -> "Triple":
        a, p, b = int(a), int(p), int(b)
        if a < 0 or b < 0:
            raise ValueError(f"reaches must be non-negative, got a={a}, b={b}")
        if a + b < 1:
            raise ValueError("a + b must be at least 1")
        if not -a <= p <= b:
            raise ValueError(f"displacement {p} outside [-{a}, {b}]")
        if a > INT64_MAX or b > INT64_MAX:
            raise OverflowError("triple component exceeds 64-bit range")
        return tuple.__new__(cls, (a, p, b))

    @classmethod
    def from_signed(cls, first: int, p: int, b: int) -> "Triple":
        """Build from the printed form ``(first, p, b)`` where ``first = -a``."""
        return cls(-first, p, b)

    @property
    def dindex(self) -> int:
        return self.a + self.b

    @property
    def rclass(self) -> tuple[int, int]:
        return (self.a, self.b)

    def signed(self) -> tuple[int, int, int]:
        return (-self.a, self.p, self.b)

    def __str__(self) -> str:
        return f"({-self.a},{self.p},{self.b})"

    def __repr__(self) -> str:
        return f"Triple.from_signed{self.__str__()}"


# x itself
GENERATOR = Triple(0, 1, 1)


def _checked(a: int, p: int, b: int) -> Triple:
    if a > INT64_MAX or b > INT64_MAX:
        raise OverflowError("product leaves the 64-bit range")
    return tuple.__new__(Triple, (a, p, b))


def mul(u: Triple, v: Triple) -> Triple:
    a1, p1, b1 = u
    a2, p2, b2 = v
    a = a2 - p1
    b = b2 + p1
    return _checked(a1 if a1 >= a else a, p1 + p2, b1 if b1 >= b else b)


def inv(u: Triple) -> Triple:
    a, p, b = u
    return tuple.__new__(Triple, (a + p, -p, b - p))


def mirror(u: Triple) -> Triple:
    """Image under the automorphism induced by ``x -> x^-1``."""
    a, p, b = u
    return tuple.__new__(Triple, (b, -p, a))


def is_idempotent(u: Triple) -> bool:
    return u.p == 0


def meet(u: Triple, v: Triple) -> Triple:
    """Product of two idempotents."""
    if u.p or v.p:
        raise ValueError("meet is only defined on idempotents")
    return mul(u, v)


def leq(u: Triple, v: Triple) -> bool:
    """Natural partial order.

    Uses the component criterion; ``tests/test_core.py`` checks it against
    ``u == u u^-1 v`` exhaustively on small triples.
    """
    return u.p == v.p and u.a >= v.a and u.b >= v.b


def leq_definitional(u: Triple, v: Triple) -> bool:
    return u == mul(mul(u, inv(u)), v)


@dataclass(frozen=True)
class GreenData:
    rclass: tuple[int, int]
    dindex: int


def green(u: Triple) -> GreenData:
    return GreenData(rclass=(u.a, u.b), dindex=u.a + u.b)


def mul_batch(a1, p1, b1, a2, p2, b2):
    """Vectorised ``mul`` over numpy integer arrays; returns ``(a, p, b)``."""
    a1, p1, b1, a2, p2, b2 = (np.asarray(t, dtype=np.int64) for t in (a1, p1, b1, a2, p2, b2))
    return np.maximum(a1, a2 - p1), p1 + p2, np.maximum(b1, b2 + p1)


# --- words -----------------------------------------------------------------

_TOKEN = re.compile(r"([a-z][a-z0-9]*)(['′]?)")
_COMPACT = re.compile(r"(?:[a-z]['′]?)+")


@dataclass(frozen=True)
class Word:
    """Non-empty word over signed letters; ``letters`` holds ``(name, ±1)``."""

    alphabet: tuple[str, ...]
    letters: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("words are non-empty")
        known = set(self.alphabet)
        for name, sign in self.letters:
            if sign not in (1, -1):
                raise ValueError(f"bad sign {sign!r} on letter {name!r}")
            if name not in known:
                raise ValueError(f"letter {name!r} not in alphabet {self.alphabet}")

    @classmethod
    def of(cls, letters: Iterable[tuple[str, int]], alphabet: Sequence[str] | None = None) -> "Word":
        letters = tuple((str(n), int(s)) for n, s in letters)
        if alphabet is None:
            alphabet = _ordered_names(letters)
        return cls(tuple(alphabet), letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        alphabet = self.alphabet + tuple(n for n in other.alphabet if n not in self.alphabet)
        return Word(alphabet, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.alphabet, tuple((n, -s) for n, s in reversed(self.letters)))

    def with_alphabet(self, alphabet: Sequence[str]) -> "Word":
        return Word(tuple(alphabet), self.letters)

    def names(self) -> set[str]:
        return {n for n, _ in self.letters}

    def __str__(self) -> str:
        return " ".join(n if s > 0 else n + "'" for n, s in self.letters)


def _ordered_names(letters) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for n, _ in letters:
        seen.setdefault(n, None)
    return tuple(seen)


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    """Parse the shared surface syntax.

    Tokens are separated by whitespace; a trailing ``'`` (or ``′``) inverts a
    letter.  A whitespace-free token that is not a known letter name but is
    built from one-character letters (``xx'x``) is read compactly.
    """
    known = set(alphabet) if alphabet is not None else None
    letters: list[tuple[str, int]] = []
    tokens = text.split()
    if not tokens:
        raise ValueError("empty word")
    for tok in tokens:
        m = _TOKEN.fullmatch(tok)
        if m and _is_name(m.group(1), known):
            letters.append((m.group(1), -1 if m.group(2) else 1))
        elif _COMPACT.fullmatch(tok):
            for name, mark in re.findall(r"([a-z])(['′]?)", tok):
                letters.append((name, -1 if mark else 1))
        else:
            raise ValueError(f"cannot parse word token {tok!r}")
    if alphabet is None:
        alphabet = _ordered_names(letters)
    return Word(tuple(alphabet), tuple(letters))


def _is_name(name: str, known: set[str] | None) -> bool:
    if known is not None:
        return name in known
    # without an alphabet, digit-free multi-character tokens ("xxy") are
    # compact words; multi-character names must carry a digit ("a1b2")
    return len(name) == 1 or any(ch.isdigit() for ch in name)


def eval_word(w: Word, assignment: Mapping[str, Triple] | None = None) -> Triple:
    """Left-to-right product of the letters' values.

    The default assignment sends ``x`` to the free generator, which makes
    this the canonical-form map of FI1.
    """
    if assignment is None:
        assignment = {"x": GENERATOR}
    acc = None
    for name, sign in w.letters:
        try:
            val = assignment[name]
        except KeyError:
            raise UnassignedLetterError(name) from None
        if sign < 0:
            val = inv(val)
        acc = val if acc is None else mul(acc, val)
    return acc


def canonical_word(u: Triple, letter: str = "x") -> Word:
    """The word ``x^-a x^a x^b x^-b x^p`` representing ``u``."""
    letters = (
        [(letter, -1)] * u.a + [(letter, 1)] * u.a
        + [(letter, 1)] * u.b + [(letter, -1)] * u.b
        + [(letter, 1 if u.p > 0 else -1)] * abs(u.p)
    )
    return Word((letter,), tuple(letters))


_TRIPLE = re.compile(r"\s*[\(\[]?\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]?\s*")


def parse_triple(text: str) -> Triple:
    """Parse ``(-a,p,b)`` (brackets optional)."""
    m = _TRIPLE.fullmatch(text)
    if not m:
        raise ValueError(f"cannot parse triple {text!r}")
    first, p, b = (int(g) for g in m.groups())
    if first > 0:
        raise ValueError(f"first component must be <= 0, got {first}")
    return Triple.from_signed(first, p, b)

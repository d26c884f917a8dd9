"""Reference implementations that share no code with the engine.

Elements of FI1 are evaluated by walking the integer line: a word over
``x`` is a walk, and its element is (leftmost reach, end point, rightmost
reach).  Closures are found by enumerating words of generator symbols.
"""

from __future__ import annotations

from itertools import product


def walk(steps) -> tuple[int, int, int]:
    """Signed triple ``(-a, p, b)`` of a walk given as a sequence of +1/-1."""
    pos = lo = hi = 0
    for s in steps:
        pos += s
        lo = min(lo, pos)
        hi = max(hi, pos)
    return (lo, pos, hi)


def steps_of(signed: tuple[int, int, int]) -> list[int]:
    """A walk realising ``(-a, p, b)``: left to -a, right to b, back to p."""
    first, p, b = signed
    a = -first
    return [-1] * a + [1] * (a + b) + [-1] * (b - p)


def walk_mul(u, v):
    return walk(steps_of(u) + steps_of(v))


def walk_inv(u):
    return walk([-s for s in reversed(steps_of(u))])


def all_signed(limit: int):
    """Every element with ``a, b <= limit`` as a signed triple."""
    for a in range(limit + 1):
        for b in range(limit + 1):
            if a + b == 0:
                continue
            for p in range(-a, b + 1):
                yield (-a, p, b)


def x_words(max_len: int):
    """All words over {x, x'} as step tuples, by length."""
    for n in range(1, max_len + 1):
        yield from product((1, -1), repeat=n)


def enumerate_closure(gens, idem_points, max_d: int, nonidem_required: bool = False):
    """Signed triples of all products of generator symbols with D-index at most
    ``max_d``.  Words are extended one symbol at a time; a product whose
    D-index exceeds ``max_d`` can never come back, so such words are dropped.
    Enumeration stops when a whole length adds nothing new.

    With ``nonidem_required``, only words using some non-idempotent symbol
    are kept (the part generated by non-idempotents).
    """
    symbols = []
    for g in gens:
        symbols.append((steps_of(g), True))
        symbols.append(([-s for s in reversed(steps_of(g))], True))
    for a, b in idem_points:
        if a + b <= max_d:
            symbols.append((steps_of((-a, 0, b)), False))

    def dd(t):
        return t[2] - t[0]

    # frontier holds (steps of a representative word, used a non-idempotent)
    seen = {}
    frontier = []
    for steps, flag in symbols:
        t = walk(steps)
        if dd(t) <= max_d and (t, flag) not in seen:
            seen[(t, flag)] = steps
            frontier.append((steps, flag))
    while frontier:
        nxt = []
        for steps, flag in frontier:
            for s2, f2 in symbols:
                w = steps + s2
                t = walk(w)
                key = (t, flag or f2)
                if dd(t) <= max_d and key not in seen:
                    seen[key] = w
                    nxt.append((w, flag or f2))
        frontier = nxt
    return {t for (t, flag) in seen if flag or not nonidem_required}

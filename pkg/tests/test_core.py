import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fi1.core import (
    GENERATOR, Triple, UnassignedLetterError, canonical_word, eval_word, green, inv,
    is_idempotent, leq, leq_definitional, meet, mirror, mul, mul_batch, parse_triple, parse_word,
)
from oracles import all_signed, steps_of, walk, walk_inv, walk_mul

T = Triple.from_signed
SMALL = [T(*s) for s in all_signed(3)]


@st.composite
def triples(draw, limit=40):
    a = draw(st.integers(0, limit))
    b = draw(st.integers(0 if a else 1, limit))
    return Triple(a, draw(st.integers(-a, b)), b)


@pytest.mark.parametrize("u, v, expected", [
    ((0, 1, 1), (0, 1, 1), (0, 2, 2)),
    ((-1, 0, 0), (0, 0, 2), (-1, 0, 2)),
    ((-1, 2, 3), (-1, 2, 3), (-1, 4, 5)),
])
def test_mul_examples(u, v, expected):
    assert mul(T(*u), T(*v)) == T(*expected)
    assert walk_mul(u, v) == expected


@pytest.mark.parametrize("u, expected", [
    ((0, 1, 1), (-1, -1, 0)), ((-2, 0, 3), (-2, 0, 3)), ((-1, 2, 3), (-3, -2, 1)),
])
def test_inv_examples(u, expected):
    assert inv(T(*u)) == T(*expected)
    assert walk_inv(u) == expected


@pytest.mark.parametrize("word, expected", [
    ("x", "(0,1,1)"), ("x x'", "(0,0,1)"), ("x' x x x x x' x' x' x x", "(-1,2,3)"),
])
def test_eval_word_examples(word, expected):
    assert str(eval_word(parse_word(word))) == expected


def test_eval_word_unassigned_letter_is_named():
    with pytest.raises(UnassignedLetterError) as err:
        eval_word(parse_word("x y"))
    assert err.value.letter == "y"


def test_predicates_and_green_examples():
    assert is_idempotent(T(0, 0, 1)) and is_idempotent(T(-1, 0, 2))
    assert not is_idempotent(GENERATOR)
    assert leq(T(0, 1, 2), T(0, 1, 1))
    assert not leq(T(0, 0, 1), T(0, 1, 1))
    g = green(T(-1, 2, 3))
    assert g.rclass == (1, 3) and g.dindex == 4
    assert green(T(-1, 0, 3)).rclass == g.rclass
    assert green(T(0, 1, 1)).dindex == green(T(-1, -1, 0)).dindex == 1


def test_mirror_examples():
    assert mirror(T(0, 1, 1)) == T(-1, -1, 0)
    assert mirror(T(-1, 0, 2)) == T(-2, 0, 1)
    assert mirror(mirror(T(-3, -2, 1))) == T(-3, -2, 1)


@pytest.mark.parametrize("bad", [(-0, 0, 0), (-1, 2, 1), (-2, -3, 0), (1, 0, 1), (0, 0, -1)])
def test_invalid_triples_rejected(bad):
    with pytest.raises(ValueError):
        T(*bad)


def test_overflow_is_checked():
    big = Triple(0, 2**62, 2**62)
    with pytest.raises(OverflowError):
        mul(big, mul(big, big))
    with pytest.raises(OverflowError):
        Triple(0, 0, 2**63)


def test_parse_triple_and_str_round_trip():
    for u in SMALL:
        assert parse_triple(str(u)) == u
    assert parse_triple("[-1, 2, 3]") == T(-1, 2, 3)
    with pytest.raises(ValueError):
        parse_triple("(1,2,3)")


def test_word_syntax():
    assert str(parse_word("xx'x")) == "x x' x"
    assert parse_word("x′ x").letters == (("x", -1), ("x", 1))
    w = parse_word("a1b1 y'", ("y", "a1b1"))
    assert w.letters == (("a1b1", 1), ("y", -1))
    with pytest.raises(ValueError):
        parse_word("  ")
    with pytest.raises(ValueError):
        parse_word("z", ("y",))


def test_canonical_word_evaluates_to_its_triple():
    for u in SMALL:
        assert eval_word(canonical_word(u)) == u


def test_meet_is_componentwise_max():
    assert meet(T(-1, 0, 0), T(0, 0, 2)) == T(-1, 0, 2)
    with pytest.raises(ValueError):
        meet(GENERATOR, T(0, 0, 1))


def test_product_matches_walk_oracle_exhaustively():
    for u, v in itertools.product(all_signed(3), repeat=2):
        assert mul(T(*u), T(*v)).signed() == walk_mul(u, v)


def test_eval_word_matches_walk_for_all_short_words():
    for n in range(1, 9):
        for steps in itertools.product((1, -1), repeat=n):
            w = parse_word(" ".join("x" if s > 0 else "x'" for s in steps))
            assert eval_word(w).signed() == walk(steps)


def test_mul_batch_agrees_with_mul():
    elems = [T(*s) for s in all_signed(4)]
    arr = np.array(elems)
    i, j = np.meshgrid(np.arange(len(elems)), np.arange(len(elems)), indexing="ij")
    a, p, b = mul_batch(arr[i, 0], arr[i, 1], arr[i, 2], arr[j, 0], arr[j, 1], arr[j, 2])
    for x, y in itertools.product(range(len(elems)), repeat=2):
        assert (a[x, y], p[x, y], b[x, y]) == tuple(mul(elems[x], elems[y]))


def test_leq_criterion_matches_definition():
    elems = [T(*s) for s in all_signed(5)]
    for u, v in itertools.product(elems, repeat=2):
        assert leq(u, v) == leq_definitional(u, v)


def test_mirror_is_an_automorphism():
    for u, v in itertools.product(SMALL, repeat=2):
        assert mirror(mul(u, v)) == mul(mirror(u), mirror(v))


@given(triples(), triples(), triples())
def test_associativity_random(u, v, w):
    assert mul(mul(u, v), w) == mul(u, mul(v, w))


@given(triples(), triples())
def test_closure_and_inverse_laws(u, v):
    prod = mul(u, v)
    Triple(*prod)  # revalidates the invariants
    Triple(*inv(u))
    assert mul(mul(u, inv(u)), u) == u
    assert mul(mul(inv(u), u), inv(u)) == inv(u)
    assert inv(prod) == mul(inv(v), inv(u))
    assert prod.dindex >= max(u.dindex, v.dindex)


@given(triples(), triples())
def test_idempotents_commute(u, v):
    e, f = mul(u, inv(u)), mul(inv(v), v)
    assert mul(e, f) == mul(f, e)
    assert is_idempotent(mul(e, f))


@given(triples())
def test_steps_oracle_is_consistent(u):
    assert walk(steps_of(u.signed())) == u.signed()

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triangle_building.building_local import vertex_type
from triangle_building.errors import BudgetExceeded
from triangle_building.group_words import (
    IDENTITY,
    NormalForm,
    ball,
    census_formula,
    enumerate_normal_forms,
    gen,
    gen_inv,
    inverse,
    is_normal,
    multiply,
    parse_word,
    reduce,
    render,
    rewrite,
    word_to_normal_form,
)
from triangle_building.presentation import canonical_q2

P2 = canonical_q2()
letters = st.tuples(st.integers(0, 6), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=7)


def test_reduce_examples(pres):
    assert reduce(pres, []) == IDENTITY
    assert reduce(pres, parse_word("0 1")) == NormalForm((3,), ())
    assert reduce(pres, parse_word("0 1^-1")) == NormalForm((6,), (4,))
    # both sides of the last example expand to a0 a2 a4
    assert reduce(pres, parse_word("0 2 4")) == reduce(pres, parse_word("6^-1 4"))
    assert reduce(pres, parse_word("0 1^-1")) == reduce(pres, parse_word("0 2 4"))


def test_multiply_inverse_examples(pres):
    assert multiply(pres, gen_inv(3), gen(3)) == IDENTITY
    assert multiply(pres, gen(0), gen(1)) == gen_inv(3)
    g = NormalForm((6,), (4,))
    assert multiply(pres, IDENTITY, g) == g
    assert inverse(pres, IDENTITY) == IDENTITY
    assert inverse(pres, gen_inv(3)) == gen(3)
    assert inverse(pres, g) == NormalForm((4,), (6,))
    assert multiply(pres, g, inverse(pres, g)) == IDENTITY


def test_shapes():
    assert IDENTITY.length == 0 and IDENTITY.shape == (0, 0)
    assert NormalForm((6,), (4,)).shape == (1, 1)
    nf = NormalForm((), (0, 3))
    assert nf.length == 2 and nf.shape == (0, 2)
    assert is_normal(P2, nf)
    assert not is_normal(P2, NormalForm((), (0, 1)))


def test_parse_render():
    assert parse_word("3 3^-1 e") == [(3, 1), (3, -1)]
    assert render([(3, 1), (3, -1)]) == "3 3^-1"
    assert str(IDENTITY) == "e"
    with pytest.raises(ValueError):
        parse_word("x")


def test_ball_census(pres):
    b = ball(pres, 4)
    assert b.spheres() == [1, 14, 98, 560, 2912]
    census = b.census()
    assert census[(1, 1)] == 42
    assert [census[(0, 2)], census[(1, 1)], census[(2, 0)]] == [28, 42, 28]
    for (n, m), count in census.items():
        assert count == census_formula(2, n, m)
    with pytest.raises(BudgetExceeded):
        ball(pres, 3, budget=50)


@pytest.mark.parametrize("n,m", [(0, 1), (1, 1), (2, 1), (0, 3), (3, 0), (2, 2)])
def test_enumeration_oracle(pres, n, m):
    found = set(enumerate_normal_forms(pres, n, m))
    bfs = {g for g in ball(pres, n + m).distance if g.shape == (n, m)}
    assert found == bfs
    assert len(found) == census_formula(2, n, m)


def test_q3_census(pres3):
    census = ball(pres3, 2).census()
    for (n, m), count in census.items():
        assert count == census_formula(3, n, m) == sum(1 for _ in enumerate_normal_forms(pres3, n, m))


@given(words, words, words)
@settings(max_examples=150, deadline=None)
def test_associativity(u, v, w):
    g, h, k = (reduce(P2, x) for x in (u, v, w))
    assert multiply(P2, multiply(P2, g, h), k) == multiply(P2, g, multiply(P2, h, k))


@given(words)
@settings(max_examples=150, deadline=None)
def test_inverse_and_idempotence(w):
    g = reduce(P2, w)
    assert is_normal(P2, g)
    assert multiply(P2, g, inverse(P2, g)) == IDENTITY
    assert multiply(P2, inverse(P2, g), g) == IDENTITY
    assert reduce(P2, g.letters()) == g
    assert g.length <= len(w)


@given(words, st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_local_rewriting_agrees(w, seed):
    out = rewrite(P2, w, random.Random(seed))
    assert word_to_normal_form(out) == reduce(P2, w)


@given(words, words)
@settings(max_examples=100, deadline=None)
def test_type_is_a_homomorphism(u, v):
    g, h = reduce(P2, u), reduce(P2, v)
    assert vertex_type(multiply(P2, g, h)) == (vertex_type(g) + vertex_type(h)) % 3


def test_relators_vanish(pres, pres3):
    for p in (pres, pres3):
        for t in p.triples:
            assert reduce(p, [(x, 1) for x in t]) == IDENTITY

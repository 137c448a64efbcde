from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from metadehn.model import gamma
from metadehn.words import (Gen, Vec, WordSyntaxError, commutator, concat, cyclic_conjugates, cyclic_reduce,
                            format_word, free_reduce, inverse, inverse_letter, is_inverse_pair, parse_word, power)

gens = st.builds(Gen, st.sampled_from("abc"), st.sampled_from((1, -1)))
words = st.lists(gens, max_size=30).map(tuple)


def _naive_reduce(w):
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i].name == w[i + 1].name and w[i].sign == -w[i + 1].sign:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


@given(words)
def test_free_reduce_matches_naive_rewriting(w):
    assert free_reduce(w) == _naive_reduce(w)


@given(words, words)
def test_inverse_is_antihomomorphism(u, v):
    assert inverse(concat(u, v)) == concat(inverse(v), inverse(u))
    assert free_reduce(concat(u, inverse(u))) == ()


@given(words)
def test_cyclic_reduce_is_a_conjugate(w):
    c = cyclic_reduce(w)
    r = free_reduce(w)
    assert len(c) <= len(r)
    if c:
        assert not is_inverse_pair(c[0], c[-1])


def test_cyclic_conjugates():
    w = parse_word("a b a^-1")
    assert len(cyclic_conjugates(w)) == 3


def test_commutator_and_power():
    a, b = Gen("a"), Gen("b")
    assert commutator((a,), (b,)) == (a, b, Gen("a", -1), Gen("b", -1))
    assert power((a, b), -2) == inverse((a, b, a, b))
    assert power((a,), 0) == ()


def test_vector_inverse():
    v = Vec("P2", (Fraction(1), Fraction(-3, 5)))
    assert inverse_letter(v) == Vec("P2", (Fraction(-1), Fraction(3, 5)))
    assert is_inverse_pair(v, inverse_letter(v))
    assert not is_inverse_pair(v, Vec("P3", inverse_letter(v).value))


@pytest.mark.parametrize("text,expected", [
    ("a^2 b^-1", (Gen("a"), Gen("a"), Gen("b", -1))),
    ("a b*a^-1", (Gen("a"), Gen("b"), Gen("a", -1))),
    ("e", ()),
    ("1", ()),
    ("", ()),
])
def test_parse_plain_words(text, expected):
    assert parse_word(text) == expected


@pytest.mark.parametrize("text", ["a^", "a^x", "[P2 1]", "[P2: 1", "?"])
def test_parse_errors_carry_position(text):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text, gamma(2).parse_vector)
    assert info.value.position >= 0


@given(words)
def test_format_round_trip(w):
    assert parse_word(format_word(w)) == w


def test_factor_letters_round_trip():
    g = gamma(2)
    w = g.parse_word("a [P2: 1/3, -2] b^-1 [Vp: 1/2-1/4*r5]")
    assert g.parse_word(format_word(w)) == w
    assert format_word(()) == "e"

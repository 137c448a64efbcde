import itertools

import pytest
from hypothesis import given, settings, strategies as st

from metadehn.model import gamma, lambda_model
from metadehn.oracle import (bfs_min_area, bfs_search, bs_presentation, bs_witness_word, corridor_area,
                             lambda_presentation, parse_presentation, random_null_word, z2_presentation)
from metadehn.words import Gen, commutator, free_reduce, inverse, parse_word, power

t, x = Gen("t"), Gen("x")

# exact BS(1,2) areas of [t^k x t^-k, x], frozen from the corridor programme
BS_WITNESS_AREAS = [2, 6, 14, 30, 62, 126]


def _bs_null_words(max_len):
    """Freely reduced null-homotopic words over t, x, up to cyclic rotation."""
    letters = [t, Gen("t", -1), x, Gen("x", -1)]
    seen = set()
    for L in range(2, max_len + 1, 2):
        for w in itertools.product(letters, repeat=L):
            if free_reduce(w) != w or corridor_area(w) is None:
                continue
            key = min(w[i:] + w[:i] for i in range(L))
            if key not in seen:
                seen.add(key)
                yield w


def test_corridor_matches_search_on_short_words():
    p = bs_presentation(2)
    count = 0
    for w in _bs_null_words(8):
        assert bfs_min_area(p, w, max_area=12) == corridor_area(w)
        count += 1
    assert count > 5


def test_witness_areas():
    assert [corridor_area(bs_witness_word(k)) for k in range(1, 7)] == BS_WITNESS_AREAS
    assert len(bs_witness_word(1)) == 8
    with pytest.raises(ValueError):
        bs_witness_word(0)


@pytest.mark.parametrize("n", [2, 3])
def test_corridor_relator_and_non_null(n):
    rel = (t, x, Gen("t", -1)) + power((x,), -n)
    assert corridor_area(rel, n) == 1
    assert corridor_area((t, x), n) is None
    assert corridor_area(power(rel, 3), n) == 3


def test_cyclic_and_linear_search_agree():
    p = bs_presentation(2)
    w = bs_witness_word(1)
    assert bfs_search(p, w, cyclic=True).area == bfs_search(p, w).area == 2
    z2 = z2_presentation()
    w = parse_word("a^2 b^2 a^-2 b^-2")
    assert bfs_search(z2, w, cyclic=True).area == bfs_search(z2, w).area == 4


@settings(max_examples=15, deadline=None)
@given(st.lists(st.sampled_from(["a", "b"]), min_size=1, max_size=2),
       st.lists(st.sampled_from(["a", "b"]), min_size=1, max_size=2))
def test_z2_area_is_subadditive(us, vs):
    z2 = z2_presentation()
    u = commutator(parse_word(" ".join(us)), parse_word("b"))
    v = commutator(parse_word("a"), parse_word(" ".join(vs)))
    au, av, auv = (bfs_min_area(z2, w, max_area=16) for w in (u, v, u + v))
    assert auv <= au + av


def test_search_reports_exhaustion_and_budget():
    z2 = z2_presentation()
    r = bfs_search(z2, parse_word("a b"), max_area=6)
    assert r.area is None and r.status in ("exhausted", "budget")
    r = bfs_search(bs_presentation(2), bs_witness_word(3), max_nodes=50)
    assert r.status == "budget"
    assert bfs_search(z2, ()).area == 0


def test_parse_presentation():
    p = parse_presentation("gens: a b\nrels: [a,b] ; a^2\n")
    assert p.gens == ("a", "b")
    assert len(p.rels) == 2
    assert bfs_min_area(p, parse_word("a b a^-1 b^-1 a^2")) == 2
    with pytest.raises(ValueError):
        parse_presentation("rels: a\n")
    with pytest.raises(ValueError):
        parse_presentation("gens: a\nrels: b\n")


def test_lambda_presentation_shape():
    p = lambda_presentation(3)
    assert p.gens == ("a", "s", "t")
    assert sorted(len(r) for r in p.rels) == [3, 4, 7, 8]


@pytest.mark.parametrize("model", [gamma(2), lambda_model(2)])
def test_random_null_words_are_deterministic_and_null(model):
    for family in ("chord", "commutator"):
        w1 = random_null_word(model, 40, 9, family)
        assert w1 == random_null_word(model, 40, 9, family)
        assert model.evaluate(w1).is_identity()
    with pytest.raises(ValueError):
        random_null_word(model, 40, 9, "spiral")


def test_bs_relator_has_area_one():
    w = parse_word("t x t^-1 x^-2")
    assert bfs_min_area(bs_presentation(2), w) == 1


@pytest.mark.parametrize("model", [gamma(2), lambda_model(2)])
def test_random_null_word_length_and_variety(model):
    C = model.efficiency_constant
    words = set()
    for seed in range(100):
        w = random_null_word(model, 16, seed)
        assert 16 <= len(w) <= (C + 2) * 16
        words.add(w)
    assert len(words) >= 99

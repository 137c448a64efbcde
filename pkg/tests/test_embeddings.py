import itertools
import random
from fractions import Fraction

import pytest

from metadehn.embeddings import (bs_embed, bs_into_gamma, lambda_into_sol, lambda_word, lamplighter_embed,
                                 lamplighter_word, sigma_valuations)
from metadehn.exact import DomainError, LaurentLocal
from metadehn.filling import fill, verify_filling
from metadehn.model import gamma, lambda_model
from metadehn.oracle import bs_presentation, bs_witness_word, lambda_presentation
from metadehn.words import Gen, commutator, inverse, parse_word, power


@pytest.mark.parametrize("n", [2, 6])
def test_bs_relator_maps_to_identity(n):
    g = gamma(n)
    rel = bs_presentation(n).rels[0]
    assert g.evaluate(bs_into_gamma(rel, n, g)).is_identity()


def test_bs_image_is_injective_on_samples():
    g = gamma(2)
    # t^k x t^-k evaluates to (2^k, 0) in every factor
    for k in range(-3, 4):
        w = power((Gen("t"),), k) + (Gen("x"),) + power((Gen("t"),), -k)
        assert g.evaluate(bs_into_gamma(w, 2, g)) == bs_embed(Fraction(2) ** k, 0, 2, g)
    assert bs_embed(1, 3, 2, g).a_vec == (3, 0)
    with pytest.raises(DomainError):
        bs_embed(Fraction(1, 3), 0, 2, g)


def test_bs_witness_fills_quadratically_in_gamma():
    g = gamma(2)
    areas = []
    for k in (2, 4, 8):
        w = bs_into_gamma(bs_witness_word(k), 2, g)
        f = fill(w, g)
        assert verify_filling(w, f, g)
        areas.append(f.area)
    # polynomial, not doubling per step of k
    assert areas[2] < 8 * areas[1]


def test_bs_map_rejects_foreign_letters():
    with pytest.raises(ValueError):
        bs_into_gamma(parse_word("t y"))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lambda_relators_map_to_identity(p):
    m = lambda_model(p)
    for r in lambda_presentation(p).rels:
        assert lambda_into_sol(r, p, m).is_identity()


def test_lamplighter_conjugates_commute():
    m = lambda_model(2)
    conj = {k: power((Gen("t"),), k) + (Gen("a"),) + power((Gen("t"),), -k) for k in range(-3, 4)}
    for k, l in itertools.combinations(conj, 2):
        assert lamplighter_embed(commutator(conj[k], conj[l]), 2, m).is_identity()


def test_lamplighter_values():
    m = lambda_model(3)
    # a t a t^-1 is the ring element 1 + X
    e = lamplighter_embed(parse_word("a t a t^-1"), 3, m)
    one_px = LaurentLocal.monomial(3, 0, 1)
    assert all(c == (one_px,) for c in e.components)
    assert e.a_vec == (0, 0)
    with pytest.raises(ValueError):
        lamplighter_word(parse_word("s"), 3, m)


def test_sigma_valuations():
    m = lambda_model(2)
    w = lambda_word(parse_word("t a t^-1 s^2 t"), 2, m)
    vals, diag = sigma_valuations(m.evaluate(w), m)
    # a^t = X: valuation 1 at 0, -1 at infinity, 0 at -1
    assert vals == (1, -1, 0)
    assert sum(diag) == 0
    assert diag == (1, -3, 2)


def test_lambda_words_fill():
    m = lambda_model(2)
    r = lambda_presentation(2).rels[3]
    w = lambda_word(r + inverse(r), 2, m) + lambda_word(r, 2, m)
    f = fill(w, m)
    assert verify_filling(w, f, m)


def test_bs_map_is_a_homomorphism():
    g = gamma(2)
    rng = random.Random(2)
    letters = [Gen("t"), Gen("t", -1), Gen("x"), Gen("x", -1)]
    assert bs_into_gamma((), 2, g) == ()
    for _ in range(100):
        u = tuple(rng.choice(letters) for _ in range(rng.randint(0, 8)))
        v = tuple(rng.choice(letters) for _ in range(rng.randint(0, 8)))
        uv = g.evaluate(bs_into_gamma(u + v, 2, g))
        assert uv == g.multiply(g.evaluate(bs_into_gamma(u, 2, g)), g.evaluate(bs_into_gamma(v, 2, g)))


@pytest.mark.parametrize("p", [2, 3])
def test_lamplighter_torsion(p):
    assert lamplighter_embed(power((Gen("a"),), p), p).is_identity()

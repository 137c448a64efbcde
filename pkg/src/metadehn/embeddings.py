"""Embeddings as executable maps.

* BS(1,n) = <t, x | t x t^-1 = x^n> into the ambient group of Gamma(n):
  ``t -> a`` and ``x ->`` the first basis vector, seen simultaneously in every
  p-adic factor and in both eigenlines.
* The lamplighter group <a, t> and Baumslag's group
  <a, s, t | a^p, [s,t], [a^t,a], a^s = a^t a> into the Laurent model
  ``lambda_model(p)``: ``a`` is the unit ring element, ``t`` multiplies by
  ``X`` and ``s`` by ``1+X``.  Reading the ring element at the places
  ``X = 0, infinity, -1`` is the map ``P -> (P(u), P(1/u), P(u-1))`` into
  three copies of F_p((u)), and ``t``, ``s`` act there diagonally by
  ``(u, 1/u, u-1)`` and ``(u+1, 1/u+1, u)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .exact import DomainError, LaurentLocal, QuadraticNumber
from .model import EIGENCOVECTOR_MINUS, EIGENCOVECTOR_PLUS, Element, GroupModel, gamma, lambda_model, prime_divisors
from .words import Gen, Letter, Vec, Word, inverse


def _gamma_vector_letters(model: GroupModel, vec: Tuple[Fraction, Fraction]) -> Word:
    out: List[Letter] = []
    for f in model.factors:
        if f.kind == "padic":
            out.append(Vec(f.id, tuple(Fraction(c) for c in vec)))
        else:
            ell = EIGENCOVECTOR_PLUS if f.id == "Vp" else EIGENCOVECTOR_MINUS
            out.append(Vec(f.id, (ell[0] * vec[0] + ell[1] * vec[1],)))
    return tuple(out)


def bs_into_gamma(w: Sequence[Letter], n: int = 2, model: GroupModel = None) -> Word:
    """Image of a word over ``t, x`` in the Gamma(n) alphabet."""
    model = gamma(n) if model is None else model
    x_img = _gamma_vector_letters(model, (Fraction(1), Fraction(0)))
    out: List[Letter] = []
    for c in w:
        if type(c) is not Gen or c.name not in ("t", "x"):
            raise ValueError(f"letter {c} is not t or x")
        if c.name == "t":
            out.append(Gen("a", c.sign))
        else:
            out.extend(x_img if c.sign > 0 else inverse(x_img))
    return tuple(out)


def bs_embed(x, k: int, n: int = 2, model: GroupModel = None) -> Element:
    """The element ``(x, 0) . a^k`` of Gamma(n) for ``x`` in Z[1/n]."""
    model = gamma(n) if model is None else model
    x = Fraction(x)
    primes = set(prime_divisors(n))
    if any(p not in primes for p in prime_divisors(x.denominator)):
        raise DomainError(f"{x} is not in Z[1/{n}]")
    comps = []
    for f in model.factors:
        if f.kind == "padic":
            comps.append((x, Fraction(0)))
        else:
            ell = EIGENCOVECTOR_PLUS if f.id == "Vp" else EIGENCOVECTOR_MINUS
            comps.append((ell[0] * x,))
    return Element(tuple(comps), (k, 0))


def _ring_letters(model: GroupModel, value: LaurentLocal) -> Word:
    return tuple(Vec(f.id, (value,)) for f in model.factors)


def lamplighter_word(w: Sequence[Letter], p: int = 2, model: GroupModel = None) -> Word:
    """Image of a lamplighter word over ``a, t`` in the Laurent model alphabet."""
    return lambda_word(w, p, model, allowed=("a", "t"))


def lamplighter_embed(w: Sequence[Letter], p: int = 2, model: GroupModel = None) -> Element:
    model = lambda_model(p) if model is None else model
    return model.evaluate(lamplighter_word(w, p, model))


def lambda_word(w: Sequence[Letter], p: int = 2, model: GroupModel = None,
                allowed: Tuple[str, ...] = ("a", "s", "t")) -> Word:
    """Image of a word over ``a, s, t`` in the Laurent model alphabet."""
    model = lambda_model(p) if model is None else model
    one = _ring_letters(model, LaurentLocal.one(p))
    out: List[Letter] = []
    for c in w:
        if type(c) is not Gen or c.name not in allowed:
            raise ValueError(f"letter {c} is not one of {', '.join(allowed)}")
        if c.name == "a":
            out.extend(one if c.sign > 0 else inverse(one))
        else:
            out.append(c)
    return tuple(out)


def lambda_into_sol(w: Sequence[Letter], p: int = 2, model: GroupModel = None) -> Element:
    """Element of the three-place model (the SOL_5 picture) represented by a
    word in Baumslag's group."""
    model = lambda_model(p) if model is None else model
    return model.evaluate(lambda_word(w, p, model))


def sigma_valuations(e: Element, model: GroupModel) -> Tuple[Tuple, Tuple[int, ...]]:
    """Valuations of the three SOL_5 coordinates and of the diagonal part.

    Returns the place valuations of the ring element and, for the A-part
    ``t^i s^j``, the u-adic valuations of its three diagonal entries."""
    vals = tuple(f.valuation(c) for f, c in zip(model.factors, e.components))
    i, j = e.a_vec
    diag = (i, -i - j, j)
    return vals, diag

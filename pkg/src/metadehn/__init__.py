"""Exact models of metabelian groups ``(+) V_i x| Z^d`` and certified
quadratic-area fillings of their null-homotopic words."""
from .exact import LaurentLocal, QuadraticNumber, padic_valuation
from .filling import Filling, fill, fill_abelian, fill_special, transport, swap_commutator, verify_filling
from .model import Element, Factor, GroupModel, bs_ambient, builtin_models, gamma, lambda_model, rank_one, sol
from .words import Gen, Vec, format_word, free_reduce, inverse, parse_word

__all__ = [
    "LaurentLocal", "QuadraticNumber", "padic_valuation",
    "Filling", "fill", "fill_abelian", "fill_special", "transport", "swap_commutator", "verify_filling",
    "Element", "Factor", "GroupModel", "bs_ambient", "builtin_models", "gamma", "lambda_model", "rank_one", "sol",
    "Gen", "Vec", "format_word", "free_reduce", "inverse", "parse_word",
]

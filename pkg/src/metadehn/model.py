"""Executable data for groups ``G = (V_1 + ... + V_m) x| A`` with ``A = Z^d``.

Each factor ``V_i`` carries one norm (a p-adic place, a place of the
Laurent ring, or the archimedean absolute value) and every generator of A
multiplies that norm by a fixed exact ratio.  A :class:`GroupModel` bundles
the factors, the integer generators of A, their exact action matrices, and
the derived constants used by the filling engine.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import (
    INF,
    DomainError,
    LaurentLocal,
    QuadraticNumber,
    format_laurent,
    format_quadratic,
    padic_valuation,
    parse_laurent,
    parse_quadratic,
)
from .words import Gen, Letter, Vec, Word, WordSyntaxError, format_word, inverse_letter, parse_word

CONTRACTS, NEUTRAL, DILATES = -1, 0, 1


class ModelError(ValueError):
    """Invalid model data, or a model that fails a required hypothesis."""


class HypothesisError(ModelError):
    """No common contraction exists within the search radius."""


class InvalidLetter(ValueError):
    """A factor letter outside the unit ball, or not in the model's alphabet."""


# --------------------------------------------------------------------------
# linear actions
# --------------------------------------------------------------------------

class Action:
    """A square matrix acting on column vectors of one factor."""

    __slots__ = ("m", "dim")

    def __init__(self, m):
        self.m = tuple(tuple(r) for r in m)
        self.dim = len(self.m)

    def apply(self, v: tuple) -> tuple:
        if self.dim == 1:
            return (self.m[0][0] * v[0],)
        m = self.m
        if self.dim == 2:
            return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])
        return tuple(sum((m[i][j] * v[j] for j in range(self.dim)), m[i][0] * 0) for i in range(self.dim))

    def compose(self, other: "Action") -> "Action":
        """The matrix product ``self @ other``."""
        a, b, n = self.m, other.m, self.dim
        if n == 1:
            return Action(((a[0][0] * b[0][0],),))
        return Action(tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), a[i][0] * 0)
                                  for j in range(n)) for i in range(n)))

    def det(self):
        m = self.m
        if self.dim == 1:
            return m[0][0]
        if self.dim == 2:
            return m[0][0] * m[1][1] - m[0][1] * m[1][0]
        raise ModelError("only dimensions 1 and 2 are supported")

    def inverse(self) -> "Action":
        m = self.m
        if self.dim == 1:
            c = m[0][0]
            inv = c.inverse() if isinstance(c, (LaurentLocal, QuadraticNumber)) else Fraction(1) / c
            return Action(((inv,),))
        d = self.det()
        if isinstance(d, LaurentLocal):
            dinv = d.inverse()
        elif isinstance(d, QuadraticNumber):
            dinv = d.inverse()
        else:
            dinv = Fraction(1) / d
        return Action(((m[1][1] * dinv, -m[0][1] * dinv), (-m[1][0] * dinv, m[0][0] * dinv)))

    def __eq__(self, other):
        return isinstance(other, Action) and self.m == other.m

    def __hash__(self):
        return hash(self.m)


def _identity_like(entry, dim: int) -> Action:
    one = entry * 0 + 1
    zero = entry * 0
    return Action(tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim)))


# --------------------------------------------------------------------------
# factors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """One summand ``V_i`` with its norm.

    ``kind`` is ``"padic"`` (rational coordinates, p-adic sup-norm),
    ``"real"`` (archimedean; ``scalar`` is ``"rational"`` or ``"quadratic"``)
    or ``"laurent"`` (Laurent ring element read at ``place``).
    """

    id: str
    kind: str
    dim: int = 1
    prime: Optional[int] = None
    place: Optional[str] = None
    scalar: str = "rational"

    @property
    def archimedean(self) -> bool:
        return self.kind == "real"

    @property
    def residue_size(self) -> Optional[int]:
        return None if self.archimedean else self.prime

    def zero(self) -> tuple:
        if self.kind == "laurent":
            return (LaurentLocal.zero(self.prime),) * self.dim
        if self.scalar == "quadratic":
            return (QuadraticNumber(0),) * self.dim
        return (Fraction(0),) * self.dim

    def one_scalar(self):
        if self.kind == "laurent":
            return LaurentLocal.one(self.prime)
        if self.scalar == "quadratic":
            return QuadraticNumber(1)
        return Fraction(1)

    def coerce(self, x):
        if self.kind == "laurent":
            if not isinstance(x, LaurentLocal):
                x = LaurentLocal(self.prime, (int(x),))
            return x
        if self.scalar == "quadratic":
            return x if isinstance(x, QuadraticNumber) else QuadraticNumber(x)
        if isinstance(x, QuadraticNumber):
            if x.b:
                raise DomainError(f"{x} is not rational")
            return x.a
        return Fraction(x)

    def valuation(self, value: tuple):
        """Minimum coordinate valuation (non-archimedean factors only)."""
        if self.kind == "padic":
            return min(padic_valuation(c, self.prime) for c in value)
        if self.kind == "laurent":
            return min(c.valuation(self.place) for c in value)
        raise DomainError(f"factor {self.id} is archimedean")

    def absolute(self, value: tuple):
        """Sup of coordinate absolute values (archimedean factors only)."""
        if not self.archimedean:
            raise DomainError(f"factor {self.id} is not archimedean")
        return max(abs(c) for c in value)

    def is_zero(self, value: tuple) -> bool:
        return not any(value)

    def in_unit_ball(self, value: tuple) -> bool:
        if self.archimedean:
            return self.absolute(value) <= 1
        return self.valuation(value) >= 0

    def norm_at_most(self, value: tuple, bound) -> bool:
        """``||value|| <= bound``; for non-archimedean factors ``bound`` is a
        valuation floor (``||value|| <= q**-bound``)."""
        if self.archimedean:
            return self.absolute(value) <= bound
        return self.valuation(value) >= bound

    def norm_float(self, value: tuple) -> float:
        if self.archimedean:
            return float(self.absolute(value))
        v = self.valuation(value)
        return 0.0 if v == INF else float(self.prime) ** (-v)

    def parse_scalar(self, text: str):
        if self.kind == "laurent":
            return parse_laurent(text, self.prime)
        if self.scalar == "quadratic":
            return parse_quadratic(text)
        return Fraction(text.strip())

    def format_scalar(self, x) -> str:
        if isinstance(x, LaurentLocal):
            return format_laurent(x)
        if isinstance(x, QuadraticNumber):
            return format_quadratic(x)
        return str(x)

    def describe(self) -> str:
        if self.kind == "padic":
            return f"{self.id}: Q_{self.prime}^{self.dim}"
        if self.kind == "laurent":
            return f"{self.id}: F_{self.prime}((u)) via place {self.place}"
        return f"{self.id}: R ({self.scalar})"


# --------------------------------------------------------------------------
# norm ratios
# --------------------------------------------------------------------------

def _action_ratio(f: Factor, act: Action):
    """Exact ratio ``|lambda_i(t)|``: an integer log_q-ratio (non-archimedean)
    or an exact positive scalar (archimedean)."""
    if f.archimedean:
        if act.dim != 1:
            raise ModelError("archimedean factors must be one-dimensional")
        return abs(act.m[0][0])
    if f.kind == "laurent":
        vals = [c.valuation(f.place) for row in act.m for c in row if c]
        dval = act.det().valuation(f.place)
    else:
        vals = [padic_valuation(c, f.prime) for row in act.m for c in row if c]
        dval = padic_valuation(act.det(), f.prime)
    mv = min(vals)
    if dval != act.dim * mv:
        raise ModelError(f"action on {f.id} is not a scalar times an integral invertible matrix")
    return -mv


def _classify_log(r: int) -> int:
    return (r > 0) - (r < 0)


def _classify_abs(x) -> int:
    return (x > 1) - (x < 1)


# --------------------------------------------------------------------------
# elements
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """Normal form ``((x_i), t)``: one component per factor and ``t`` in Z^d."""

    components: tuple
    a_vec: tuple

    def is_identity(self) -> bool:
        return not any(self.a_vec) and not any(any(c) for c in self.components)


# --------------------------------------------------------------------------
# the model
# --------------------------------------------------------------------------

class GroupModel:
    """``G = (+) V_i x| Z^d`` as data.

    ``actions[name][i]`` is the matrix of the basis generator ``name`` on
    factor ``i``.  Shortcut generators (common contractions) are adjoined
    lazily by :meth:`find_common_contraction` and recorded in ``extended``.
    """

    def __init__(self, name: str, basis: Sequence[str], factors: Sequence[Factor],
                 actions: Dict[str, Sequence[Action]], search_radius: int = 12):
        self.name = name
        self.basis = tuple(basis)
        self.d = len(self.basis)
        self.factors = tuple(factors)
        self.m = len(self.factors)
        self.search_radius = search_radius
        self.factor_index = {f.id: i for i, f in enumerate(self.factors)}
        if len(self.factor_index) != self.m:
            raise ModelError("duplicate factor ids")
        if len(set(self.basis)) != self.d:
            raise ModelError("duplicate generator names")
        self.extended: Dict[str, Tuple[int, ...]] = {}
        self._zvec: Dict[Tuple[str, int], Tuple[int, ...]] = {}
        self._act: Dict[Tuple[str, int], Tuple[Action, ...]] = {}
        self._ratio: Dict[Tuple[str, int], tuple] = {}
        self._cls: Dict[Tuple[str, int], Tuple[int, ...]] = {}
        for k, g in enumerate(self.basis):
            acts = tuple(actions[g])
            if len(acts) != self.m:
                raise ModelError(f"generator {g} needs one action per factor")
            for f, a in zip(self.factors, acts):
                if a.dim != f.dim:
                    raise ModelError(f"action of {g} on {f.id} has wrong size")
                if not a.det():
                    raise ModelError(f"action of {g} on {f.id} is singular")
            inv = tuple(a.inverse() for a in acts)
            z = tuple(1 if j == k else 0 for j in range(self.d))
            self._register(g, z, acts, inv)
        self._check_commuting()
        self._pair_cache: Dict[Tuple[int, int], Word] = {}
        for i, f in enumerate(self.factors):
            if self.designated_dilator(i) is None:
                raise ModelError(f"no generator dilates factor {f.id}")

    # -- registration ------------------------------------------------------

    def _register(self, name, z, acts, inv):
        self._zvec[(name, 1)] = z
        self._zvec[(name, -1)] = tuple(-x for x in z)
        self._act[(name, 1)] = acts
        self._act[(name, -1)] = inv
        self._ratio[(name, 1)] = tuple(_action_ratio(f, a) for f, a in zip(self.factors, acts))
        self._ratio[(name, -1)] = tuple(_action_ratio(f, a) for f, a in zip(self.factors, inv))
        for sgn in (1, -1):
            rs = self._ratio[(name, sgn)]
            self._cls[(name, sgn)] = tuple(_classify_abs(r) if f.archimedean else _classify_log(r)
                                           for f, r in zip(self.factors, rs))

    def _check_commuting(self):
        for g, h in itertools.combinations(self.basis, 2):
            for i in range(self.m):
                a, b = self._act[(g, 1)][i], self._act[(h, 1)][i]
                if a.compose(b) != b.compose(a):
                    raise ModelError(f"actions of {g} and {h} on {self.factors[i].id} do not commute")

    def add_extended(self, z: Sequence[int], name: Optional[str] = None) -> str:
        """Adjoin a generator standing for the A-element ``z``; returns its name."""
        z = tuple(z)
        for n, zz in self.extended.items():
            if zz == z:
                return n
        if name is None:
            name = f"c{len(self.extended) + 1}"
            while name in self.basis or name in self.extended:
                name += "_"
        acts = []
        for i in range(self.m):
            acts.append(self.action_of_vector(z, i))
        inv = tuple(a.inverse() for a in acts)
        self.extended[name] = z
        self._register(name, z, tuple(acts), inv)
        return name

    # -- alphabet ------------------------------------------------------------

    @property
    def T(self) -> Tuple[Gen, ...]:
        """Symmetric generating set of A: basis letters, then shortcut letters."""
        out = []
        for g in self.basis + tuple(self.extended):
            out.append(Gen(g, 1))
            out.append(Gen(g, -1))
        return tuple(out)

    def is_generator(self, x: Letter) -> bool:
        return type(x) is Gen and (x.name, x.sign) in self._zvec

    def zvec(self, x: Gen) -> Tuple[int, ...]:
        try:
            return self._zvec[(x.name, x.sign)]
        except KeyError:
            raise InvalidLetter(f"unknown generator {x.name}") from None

    def definition(self, name: str) -> Word:
        """Spelling of a shortcut generator in basis letters."""
        return self.spell(self.extended[name])

    def spell(self, z: Sequence[int]) -> Word:
        out: List[Gen] = []
        for g, k in zip(self.basis, z):
            out.extend([Gen(g, 1 if k > 0 else -1)] * abs(k))
        return tuple(out)

    def factor(self, fid: str) -> Factor:
        return self.factors[self.factor_index[fid]]

    # -- actions ---------------------------------------------------------------

    def letter_action(self, x: Gen, i: int) -> Action:
        return self._act[(x.name, x.sign)][i]

    def act(self, x: Gen, i: int, value: tuple) -> tuple:
        return self._act[(x.name, x.sign)][i].apply(value)

    def act_word(self, w: Sequence[Gen], i: int, value: tuple) -> tuple:
        """Action of the A-word ``w`` (rightmost letter acts first)."""
        for x in reversed(w):
            value = self._act[(x.name, x.sign)][i].apply(value)
        return value

    def action_of_vector(self, z: Sequence[int], i: int) -> Action:
        f = self.factors[i]
        acc = _identity_like(f.one_scalar(), f.dim)
        for g, k in zip(self.basis, z):
            a = self._act[(g, 1 if k > 0 else -1)][i]
            for _ in range(abs(k)):
                acc = acc.compose(a)
        return acc

    def ratio(self, x: Gen, i: int):
        return self._ratio[(x.name, x.sign)][i]

    def classify_letter(self, x: Gen, i: int) -> int:
        return self._cls[(x.name, x.sign)][i]

    def vector_ratio(self, z: Sequence[int], i: int):
        """Exact norm ratio of the A-element ``z`` on factor ``i``."""
        f = self.factors[i]
        if f.archimedean:
            acc = f.one_scalar()
            for g, k in zip(self.basis, z):
                if k:
                    acc = acc * (self._ratio[(g, 1)][i] ** k)
            return acc
        return sum(k * self._ratio[(g, 1)][i] for g, k in zip(self.basis, z))

    def classify_vector(self, z: Sequence[int], i: int) -> int:
        r = self.vector_ratio(z, i)
        return _classify_abs(r) if self.factors[i].archimedean else _classify_log(r)

    def classify_word(self, w: Sequence[Gen], i: int) -> int:
        return self.classify_vector(self.a_vector(w), i)

    def a_vector(self, w: Iterable[Letter]) -> Tuple[int, ...]:
        z = [0] * self.d
        for x in w:
            if type(x) is Gen:
                for k, c in enumerate(self.zvec(x)):
                    z[k] += c
        return tuple(z)

    # -- letters -----------------------------------------------------------------

    def check_letter(self, x: Letter) -> None:
        if type(x) is Gen:
            self.zvec(x)
            return
        i = self.factor_index.get(x.factor)
        if i is None:
            raise InvalidLetter(f"unknown factor {x.factor}")
        f = self.factors[i]
        if len(x.value) != f.dim:
            raise InvalidLetter(f"letter {x} has wrong dimension for {f.id}")
        if not f.in_unit_ball(x.value):
            raise InvalidLetter(f"letter {x} lies outside the unit ball of {f.id}")

    def letter(self, fid: str, *coords) -> Vec:
        f = self.factor(fid)
        v = Vec(fid, tuple(f.coerce(c) for c in coords))
        self.check_letter(v)
        return v

    def parse_vector(self, fid: str, parts: List[str], pos: int = 0) -> tuple:
        if fid not in self.factor_index:
            raise WordSyntaxError(f"unknown factor {fid!r}", pos)
        f = self.factor(fid)
        if len(parts) != f.dim:
            raise WordSyntaxError(f"factor {fid} expects {f.dim} coordinates", pos)
        return tuple(f.parse_scalar(s) for s in parts)

    def parse_word(self, text: str) -> Word:
        w = parse_word(text, self.parse_vector)
        for x in w:
            self.check_letter(x)
        return w

    # -- evaluation -----------------------------------------------------------

    def identity(self) -> Element:
        return Element(tuple(f.zero() for f in self.factors), (0,) * self.d)

    def evaluate(self, w: Iterable[Letter], check: bool = True) -> Element:
        """Image of a word in G (group homomorphism from the free group)."""
        cur: List[Optional[Action]] = [None] * self.m
        comps = [list(f.zero()) for f in self.factors]
        z = [0] * self.d
        for x in w:
            if type(x) is Gen:
                key = (x.name, x.sign)
                zz = self._zvec.get(key)
                if zz is None:
                    raise InvalidLetter(f"unknown generator {x.name}")
                for k, c in enumerate(zz):
                    z[k] += c
                acts = self._act[key]
                for i in range(self.m):
                    cur[i] = acts[i] if cur[i] is None else cur[i].compose(acts[i])
            else:
                i = self.factor_index.get(x.factor)
                if i is None:
                    raise InvalidLetter(f"unknown factor {x.factor}")
                if check and not self.factors[i].in_unit_ball(x.value):
                    raise InvalidLetter(f"letter {x} lies outside the unit ball")
                v = x.value if cur[i] is None else cur[i].apply(x.value)
                comp = comps[i]
                for k in range(len(v)):
                    comp[k] = comp[k] + v[k]
        return Element(tuple(tuple(c) for c in comps), tuple(z))

    def multiply(self, e1: Element, e2: Element) -> Element:
        comps = []
        for i, f in enumerate(self.factors):
            shifted = self.action_of_vector(e1.a_vec, i).apply(e2.components[i])
            comps.append(tuple(a + b for a, b in zip(e1.components[i], shifted)))
        return Element(tuple(comps), tuple(a + b for a, b in zip(e1.a_vec, e2.a_vec)))

    def is_identity(self, e: Element) -> bool:
        return e.is_identity()

    def retract_to_A(self, w: Iterable[Letter]) -> Word:
        return tuple(x for x in w if type(x) is Gen)

    def format_element(self, e: Element) -> str:
        parts = []
        for f, c in zip(self.factors, e.components):
            parts.append(f"{f.id}=(" + ", ".join(f.format_scalar(x) for x in c) + ")")
        parts.append("A=(" + ", ".join(str(k) for k in e.a_vec) + ")")
        return " ".join(parts)

    # -- dilations, efficient forms -------------------------------------------

    def designated_dilator(self, i: int) -> Optional[Gen]:
        """Basis letter with the largest dilation ratio on factor ``i``."""
        best, best_r = None, None
        for g in self.basis:
            for sgn in (1, -1):
                x = Gen(g, sgn)
                if self.classify_letter(x, i) != DILATES:
                    continue
                r = self.ratio(x, i)
                if best is None or r > best_r:
                    best, best_r = x, r
        return best

    def pull_back(self, i: int, value: tuple) -> Tuple[int, tuple]:
        """Least ``j >= 0`` with ``d^-j . value`` in the unit ball (``d`` the
        designated dilator of factor ``i``), and that pulled-back value."""
        f = self.factors[i]
        d = self.designated_dilator(i)
        dinv = Gen(d.name, -d.sign)
        if f.is_zero(value):
            return 0, value
        if f.archimedean:
            j = 0
            while not f.in_unit_ball(value):
                value = self.act(dinv, i, value)
                j += 1
            return j, value
        r = self.ratio(d, i)
        v = f.valuation(value)
        j = max(0, -(v // r)) if v < 0 else 0
        act = self.action_of_vector(tuple(-j * c for c in self.zvec(d)), i)
        value = act.apply(value)
        assert f.in_unit_ball(value)
        return j, value

    def log_size(self, i: int, value: tuple) -> int:
        return self.pull_back(i, value)[0]

    def size(self, e: Element) -> int:
        return max([1, sum(abs(k) for k in e.a_vec)] +
                   [self.log_size(i, c) for i, c in enumerate(e.components)])

    def efficient_form(self, e: Element) -> Word:
        """A word ``(prod_i t_i v_i t_i^-1) t`` representing ``e``."""
        out: List[Letter] = []
        for i, f in enumerate(self.factors):
            c = e.components[i]
            if f.is_zero(c):
                continue
            j, v = self.pull_back(i, c)
            d = self.designated_dilator(i)
            dinv = Gen(d.name, -d.sign)
            out.extend([d] * j)
            out.append(Vec(f.id, v))
            out.extend([dinv] * j)
        out.extend(self.spell(e.a_vec))
        return tuple(out)

    def dilation_exponent(self, i: int) -> int:
        """``ceil(log mu_i / log c_i)``: ``mu_i`` bounds per-letter growth of
        component ``i`` and ``c_i`` is the designated dilation ratio."""
        f = self.factors[i]
        d = self.designated_dilator(i)
        cr = self.ratio(d, i)
        ratios = [self.ratio(x, i) for x in self.T if not self.extended.get(x.name)]
        if f.archimedean:
            mu = max(ratios + [Fraction(2)])
            k, acc = 1, cr
            while acc < mu:
                acc = acc * cr
                k += 1
            return k
        mu = max(ratios + [0])
        return max(1, -(-mu // cr))

    @property
    def efficiency_constant(self) -> int:
        """``C'`` with ``|efficient_form(evaluate(w))| <= C' |w|`` for all ``w != e``."""
        return 2 * sum(self.dilation_exponent(i) for i in range(self.m)) + 1 + self.m

    def uniform_constants(self) -> Dict[str, float]:
        """The uniform constants ``c = min_i max_t |lambda_i(t)|`` and
        ``C = max(2, max |lambda_i(t)|)`` as floats, with the cruder length
        factor ``2 m ceil(log C / log c) + 1`` they give for efficient forms
        (``efficiency_constant`` is the sharper per-factor version)."""
        basis_T = [Gen(g, s) for g in self.basis for s in (1, -1)]

        def fl(x, i):
            f = self.factors[i]
            return float(x) if f.archimedean else float(f.prime) ** x

        per = [max(fl(self.ratio(t, i), i) for t in basis_T) for i in range(self.m)]
        c = min(per)
        C = max([2.0] + per)
        K = 2 * self.m * math.ceil(math.log(C) / math.log(c)) + 1
        return {"c": c, "C": C, "length_factor": K}

    # -- contractions -----------------------------------------------------------

    def contracts_all(self, z: Sequence[int], idx: Iterable[int]) -> bool:
        return all(self.classify_vector(z, i) == CONTRACTS for i in idx)

    def _vectors_by_l1(self, radius: int):
        for r in range(1, radius + 1):
            found = []
            for z in itertools.product(range(-r, r + 1), repeat=self.d):
                if sum(abs(c) for c in z) == r:
                    found.append(z)
            yield from sorted(found)

    def find_common_contraction_vector(self, i: int, j: int, radius: Optional[int] = None) -> Tuple[int, ...]:
        radius = self.search_radius if radius is None else radius
        for z in self._vectors_by_l1(radius):
            if self.contracts_all(z, {i, j}):
                return z
        fi, fj = self.factors[i].id, self.factors[j].id
        raise HypothesisError(f"no common contraction of {fi} and {fj} with |z|_1 <= {radius}")

    def find_common_contraction(self, i: int, j: int, radius: Optional[int] = None) -> Word:
        """Shortest A-word (by l1 norm of its exponent vector) contracting
        factors ``i`` and ``j``; spelled in basis letters."""
        return self.spell(self.find_common_contraction_vector(i, j, radius))

    def contraction_letter(self, i: int, j: int) -> Gen:
        """The common contraction of ``i`` and ``j`` as a single letter of T,
        adjoining a shortcut generator if it is not a basis letter."""
        key = (min(i, j), max(i, j))
        if key not in self._pair_cache:
            z = self.find_common_contraction_vector(*key)
            if sum(abs(c) for c in z) == 1:
                k = next(n for n, c in enumerate(z) if c)
                letter = Gen(self.basis[k], z[k])
            else:
                letter = Gen(self.add_extended(z), 1)
            self._pair_cache[key] = (letter,)
        return self._pair_cache[key][0]

    def prepare_contractions(self) -> None:
        """Adjoin every pairwise common contraction to T (raises
        :class:`HypothesisError` if one is missing)."""
        for i in range(self.m):
            for j in range(i, self.m):
                self.contraction_letter(i, j)

    def find_M(self, contractions: Optional[Dict[Tuple[int, int], Sequence[Letter]]] = None,
               letters: Optional[Sequence[Gen]] = None) -> int:
        """Least ``M >= 1`` such that ``s_ij^M t`` contracts factors ``i`` and
        ``j`` for every pair and every letter ``t`` of T.

        ``contractions`` restricts the check to the given pairs with the given
        A-words ``s_ij``; ``letters`` replaces T."""
        if contractions is None:
            self.prepare_contractions()
            contractions = {k: v for k, v in self._pair_cache.items()}
        letters = self.T if letters is None else tuple(letters)
        best = 1
        for (i, j), s in contractions.items():
            zs = self.a_vector(s)
            M = 1
            while not all(self.contracts_all(tuple(M * a + b for a, b in zip(zs, self.zvec(t))), {i, j})
                          for t in letters):
                M += 1
                if M > 10_000:
                    raise HypothesisError(f"{format_word(s)} does not dominate T on {self.factors[i].id}, {self.factors[j].id}")
            best = max(best, M)
        return best

    def contraction_table(self, radius: int = 2) -> List[Tuple[Word, Dict[str, List[str]]]]:
        """Exact classification of every A-word with ``|z|_1 <= radius``."""
        rows = []
        for z in self._vectors_by_l1(radius):
            row = {"contracts": [], "neutral": [], "dilates": []}
            for i, f in enumerate(self.factors):
                c = self.classify_vector(z, i)
                row[{CONTRACTS: "contracts", NEUTRAL: "neutral", DILATES: "dilates"}[c]].append(f.id)
            rows.append((self.spell(z), row))
        return rows

    def __repr__(self):
        return f"GroupModel({self.name!r})"


# --------------------------------------------------------------------------
# built-in models
# --------------------------------------------------------------------------

def prime_divisors(n: int) -> List[int]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(p: int) -> bool:
    return p >= 2 and prime_divisors(p) == [p]


LAMBDA_PLUS = QuadraticNumber(Fraction(3, 2), Fraction(1, 2))
LAMBDA_MINUS = QuadraticNumber(Fraction(3, 2), Fraction(-1, 2))
# row eigenvectors of B = [[2, 1], [1, 1]]: l B = lambda l
EIGENCOVECTOR_PLUS = (QuadraticNumber(1), QuadraticNumber(Fraction(-1, 2), Fraction(1, 2)))
EIGENCOVECTOR_MINUS = (QuadraticNumber(1), QuadraticNumber(Fraction(-1, 2), Fraction(-1, 2)))


def gamma(n: int) -> GroupModel:
    """Ambient group of ``Z[1/n]^2 x|_(A,B) Z^2`` with ``A = nI``, ``B = [[2,1],[1,1]]``:
    one 2-dimensional p-adic factor per prime ``p | n`` plus the two
    eigenlines ``Vp``, ``Vm`` of ``B`` in R^2."""
    if abs(n) < 2:
        raise ModelError("gamma(n) needs |n| >= 2")
    n_ = Fraction(n)
    factors = [Factor(f"P{p}", "padic", 2, p) for p in prime_divisors(n)]
    factors += [Factor("Vp", "real", 1, scalar="quadratic"), Factor("Vm", "real", 1, scalar="quadratic")]
    A = Action(((n_, Fraction(0)), (Fraction(0), n_)))
    B = Action(((Fraction(2), Fraction(1)), (Fraction(1), Fraction(1))))
    acts_a = [A] * (len(factors) - 2) + [Action(((QuadraticNumber(n),),))] * 2
    acts_b = [B] * (len(factors) - 2) + [Action(((LAMBDA_PLUS,),)), Action(((LAMBDA_MINUS,),))]
    return GroupModel(f"gamma {n}", ("a", "b"), factors, {"a": acts_a, "b": acts_b})


def bs_ambient(n: int) -> GroupModel:
    """Rank-one ambient group of BS(1,n): factors ``Q_p`` (``p | n``) and ``R``,
    ``a`` multiplying by ``n``."""
    if abs(n) < 2:
        raise ModelError("bs-ambient(n) needs |n| >= 2")
    factors = [Factor(f"P{p}", "padic", 1, p) for p in prime_divisors(n)] + [Factor("R", "real", 1)]
    acts = [Action(((Fraction(n),),))] * len(factors)
    return GroupModel(f"bs-ambient {n}", ("a",), factors, {"a": acts})


def rank_one(p: int) -> GroupModel:
    """``Q_p x| Z`` with the generator multiplying by ``p`` (rank one, one factor)."""
    if not _is_prime(p):
        raise ModelError(f"{p} is not prime")
    return GroupModel(f"rank1 {p}", ("a",), [Factor(f"P{p}", "padic", 1, p)],
                      {"a": [Action(((Fraction(p),),))]})


def lambda_model(p: int) -> GroupModel:
    """``F_p[X, 1/X, 1/(1+X)] x| Z^2`` read at the three places ``X = 0``,
    ``X = infinity`` and ``X = -1``; ``t`` acts by ``X`` and ``s`` by ``1+X``.
    Through the places this is the cocompact copy of Baumslag's group in
    ``SOL_5(F_p((u)))``."""
    if not _is_prime(p):
        raise ModelError(f"{p} is not prime")
    factors = [Factor("L0", "laurent", 1, p, "at0"), Factor("Linf", "laurent", 1, p, "atinf"),
               Factor("Lm1", "laurent", 1, p, "atm1")]
    X = LaurentLocal.monomial(p, 1, 0)
    Y = LaurentLocal.monomial(p, 0, 1)
    return GroupModel(f"lambda {p}", ("t", "s"), factors,
                      {"t": [Action(((X,),))] * 3, "s": [Action(((Y,),))] * 3})


def sol(d: int, p: int) -> GroupModel:
    """``F_p((u))^d x| Z^(d-1)``: generator ``g_k`` scales coordinate ``k`` by
    ``u`` and coordinate ``k+1`` by ``1/u``."""
    if d < 2:
        raise ModelError("sol needs d >= 2")
    if not _is_prime(p):
        raise ModelError(f"{p} is not prime")
    factors = [Factor(f"K{k + 1}", "laurent", 1, p, "at0") for k in range(d)]
    u = LaurentLocal.monomial(p, 1, 0)
    one = LaurentLocal.one(p)
    acts = {}
    for k in range(d - 1):
        row = []
        for i in range(d):
            c = u if i == k else (u.inverse() if i == k + 1 else one)
            row.append(Action(((c,),)))
        acts[f"g{k + 1}"] = row
    return GroupModel(f"sol {d} {p}", tuple(acts), factors, acts)


def builtin_models() -> Dict[str, GroupModel]:
    return {
        "gamma 2": gamma(2),
        "gamma 6": gamma(6),
        "bs-ambient 2": bs_ambient(2),
        "lambda 2": lambda_model(2),
        "sol 3 2": sol(3, 2),
        "rank1 2": rank_one(2),
    }


# --------------------------------------------------------------------------
# model specification files
# --------------------------------------------------------------------------

def model_from_shortcut(text: str) -> GroupModel:
    parts = text.split()
    if not parts:
        raise ModelError("empty model name")
    kind, args = parts[0].lower(), parts[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ModelError(f"bad model arguments in {text!r}") from None
    table = {"gamma": (gamma, 1), "lambda": (lambda_model, 1), "sol": (sol, 2),
             "bs-ambient": (bs_ambient, 1), "rank1": (rank_one, 1)}
    if kind not in table:
        raise ModelError(f"unknown model {kind!r}")
    fn, arity = table[kind]
    if len(nums) != arity:
        raise ModelError(f"model {kind} takes {arity} integer argument(s)")
    return fn(*nums)


def parse_model(text: str) -> GroupModel:
    """Read a model description.

    Either a single shortcut line (``gamma 2``, ``lambda 3``, ``sol 3 2``,
    ``bs-ambient 2``, ``rank1 2``, optionally prefixed by ``model:``) or::

        name: mine
        generators: a b
        factor: P2 padic 2 2        # id kind prime dim
        factor: Vp real quadratic   # id kind scalar
        factor: L0 laurent 2 at0    # id kind prime place
        action: a P2 = 2 0 ; 0 2    # rows separated by ';'
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) == 1 and ":" not in lines[0]:
        return model_from_shortcut(lines[0])
    if len(lines) == 1 and lines[0].lower().startswith("model:"):
        return model_from_shortcut(lines[0].split(":", 1)[1])
    name, gens, factors, raw_actions = "custom", None, [], []
    for line in lines:
        if ":" not in line:
            raise ModelError(f"expected 'key: value' in {line!r}")
        key, val = (s.strip() for s in line.split(":", 1))
        key = key.lower()
        if key == "name":
            name = val
        elif key == "model":
            return model_from_shortcut(val)
        elif key in ("generators", "rank"):
            if key == "generators":
                gens = val.split()
        elif key == "factor":
            factors.append(_parse_factor(val))
        elif key == "action":
            raw_actions.append(val)
        else:
            raise ModelError(f"unknown key {key!r}")
    if not gens:
        raise ModelError("model needs 'generators:'")
    fidx = {f.id: f for f in factors}
    acts: Dict[str, List[Optional[Action]]] = {g: [None] * len(factors) for g in gens}
    for val in raw_actions:
        head, _, body = val.partition("=")
        hp = head.split()
        if len(hp) != 2 or hp[0] not in acts or hp[1] not in fidx:
            raise ModelError(f"bad action line {val!r}")
        f = fidx[hp[1]]
        rows = [r.split() for r in body.split(";")]
        m = tuple(tuple(f.parse_scalar(x) for x in r) for r in rows)
        acts[hp[0]][[x.id for x in factors].index(f.id)] = Action(m)
    for g, row in acts.items():
        for f, a in zip(factors, row):
            if a is None:
                raise ModelError(f"missing action of {g} on {f.id}")
    return GroupModel(name, gens, factors, acts)


def _parse_factor(val: str) -> Factor:
    p = val.split()
    if len(p) < 2:
        raise ModelError(f"bad factor line {val!r}")
    fid, kind = p[0], p[1]
    if kind == "padic":
        return Factor(fid, "padic", int(p[3]) if len(p) > 3 else 1, int(p[2]))
    if kind == "real":
        return Factor(fid, "real", 1, scalar=p[2] if len(p) > 2 else "rational")
    if kind == "laurent":
        return Factor(fid, "laurent", 1, int(p[2]), p[3])
    raise ModelError(f"unknown factor kind {kind!r}")

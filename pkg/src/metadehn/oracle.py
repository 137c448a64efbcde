"""Ground truth at desk scale: breadth-first minimal areas for finite
presentations, witness words, and seeded random null-homotopic words."""
from __future__ import annotations

import random
import re
from collections import deque
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .exact import LaurentLocal, QuadraticNumber
from .model import GroupModel
from .words import Gen, Letter, Vec, Word, commutator, cyclic_reduce, free_reduce, inverse, parse_word, power


class FinitePresentation:
    """``<gens | rels>`` over plain generators.  Relators are stored freely
    and cyclically reduced."""

    def __init__(self, gens: Sequence[str], rels: Sequence[Word]):
        self.gens = tuple(gens)
        known = set(self.gens)
        cleaned = []
        for r in rels:
            for x in r:
                if type(x) is not Gen or x.name not in known:
                    raise ValueError(f"relator letter {x} is not a generator")
            r = cyclic_reduce(r)
            if r:
                cleaned.append(r)
        self.rels = tuple(cleaned)
        self._index = {g: k for k, g in enumerate(self.gens)}

    @property
    def longest_relator(self) -> int:
        return max((len(r) for r in self.rels), default=0)

    # letters are encoded as small ints: 2k for g_k, 2k+1 for its inverse
    def encode(self, w: Sequence[Letter]) -> Tuple[int, ...]:
        out = []
        for x in w:
            if type(x) is not Gen or x.name not in self._index:
                raise ValueError(f"letter {x} is not a generator of the presentation")
            out.append(2 * self._index[x.name] + (0 if x.sign > 0 else 1))
        return tuple(out)

    def decode(self, w: Sequence[int]) -> Word:
        return tuple(Gen(self.gens[c >> 1], -1 if c & 1 else 1) for c in w)

    def insertions(self) -> List[Tuple[int, ...]]:
        """Distinct cyclic conjugates of every relator and its inverse."""
        seen = set()
        out = []
        for r in self.rels:
            for rr in (self.encode(r), self.encode(inverse(r))):
                for i in range(len(rr)):
                    c = rr[i:] + rr[:i]
                    if c not in seen:
                        seen.add(c)
                        out.append(c)
        return out


def parse_presentation(text: str) -> FinitePresentation:
    """``gens: a b`` and ``rels: [a,b] t x t^-1 x^-2 ; ...``.

    Relators are separated by ``;`` (or given one per ``rels:`` line);
    ``[u,v]`` is the commutator ``u v u^-1 v^-1``."""
    gens: List[str] = []
    rels: List[Word] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, val = line.partition(":")
        key = key.strip().lower()
        if key == "gens":
            gens.extend(val.split())
        elif key == "rels":
            for chunk in val.split(";"):
                if chunk.strip():
                    rels.append(_parse_relator(chunk))
        else:
            raise ValueError(f"unknown key {key!r}")
    if not gens:
        raise ValueError("presentation needs 'gens:'")
    return FinitePresentation(gens, rels)


_COMM = re.compile(r"\[([^\[\],]+),([^\[\],]+)\]")


def _parse_relator(text: str) -> Word:
    out: List[Letter] = []
    pos = 0
    for m in _COMM.finditer(text):
        out.extend(parse_word(text[pos:m.start()]))
        out.extend(commutator(parse_word(m.group(1)), parse_word(m.group(2))))
        pos = m.end()
    out.extend(parse_word(text[pos:]))
    return tuple(out)


class OracleResult(NamedTuple):
    area: Optional[int]
    status: str  # "found", "exhausted" (no filling within the length cap), "budget"
    nodes: int


def _reduce_into(stack: List[int], word) -> None:
    for c in word:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)


def _canonical_cyclic(word: Sequence[int]) -> Tuple[int, ...]:
    """Least rotation of the cyclic reduction of ``word`` or of its inverse."""
    w = list(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == w[j] ^ 1:
        i += 1
        j -= 1
    w = w[i:j + 1]
    if not w:
        return ()
    inv = [c ^ 1 for c in reversed(w)]
    best = None
    for cand in (w, inv):
        doubled = cand + cand
        for k in range(len(cand)):
            r = tuple(doubled[k:k + len(cand)])
            if best is None or r < best:
                best = r
    return best


def bfs_search(p: FinitePresentation, w: Sequence[Letter], max_area: int = 64,
               max_len: Optional[int] = None, max_nodes: int = 2_000_000,
               cyclic: bool = False) -> OracleResult:
    """Least number of relator insertions (each followed by free reduction)
    taking ``w`` to the empty word, by breadth-first search over freely
    reduced words of length at most ``max_len``.

    With ``cyclic=True`` states are identified up to cyclic reduction,
    rotation and inversion, none of which changes the area; only insertions
    that cancel at least one letter are tried, since a reduced disc diagram
    always has a cell sharing an edge with its boundary."""
    canon = _canonical_cyclic if cyclic else tuple
    start = canon(_free(p.encode(w)))
    if max_len is None:
        max_len = len(start) + 2 * p.longest_relator
    if not start:
        return OracleResult(0, "found", 1)
    ins = p.insertions()
    seen = {start}
    frontier = [start]
    nodes = 0
    for depth in range(1, max_area + 1):
        nxt = []
        for word in frontier:
            nodes += 1
            if nodes > max_nodes:
                return OracleResult(None, "budget", nodes)
            L = len(word)
            for pos in range(L + 1 if not cyclic else L):
                left = list(word[:pos])
                right = word[pos:]
                for r in ins:
                    if cyclic and word[pos - 1] != r[0] ^ 1 and right[0] != r[-1] ^ 1:
                        continue
                    st = left[:]
                    _reduce_into(st, r)
                    _reduce_into(st, right)
                    if len(st) > max_len:
                        continue
                    t = canon(st)
                    if not t:
                        return OracleResult(depth, "found", nodes)
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
        if not frontier:
            return OracleResult(None, "exhausted", nodes)
    return OracleResult(None, "budget", nodes)


def _free(w):
    st: List[int] = []
    _reduce_into(st, w)
    return st


def bfs_min_area(p: FinitePresentation, w: Sequence[Letter], max_area: int = 64,
                 max_len: Optional[int] = None, max_nodes: int = 2_000_000) -> Optional[int]:
    """Minimal area, or ``None`` when the search gives up (see
    :func:`bfs_search` for the reason)."""
    return bfs_search(p, w, max_area, max_len, max_nodes).area


def corridor_area(w: Sequence[Letter], n: int = 2, t: str = "t", x: str = "x") -> Optional[int]:
    """Exact area of ``w`` in ``<t, x | t x t^-1 = x^n>``, or ``None`` if ``w``
    is not null-homotopic.

    Every cell has exactly two t-edges, so a diagram is a union of t-corridors
    (annuli would enclose a null-homotopic ``x^m`` with ``m != 0``).  A
    corridor joining boundary letters ``t ... t^-1`` around a subword equal to
    ``x^m`` has ``|m|`` cells, and the corridors form a non-crossing matching;
    the minimum over matchings is an interval dynamic programme."""
    w = tuple(w)
    for c in w:
        if type(c) is not Gen or c.name not in (t, x):
            raise ValueError(f"letter {c} is not t or x")
    # prefix elements (value, height) of Z[1/n] x| Z
    pref = [(Fraction(0), 0)]
    for c in w:
        a, k = pref[-1]
        if c.name == t:
            pref.append((a, k + c.sign))
        else:
            pref.append((a + Fraction(n) ** k * c.sign, k))
    if pref[-1] != (Fraction(0), 0):
        return None

    def arc(i, j):
        (a, k), (b, l) = pref[i], pref[j]
        return (b - a) / Fraction(n) ** k, l - k

    L = len(w)
    INF = float("inf")
    f = [[0] * (L + 1) for _ in range(L + 1)]
    for length in range(1, L + 1):
        for i in range(L - length + 1):
            j = i + length
            c = w[i]
            if c.name != t:
                f[i][j] = f[i + 1][j]
                continue
            best = INF
            for k in range(i + 1, j):
                d = w[k]
                if d.name != t or d.sign != -c.sign:
                    continue
                val, h = arc(i + 1, k)
                if h or val.denominator != 1:
                    continue
                m = int(val)
                if c.sign < 0:
                    if m % n:
                        continue
                    m //= n
                inner = f[i + 1][k]
                if inner == INF:
                    continue
                best = min(best, abs(m) + inner + f[k + 1][j])
            f[i][j] = best
    return None if f[0][L] == INF else int(f[0][L])


# --------------------------------------------------------------------------
# standard presentations and witness words
# --------------------------------------------------------------------------

def z2_presentation() -> FinitePresentation:
    a, b = Gen("a"), Gen("b")
    return FinitePresentation(("a", "b"), [commutator((a,), (b,))])


def bs_presentation(n: int = 2) -> FinitePresentation:
    """``<t, x | t x t^-1 = x^n>``."""
    t, x = Gen("t"), Gen("x")
    return FinitePresentation(("t", "x"), [(t, x, Gen("t", -1)) + power((x,), -n)])


def lambda_presentation(p: int) -> FinitePresentation:
    """``<a, s, t | a^p, [s,t], [a^t, a], a^s = a^t a>`` with ``a^g = g a g^-1``."""
    a, s, t = Gen("a"), Gen("s"), Gen("t")
    ai, si, ti = Gen("a", -1), Gen("s", -1), Gen("t", -1)
    at = (t, a, ti)
    rels = [
        power((a,), p),
        commutator((s,), (t,)),
        commutator(at, (a,)),
        (s, a, si) + inverse(at + (a,)),
    ]
    return FinitePresentation(("a", "s", "t"), rels)


def bs_witness_word(k: int) -> Word:
    """``[t^k x t^-k, x]`` in BS(1,2)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    conj = power((Gen("t"),), k) + (Gen("x"),) + power((Gen("t"),), -k)
    return commutator(conj, (Gen("x"),))


# --------------------------------------------------------------------------
# random words in a model
# --------------------------------------------------------------------------

def random_unit_letter(model: GroupModel, rng: random.Random, factor: Optional[int] = None) -> Vec:
    """A random nonzero letter in the unit ball of a factor."""
    i = rng.randrange(model.m) if factor is None else factor
    f = model.factors[i]
    while True:
        if f.kind == "padic":
            vals = []
            for _ in range(f.dim):
                num = rng.randint(-4, 4) * f.prime ** rng.randint(0, 2)
                den = rng.choice([1, 1, 1, 3, 5, 7]) if f.prime not in (3, 5, 7) else 1
                vals.append(Fraction(num, den))
            value = tuple(vals)
        elif f.kind == "real":
            den = rng.choice([1, 2, 3, 4, 5])
            a = Fraction(rng.randint(-den, den), den)
            if f.scalar == "quadratic" and rng.random() < 0.3:
                b = Fraction(rng.randint(-1, 1), rng.choice([4, 5, 8]))
                x = QuadraticNumber(a, b)
            else:
                x = QuadraticNumber(a) if f.scalar == "quadratic" else a
            value = (x,)
        else:
            value = (_random_laurent(f.prime, f.place, rng),)
        if any(value) and f.in_unit_ball(value):
            return Vec(f.id, value)


def _random_laurent(p: int, place: str, rng: random.Random) -> LaurentLocal:
    if place == "at0":
        e0, e1 = -rng.randint(0, 2), rng.randint(0, 2)
        deg = rng.randint(0, 3)
    elif place == "atinf":
        e0, e1 = rng.randint(0, 2), rng.randint(0, 2)
        deg = rng.randint(0, e0 + e1)
    else:
        e0, e1 = rng.randint(-1, 2), -rng.randint(0, 2)
        deg = rng.randint(0, 3)
    num = [rng.randrange(p) for _ in range(deg + 1)]
    return LaurentLocal(p, num, e0, e1)


def random_word(model: GroupModel, length: int, rng: random.Random, factor_rate: float = 0.35) -> Word:
    """Random word over the basis letters and unit-ball factor letters."""
    out: List[Letter] = []
    for _ in range(length):
        if rng.random() < factor_rate:
            out.append(random_unit_letter(model, rng))
        else:
            out.append(Gen(rng.choice(model.basis), rng.choice((1, -1))))
    return tuple(out)


def random_null_word(model: GroupModel, target_len: int, seed: int, family: str = "chord") -> Word:
    """Deterministic null-homotopic word of length at least ``target_len``.

    ``family="chord"``: ``w . efficient_form(evaluate(w))^-1`` for a random
    ``w`` of length ``target_len``.  ``family="commutator"``: ``[u v u^-1,
    u' v' u'^-1]`` with random A-words ``u, u'`` (distinct factors) padded
    to the target length by a chord word."""
    if target_len < 2:
        raise ValueError("target_len must be at least 2")
    rng = random.Random(seed)
    if family == "chord":
        w = random_word(model, target_len, rng)
        return w + inverse(model.efficient_form(model.evaluate(w)))
    if family == "commutator":
        if model.m < 2:
            raise ValueError("commutator family needs two factors")
        i, j = rng.sample(range(model.m), 2)
        half = max(1, (target_len - 4) // 4)
        u = tuple(Gen(rng.choice(model.basis), rng.choice((1, -1))) for _ in range(half))
        u2 = tuple(Gen(rng.choice(model.basis), rng.choice((1, -1))) for _ in range(half))
        X = u + (random_unit_letter(model, rng, i),) + inverse(u)
        Y = u2 + (random_unit_letter(model, rng, j),) + inverse(u2)
        return commutator(X, Y)
    raise ValueError(f"unknown family {family!r}")

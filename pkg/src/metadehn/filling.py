"""Certified fillings of null-homotopic words.

A filling of ``w`` is a list of triples ``(conjugator, relator, sign)`` whose
product ``prod g r^sign g^-1`` is freely equal to ``w``; its length is the
area.  Internally a filling is a tree so that shared conjugator prefixes are
stored (and verified) once; :meth:`Filling.triples` expands it.

The engine works by rewriting: a current word ``W`` is transformed step by
step into the empty word, and each step ``x y z -> x y' z`` contributes a
sub-filling of ``y y'^-1`` conjugated by ``x``.  Concatenating the steps
certifies ``W_0 W_final^-1``.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, TextIO, Tuple

from .exact import DomainError
from .model import DILATES, Element, GroupModel, InvalidLetter
from .words import (
    Gen,
    Letter,
    Vec,
    Word,
    format_word,
    free_reduce,
    inverse,
    inverse_letter,
)


class NotNullHomotopic(ValueError):
    def __init__(self, element: Element, text: str = ""):
        super().__init__(f"word is not null-homotopic: {text or element}")
        self.element = element


class ParameterError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


# --------------------------------------------------------------------------
# relators
# --------------------------------------------------------------------------

class Commutator(NamedTuple):
    x: Gen
    y: Gen
    kind = "commutator"

    def word(self) -> Word:
        return (self.x, self.y, inverse_letter(self.x), inverse_letter(self.y))

    def args(self) -> Word:
        return (self.x, self.y)


class Definition(NamedTuple):
    ext: Gen
    spelling: Word
    kind = "definition"

    def word(self) -> Word:
        return tuple(self.spelling) + (inverse_letter(self.ext),)

    def args(self) -> Word:
        return (self.ext,) + tuple(self.spelling)


class Transport(NamedTuple):
    t: Gen
    s: Vec
    s2: Vec
    kind = "transport"

    def word(self) -> Word:
        return (self.t, self.s, inverse_letter(self.t), inverse_letter(self.s2))

    def args(self) -> Word:
        return (self.t, self.s, self.s2)


class CommuteCross(NamedTuple):
    s: Vec
    s2: Vec
    kind = "commute"

    def word(self) -> Word:
        return (self.s, self.s2, inverse_letter(self.s), inverse_letter(self.s2))

    def args(self) -> Word:
        return (self.s, self.s2)


class Combine(NamedTuple):
    s: Vec
    s2: Vec
    s3: Vec
    kind = "combine"

    def word(self) -> Word:
        return (self.s, self.s2, inverse_letter(self.s3))

    def args(self) -> Word:
        return (self.s, self.s2, self.s3)


class UnitLetter(NamedTuple):
    z: Vec
    kind = "unit"

    def word(self) -> Word:
        return (self.z,)

    def args(self) -> Word:
        return (self.z,)


RELATOR_KINDS = {c.kind: c for c in (Commutator, Definition, Transport, CommuteCross, Combine, UnitLetter)}
STAGES = ("abelian", "transport", "swap", "combine")
STAGE_OF = {"commutator": 0, "definition": 0, "transport": 1, "commute": 2, "combine": 3, "unit": 3}


def relator_from_args(kind: str, args: Sequence[Letter]):
    if kind not in RELATOR_KINDS:
        raise ValueError(f"unknown relator kind {kind!r}")
    if kind == "definition":
        return Definition(args[0], tuple(args[1:]))
    cls = RELATOR_KINDS[kind]
    if len(args) != len(cls._fields):
        raise ValueError(f"relator {kind} takes {len(cls._fields)} letters")
    return cls(*args)


def validate_relator(r, model: GroupModel) -> bool:
    """True iff ``r`` is a genuine relation of the model with unit-ball letters."""
    try:
        for x in r.args():
            model.check_letter(x)
    except InvalidLetter:
        return False
    kind = r.kind
    if kind == "commutator":
        return type(r.x) is Gen and type(r.y) is Gen
    if kind == "definition":
        if type(r.ext) is not Gen or r.ext.sign != 1 or r.ext.name not in model.extended:
            return False
        if any(type(x) is not Gen or x.name not in model.basis for x in r.spelling):
            return False
        return model.a_vector(r.spelling) == model.extended[r.ext.name]
    if kind == "transport":
        if type(r.t) is not Gen or type(r.s) is not Vec or type(r.s2) is not Vec:
            return False
        if r.s.factor != r.s2.factor:
            return False
        i = model.factor_index[r.s.factor]
        return model.act(r.t, i, r.s.value) == tuple(r.s2.value)
    if kind == "commute":
        return type(r.s) is Vec and type(r.s2) is Vec and r.s.factor != r.s2.factor
    if kind == "combine":
        if not all(type(x) is Vec for x in r.args()):
            return False
        if not (r.s.factor == r.s2.factor == r.s3.factor):
            return False
        return tuple(a + b for a, b in zip(r.s.value, r.s2.value)) == tuple(r.s3.value)
    if kind == "unit":
        return type(r.z) is Vec and not any(r.z.value)
    return False


# --------------------------------------------------------------------------
# filling trees
# --------------------------------------------------------------------------
# node shapes:
#   ("L", relator, sign)             one relator
#   ("C", prefix, child)             child conjugated by prefix
#   ("S", children)                  product in order
#   ("I", child)                     inverse product
#   ("D", prefix, xs, relators)      ladder: relator j conjugated by prefix + xs[:j],
#                                    taken for j = len(xs)-1 down to 0

_ZERO = (0, 0, 0, 0)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


class Filling:
    __slots__ = ("node", "area", "stages")

    def __init__(self, node, area: int, stages: Tuple[int, int, int, int]):
        self.node = node
        self.area = area
        self.stages = stages

    @staticmethod
    def empty() -> "Filling":
        return Filling(("S", ()), 0, _ZERO)

    @staticmethod
    def leaf(rel, sign: int = 1) -> "Filling":
        st = [0, 0, 0, 0]
        st[STAGE_OF[rel.kind]] = 1
        return Filling(("L", rel, sign), 1, tuple(st))

    @staticmethod
    def ladder(prefix: Word, xs: Word, rels: Sequence) -> "Filling":
        if not xs:
            return Filling.empty()
        st = [0, 0, 0, 0]
        for r in rels:
            st[STAGE_OF[r.kind]] += 1
        return Filling(("D", tuple(prefix), tuple(xs), tuple(rels)), len(rels), tuple(st))

    @staticmethod
    def seq(parts: Sequence["Filling"]) -> "Filling":
        parts = [p for p in parts if p.area]
        if not parts:
            return Filling.empty()
        if len(parts) == 1:
            return parts[0]
        st, area = _ZERO, 0
        for p in parts:
            st = _add(st, p.stages)
            area += p.area
        return Filling(("S", tuple(p.node for p in parts)), area, st)

    def conj(self, prefix: Sequence[Letter]) -> "Filling":
        if not prefix or not self.area:
            return self
        return Filling(("C", tuple(prefix), self.node), self.area, self.stages)

    def inverse(self) -> "Filling":
        if not self.area:
            return self
        if self.node[0] == "I":
            return Filling(self.node[1], self.area, self.stages)
        return Filling(("I", self.node), self.area, self.stages)

    def __len__(self):
        return self.area

    @property
    def stage_areas(self) -> Dict[str, int]:
        return dict(zip(STAGES, self.stages))

    def triples(self) -> Iterator[Tuple[Word, object, int]]:
        """Flat ``(conjugator, relator, sign)`` list in product order."""
        todo = [(self.node, (), False)]
        while todo:
            node, pre, inv = todo.pop()
            k = node[0]
            if k == "L":
                yield pre, node[1], (-node[2] if inv else node[2])
            elif k == "C":
                todo.append((node[2], pre + node[1], inv))
            elif k == "S":
                kids = node[1] if inv else node[1][::-1]
                for c in kids:
                    todo.append((c, pre, inv))
            elif k == "I":
                todo.append((node[1], pre, not inv))
            else:
                _, prefix, xs, rels = node
                base = pre + prefix
                order = range(len(xs)) if inv else range(len(xs) - 1, -1, -1)
                for j in order:
                    yield base + xs[:j], rels[j], (-1 if inv else 1)

    def relators(self, distinct: bool = False) -> Iterator:
        """Every relator instance, order unspecified.  With ``distinct`` shared
        subtrees are walked once and repeated relators are yielded once."""
        todo = [self.node]
        seen_nodes: set = set()
        seen: set = set()
        while todo:
            node = todo.pop()
            if distinct:
                if id(node) in seen_nodes:
                    continue
                seen_nodes.add(id(node))
                if node[0] == "L":
                    if node[1] in seen:
                        continue
                    seen.add(node[1])
                elif node[0] == "D":
                    for r in node[3]:
                        if r not in seen:
                            seen.add(r)
                            yield r
                    continue
            k = node[0]
            if k == "L":
                yield node[1]
            elif k == "C":
                todo.append(node[2])
            elif k == "S":
                todo.extend(node[1])
            elif k == "I":
                todo.append(node[1])
            else:
                yield from node[3]

    @staticmethod
    def from_triples(triples: Sequence[Tuple[Word, object, int]]) -> "Filling":
        return Filling.seq([Filling.leaf(r, s).conj(c) for c, r, s in triples])


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------

def _push(stack: list, word: Sequence[Letter]) -> None:
    for x in word:
        if stack:
            y = stack[-1]
            if type(x) is Gen:
                if type(y) is Gen and y.sign == -x.sign and y.name == x.name:
                    stack.pop()
                    continue
            elif type(y) is Vec and y.factor == x.factor and all(a == -b for a, b in zip(x.value, y.value)):
                stack.pop()
                continue
        stack.append(x)


def _emit(root, stack: list) -> None:
    """Push the product of a filling tree into a free-reduction stack.

    Conjugator prefixes are pushed once per node, and consecutive ladder
    conjugators only push their difference; both are exactly the
    cancellations free reduction performs on the expanded product."""
    todo: list = [(root, False)]
    while todo:
        node, inv = todo.pop()
        if node is None:
            _push(stack, inv)
            continue
        k = node[0]
        if k == "L":
            w = node[1].word()
            _push(stack, inverse(w) if (node[2] < 0) != inv else w)
        elif k == "C":
            _push(stack, node[1])
            todo.append((None, inverse(node[1])))
            todo.append((node[2], inv))
        elif k == "S":
            kids = node[1][::-1] if inv else node[1]
            for c in reversed(kids):
                todo.append((c, inv))
        elif k == "I":
            todo.append((node[1], not inv))
        else:
            _, prefix, xs, rels = node
            n = len(xs)
            _push(stack, prefix)
            if not inv:
                _push(stack, xs[:n - 1])
                for j in range(n - 1, -1, -1):
                    _push(stack, rels[j].word())
                    if j:
                        _push(stack, (inverse_letter(xs[j - 1]),))
            else:
                for j in range(n):
                    _push(stack, inverse(rels[j].word()))
                    if j < n - 1:
                        _push(stack, (xs[j],))
                _push(stack, inverse(xs[:n - 1]))
            _push(stack, inverse(prefix))


def filling_product(f: Filling) -> Word:
    """Free reduction of the product of the filling."""
    stack: list = []
    _emit(f.node, stack)
    return tuple(stack)


def verify_filling(w: Sequence[Letter], f: Filling, model: Optional[GroupModel] = None) -> bool:
    """True iff the product of ``f`` freely equals ``w`` (and, when a model
    is given, every relator instance is valid in it)."""
    stack: list = []
    _push(stack, inverse(tuple(w)))
    _emit(f.node, stack)
    if stack:
        return False
    if model is not None:
        return all(validate_relator(r, model) for r in f.relators(distinct=True))
    return True


def verify_filling_flat(w: Sequence[Letter], f: Filling) -> bool:
    """Slow reference check: expand every triple in full."""
    stack: list = []
    _push(stack, inverse(tuple(w)))
    for c, r, s in f.triples():
        _push(stack, c)
        _push(stack, r.word() if s > 0 else inverse(r.word()))
        _push(stack, inverse(c))
    return not stack


# --------------------------------------------------------------------------
# certificate files
# --------------------------------------------------------------------------

def write_certificate(f: Filling, out: TextIO) -> None:
    """One tab-separated record per relator: conjugator, kind, letters, sign, stage."""
    out.write(f"# area {f.area}\n")
    for c, r, s in f.triples():
        out.write(f"{format_word(c)}\t{r.kind}\t{format_word(r.args())}\t{s:+d}\t{STAGES[STAGE_OF[r.kind]]}\n")


def read_certificate(text: str, model: GroupModel) -> Filling:
    """Inverse of :func:`write_certificate`.  Shortcut letters are resolved
    against the model's own contractions; the definition relators in the
    certificate are still checked by :func:`verify_filling`."""
    model.prepare_contractions()
    triples = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 tab-separated fields")
        conj = model.parse_word(parts[0])
        args = model.parse_word(parts[2])
        rel = relator_from_args(parts[1], args)
        sign = int(parts[3])
        if sign not in (1, -1):
            raise ValueError(f"line {lineno}: sign must be +1 or -1")
        triples.append((conj, rel, sign))
    return Filling.from_triples(triples)


# --------------------------------------------------------------------------
# sorting A-words
# --------------------------------------------------------------------------

class SortedWord:
    """A word over T kept stably sorted by ``key``; adjacent inverse letters
    are cancelled as they meet."""

    def __init__(self, key: Callable[[Gen], object], letters: Sequence[Gen] = ()):
        self.key = key
        self.letters: List[Gen] = list(letters)

    def insert(self, y: Gen, prefix: Word = ()) -> Filling:
        """Append ``y`` and move it to its place.  Certifies
        ``prefix . old . y . (prefix . new)^-1``."""
        out = self.letters
        ky = self.key(y)
        q = len(out)
        cancel = False
        while q:
            x = out[q - 1]
            if x.name == y.name and x.sign == -y.sign:
                cancel = True
                break
            if self.key(x) > ky:
                q -= 1
            else:
                break
        xs = tuple(out[q:])
        f = Filling.ladder(prefix + tuple(out[:q]), xs, [Commutator(x, y) for x in xs])
        if cancel:
            del out[q - 1]
        else:
            out.insert(q, y)
        return f

    def word(self) -> Word:
        return tuple(self.letters)


def sort_word(w: Sequence[Gen], key: Callable[[Gen], object]) -> Tuple[Word, Filling]:
    """Stable sort with cancellation; returns ``t`` and a filling of ``w t^-1``."""
    sw = SortedWord(key)
    parts = [sw.insert(y) for y in w]
    return sw.word(), Filling.seq(parts)


def expand_definition(y: Gen, model: GroupModel) -> Tuple[Word, Filling]:
    """Replace a shortcut letter by its basis spelling: ``y -> y'`` with a
    filling of ``y y'^-1``."""
    spelling = model.definition(y.name)
    rel = Definition(Gen(y.name, 1), spelling)
    if y.sign > 0:
        return spelling, Filling.leaf(rel, -1)
    return inverse(spelling), Filling.leaf(rel, 1).conj((y,))


def _basis_key(model: GroupModel):
    order = {g: k for k, g in enumerate(model.basis + tuple(model.extended))}
    return lambda x: order[x.name]


def fill_abelian(w: Sequence[Letter], model: GroupModel) -> Filling:
    """Fill a null-homotopic word over T: expand shortcut letters, then
    insertion-sort by generator with free cancellation."""
    if any(type(x) is not Gen for x in w):
        raise ValueError("fill_abelian takes words over T only")
    z = model.a_vector(w)
    if any(z):
        raise NotNullHomotopic(model.evaluate(w), f"exponent vector {z}")
    sw = SortedWord(_basis_key(model))
    parts = []
    queue = deque(w)
    while queue:
        y = queue.popleft()
        if y.name in model.extended:
            spelled, f = expand_definition(y, model)
            parts.append(f.conj(sw.word()))
            queue.extendleft(reversed(spelled))
        else:
            parts.append(sw.insert(y))
    assert not sw.letters
    return Filling.seq(parts)


# --------------------------------------------------------------------------
# transport, swaps, merges
# --------------------------------------------------------------------------

def transport(s: Sequence[Gen], v: Vec, model: GroupModel) -> Tuple[Vec, Filling]:
    """Move the unit-ball letter ``v`` through the A-word ``s``.

    Returns ``w`` with value ``s.v`` and a filling of ``s v s^-1 w^-1``:
    ``s`` is sorted into ``t`` (dilating letters first), then ``v`` is pushed
    through ``t`` from the right with one Transport relator per letter."""
    model.check_letter(v)
    i = model.factor_index[v.factor]
    f = model.factors[i]
    s = free_reduce(s)
    final = model.act_word(s, i, v.value)
    if not f.in_unit_ball(final):
        raise PreconditionError(f"{format_word(s)} moves {v} outside the unit ball")
    if not s:
        return v, Filling.empty()
    t, G = sort_word(s, lambda x: 0 if model.classify_letter(x, i) == DILATES else 1)
    vals = [v.value]
    for x in reversed(t):
        nv = model.act(x, i, vals[-1])
        if not f.in_unit_ball(nv):
            raise PreconditionError(f"intermediate value of {v} leaves the unit ball")
        vals.append(nv)
    L = len(t)
    rels = [Transport(t[j], Vec(v.factor, vals[L - 1 - j]), Vec(v.factor, vals[L - j])) for j in range(L)]
    chain = Filling.ladder((), t, rels)
    back = G.inverse().conj(t + (v,) + inverse(s))
    return Vec(v.factor, vals[-1]), Filling.seq([G, back, chain])


class Term(NamedTuple):
    """The word ``conj . letter . conj^-1``."""
    conj: Word
    letter: Vec

    def word(self) -> Word:
        return tuple(self.conj) + (self.letter,) + inverse(self.conj)


def _contract_exponent(model: GroupModel, c: Gen, pairs, extra=None, limit: int = 100000) -> int:
    """Least ``e >= 0`` such that ``c^e`` maps each ``(i, value)`` into the unit
    ball (and, if given, ``extra(values)`` holds)."""
    vals = [v for _, v in pairs]
    e = 0
    while True:
        if all(model.factors[i].in_unit_ball(v) for (i, _), v in zip(pairs, vals)) and (extra is None or extra(vals)):
            return e
        if e >= limit:
            raise PreconditionError("contraction exponent search exhausted")
        vals = [model.act(c, i, v) for (i, _), v in zip(pairs, vals)]
        e += 1


def swap_commutator(X: Term, Y: Term, model: GroupModel) -> Filling:
    """Fill ``[X, Y]`` for terms in distinct factors: conjugate by a power of
    their common contraction, transport both letters in, commute, and reuse
    the transports for the inverse letters."""
    i = model.factor_index[X.letter.factor]
    j = model.factor_index[Y.letter.factor]
    if i == j:
        raise DomainError("same-factor terms do not commute by a relator; merge them instead")
    c = model.contraction_letter(i, j)
    xv = model.act_word(X.conj, i, X.letter.value)
    yv = model.act_word(Y.conj, j, Y.letter.value)
    e = _contract_exponent(model, c, [(i, xv), (j, yv)])
    s = (c,) * e
    si = inverse(s)
    x2, PX = transport(s + tuple(X.conj), X.letter, model)
    y2, PY = transport(s + tuple(Y.conj), Y.letter, model)
    xi, yi = inverse_letter(x2), inverse_letter(y2)
    return Filling.seq([
        PX.conj(si),
        PY.conj(si + (x2,)),
        PX.inverse().conj(si + (x2, y2, xi)),
        PY.inverse().conj(si + (x2, y2, xi, yi)),
        Filling.leaf(CommuteCross(x2, y2)).conj(si),
    ])


def merge_terms(X: Term, Y: Term, model: GroupModel) -> Tuple[Optional[Term], Filling]:
    """Combine two terms of one factor into a single term in efficient form
    (or nothing when they cancel).  Returns it with a filling of
    ``X Y result^-1``."""
    i = model.factor_index[X.letter.factor]
    if model.factor_index[Y.letter.factor] != i:
        raise DomainError("merge needs terms of the same factor")
    f = model.factors[i]
    c = model.contraction_letter(i, i)
    xv = model.act_word(X.conj, i, X.letter.value)
    yv = model.act_word(Y.conj, i, Y.letter.value)
    e = _contract_exponent(model, c, [(i, xv), (i, yv)],
                           lambda vs: f.in_unit_ball(tuple(a + b for a, b in zip(vs[0], vs[1]))))
    s = (c,) * e
    si = inverse(s)
    x2, PX = transport(s + tuple(X.conj), X.letter, model)
    y2, PY = transport(s + tuple(Y.conj), Y.letter, model)
    z2 = Vec(f.id, tuple(a + b for a, b in zip(x2.value, y2.value)))
    parts = [PX.conj(si), PY.conj(si + (x2,)), Filling.leaf(Combine(x2, y2, z2)).conj(si)]
    total = tuple(a + b for a, b in zip(xv, yv))
    if f.is_zero(total):
        parts.append(Filling.leaf(UnitLetter(z2)).conj(si))
        return None, Filling.seq(parts)
    jexp, zv = model.pull_back(i, total)
    K = (model.designated_dilator(i),) * jexp
    z = Vec(f.id, zv)
    z3, P = transport(s + K, z, model)
    assert z3 == z2
    parts.append(P.inverse().conj(si))
    return Term(K, z), Filling.seq(parts)


# --------------------------------------------------------------------------
# special words and the recursive driver
# --------------------------------------------------------------------------

def _require_null(w: Sequence[Letter], model: GroupModel) -> None:
    e = model.evaluate(w)
    if not e.is_identity():
        raise NotNullHomotopic(e, model.format_element(e))


def fill_special(w: Sequence[Letter], model: GroupModel, check: bool = True) -> Filling:
    """Fill a null-homotopic word by maintaining the normal form
    ``(prod_i X_i) tau``: one term ``X_i`` per factor and a sorted A-word
    ``tau``.  A factor letter ``v`` becomes the term ``(tau, v)``, is swapped
    past the terms of later factors and merged into its own factor's term."""
    w = tuple(w)
    if check:
        _require_null(w, model)
    # adjoin all shortcut letters now so their names do not depend on the word
    model.prepare_contractions()
    tau = SortedWord(_basis_key(model))
    acc: Dict[int, Term] = {}
    acc_words: Dict[int, Word] = {}
    parts: List[Filling] = []

    def prefix_before(k: int) -> Word:
        out: List[Letter] = []
        for idx in sorted(acc_words):
            if idx < k:
                out.extend(acc_words[idx])
        return tuple(out)

    queue = deque(w)
    while queue:
        y = queue.popleft()
        if type(y) is Gen:
            if y.name in model.extended:
                spelled, f = expand_definition(y, model)
                parts.append(f.conj(prefix_before(model.m) + tau.word()))
                queue.extendleft(reversed(spelled))
            else:
                parts.append(tau.insert(y, prefix_before(model.m)))
            continue
        model.check_letter(y)
        i = model.factor_index[y.factor]
        if not any(y.value):
            parts.append(Filling.leaf(UnitLetter(y)).conj(prefix_before(model.m) + tau.word()))
            continue
        new = Term(tau.word(), y)
        for k in sorted((k for k in acc if k > i), reverse=True):
            parts.append(swap_commutator(acc[k], new, model).conj(prefix_before(k)))
        if i in acc:
            merged, f = merge_terms(acc[i], new, model)
            parts.append(f.conj(prefix_before(i)))
            if merged is None:
                del acc[i], acc_words[i]
            else:
                acc[i], acc_words[i] = merged, merged.word()
        else:
            acc[i], acc_words[i] = new, new.word()
    if acc or tau.letters:
        raise NotNullHomotopic(model.evaluate(w))
    return Filling.seq(parts)


def default_parameters(model: GroupModel) -> Tuple[int, int]:
    k = 4 * (model.efficiency_constant + 1)
    return k, 4 * k


def fill(w: Sequence[Letter], model: GroupModel, k: Optional[int] = None, n0: Optional[int] = None) -> Filling:
    """Fill a null-homotopic word: words of length at most ``n0`` go to
    :func:`fill_special`; longer words are cut into ``k`` segments whose
    chords (efficient forms) are filled recursively against the segments,
    after which the loop of chords is filled by :func:`fill_special`."""
    C = model.efficiency_constant
    dk, dn = default_parameters(model)
    k = dk if k is None else k
    n0 = dn if n0 is None else n0
    if k <= 2 * (C + 1):
        raise ParameterError(f"k = {k} must exceed 2(C'+1) = {2 * (C + 1)}")
    if n0 <= 2 * (C + 1):
        raise ParameterError(f"base length {n0} must exceed 2(C'+1) = {2 * (C + 1)}")
    w = tuple(w)
    for x in w:
        model.check_letter(x)
    _require_null(w, model)
    parts: List[Filling] = []
    out: List[Letter] = []
    queue = deque(w)
    while queue:
        y = queue.popleft()
        if type(y) is Gen and y.name in model.extended:
            spelled, f = expand_definition(y, model)
            parts.append(f.conj(tuple(out)))
            queue.extendleft(reversed(spelled))
        else:
            out.append(y)
    parts.append(_fill_rec(tuple(out), model, k, n0))
    return Filling.seq(parts)


def _fill_rec(w: Word, model: GroupModel, k: int, n0: int) -> Filling:
    n = len(w)
    if n <= n0:
        return fill_special(w, model, check=False)
    seg = -(-n // k)
    parts: List[Filling] = []
    chords: List[Letter] = []
    for start in range(0, n, seg):
        b = w[start:start + seg]
        b2 = model.efficient_form(model.evaluate(b, check=False))
        loop = free_reduce(b2 + inverse(b))
        parts.append(_fill_rec(loop, model, k, n0).inverse().conj(tuple(chords)))
        chords.extend(b2)
    parts.append(fill_special(tuple(chords), model, check=False))
    return Filling.seq(parts)

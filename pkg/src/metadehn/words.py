"""Free-group words over the mixed alphabet of A-generators and factor letters.

A word is a plain tuple of letters.  Two letter types exist:

``Gen(name, sign)``
    a generator of the abelian group A (or one of the adjoined shortcut
    generators), ``sign`` is +1 or -1.
``Vec(factor, value)``
    a unit-ball element of one factor; ``value`` is a tuple of exact scalars.
    Its formal inverse is the letter carrying the negated value, so two
    letters of the same factor cancel freely only when their values are
    exact negatives of each other.
"""
from __future__ import annotations

import re
from typing import Callable, Iterable, List, NamedTuple, Sequence, Tuple, Union


class Gen(NamedTuple):
    name: str
    sign: int = 1

    def __str__(self):
        return self.name if self.sign > 0 else f"{self.name}^-1"


class Vec(NamedTuple):
    factor: str
    value: tuple

    def __str__(self):
        return "[" + self.factor + ": " + ", ".join(_fmt_scalar(x) for x in self.value) + "]"


Letter = Union[Gen, Vec]
Word = Tuple[Letter, ...]

EMPTY: Word = ()


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at character {position})")
        self.position = position


def _fmt_scalar(x) -> str:
    return str(x)


_GEN_INVERSE: dict = {}


def inverse_letter(x: Letter) -> Letter:
    if type(x) is Gen:
        y = _GEN_INVERSE.get(x)
        if y is None:
            y = _GEN_INVERSE[x] = Gen(x.name, -x.sign)
        return y
    return Vec(x.factor, tuple(-c for c in x.value))


def is_inverse_pair(x: Letter, y: Letter) -> bool:
    tx = type(x)
    if tx is not type(y):
        return False
    if tx is Gen:
        return x.name == y.name and x.sign == -y.sign
    if x.factor != y.factor:
        return False
    return all(a == -b for a, b in zip(x.value, y.value))


def free_reduce(w: Iterable[Letter]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: List[Letter] = []
    for x in w:
        if out and is_inverse_pair(out[-1], x):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[Letter]) -> Word:
    return tuple(inverse_letter(x) for x in reversed(w))


def concat(*words: Sequence[Letter]) -> Word:
    out: List[Letter] = []
    for w in words:
        out.extend(w)
    return tuple(out)


def power(w: Sequence[Letter], k: int) -> Word:
    if k < 0:
        return tuple(inverse(w)) * (-k)
    return tuple(w) * k


def cyclic_conjugates(w: Sequence[Letter]) -> set:
    w = tuple(w)
    return {w[i:] + w[:i] for i in range(len(w))} if w else {()}


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    w = list(free_reduce(w))
    i, j = 0, len(w) - 1
    while i < j and is_inverse_pair(w[i], w[j]):
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def a_letters(w: Iterable[Letter]) -> Word:
    return tuple(x for x in w if type(x) is Gen)


def commutator(u: Sequence[Letter], v: Sequence[Letter]) -> Word:
    return concat(u, v, inverse(u), inverse(v))


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------

_GEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?")

ScalarParser = Callable[[str, List[str], int], tuple]


def parse_word(text: str, parse_vector: ScalarParser | None = None) -> Word:
    """Parse whitespace-separated letters.

    ``a``, ``a^-1`` and ``a^3`` are A-letters (exponents expand); factor
    letters look like ``[P2: 1, 0]`` and are handed to ``parse_vector(factor,
    scalar_texts, position)``.  A bare ``e`` or ``1`` denotes the empty word.
    """
    out: List[Letter] = []
    pos = 0
    n = len(text)
    while pos < n:
        c = text[pos]
        if c.isspace() or c == "*":
            pos += 1
            continue
        if c == "[":
            end = text.find("]", pos)
            if end < 0:
                raise WordSyntaxError("unterminated factor letter", pos)
            body = text[pos + 1:end]
            if ":" not in body:
                raise WordSyntaxError("factor letter needs 'factor: values'", pos)
            fid, vals = body.split(":", 1)
            fid = fid.strip()
            parts = [s.strip() for s in vals.split(",")]
            if parse_vector is None:
                raise WordSyntaxError("factor letters need a model to parse", pos)
            try:
                value = parse_vector(fid, parts, pos)
            except WordSyntaxError:
                raise
            except (ValueError, KeyError, ZeroDivisionError) as exc:
                raise WordSyntaxError(str(exc), pos) from exc
            out.append(Vec(fid, value))
            pos = end + 1
            continue
        if c == "1" and (pos + 1 == n or text[pos + 1].isspace()):
            pos += 1
            continue
        m = _GEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {c!r}", pos)
        name, exp = m.group(1), m.group(2)
        k = int(exp) if exp is not None else 1
        if name in ("e", "eps") and exp is None:
            pos = m.end()
            continue
        out.extend([Gen(name, 1 if k > 0 else -1)] * abs(k))
        pos = m.end()
    return tuple(out)


def format_word(w: Sequence[Letter]) -> str:
    """Inverse of :func:`parse_word`; runs of one A-letter use exponents."""
    if not w:
        return "e"
    parts: List[str] = []
    i = 0
    while i < len(w):
        x = w[i]
        if type(x) is Gen:
            j = i
            while j < len(w) and w[j] == x:
                j += 1
            k = (j - i) * x.sign
            parts.append(x.name if k == 1 else f"{x.name}^{k}")
            i = j
        else:
            parts.append(str(x))
            i += 1
    return " ".join(parts)

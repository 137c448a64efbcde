"""Exact scalars: rationals, numbers in Q(sqrt 5), and localized Laurent
polynomials over F_p, together with their valuations and norms.

Rationals are plain :class:`fractions.Fraction` objects; the two other
domains are small immutable classes defined here.  Nothing in this module
touches floating point except ``__float__`` conversions used for reporting.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Sequence, Tuple, Union

INF = math.inf

Rational = Fraction
Number = Union[int, Fraction, "QuadraticNumber"]


class DomainError(ValueError):
    """Raised when an operation is applied to a scalar of the wrong kind."""


def padic_valuation(x: Union[int, Fraction], p: int) -> Union[int, float]:
    """p-adic valuation of a rational; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# --------------------------------------------------------------------------
# Q(sqrt 5)
# --------------------------------------------------------------------------

def _sign_a_plus_b_r5(a: Fraction, b: Fraction) -> int:
    # sign of a + b*sqrt(5); sqrt(5) irrational so a^2 == 5 b^2 forces a == b == 0
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    return sa if a * a > 5 * b * b else sb


@total_ordering
class QuadraticNumber:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b", "_hash")

    def __init__(self, a: Union[int, Fraction] = 0, b: Union[int, Fraction] = 0):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self._hash = None

    @classmethod
    def _coerce(cls, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.b:
            return QuadraticNumber(self.a * o.a, self.b * o.a)
        if not self.b:
            return QuadraticNumber(self.a * o.a, self.a * o.b)
        return QuadraticNumber(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b)

    def field_norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def inverse(self) -> "QuadraticNumber":
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticNumber(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int) -> "QuadraticNumber":
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadraticNumber(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b)

    def __pos__(self):
        return self

    def sign(self) -> int:
        return _sign_a_plus_b_r5(self.a, self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.a) if self.b == 0 else hash((self.a, self.b))
        return self._hash

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(5)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b})"

    def __str__(self):
        return format_quadratic(self)


SQRT5 = QuadraticNumber(0, 1)


def norm_less_than_one(x: Union[QuadraticNumber, Fraction, int]) -> bool:
    """Decide ``|x| < 1`` exactly."""
    return compare_abs(x, 1) < 0


def compare_abs(x, r) -> int:
    """Three-way comparison of ``|x|`` against ``|r|`` (``r`` rational or quadratic)."""
    ax = abs(x)
    ar = abs(r)
    return (ax > ar) - (ax < ar)


def format_quadratic(x: QuadraticNumber) -> str:
    if x.b == 0:
        return str(x.a)
    mag = abs(x.b)
    rad = "r5" if mag == 1 else f"{mag}*r5"
    if x.a == 0:
        return rad if x.b > 0 else f"-{rad}"
    return f"{x.a}{'+' if x.b > 0 else '-'}{rad}"


_QTERM = re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(\*?\s*r5)?")


def parse_quadratic(text: str) -> QuadraticNumber:
    """Parse ``"a+b*r5"`` style text, e.g. ``"3/2-1/2*r5"``, ``"r5"``, ``"-2"``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty quadratic literal")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _QTERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse quadratic literal {text!r} at {pos}")
        sign, num, rad = m.groups()
        if num is None and rad is None:
            raise ValueError(f"cannot parse quadratic literal {text!r} at {pos}")
        coef = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            coef = -coef
        if rad:
            b += coef
        else:
            a += coef
        pos = m.end()
    return QuadraticNumber(a, b)


# --------------------------------------------------------------------------
# F_p[X, 1/X, 1/(1+X)]
# --------------------------------------------------------------------------

Poly = Tuple[int, ...]  # coefficients mod p, constant term first, no trailing zeros

PLACES = ("at0", "atinf", "atm1")


def _ptrim(c: Sequence[int]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(f: Poly, g: Poly, p: int) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, x in enumerate(g):
        out[i] = (out[i] + x) % p
    return _ptrim(out)


def _pmul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return _ptrim([c % p for c in out])


def _pmul_1px_pow(f: Poly, k: int, p: int) -> Poly:
    for _ in range(k):
        if not f:
            return f
        out = list(f) + [0]
        for i in range(len(f)):
            out[i + 1] = (out[i + 1] + f[i]) % p
        f = _ptrim(out)
    return f


def _peval_m1(f: Poly, p: int) -> int:
    s = 0
    for i, c in enumerate(f):
        s += -c if i & 1 else c
    return s % p


def _pdiv_1px(f: Poly, p: int) -> Poly:
    # exact division by (1+X); caller guarantees f(-1) == 0
    n = len(f) - 1
    q = [0] * n
    r = list(f)
    for i in range(n, 0, -1):
        c = r[i] % p
        q[i - 1] = c
        r[i - 1] = (r[i - 1] - c) % p
        r[i] = 0
    return _ptrim(q)


class LaurentLocal:
    """``num / (X**e0 * (1+X)**e1)`` in F_p[X, 1/X, 1/(1+X)].

    Canonical: ``num`` is zero (then ``e0 == e1 == 0``) or divisible by
    neither ``X`` nor ``1+X``.  Exponents may be negative.
    """

    __slots__ = ("p", "num", "e0", "e1", "_hash")

    def __init__(self, p: int, num: Sequence[int], e0: int = 0, e1: int = 0):
        num = _ptrim([c % p for c in num])
        if not num:
            e0 = e1 = 0
        else:
            while num[0] == 0:
                num = num[1:]
                e0 -= 1
            while len(num) > 1 and _peval_m1(num, p) == 0:
                num = _pdiv_1px(num, p)
                e1 -= 1
        self.p = p
        self.num = num
        self.e0 = e0
        self.e1 = e1
        self._hash = None

    @classmethod
    def _raw(cls, p, num, e0, e1) -> "LaurentLocal":
        obj = object.__new__(cls)
        obj.p, obj.num, obj.e0, obj.e1, obj._hash = p, num, e0, e1, None
        return obj

    @classmethod
    def monomial(cls, p: int, x_power: int = 0, onepx_power: int = 0, coeff: int = 1) -> "LaurentLocal":
        """``coeff * X**x_power * (1+X)**onepx_power``."""
        if coeff % p == 0:
            return cls(p, ())
        return cls._raw(p, (coeff % p,), -x_power, -onepx_power)

    @classmethod
    def zero(cls, p: int) -> "LaurentLocal":
        return cls._raw(p, (), 0, 0)

    @classmethod
    def one(cls, p: int) -> "LaurentLocal":
        return cls._raw(p, (1,), 0, 0)

    def _coerce(self, other) -> "LaurentLocal":
        if isinstance(other, LaurentLocal):
            if other.p != self.p:
                raise DomainError("Laurent elements over different primes")
            return other
        if isinstance(other, int):
            return LaurentLocal(self.p, (other,))
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num:
            return o
        if not o.num:
            return self
        p = self.p
        E0 = max(self.e0, o.e0)
        E1 = max(self.e1, o.e1)
        f = (0,) * (E0 - self.e0) + self.num
        f = _pmul_1px_pow(f, E1 - self.e1, p)
        g = (0,) * (E0 - o.e0) + o.num
        g = _pmul_1px_pow(g, E1 - o.e1, p)
        return LaurentLocal(p, _padd(f, g, p), E0, E1)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return LaurentLocal._raw(p, tuple((-c) % p for c in self.num), self.e0, self.e1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return LaurentLocal.zero(self.p)
        if len(o.num) == 1 and o.num[0] == 1:
            return LaurentLocal._raw(self.p, self.num, self.e0 + o.e0, self.e1 + o.e1)
        if len(self.num) == 1 and self.num[0] == 1:
            return LaurentLocal._raw(self.p, o.num, self.e0 + o.e0, self.e1 + o.e1)
        # a product of polynomials prime to X and 1+X stays prime to both
        return LaurentLocal._raw(self.p, _pmul(self.num, o.num, self.p), self.e0 + o.e0, self.e1 + o.e1)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return len(self.num) == 1

    def inverse(self) -> "LaurentLocal":
        if not self.is_unit():
            raise DomainError(f"{self} is not a unit of F_p[X, 1/X, 1/(1+X)]")
        c = pow(self.num[0], -1, self.p)
        return LaurentLocal._raw(self.p, (c,), -self.e0, -self.e1)

    def __pow__(self, k: int) -> "LaurentLocal":
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentLocal.one(self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def degree(self) -> int:
        return len(self.num) - 1

    def valuation(self, place: str) -> Union[int, float]:
        """Order of vanishing at ``X = 0``, ``X = infinity`` or ``X = -1``."""
        if not self.num:
            return INF
        if place == "at0":
            return -self.e0
        if place == "atm1":
            return -self.e1
        if place == "atinf":
            return self.e0 + self.e1 - self.degree()
        raise DomainError(f"unknown place {place!r}")

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentLocal(self.p, (other,))
        if not isinstance(other, LaurentLocal):
            return NotImplemented
        return self.p == other.p and self.num == other.num and self.e0 == other.e0 and self.e1 == other.e1

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.num, self.e0, self.e1))
        return self._hash

    def __repr__(self):
        return f"LaurentLocal({self.p}, {self.num}, {self.e0}, {self.e1})"

    def __str__(self):
        return format_laurent(self)


def format_laurent(x: LaurentLocal) -> str:
    if not x.num:
        return "0"
    terms = []
    for i, c in enumerate(x.num):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = "X" if i == 1 else f"X^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    s = "+".join(terms)
    if x.e0 == 0 and x.e1 == 0:
        return s
    den = []
    if x.e0:
        den.append(f"X^{x.e0}")
    if x.e1:
        den.append(f"(1+X)^{x.e1}")
    return f"({s}) / " + " ".join(den)


_LTERM = re.compile(r"([+-]?)(\d*)\*?(X(?:\^(\d+))?)?")


def _parse_poly(text: str, p: int) -> Poly:
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    coeffs: dict = {}
    pos = 0
    while pos < len(s):
        m = _LTERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
        sign, num, mono, exp = m.groups()
        if not num and not mono:
            raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        deg = 0 if not mono else (int(exp) if exp else 1)
        coeffs[deg] = coeffs.get(deg, 0) + c
        pos = m.end()
    if not coeffs:
        return ()
    out = [0] * (max(coeffs) + 1)
    for d, c in coeffs.items():
        out[d] = c % p
    return _ptrim(out)


_DEN = re.compile(r"^\s*(?:X\^(-?\d+))?\s*(?:\(1\+X\)\^(-?\d+))?\s*$")


def parse_laurent(text: str, p: int) -> LaurentLocal:
    """Parse ``"poly / X^e0 (1+X)^e1"``; the denominator part is optional."""
    if "/" in text:
        num_text, den_text = text.split("/", 1)
        m = _DEN.match(den_text)
        if not m:
            raise ValueError(f"bad Laurent denominator {den_text!r}")
        e0 = int(m.group(1) or 0)
        e1 = int(m.group(2) or 0)
    else:
        num_text, e0, e1 = text, 0, 0
    return LaurentLocal(p, _parse_poly(num_text, p), e0, e1)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())

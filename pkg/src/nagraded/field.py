"""Exact arithmetic in Q(t^(1/N)) with the t-adic valuation.

Elements are rational functions in ``u = t^(1/N)`` kept in the canonical form

    x = u^k * p(u) / q(u),    p(0) != 0,  q(0) == 1,  gcd(p, q) == 1,

so the valuation is simply ``k / N``.  Scalars (weights, spectra, volumes) are
plain :class:`fractions.Fraction` values; ``INF`` stands for the valuation of 0.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:  # polynomial coefficients use GMP rationals when available
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

Rat = Fraction
Poly = tuple  # coefficients low -> high, no trailing zeros; () is zero

INF = math.inf

_ZERO = _Q(0)
_ONE = _Q(1)


def rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` text to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def rat_text(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _coef(x):
    if isinstance(x, _Q):
        return x
    if isinstance(x, Fraction):
        return _Q(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    if isinstance(x, str):
        x = Fraction(x)
        return _Q(x.numerator, x.denominator)
    return _Q(x)


# -- dense polynomial helpers over Q ------------------------------------------

def _trim(c: list) -> Poly:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, y in enumerate(b):
        c[i] += y
    return _trim(c)


def _pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(b) == 1:
        y = b[0]
        return a if y == 1 else tuple(x * y for x in a)
    if len(a) == 1:
        x = a[0]
        return b if x == 1 else tuple(x * y for y in b)
    c = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                c[i + j] += x * y
    return _trim(c)


def _pscale(a: Poly, s: Fraction) -> Poly:
    if s == 1:
        return a
    return tuple(x * s for x in a)


def _pshift(a: Poly, k: int) -> Poly:
    if k == 0 or not a:
        return a
    return (_ZERO,) * k + a


def _pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if len(a) < len(b):
        return (), a
    r = list(a)
    lead = b[-1]
    nb = len(b)
    q = [_ZERO] * (len(a) - nb + 1)
    for i in range(len(a) - nb, -1, -1):
        c = r[i + nb - 1]
        if c:
            c = c / lead
            q[i] = c
            for j in range(nb):
                r[i + j] -= c * b[j]
    return _trim(q), _trim(r[: nb - 1])


def _pexact_div(a: Poly, b: Poly) -> Poly:
    if len(b) == 1:
        return _pscale(a, 1 / b[0])
    q, r = _pdivmod(a, b)
    assert not r, "inexact polynomial division"
    return q


def _pgcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; (1,) when coprime."""
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (_ONE,)
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _pscale(a, 1 / a[-1])


def _ord(a: Poly) -> int:
    for i, x in enumerate(a):
        if x:
            return i
    raise ValueError("order of the zero polynomial")


def _pspread(a: Poly, m: int) -> Poly:
    """Substitute u -> u^m."""
    if m == 1 or len(a) <= 1:
        return a
    c = [_ZERO] * ((len(a) - 1) * m + 1)
    for i, x in enumerate(a):
        c[i * m] = x
    return tuple(c)


# -- field elements ------------------------------------------------------------

class FieldElem:
    """Element of Q(u), u = t^(1/N), in canonical form."""

    __slots__ = ("k", "num", "den", "N", "_hash")

    def __init__(self, k: int, num: Poly, den: Poly, N: int = 1):
        # trusted constructor: callers guarantee canonical form
        self.k = k
        self.num = num
        self.den = den
        self.N = N
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def from_laurent(cls, num: Union[dict, Sequence], den=None, N: int = 1) -> "FieldElem":
        """Build from Laurent polynomials given as ``{exponent: coeff}`` dicts
        or coefficient sequences starting at exponent 0."""
        pk, p = _laurent(num)
        if den is None:
            qk, q = 0, (_ONE,)
        else:
            qk, q = _laurent(den)
            if not q:
                raise ZeroDivisionError("zero denominator")
        if not p:
            return cls.zero(N)
        return _canon(pk - qk, p, q, N)

    @classmethod
    def zero(cls, N: int = 1) -> "FieldElem":
        return cls(0, (), (_ONE,), N)

    @classmethod
    def one(cls, N: int = 1) -> "FieldElem":
        return cls(0, (_ONE,), (_ONE,), N)

    @classmethod
    def const(cls, c, N: int = 1) -> "FieldElem":
        c = _coef(c)
        if not c:
            return cls.zero(N)
        return cls(0, (c,), (_ONE,), N)

    @classmethod
    def upow(cls, k: int, c=1, N: int = 1) -> "FieldElem":
        """``c * u^k``."""
        c = _coef(c)
        if not c:
            return cls.zero(N)
        return cls(k, (c,), (_ONE,), N)

    @classmethod
    def tpow(cls, e, c=1, N: int = 1) -> "FieldElem":
        """``c * t^e`` for rational ``e`` with ``e * N`` integral."""
        e = rat(e) * N
        if e.denominator != 1:
            raise ValueError(f"t^{e / N} needs ramification divisible by {e.denominator}")
        return cls.upow(int(e), c, N)

    # basic queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    def val(self):
        """t-adic valuation, ``INF`` for zero."""
        if not self.num:
            return INF
        return Fraction(self.k, self.N)

    def lead(self) -> Fraction:
        """Coefficient of the lowest-order term (the angular component)."""
        if not self.num:
            return Fraction(0)
        c = self.num[0]
        return Fraction(int(c.numerator), int(c.denominator))

    def ramify(self, M: int) -> "FieldElem":
        if M < 1:
            raise ValueError("ramification index must be positive")
        if M == 1:
            return self
        return FieldElem(self.k * M, _pspread(self.num, M), _pspread(self.den, M), self.N * M)

    def at(self, N: int) -> "FieldElem":
        """Same element viewed with ramification ``N`` (a multiple of self.N)."""
        if N == self.N:
            return self
        if N % self.N:
            raise ValueError(f"cannot view ramification {self.N} element at {N}")
        return self.ramify(N // self.N)

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        if not self.num:
            return self
        return FieldElem(self.k, _pneg(self.num), self.den, self.N)

    def __add__(self, other):
        other = _coerce(other, self.N)
        if other is NotImplemented:
            return other
        a, b = _common(self, other)
        if not a.num:
            return b
        if not b.num:
            return a
        N = a.N
        k = min(a.k, b.k)
        if a.den == b.den:
            p = _padd(_pshift(a.num, a.k - k), _pshift(b.num, b.k - k))
            q = a.den
        else:
            p = _padd(_pmul(_pshift(a.num, a.k - k), b.den), _pmul(_pshift(b.num, b.k - k), a.den))
            q = _pmul(a.den, b.den)
        if not p:
            return FieldElem.zero(N)
        return _canon(k, p, q, N)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.N)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other, self.N)
        if other is NotImplemented:
            return other
        a, b = _common(self, other)
        if not a.num or not b.num:
            return FieldElem.zero(a.N)
        p1, q1, p2, q2 = a.num, a.den, b.num, b.den
        if len(q2) > 1 and len(p1) > 1:
            g = _pgcd(p1, q2)
            if len(g) > 1:
                p1, q2 = _pexact_div(p1, g), _pexact_div(q2, g)
        if len(q1) > 1 and len(p2) > 1:
            g = _pgcd(p2, q1)
            if len(g) > 1:
                p2, q1 = _pexact_div(p2, g), _pexact_div(q1, g)
        p = _pmul(p1, p2)
        q = _pmul(q1, q2)
        s = q[0]
        if s != 1:
            p, q = _pscale(p, 1 / s), _pscale(q, 1 / s)
        return FieldElem(a.k + b.k, p, q, a.N)

    __rmul__ = __mul__

    def inv(self) -> "FieldElem":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in K")
        p, q = self.den, self.num
        s = q[0]
        if s != 1:
            p, q = _pscale(p, 1 / s), _pscale(q, 1 / s)
        return FieldElem(-self.k, p, q, self.N)

    def __truediv__(self, other):
        other = _coerce(other, self.N)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = FieldElem.one(self.N)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # comparison / hashing ---------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other, self.N)
        if other is NotImplemented:
            return False
        a, b = _common(self, other)
        if not a.num or not b.num:
            return not a.num and not b.num
        return a.k == b.k and a.num == b.num and a.den == b.den

    def __hash__(self):
        if self._hash is None:
            # hash a ramification-independent normal form
            g = math.gcd(self.k, self.N, *[i for i, c in enumerate(self.num) if c],
                         *[i for i, c in enumerate(self.den) if c]) or 1
            self._hash = hash((Fraction(self.k, self.N), self.num[::g], self.den[::g]))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # text -------------------------------------------------------------------

    def to_text(self) -> str:
        """``"(num)/(den)"`` with monomials ``c*u^k``; ``"0"`` for zero."""
        if not self.num:
            return "0"
        num = _terms_text(self.num, self.k)
        den = _terms_text(self.den, 0)
        return f"({num})/({den})"

    @classmethod
    def from_text(cls, s: str, N: int = 1) -> "FieldElem":
        s = s.strip()
        if s == "0":
            return cls.zero(N)
        m = re.fullmatch(r"\((.*)\)/\((.*)\)", s)
        if m:
            num, den = _parse_terms(m.group(1)), _parse_terms(m.group(2))
        else:
            num, den = _parse_terms(s), {0: _ONE}
        return cls.from_laurent(num, den, N)

    def __repr__(self):
        return f"FieldElem({self.to_text()!r}, N={self.N})"

    def __str__(self):
        return self.to_text()


def _terms_text(p: Poly, shift: int) -> str:
    return " + ".join(f"{rat_text(c)}*u^{i + shift}" for i, c in enumerate(p) if c)


_TERM = re.compile(r"([-+]*)(\d+(?:/\d+)?)?(?:(?<=\d)\*(?=u))?(u(?:\^([-+]?\d+))?)?")


def _parse_terms(s: str) -> dict:
    """Sum of monomials ``c*u^k``; ``c`` or ``u^k`` may be omitted (``1``, ``-u``, ``2*u^3``)."""
    s = s.replace(" ", "")
    out: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"bad Laurent monomial in {s!r} at {pos}")
        c = _coef(m.group(2) or "1")
        if m.group(1).count("-") % 2:
            c = -c
        e = 0 if not m.group(3) else int(m.group(4) or 1)
        out[e] = out.get(e, _ZERO) + c
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"bad Laurent monomial in {s!r} at {pos}")
    if not s:
        raise ValueError("empty Laurent polynomial")
    return out


def _laurent(spec) -> tuple[int, Poly]:
    if isinstance(spec, dict):
        items = {int(e): _coef(c) for e, c in spec.items() if _coef(c)}
        if not items:
            return 0, ()
        lo, hi = min(items), max(items)
        return lo, tuple(items.get(e, _ZERO) for e in range(lo, hi + 1))
    c = _trim([_coef(x) for x in spec])
    if not c:
        return 0, ()
    o = _ord(c)
    return o, c[o:]


def _canon(k: int, p: Poly, q: Poly, N: int) -> FieldElem:
    o = _ord(p)
    if o:
        p = p[o:]
        k += o
    o = _ord(q)
    if o:
        q = q[o:]
        k -= o
    if len(q) > 1 and len(p) > 1:
        g = _pgcd(p, q)
        if len(g) > 1:
            p, q = _pexact_div(p, g), _pexact_div(q, g)
    s = q[0]
    if s != 1:
        p, q = _pscale(p, 1 / s), _pscale(q, 1 / s)
    return FieldElem(k, p, q, N)


def _coerce(x, N: int):
    if isinstance(x, FieldElem):
        return x
    if isinstance(x, (int, Fraction, _Q)):
        return FieldElem.const(x, N)
    return NotImplemented


def _common(a: FieldElem, b: FieldElem) -> tuple[FieldElem, FieldElem]:
    if a.N == b.N:
        return a, b
    N = a.N * b.N // math.gcd(a.N, b.N)
    return a.at(N), b.at(N)


def t(N: int = 1) -> FieldElem:
    """The uniformizer t, i.e. ``u^N``."""
    return FieldElem.upow(N, 1, N)


def u(N: int = 1) -> FieldElem:
    return FieldElem.upow(1, 1, N)


def common_ramification(elems: Iterable[FieldElem]) -> int:
    N = 1
    for x in elems:
        N = N * x.N // math.gcd(N, x.N)
    return N


def val(x) :
    """Valuation of a FieldElem, int or Fraction (rationals have valuation 0)."""
    if isinstance(x, FieldElem):
        return x.val()
    return INF if x == 0 else Fraction(0)

"""Exact coefficient fields: the rationals and Q(e) with e^2 + e + 1 = 0."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "Rational",
    "Cyclotomic3",
    "EPS",
    "QQ",
    "QQ_EPS",
    "Field",
    "field_add",
    "field_mul",
    "field_inv",
    "parse_coefficient",
    "format_coefficient",
]

Rational = Fraction


class Cyclotomic3:
    """An element ``a + b*e`` of Q(e), where ``e`` is a primitive cube root of unity.

    Stored canonically with ``e``-degree below 2, using ``e^2 = -e - 1``.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, Cyclotomic3):
            return other
        if isinstance(other, (int, _RationalABC)):
            return cls(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic3(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic3(-self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Cyclotomic3(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a + b e)(c + d e) = ac + (ad + bc) e + bd e^2,  e^2 = -1 - e
        bd = b * d
        return Cyclotomic3(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def norm(self):
        """Field norm ``a^2 - ab + b^2``; zero only for zero."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def conjugate(self):
        # e -> e^2 = -1 - e
        return Cyclotomic3(self.a - self.b, -self.b)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(e)")
        c = self.conjugate()
        return Cyclotomic3(c.a / n, c.b / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic3(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"Cyclotomic3({self.a}, {self.b})"

    def __str__(self):
        return format_coefficient(self)


EPS = Cyclotomic3(0, 1)


class Field:
    """Coefficient field tag used by polynomial rings."""

    def __init__(self, name: str, element_type):
        self.name = name
        self.element_type = element_type

    def __call__(self, value):
        if self.element_type is Fraction:
            if isinstance(value, Cyclotomic3):
                if not value.is_rational():
                    raise ValueError(f"{value} is not rational")
                return value.a
            return Fraction(value)
        if isinstance(value, Cyclotomic3):
            return value
        return Cyclotomic3(value)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


QQ = Field("QQ", Fraction)
QQ_EPS = Field("QQ(e)", Cyclotomic3)


def field_add(x, y):
    return x + y


def field_mul(x, y):
    return x * y


def field_inv(x):
    if not x:
        raise ZeroDivisionError("inverse of zero")
    if isinstance(x, Cyclotomic3):
        return x.inverse()
    return 1 / Fraction(x)


def parse_coefficient(text: str):
    """Parse ``3/2``, ``-e``, ``3/2 + 1e`` and similar into a field element.

    Returns a Fraction when no ``e`` occurs, otherwise a Cyclotomic3.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty coefficient")
    pos = 0
    a = Fraction(0)
    b = Fraction(0)
    saw_e = False
    while pos < len(s):
        m = re.match(r"([+-]?)(\d+(?:/\d+)?)?(\*?e)?", s[pos:])
        if not m or m.end() == 0 or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"malformed coefficient {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        num = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            b += sign * num
            saw_e = True
        else:
            a += sign * num
        pos += m.end()
    return Cyclotomic3(a, b) if saw_e else a


def format_coefficient(c) -> str:
    if isinstance(c, Cyclotomic3):
        if c.b == 0:
            return str(c.a)
        if c.a == 0:
            return f"{c.b}e"
        sign = "+" if c.b > 0 else "-"
        return f"{c.a} {sign} {abs(c.b)}e"
    return str(Fraction(c))

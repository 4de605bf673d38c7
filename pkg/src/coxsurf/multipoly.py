"""Sparse multivariate polynomials over QQ or QQ(e) with pluggable monomial orders.

A polynomial is a mapping from exponent tuples to nonzero coefficients, tied
to a :class:`PolyRing` that fixes the variable names and the coefficient field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .exactfield import QQ, QQ_EPS, Cyclotomic3, Field, format_coefficient

Monomial = Tuple[int, ...]

__all__ = [
    "Monomial",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "grevlex",
    "lex",
    "weighted_grevlex",
    "block_order",
    "PolyRing",
    "Poly",
    "ContextError",
    "parse_poly",
    "compare_monomials",
]


class ContextError(ValueError):
    """Raised when polynomials from different rings are combined."""


class MonomialOrder:
    """A monomial order given by a sort key: ``key(m1) < key(m2)`` iff ``m1 < m2``.

    ``kind`` is one of ``"grevlex"``, ``"lex"``, ``"wgrevlex"`` or ``"block"``.
    For block orders the first ``split`` variables form the eliminated block.
    """

    def __init__(self, kind: str, split: int | None = None, weights: Sequence[int] | None = None):
        if kind not in ("grevlex", "lex", "wgrevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and (split is None or split < 0):
            raise ValueError("block order needs a split index")
        if kind == "wgrevlex" and weights is None:
            raise ValueError("weighted order needs weights")
        if weights is not None and any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        self.kind = kind
        self.split = split
        self.weights = tuple(weights) if weights is not None else None
        self.key = self._make_key()

    def _make_key(self):
        kind, w, k = self.kind, self.weights, self.split
        if kind == "lex":
            return lambda m: m
        if kind == "grevlex":
            return lambda m: (sum(m),) + tuple(-e for e in reversed(m))
        if kind == "wgrevlex":
            return lambda m: (sum(a * b for a, b in zip(w, m)),) + tuple(-e for e in reversed(m))

        def block_key(m):
            first, second = m[:k], m[k:]
            if w is None:
                d1, d2 = sum(first), sum(second)
            else:
                d1 = sum(a * b for a, b in zip(w[:k], first))
                d2 = sum(a * b for a, b in zip(w[k:], second))
            return ((d1,) + tuple(-e for e in reversed(first))
                    + (d2,) + tuple(-e for e in reversed(second)))

        return block_key

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.split == other.split and self.weights == other.weights)

    def __hash__(self):
        return hash((self.kind, self.split, self.weights))

    def __repr__(self):
        extra = []
        if self.split is not None:
            extra.append(f"split={self.split}")
        if self.weights is not None:
            extra.append(f"weights={list(self.weights)}")
        return f"MonomialOrder({self.kind!r}{', ' if extra else ''}{', '.join(extra)})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def grevlex() -> MonomialOrder:
    return GREVLEX


def lex() -> MonomialOrder:
    return LEX


def weighted_grevlex(weights: Sequence[int]) -> MonomialOrder:
    return MonomialOrder("wgrevlex", weights=weights)


def block_order(split: int, weights: Sequence[int] | None = None) -> MonomialOrder:
    return MonomialOrder("block", split=split, weights=weights)


def compare_monomials(order: MonomialOrder, m1: Monomial, m2: Monomial) -> int:
    """Return -1, 0 or 1 as ``m1`` is smaller, equal or larger than ``m2``."""
    k1, k2 = order.key(tuple(m1)), order.key(tuple(m2))
    return (k1 > k2) - (k1 < k2)


class PolyRing:
    """Polynomial ring context: ordered variable names plus coefficient field."""

    def __init__(self, names: Iterable[str], field: Field = QQ):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.field = field
        self.nvars = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self._zero_mono = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names and self.field == other.field

    def __hash__(self):
        return hash((self.names, self.field))

    def __repr__(self):
        return f"PolyRing({list(self.names)}, {self.field!r})"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self._zero_mono: self.field.one})

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {self._zero_mono: c} if c else {})

    def var(self, name: str) -> "Poly":
        i = self.index[name]
        m = [0] * self.nvars
        m[i] = 1
        return Poly(self, {tuple(m): self.field.one})

    def gens(self) -> list["Poly"]:
        return [self.var(n) for n in self.names]

    def monomial(self, exps: Mapping[str, int] | Sequence[int], coeff=1) -> "Poly":
        if isinstance(exps, Mapping):
            m = [0] * self.nvars
            for n, e in exps.items():
                m[self.index[n]] = e
            exps = m
        c = self.field(coeff)
        return Poly(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def with_field(self, field: Field) -> "PolyRing":
        return PolyRing(self.names, field)

    def convert(self, p: "Poly") -> "Poly":
        """Map ``p`` into this ring by variable name."""
        if p.ring == self:
            return p
        perm = []
        for n in p.ring.names:
            if n not in self.index:
                if any(m[p.ring.index[n]] for m in p.terms):
                    raise ContextError(f"variable {n} not in target ring")
                perm.append(None)
            else:
                perm.append(self.index[n])
        out = {}
        for m, c in p.terms.items():
            nm = [0] * self.nvars
            for i, e in enumerate(m):
                if e:
                    nm[perm[i]] = e
            out[tuple(nm)] = self.field(c)
        return Poly(self, out)


class Poly:
    """Immutable sparse polynomial."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, object]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- structure -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def variables(self) -> list[str]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return [self.ring.names[i] for i in sorted(used)]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        """Terms in decreasing order."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.terms[self.leading_monomial(order)]

    def coefficient(self, exps) -> object:
        if isinstance(exps, Mapping):
            m = [0] * self.ring.nvars
            for n, e in exps.items():
                m[self.ring.index[n]] = e
            exps = m
        return self.terms.get(tuple(exps), self.ring.field.zero)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "Poly"):
        if other.ring != self.ring:
            raise ContextError("polynomials live in different rings")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Cyclotomic3)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Poly":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c) -> "Poly":
        return Poly(self.ring, {tuple(a + b for a, b in zip(m, mono)): v * c
                                for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic3)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic3)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, Cyclotomic3)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        inv = self.ring.field.one / lc
        return Poly(self.ring, {m: c * inv for m, c in self.terms.items()})

    # -- substitution --------------------------------------------------
    def substitute(self, assignment: Mapping[str, "Poly"], target: PolyRing | None = None) -> "Poly":
        """Apply the ring map sending each variable to ``assignment[name]``.

        Variables absent from ``assignment`` must not occur in ``self``. All
        images must share ``target`` (inferred from the first image).
        """
        images = []
        if target is None:
            for v in assignment.values():
                target = v.ring
                break
            if target is None:
                target = self.ring
        for i, name in enumerate(self.ring.names):
            img = assignment.get(name)
            if img is None:
                if any(m[i] for m in self.terms):
                    raise KeyError(f"variable {name} is not mapped")
                images.append(None)
            else:
                if img.ring != target:
                    img = target.convert(img)
                images.append(img)
        power_cache: Dict[Tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            p = power_cache.get(key)
            if p is None:
                p = images[i] ** e
                power_cache[key] = p
            return p

        acc: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            for tm, tc in term.terms.items():
                v = acc.get(tm)
                acc[tm] = tc if v is None else v + tc
        return Poly(target, {m: c for m, c in acc.items() if c})

    def evaluate_at_one(self, names: Iterable[str]) -> "Poly":
        """Set every variable in ``names`` to 1 (same ring, those exponents zeroed)."""
        idx = [self.ring.index[n] for n in names]
        out: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            nm = list(m)
            for i in idx:
                nm[i] = 0
            nm = tuple(nm)
            v = out.get(nm)
            out[nm] = c if v is None else v + c
        return Poly(self.ring, {m: c for m, c in out.items() if c})

    # -- text ----------------------------------------------------------
    def to_str(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.ring.names, m) if e
            )
            if isinstance(c, Cyclotomic3) and c.is_rational():
                c = c.a
            if isinstance(c, Cyclotomic3):
                body = f"({format_coefficient(c)})"
                sign = "+"
                text = body if not mono else f"{body}*{mono}"
            else:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                if not mono:
                    text = str(a)
                elif a == 1:
                    text = mono
                else:
                    text = f"{a}*{mono}"
            pieces.append((sign, text))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r})"


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        if m.group(1) is not None:
            out.append(("num", int(m.group(1))))
        elif m.group(2) is not None:
            out.append(("name", m.group(2)))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, tokens, ring: PolyRing):
        self.ring = ring
        expanded = []
        for kind, val in tokens:
            if kind == "name" and val not in ring.index and val not in ("e", "eps", "epsilon"):
                parts = self._split(val)
                if parts:
                    expanded.extend(("name", p) for p in parts)
                    continue
            expanded.append((kind, val))
        self.toks = expanded
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ValueError(f"expected {op!r}")

    def expr(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            node = self.term()
            if val == "-":
                node = -node
        else:
            node = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = node + rhs if val == "+" else node - rhs
            else:
                return node

    def term(self):
        node = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                node = node * self.power()
            elif kind == "op" and val == "/":
                self.take()
                den = self.power()
                if not den.is_constant() or den.is_zero():
                    raise ValueError("division only by nonzero constants")
                node = node * self.ring.const(self.ring.field.one / den.terms[self.ring._zero_mono])
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                node = node * self.power()
            else:
                return node

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, n = self.take()
            if k != "num":
                raise ValueError("exponent must be an integer")
            base = base ** n
        return base

    def _name(self, val):
        if val in self.ring.index:
            return self.ring.var(val)
        if self.ring.field != QQ_EPS:
            raise ValueError("e requires the QQ(e) field")
        return self.ring.const(Cyclotomic3(0, 1))

    def _split(self, word):
        # juxtaposed names such as T10T11 or aT3, longest known name first
        if not word:
            return []
        known = sorted(set(self.ring.names) | {"e"}, key=len, reverse=True)
        for n in known:
            if word.startswith(n):
                rest = word[len(n):]
                if rest and rest[0].isdigit():
                    continue
                tail = self._split(rest)
                if tail is not None:
                    return [n] + tail
        return None

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            if val in self.ring.index or val in ("e", "eps", "epsilon"):
                return self._name(val if val in self.ring.index else "e")
            raise ValueError(f"unknown variable {val!r}")
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "op" and val == "-":
            return -self.power()
        raise ValueError(f"unexpected token {val!r}")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """Parse a polynomial such as ``T1*T3^2 + 1/9*(1 - e)*T4 - T2``.

    Juxtaposition is read as multiplication, so ``2e`` and ``3T1`` are accepted.
    """
    text = re.sub(r"(\d)(e)\b", r"\1*\2", text)
    p = _Parser(_tokenize(text), ring)
    node = p.expr()
    if p.i != len(p.toks):
        raise ValueError(f"trailing input in {text!r}")
    return node

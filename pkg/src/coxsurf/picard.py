"""The Picard lattice Z^{1,9} of a rational elliptic surface.

Classes are plain coefficient vectors in the basis e0, e1, ..., e9 with
e0^2 = 1, e_i^2 = -1 and all other products zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

RANK = 10

__all__ = [
    "RANK",
    "DivisorClass",
    "K",
    "F",
    "intersect",
    "riemann_roch_chi",
    "harbourne_h1",
    "NeedsSectionData",
    "NotNefError",
    "is_nef",
    "gram_matrix",
    "e",
]


@dataclass(frozen=True)
class DivisorClass:
    coords: Tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if len(c) != RANK:
            raise ValueError(f"a class needs {RANK} coordinates, got {len(c)}")
        object.__setattr__(self, "coords", c)

    @classmethod
    def of(cls, coords: Iterable[int]) -> "DivisorClass":
        return cls(tuple(coords))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "DivisorClass":
        return DivisorClass(tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def __getitem__(self, i):
        return self.coords[i]

    def dot(self, other: "DivisorClass") -> int:
        return intersect(self, other)

    @property
    def square(self) -> int:
        return intersect(self, self)

    @property
    def degree(self) -> int:
        """Anticanonical degree -K.D."""
        return intersect(F, self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign} {mag}e{i}")
        if not parts:
            return "0"
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def e(i: int) -> DivisorClass:
    v = [0] * RANK
    v[i] = 1
    return DivisorClass(tuple(v))


K = DivisorClass((-3,) + (1,) * 9)
F = -K

Classlike = Union[DivisorClass, Sequence[int]]


def _coords(d: Classlike):
    return d.coords if isinstance(d, DivisorClass) else tuple(d)


def intersect(d1: Classlike, d2: Classlike) -> int:
    a, b = _coords(d1), _coords(d2)
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def gram_matrix():
    return [[intersect(e(i), e(j)) for j in range(RANK)] for i in range(RANK)]


def riemann_roch_chi(d: Classlike) -> int:
    """chi(O(D)) = 1 + (D^2 - D.K)/2."""
    twice = intersect(d, d) - intersect(d, K)
    # D^2 and D.K have the same parity on this lattice
    return 1 + twice // 2


class NotNefError(ValueError):
    pass


@dataclass(frozen=True)
class NeedsSectionData:
    """Flag for a nef class of anticanonical degree one, D = -aK + P.

    h^1 still vanishes, but the section P sits in the base locus of |D|.
    """

    a: int
    section_label: str
    h1: int = 0

    def __str__(self):
        return f"needs case (iii) section data: D = -{self.a}K + {self.section_label}"


def is_nef(d: Classlike, curves) -> bool:
    """True iff D.C >= 0 for every negative curve ``C``.

    ``curves`` is a SurfaceDescriptor or any iterable of classes.
    """
    classes = _curve_classes(curves)
    return all(intersect(d, c) >= 0 for c in classes)


def _curve_classes(curves):
    if hasattr(curves, "curves"):
        return [c.cls for c in curves.curves]
    return [c.cls if hasattr(c, "cls") else c for c in curves]


def harbourne_h1(d: Classlike, surface) -> Union[int, NeedsSectionData]:
    """h^1(X, D) for a nef class D.

    Returns 0 when -K.D > 0 and ``a`` when D = -aK. A class numerically
    equal to -aK + P for a section P is returned as a NeedsSectionData flag.
    """
    if not is_nef(d, surface):
        raise NotNefError(f"{DivisorClass.of(_coords(d))} is not nef")
    c = _coords(d)
    deg = intersect(F, c)
    if deg == 1 and hasattr(surface, "sections"):
        for sec in surface.sections:
            rest = tuple(x - y for x, y in zip(c, sec.cls.coords))
            a = rest[0] // 3
            if a > 0 and tuple(a * x for x in F.coords) == rest:
                return NeedsSectionData(a, sec.label)
    if deg > 0:
        return 0
    a = c[0] // 3
    if a >= 0 and tuple(a * x for x in F.coords) == tuple(c):
        return a
    raise ValueError(f"nef class {DivisorClass.of(c)} with -K.D = 0 is not a fiber multiple")

"""Surfaces with a C*-action: continued fractions and Orlik-Wagreich graphs.

X_22, X_33, X_44 and X_11(a) carry a torus action. After a few equivariant
blow-ups their negative curves form an Orlik-Wagreich graph: two terminal
vertices joined by arms, each arm a chain whose negated self-intersections
form a Hirzebruch-Jung continued fraction equal to zero. The Cox rings are
stored as data; this module checks every numeric claim around them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

from .catalog import load_surface
from .groebner import Ideal, krull_dimension
from .multipoly import weighted_grevlex
from .picard import intersect
from .tables import GradedPresentation, load_reference

__all__ = [
    "POLE",
    "UNKNOWN",
    "hj_eval",
    "hj_solve_unknown",
    "parse_quotients",
    "OWVertex",
    "OWGraph",
    "ow_graph",
    "COMPLEXITY_ONE",
    "complexity_one_presentation",
    "ow_consistency",
]


class _Pole:
    def __repr__(self):
        return "POLE"

    __str__ = __repr__


POLE = _Pole()
UNKNOWN = None

Quotient = Union[int, Fraction, None]


def hj_eval(q: Sequence[Quotient]):
    """a1 - 1/(a2 - 1/(... - 1/an)) computed exactly, or POLE on division by zero."""
    if not q:
        raise ValueError("empty continued fraction")
    if any(a is None for a in q):
        raise ValueError("unknown partial quotient; use hj_solve_unknown")
    v = Fraction(q[-1])
    for a in reversed(q[:-1]):
        if v == 0:
            return POLE
        v = Fraction(a) - 1 / v
    return v


def _moebius(q: Sequence[Quotient]):
    """Coefficients (p, r, u, s) with value (p x + r) / (u x + s) in the unknown x."""
    # [a1, ..., an] is M(a1) ... M(an) applied to infinity, M(a) = [[a, -1], [1, 0]]
    # entries are kept as (coefficient of x, constant)
    one, zero = (Fraction(0), Fraction(1)), (Fraction(0), Fraction(0))
    m = [[one, zero], [zero, one]]
    for a in q:
        if a is None:
            step = [[(Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1))], [one, zero]]
        else:
            step = [[(Fraction(0), Fraction(a)), (Fraction(0), Fraction(-1))], [one, zero]]
        new = [[None, None], [None, None]]
        for i in range(2):
            for j in range(2):
                acc = [Fraction(0), Fraction(0), Fraction(0)]  # x^2, x, 1
                for k in range(2):
                    (a1, b1), (a2, b2) = m[i][k], step[k][j]
                    acc[0] += a1 * a2
                    acc[1] += a1 * b2 + b1 * a2
                    acc[2] += b1 * b2
                if acc[0]:
                    raise ValueError("unknown occurs twice")
                new[i][j] = (acc[1], acc[2])
        m = new
    (p, r), (u, s) = m[0][0], m[1][0]
    return p, r, u, s


def hj_solve_unknown(q: Sequence[Quotient], target=0) -> Optional[Fraction]:
    """Solve [.., x, ..] = target for the single unknown x (marked None).

    Returns None when no value works.
    """
    if sum(a is None for a in q) != 1:
        raise ValueError("exactly one unknown partial quotient is required")
    p, r, u, s = _moebius(q)
    t = Fraction(target)
    # (p x + r) = t (u x + s)
    lin, const = p - t * u, t * s - r
    if lin == 0:
        if const == 0:
            raise ValueError("degenerate equation: every value is a solution")
        return None
    x = const / lin
    filled = [x if a is None else a for a in q]
    if hj_eval(filled) != t:
        return None
    return x


def parse_quotients(text: str) -> List[Quotient]:
    """'2,1,2' or '[2, x, 2]' -> list of Fractions, None for x or ?."""
    body = text.strip().strip("[]")
    out: List[Quotient] = []
    for item in body.split(","):
        item = item.strip()
        if not item:
            raise ValueError(f"empty partial quotient in {text!r}")
        out.append(None if item in ("x", "?") else Fraction(item))
    return out


# ---------------------------------------------------------------------------
# Orlik-Wagreich graphs

@dataclass(frozen=True)
class OWVertex:
    square: int
    variable: Optional[str] = None  # None for the exceptional (white) vertices
    exceptional: bool = False


@dataclass
class OWGraph:
    name: str
    left: OWVertex
    right: OWVertex
    arms: List[List[OWVertex]]  # each arm runs from the left vertex to the right one

    def quotients(self) -> List[List[int]]:
        return [[-v.square for v in arm] for arm in self.arms]

    def vertices(self) -> List[OWVertex]:
        return [self.left] + [v for arm in self.arms for v in arm] + [self.right]

    def black_variables(self) -> List[str]:
        return [v.variable for v in self.vertices() if not v.exceptional]

    def edges(self):
        out = []
        for arm in self.arms:
            chain = [self.left] + arm + [self.right]
            out.extend(zip(chain, chain[1:]))
        return out

    def to_text(self) -> str:
        def tag(v):
            name = v.variable or "o"
            return f"{name}({v.square})"
        lines = [f"left {tag(self.left)}  right {tag(self.right)}"]
        for i, arm in enumerate(self.arms, 1):
            lines.append(f"arm {i}: " + " - ".join(tag(v) for v in arm))
        return "\n".join(lines)

    def to_json(self) -> str:
        def enc(v):
            return {"variable": v.variable, "square": v.square, "exceptional": v.exceptional}
        return json.dumps({"surface": self.name, "left": enc(self.left), "right": enc(self.right),
                           "arms": [[enc(v) for v in arm] for arm in self.arms]})


def _b(sq, var):
    return OWVertex(sq, var)


def _w(sq):
    return OWVertex(sq, None, True)


# vertex assignments: left vertex first, then the black vertices row by row
_GRAPHS = {
    "X_22": lambda: OWGraph(
        "X_22", _b(-2, "T7"), _w(-1),
        [[_b(-2, "T8"), _b(-2, "T9"), _b(-2, "T10"), _b(-2, "T11"), _b(-2, "T12"),
          _b(-1, "T13"), _b(-6, "T4")],
         [_b(-2, "T1"), _b(-1, "T3"), _w(-2)],
         [_b(-2, "T6"), _b(-2, "T5"), _b(-1, "T2"), _w(-3)]]),
    "X_33": lambda: OWGraph(
        "X_33", _b(-2, "T6"), _w(-1),
        [[_b(-2, "T1"), _b(-2, "T11"), _b(-2, "T12"), _b(-1, "T13"), _b(-4, "T2")],
         [_b(-2, "T5"), _b(-1, "T4"), _w(-2)],
         [_b(-2, "T7"), _b(-2, "T8"), _b(-2, "T9"), _b(-1, "T10"), _b(-4, "T3")]]),
    "X_44": lambda: OWGraph(
        "X_44", _b(-2, "T1"), _w(-1),
        [[_b(-2, "T5"), _b(-2, "T6"), _b(-1, "T7"), _b(-3, "T2")],
         [_b(-2, "T8"), _b(-2, "T9"), _b(-1, "T10"), _b(-3, "T3")],
         [_b(-2, "T11"), _b(-2, "T12"), _b(-1, "T13"), _b(-3, "T4")]]),
    "X_11": lambda: OWGraph(
        "X_11", _b(-2, "T12"), _b(-2, "T4"),
        [[_b(-2, "T1"), _b(-1, "T7"), _b(-2, "T6")],
         [_b(-2, "T2"), _b(-1, "T9"), _b(-2, "T8")],
         [_b(-2, "T3"), _b(-1, "T11"), _b(-2, "T10")],
         [_b(-2, "T13"), _b(-1, "T14"), _b(-2, "T5")]]),
}

COMPLEXITY_ONE = tuple(_GRAPHS)


def _canon(name: str) -> str:
    n = name.strip().replace("(a)", "")
    if not n.startswith("X_"):
        n = "X_" + n.lstrip("X")
    if n not in _GRAPHS:
        raise KeyError(f"{name!r} has no torus action; choose from {', '.join(COMPLEXITY_ONE)}")
    return n


def ow_graph(name: str) -> OWGraph:
    return _GRAPHS[_canon(name)]()


@dataclass
class ComplexityOnePresentation:
    presentation: GradedPresentation
    graph: OWGraph

    @property
    def ngenerators(self) -> int:
        return len(self.presentation.variables)

    @property
    def nrelations(self) -> int:
        return len(self.presentation.relations)


def complexity_one_presentation(name: str) -> ComplexityOnePresentation:
    n = _canon(name)
    pres = GradedPresentation.from_reference(load_reference(n))
    return ComplexityOnePresentation(pres, ow_graph(n))


def ow_consistency(name: str) -> List[str]:
    """Check an OW graph against its surface and stored presentation.

    Returns a list of failure messages (empty when consistent).
    """
    n = _canon(name)
    g = ow_graph(n)
    s = load_surface(n)
    pres = complexity_one_presentation(n).presentation
    fails = []
    for i, q in enumerate(g.quotients(), 1):
        if hj_eval(q) != 0:
            fails.append(f"arm {i}: [{','.join(map(str, q))}] = {hj_eval(q)}")
    black = g.black_variables()
    if sorted(black) != sorted(pres.variables):
        fails.append("black vertices do not match the generators")
    exceptional_neighbors = set()
    for a, b in g.edges():
        if a.exceptional and b.variable:
            exceptional_neighbors.add(b.variable)
        if b.exceptional and a.variable:
            exceptional_neighbors.add(a.variable)
    for v in g.vertices():
        if v.exceptional or not s.has_generator(v.variable):
            continue
        c = s.by_generator(v.variable)
        sq = c.cls.square
        # blowing up points on a curve lowers its square; untouched curves keep it
        if v.variable in exceptional_neighbors:
            if v.square >= sq:
                fails.append(f"{v.variable}: square {v.square} on the blow-up vs {sq}")
        elif v.square != sq:
            fails.append(f"{v.variable}: square {v.square} on the blow-up vs {sq}")
    for a, b in g.edges():
        if a.exceptional or b.exceptional:
            continue
        if s.has_generator(a.variable) and s.has_generator(b.variable):
            if intersect(s.by_generator(a.variable).cls, s.by_generator(b.variable).cls) < 1:
                fails.append(f"{a.variable} and {b.variable} are adjacent but disjoint")
    if not pres.is_homogeneous():
        fails.append("relations are not homogeneous")
    return fails


def presentation_dimension(name: str) -> int:
    """Krull dimension of the stored ideal of relations."""
    from .relations import grading_weights

    pres = complexity_one_presentation(name).presentation
    w = grading_weights([pres.degrees[v] for v in pres.variables])
    return krull_dimension(Ideal(pres.ring, pres.relations), weighted_grevlex(w))

"""Combinatorics of negative curves: graphs, orthogonal complements, conic bundles."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .catalog import Curve, SurfaceDescriptor, _solve
from .picard import F, RANK, DivisorClass, intersect, is_nef

__all__ = [
    "NegativeCurveGraph",
    "CurveSetShape",
    "ConicBundle",
    "CurveSetError",
    "curve_graph",
    "orthogonal_complement",
    "classify_curve_set",
    "generalized_minus_one_chains",
    "conic_fiber_supports",
    "conic_bundles",
    "conic_bundles_with_unique_reducible_fiber",
    "type_iv_generator_divisors",
    "type_iv_lattice_search",
]


class CurveSetError(ValueError):
    pass


@dataclass
class NegativeCurveGraph:
    labels: List[str]
    classes: Dict[str, DivisorClass]
    edges: Dict[Tuple[str, str], int]

    def neighbors(self, label: str) -> Dict[str, int]:
        out = {}
        for (a, b), w in self.edges.items():
            if a == label:
                out[b] = w
            elif b == label:
                out[a] = w
        return out

    def adjacency(self) -> Dict[str, Dict[str, int]]:
        adj = {v: {} for v in self.labels}
        for (a, b), w in self.edges.items():
            adj[a][b] = w
            adj[b][a] = w
        return adj

    def to_text(self) -> str:
        adj = self.adjacency()
        lines = []
        for v in self.labels:
            nb = " ".join(f"{u}" if w == 1 else f"{u}({w})" for u, w in adj[v].items())
            lines.append(f"{v} [{self.classes[v].square}]: {nb}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "vertices": [{"label": v, "square": self.classes[v].square,
                          "class": list(self.classes[v].coords)} for v in self.labels],
            "edges": [{"a": a, "b": b, "weight": w} for (a, b), w in self.edges.items()],
        }, indent=2)


def curve_graph(s: SurfaceDescriptor, curves: Optional[Sequence[Curve]] = None) -> NegativeCurveGraph:
    curves = list(s.curves if curves is None else curves)
    classes = {c.label: c.cls for c in curves}
    edges = {}
    for a, b in combinations(curves, 2):
        w = intersect(a.cls, b.cls)
        if w < 0:
            raise CurveSetError(f"distinct curves {a.label}, {b.label} meet negatively")
        if w:
            edges[(a.label, b.label)] = w
    return NegativeCurveGraph([c.label for c in curves], classes, edges)


def orthogonal_complement(d, s: SurfaceDescriptor, check: bool = False) -> List[Curve]:
    """Negative curves C with D.C = 0.

    With ``check`` the class must be nef and big.
    """
    d = d if isinstance(d, DivisorClass) else DivisorClass.of(d)
    if check:
        if not is_nef(d, s):
            raise CurveSetError(f"{d} is not nef")
        if d.square <= 0:
            raise CurveSetError(f"{d} is not big")
    return [c for c in s.curves if intersect(d, c.cls) == 0]


@dataclass(frozen=True)
class CurveSetShape:
    kind: str  # "generalized (-1)-curve", "generalized (-2)-curve" or "neither"
    chain: Tuple[str, ...] = ()  # ordered from the (-1)-curve when a chain
    dynkin: Optional[str] = None

    @property
    def length(self) -> int:
        return len(self.chain)


def _negative_definite(gram: List[List[int]]) -> bool:
    # Sylvester on -G via fraction-free elimination
    n = len(gram)
    m = [[Fraction(-x) for x in row] for row in gram]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return True


def _dynkin(adj: Dict[str, Dict[str, int]]) -> str:
    n = len(adj)
    degs = {v: len(nb) for v, nb in adj.items()}
    branch = [v for v, d in degs.items() if d == 3]
    if not branch:
        return f"A{n}"
    b = branch[0]
    legs = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[:2] == [1, 1]:
        return f"D{n}"
    return f"E{n}"


def classify_curve_set(curves: Sequence[Curve]) -> CurveSetShape:
    """Classify a connected negative definite set of negative curves."""
    curves = list(curves)
    if not curves:
        raise CurveSetError("empty curve set")
    gram = [[intersect(a.cls, b.cls) for b in curves] for a in curves]
    adj = {c.label: {} for c in curves}
    for i, j in combinations(range(len(curves)), 2):
        if gram[i][j]:
            adj[curves[i].label][curves[j].label] = gram[i][j]
            adj[curves[j].label][curves[i].label] = gram[i][j]
    seen, stack = set(), [curves[0].label]
    while stack:
        v = stack.pop()
        if v not in seen:
            seen.add(v)
            stack.extend(adj[v])
    if len(seen) != len(curves):
        raise CurveSetError("curve set is not connected")
    if not _negative_definite(gram):
        raise CurveSetError("intersection matrix is not negative definite")
    squares = {c.label: c.cls.square for c in curves}
    if all(q == -2 for q in squares.values()):
        return CurveSetShape("generalized (-2)-curve", dynkin=_dynkin(adj))
    ones = [v for v, q in squares.items() if q == -1]
    others_ok = all(q == -2 for v, q in squares.items() if v not in ones)
    is_chain = all(len(nb) <= 2 for nb in adj.values()) and all(
        w == 1 for nb in adj.values() for w in nb.values())
    if len(ones) == 1 and others_ok and is_chain and len(adj[ones[0]]) <= 1:
        order = [ones[0]]
        while len(order) < len(curves):
            nxt = [u for u in adj[order[-1]] if u not in order]
            order.append(nxt[0])
        return CurveSetShape("generalized (-1)-curve", tuple(order))
    return CurveSetShape("neither")


# ---------------------------------------------------------------------------
# chains and reducible conic fibers

def _induced_paths(s: SurfaceDescriptor, start: Curve, max_len: int):
    """Induced paths start, C1, C2, ... of (-2)-curves joined by simple edges."""
    comps = s.components
    out = []

    def grow(path):
        out.append(list(path))
        if len(path) == max_len:
            return
        last = path[-1]
        for c in comps:
            if c in path or intersect(c.cls, last.cls) != 1:
                continue
            if any(intersect(c.cls, p.cls) != 0 for p in path[:-1]):
                continue
            path.append(c)
            grow(path)
            path.pop()

    grow([start])
    return out


def generalized_minus_one_chains(s: SurfaceDescriptor, length: int) -> List[Tuple[Curve, ...]]:
    """Generalized (-1)-curves of the given length, ordered from the (-1)-curve."""
    out = []
    for sec in s.sections:
        for path in _induced_paths(s, sec, length):
            if len(path) == length:
                out.append(tuple(path))
    return out


@dataclass(frozen=True)
class ConicBundle:
    cls: DivisorClass
    supports: Tuple[Tuple[Tuple[str, int], ...], ...]  # one weighted support per reducible fiber

    @property
    def unique_reducible_fiber(self) -> bool:
        return len(self.supports) == 1

    def support_labels(self, i: int = 0) -> Dict[str, int]:
        return dict(self.supports[i])

    def __str__(self):
        parts = []
        for lab, m in self.supports[0]:
            parts.append(lab if m == 1 else f"{m}{lab}")
        return " + ".join(parts)


def _weighted_class(weights: Dict[str, int], s: SurfaceDescriptor) -> DivisorClass:
    total = DivisorClass((0,) * RANK)
    for lab, m in weights.items():
        total = total + s.curve(lab).cls * m
    return total


def conic_fiber_supports(s: SurfaceDescriptor) -> List[Dict[str, int]]:
    """Weighted curve sets shaped like a reducible conic-bundle fiber.

    Shape (a): a chain of (-2)-curves with a (-1)-curve at each end, all of
    multiplicity one. Shape (b): a (-1)-curve followed by a chain of
    (-2)-curves, all of multiplicity two, whose last member meets two further
    (-2)-curves of multiplicity one.
    """
    out = []
    seen = set()
    secs = s.sections
    for sec in secs:
        for path in _induced_paths(s, sec, 10):
            last = path[-1]
            if len(path) >= 2:
                # shape (a): close the chain with another section
                for other in secs:
                    if other is sec or secs.index(other) < secs.index(sec):
                        continue
                    if intersect(other.cls, last.cls) != 1:
                        continue
                    if any(intersect(other.cls, p.cls) != 0 for p in path[:-1]):
                        continue
                    w = {c.label: 1 for c in path}
                    w[other.label] = 1
                    key = frozenset(w.items())
                    if key not in seen:
                        seen.add(key)
                        out.append(w)
            # shape (b): fork at the end of the chain
            forks = [c for c in s.components if c not in path
                     and intersect(c.cls, last.cls) == 1
                     and all(intersect(c.cls, p.cls) == 0 for p in path[:-1])]
            for a, b in combinations(forks, 2):
                if intersect(a.cls, b.cls) != 0:
                    continue
                w = {c.label: 2 for c in path}
                w[a.label] = 1
                w[b.label] = 1
                key = frozenset(w.items())
                if key not in seen:
                    seen.add(key)
                    out.append(w)
    return out


def conic_bundles(s: SurfaceDescriptor) -> List[ConicBundle]:
    """Nef classes D with D^2 = 0, -K.D = 2 supported on a reducible conic fiber, grouped by class."""
    by_class: Dict[DivisorClass, List[Dict[str, int]]] = {}
    for w in conic_fiber_supports(s):
        d = _weighted_class(w, s)
        assert d.square == 0 and d.degree == 2, (s.name, w)
        if not is_nef(d, s):
            continue
        by_class.setdefault(d, []).append(w)
    order = {c.label: i for i, c in enumerate(s.curves)}
    out = []
    for d, ws in by_class.items():
        supports = tuple(tuple(sorted(w.items(), key=lambda kv: order[kv[0]])) for w in ws)
        out.append(ConicBundle(d, tuple(sorted(supports))))
    out.sort(key=lambda cb: [order[lab] for lab, _ in cb.supports[0]])
    return out


def conic_bundles_with_unique_reducible_fiber(s: SurfaceDescriptor) -> List[ConicBundle]:
    out = []
    for cb in conic_bundles(s):
        if not cb.unique_reducible_fiber:
            continue
        # a conic bundle on a surface of Picard rank 10 has 8 extra components in total
        if len(cb.supports[0]) != 9:
            raise CurveSetError(f"{s.name}: lone reducible fiber of {cb} has {len(cb.supports[0])} components")
        out.append(cb)
    return out


# ---------------------------------------------------------------------------
# type (iv) degrees

def _line_class_orthogonal_to(chain: Sequence[Curve]) -> Optional[DivisorClass]:
    """The class D with D.C = 0 on the chain, D^2 = 1 and -K.D = 3, if integral."""
    rows = [[intersect(c.cls, DivisorClass.of(_unit(i))) for i in range(RANK)] for c in chain]
    rows.append([intersect(F, DivisorClass.of(_unit(i))) for i in range(RANK)])
    sol = _solve(rows, [0] * len(chain) + [3])
    if sol is None or any(Fraction(x).denominator != 1 for x in sol):
        return None
    d = DivisorClass.of(int(x) for x in sol)
    return d if d.square == 1 else None


def _unit(i):
    v = [0] * RANK
    v[i] = 1
    return v


def _oriented(chain: Sequence[Curve], s: SurfaceDescriptor) -> bool:
    # the orbit of P0 + Th0 + Th1 + ... + Th7 under translations: indices climb by one
    fibers = {f.number: f.type.ncomponents for f in s.reducible_fibers}
    comps = chain[1:]
    n = fibers[comps[0].fiber]
    return all(b.index == (a.index + 1) % n for a, b in zip(comps, comps[1:]))


def type_iv_generator_divisors(s: SurfaceDescriptor, convention: str = "oriented") -> List[DivisorClass]:
    """Nef D with D^2 = 1, -K.D = 3 whose D-perp holds a generalized (-1)-curve of length nine.

    Each such chain contracts the surface to the plane and D is the pulled back
    line. With ``convention="oriented"`` only the Mordell-Weil orbit of the chain
    P0 + Th0 + ... + Th7 is used. ``"symmetric"`` keeps every chain, which on
    X_9111 adds the three images under fiberwise inversion.
    """
    if convention not in ("oriented", "symmetric"):
        raise ValueError(f"unknown convention {convention!r}")
    out = []
    for chain in generalized_minus_one_chains(s, 9):
        if convention == "oriented" and not _oriented(chain, s):
            continue
        d = _line_class_orthogonal_to(chain)
        if d is not None and is_nef(d, s) and d not in out:
            out.append(d)
    return out


def type_iv_lattice_search(s: SurfaceDescriptor, max_d0: int = 6, bound: int = 3) -> List[DivisorClass]:
    """Brute-force counterpart of type_iv_generator_divisors(convention="symmetric").

    Scans D = d0 e0 - sum a_i e_i with 0 < d0 <= max_d0 and 0 <= a_i <= bound.
    The a_i are nonnegative for nef D since every e_i is effective.
    """
    chains = generalized_minus_one_chains(s, 9)
    out = []
    for d0 in range(1, max_d0 + 1):
        target_sq = d0 * d0 - 1
        target_deg = 3 * d0 - 3

        def rec(i, acc, sq, deg):
            if sq > target_sq or deg > target_deg:
                return
            if i == RANK - 1:
                if sq == target_sq and deg == target_deg:
                    d = DivisorClass.of([d0] + [-a for a in acc])
                    if is_nef(d, s):
                        perp = {c.label for c in orthogonal_complement(d, s)}
                        if any(all(c.label in perp for c in ch) for ch in chains):
                            out.append(d)
                return
            for a in range(bound + 1):
                rec(i + 1, acc + [a], sq + a * a, deg + a)

        rec(0, [], 0, 0)
    return out

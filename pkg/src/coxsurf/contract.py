"""Blowing down negative curves on the level of Cox rings.

Setting the variables of contracted curves to 1 gives the Cox ring of the
contracted surface, graded by Cl(X)/K where K is spanned by the degrees of
those variables. Relations with a pure linear term then let a variable be
eliminated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .multipoly import Poly, PolyRing
from .picard import F, intersect
from .tables import GradedPresentation

__all__ = [
    "ContractError",
    "QuotientGrading",
    "smith_normal_form",
    "quotient_grading",
    "contract_cox",
    "eliminate_linear",
    "sign_twist",
    "apply_signs",
    "ContractedPresentation",
    "ContractionTarget",
    "CONTRACTIONS",
    "load_contraction",
    "compare_to_target",
    "contract_to_target",
]


class ContractError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(m: Sequence[Sequence[int]]):
    """Return (U, D, V) with U*M*V = D diagonal, U and V unimodular.

    The diagonal entries are nonnegative and each divides the next.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility of the remaining block
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                       if a[i][j] % a[t][t]]
                if not bad:
                    break
                add_row(bad[0][0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


@dataclass
class QuotientGrading:
    """Cl(X)/K as Z^free + sum Z/d, with the projection from Cl(X)."""

    free_rank: int
    torsion: List[int]
    projection: List[List[int]]  # rows: torsion coordinates first, then free ones

    def project(self, v: Sequence[int]) -> Tuple[int, ...]:
        out = []
        for k, row in enumerate(self.projection):
            x = sum(a * b for a, b in zip(row, v))
            if k < len(self.torsion):
                x %= self.torsion[k]
            out.append(x)
        return tuple(out)

    @property
    def invariants(self) -> List[int]:
        return list(self.torsion) + [0] * self.free_rank

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def quotient_grading(columns: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> QuotientGrading:
    """Z^n modulo the span of ``columns``, via the Smith normal form."""
    n = ambient_rank if ambient_rank is not None else (len(columns[0]) if columns else 0)
    if not columns:
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        return QuotientGrading(n, [], ident)
    m = [[c[i] for c in columns] for i in range(n)]
    u, d, _ = smith_normal_form(m)
    diag = [d[i][i] for i in range(min(n, len(columns)))]
    rank = sum(1 for x in diag if x)
    torsion_idx = [i for i in range(rank) if diag[i] > 1]
    proj = [u[i] for i in torsion_idx] + [u[i] for i in range(rank, n)]
    return QuotientGrading(n - rank, [diag[i] for i in torsion_idx], proj)


# ---------------------------------------------------------------------------
# contraction and elimination

def _index(name: str):
    m = re.search(r"(\d+)$", name)
    return (int(m.group(1)) if m else 10 ** 9, name)


@dataclass
class ContractedPresentation:
    """A presentation whose degrees live in Cl(X)/K for a recorded K."""

    base: GradedPresentation
    killed: List[str] = field(default_factory=list)

    @property
    def ring(self) -> PolyRing:
        return self.base.ring

    @property
    def relations(self) -> List[Poly]:
        return self.base.relations

    @property
    def variables(self) -> List[str]:
        return self.base.variables

    def grading(self) -> QuotientGrading:
        cols = [self._ambient[k] for k in self.killed]
        return quotient_grading(cols, len(next(iter(self._ambient.values()))))

    @property
    def _ambient(self) -> Dict[str, tuple]:
        return self.base.degrees

    def degree(self, var: str) -> Tuple[int, ...]:
        return self.grading().project(self._ambient[var])

    def is_homogeneous(self) -> bool:
        g = self.grading()
        for p in self.relations:
            seen = set()
            for mono in p.terms:
                tot = [0] * len(next(iter(self._ambient.values())))
                for n, e in zip(self.ring.names, mono):
                    if e:
                        tot = [x + e * y for x, y in zip(tot, self._ambient[n])]
                seen.add(g.project(tot))
            if len(seen) > 1:
                return False
        return True


def _as_contracted(p) -> ContractedPresentation:
    if isinstance(p, ContractedPresentation):
        return p
    return ContractedPresentation(p, [])


def contract_cox(p, removed: Sequence[str], check_curves: bool = True) -> ContractedPresentation:
    """Set the variables in ``removed`` to 1.

    With ``check_curves`` each removed variable must have the degree of a
    (-1)- or (-2)-curve, read off in the e-basis.
    """
    cp = _as_contracted(p)
    removed = list(removed)
    if not removed:
        return cp
    base = cp.base
    for v in removed:
        if v not in base.ring.index:
            raise ContractError(f"{v} is not a generator")
        if check_curves:
            d = base.degrees[v]
            sq, deg = intersect(d, d), intersect(F, d)
            if (sq, deg) not in ((-1, 1), (-2, 0)):
                raise ContractError(f"{v} does not define a negative curve")
    keep = [n for n in base.ring.names if n not in removed]
    ring = PolyRing(keep, base.ring.field)
    rels = []
    for r in base.relations:
        q = r.evaluate_at_one(removed)
        if q:
            rels.append(ring.convert(q))
    new = GradedPresentation(base.name, ring, {n: base.degrees[n] for n in keep} | {
        n: base.degrees[n] for n in cp.killed + removed}, rels)
    return ContractedPresentation(new, cp.killed + removed)


def _linear_candidates(rel: Poly):
    out = []
    names = rel.ring.names
    for mono, c in rel.terms.items():
        if sum(mono) != 1:
            continue
        i = mono.index(1)
        v = names[i]
        if any(m[i] for m in rel.terms if m != mono):
            continue
        out.append((v, c))
    return out


def eliminate_linear(p) -> ContractedPresentation:
    """Solve relations with a pure linear term for that variable, lowest index first."""
    cp = _as_contracted(p)
    while True:
        best = None
        for k, rel in enumerate(cp.relations):
            for v, c in _linear_candidates(rel):
                if best is None or _index(v) < _index(best[0]):
                    best = (v, c, k)
        if best is None:
            return cp
        v, c, k = best
        base = cp.base
        rel = base.relations[k]
        x = base.ring.var(v)
        # rel = c*v + rest  =>  v = -rest / c
        solution = (rel - x.scale(c)).scale(-base.ring.field.one / c)
        keep = [n for n in base.ring.names if n != v]
        ring = PolyRing(keep, base.ring.field)
        assignment = {n: base.ring.var(n) for n in base.ring.names}
        assignment[v] = solution
        rels = []
        for j, r in enumerate(base.relations):
            if j == k:
                continue
            q = r.substitute(assignment, base.ring)
            if q:
                rels.append(ring.convert(q))
        degrees = dict(base.degrees)
        new = GradedPresentation(base.name, ring, degrees, rels)
        cp = ContractedPresentation(new, list(cp.killed))


# ---------------------------------------------------------------------------
# comparing presentations up to signs of variables

def _gf2_solve(rows: List[List[int]], rhs: List[int]) -> Optional[List[int]]:
    n = len(rows[0]) if rows else 0
    a = [r[:] + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                a[i] = [x ^ y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] and not any(row[:-1]) for row in a):
        return None
    x = [0] * n
    for i, c in enumerate(piv_cols):
        x[c] = a[i][-1]
    return x


def sign_twist(f: Poly, g: Poly) -> Optional[Dict[str, int]]:
    """Signs s_v = +-1 and a sign c with f(s*T) = c*g(T), or None.

    Solved as a linear system over GF(2) in the exponents' parities.
    """
    if f.ring != g.ring or set(f.terms) != set(g.terms):
        return None
    names = f.ring.names
    rows, rhs = [], []
    for mono, a in f.terms.items():
        b = g.terms[mono]
        ratio = a / b
        if ratio not in (1, -1):
            return None
        rows.append([e % 2 for e in mono] + [1])
        rhs.append(0 if ratio == 1 else 1)
    sol = _gf2_solve(rows, rhs)
    if sol is None:
        return None
    return {n: -1 for n, bit in zip(names, sol[:-1]) if bit}


def apply_signs(f: Poly, signs: Dict[str, int]) -> Poly:
    ring = f.ring
    assignment = {n: ring.var(n).scale(signs.get(n, 1)) for n in ring.names}
    return f.substitute(assignment, ring)


# ---------------------------------------------------------------------------
# stored contraction targets

@dataclass
class ContractionTarget:
    name: str
    source: str
    removed: List[str]
    variables: List[str]
    relation_texts: List[str]
    grading: Optional[str] = None

    def ring(self, field_=None) -> PolyRing:
        from .exactfield import QQ
        return PolyRing(self.variables, field_ or QQ)

    def relations(self, ring: Optional[PolyRing] = None) -> List[Poly]:
        ring = ring or self.ring()
        return [ring.parse(t) for t in self.relation_texts]


CONTRACTIONS = ("Y_cayley_resolved", "Y_cayley", "Y_0", "Y_1")


def load_contraction(name: str, data: Optional[str] = None) -> ContractionTarget:
    from .catalog import data_dir
    path = data_dir(data) / "contractions" / f"{name}.txt"
    if not path.exists():
        raise KeyError(f"unknown contraction {name!r}; choose from {', '.join(CONTRACTIONS)}")
    header: Dict[str, str] = {}
    rels: List[str] = []
    section = None
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]")
        elif section == "relations":
            rels.append(line)
        else:
            k, _, v = line.partition("=")
            header[k.strip()] = v.strip()
    return ContractionTarget(header["name"], header["source"], header["removed"].split(),
                             header["variables"].split(), rels, header.get("grading"))


def compare_to_target(cp: ContractedPresentation, target: ContractionTarget,
                      budget: Optional[int] = None) -> Tuple[bool, Dict[str, int]]:
    """Whether the contracted ideal equals the stored one, possibly after T_v -> -T_v.

    Returns (equal, signs) with the sign changes that were needed.
    """
    from .groebner import DEFAULT_BUDGET, Ideal, ideals_equal
    from .multipoly import weighted_grevlex
    from .relations import grading_weights

    if sorted(cp.variables, key=_index) != sorted(target.variables, key=_index):
        return False, {}
    ring = PolyRing(target.variables, cp.ring.field)
    mine = [ring.convert(p) for p in cp.relations]
    theirs = target.relations(ring)
    w = weighted_grevlex(grading_weights([cp.base.degrees[v] for v in ring.names]))
    kw = {"budget": budget or DEFAULT_BUDGET}
    if ideals_equal(Ideal(ring, mine), Ideal(ring, theirs), w, **kw):
        return True, {}
    if len(mine) == 1 and len(theirs) == 1:
        signs = sign_twist(mine[0], theirs[0])
        if signs is not None:
            twisted = apply_signs(mine[0], signs)
            return ideals_equal(Ideal(ring, [twisted]), Ideal(ring, theirs), w, **kw), signs
    return False, {}


def contract_to_target(name: str, data: Optional[str] = None):
    """Run the stored contraction ``name`` from its source surface.

    Two-stage targets (those whose removed set contains a smaller stored
    target's) are reached by contracting in stages, eliminating after each.
    """
    from .tables import load_reference

    target = load_contraction(name, data)
    pres = GradedPresentation.from_reference(load_reference(target.source, data))
    stages = [target.removed]
    for other in CONTRACTIONS:
        o = load_contraction(other, data)
        if o.name != name and o.source == target.source and set(o.removed) < set(target.removed):
            stages = [o.removed, [v for v in target.removed if v not in o.removed]]
    cp = _as_contracted(pres)
    for st in stages:
        cp = eliminate_linear(contract_cox(cp, st))
    return cp, target

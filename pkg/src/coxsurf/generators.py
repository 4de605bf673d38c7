"""Minimal generating degrees of the Cox ring and their degree matrices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .catalog import SurfaceDescriptor, _solve
from .curves import conic_bundles_with_unique_reducible_fiber, type_iv_generator_divisors
from .picard import F, RANK, DivisorClass
from .tables import ReferencePresentation, load_reference

__all__ = [
    "KINDS",
    "Generator",
    "GeneratorSet",
    "DegreeMatrix",
    "MatchError",
    "minimal_generators",
    "degree_matrix",
    "match_degree_matrix",
    "reference_degree_matrix",
]

KINDS = (
    "(-1)-curve",
    "(-2)-curve",
    "conic-bundle smooth fiber",
    "smooth fiber of pi",
    "type-(iv)",
)


class MatchError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    label: str
    kind: str
    cls: DivisorClass
    variable: Optional[str] = None  # Cox-ring variable in the reference presentation

    @property
    def degree(self) -> tuple:
        return self.cls.coords


@dataclass
class GeneratorSet:
    surface: str
    entries: List[Generator]
    exceptional: List[str]  # labels of the S-variables

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_label(self, label: str) -> Generator:
        for g in self.entries:
            if g.label == label:
                return g
        raise KeyError(label)

    def by_variable(self, var: str) -> Generator:
        for g in self.entries:
            if g.variable == var:
                return g
        raise KeyError(var)

    @property
    def non_exceptional(self) -> List[Generator]:
        return [g for g in self.entries if g.label not in self.exceptional]

    def counts(self) -> Dict[str, int]:
        out = {k: 0 for k in KINDS}
        for g in self.entries:
            out[g.kind] += 1
        return out

    def to_json(self) -> dict:
        return {
            "surface": self.surface,
            "generators": [{"label": g.label, "kind": g.kind, "degree": list(g.degree)}
                           for g in self.entries],
        }


@dataclass
class DegreeMatrix:
    labels: List[str]
    kinds: List[str]
    rows: List[List[int]]
    basis: str  # "e" or "s"

    @property
    def ncols(self) -> int:
        return len(self.labels)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def to_text(self) -> str:
        width = max(len(str(x)) for r in self.rows for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.rows)

    def to_json(self) -> str:
        return json.dumps({"basis": self.basis, "labels": self.labels, "rows": self.rows})


def minimal_generators(s: SurfaceDescriptor, ref: Optional[ReferencePresentation] = None,
                       convention: str = "oriented") -> GeneratorSet:
    """Degrees of a minimal generating set of distinguished sections.

    Negative curves, -K when the fibration has one reducible fiber, one class
    per conic bundle with a unique reducible fiber, and the type-(iv) classes.
    """
    entries = [Generator(c.label, c.kind, c.cls, c.generator) for c in s.curves]
    if len(s.reducible_fibers) == 1:
        entries.append(Generator("F", "smooth fiber of pi", F))
    for i, cb in enumerate(conic_bundles_with_unique_reducible_fiber(s), 1):
        entries.append(Generator(f"Q{i}", "conic-bundle smooth fiber", cb.cls))
    for i, d in enumerate(type_iv_generator_divisors(s, convention), 1):
        entries.append(Generator(f"L{i}", "type-(iv)", d))
    if ref is None:
        try:
            ref = load_reference(s.name)
        except Exception:
            ref = None
    exceptional: List[str] = []
    if ref is not None:
        entries = _attach_variables(entries, ref)
        exceptional = [g.label for g in entries if g.variable in ref.s_vars]
    return GeneratorSet(s.name, entries, exceptional)


def _attach_variables(entries: List[Generator], ref: ReferencePresentation) -> List[Generator]:
    # curves carry their variable already; the rest are identified by degree
    cols = ref.columns()
    taken = {g.variable for g in entries if g.variable}
    out = []
    for g in entries:
        if g.variable is None:
            hits = [v for v, c in cols.items() if c == g.cls.coords and v not in taken]
            if hits:
                g = Generator(g.label, g.kind, g.cls, hits[0])
                taken.add(hits[0])
        out.append(g)
    return out


def _s_basis_coordinates(gset: GeneratorSet) -> List[List[Fraction]]:
    """Columns of the S-degrees restricted to e1..e9, checked to be unimodular."""
    s_cols = [gset.by_label(l).cls for l in gset.exceptional]
    if len(s_cols) != RANK - 1:
        raise ValueError(f"{gset.surface}: need 9 exceptional generators, have {len(s_cols)}")
    if any(c[0] != 0 for c in s_cols):
        raise ValueError(f"{gset.surface}: exceptional degrees must lie in K_S")
    return [[c[i] for c in s_cols] for i in range(1, RANK)]


def degree_matrix(gset: GeneratorSet, basis: str = "e") -> DegreeMatrix:
    """Degree matrix with one column per generator.

    ``basis="e"`` gives raw coordinates in e0..e9. ``basis="s"`` keeps the
    e0 row and rewrites the rest in the basis of S-degrees, so that S-columns
    become unit vectors.
    """
    labels = [g.label for g in gset]
    kinds = [g.kind for g in gset]
    if basis == "e":
        rows = [[g.cls[i] for g in gset] for i in range(RANK)]
        return DegreeMatrix(labels, kinds, rows, "e")
    if basis != "s":
        raise ValueError(f"unknown basis {basis!r}")
    m = _s_basis_coordinates(gset)
    rows = [[g.cls[0] for g in gset]] + [[0] * len(labels) for _ in range(RANK - 1)]
    for j, g in enumerate(gset):
        sol = _solve(m, [g.cls[i] for i in range(1, RANK)])
        if sol is None:
            raise ValueError(f"{gset.surface}: S-degrees are not a basis")
        for i, x in enumerate(sol):
            if Fraction(x).denominator != 1:
                raise ValueError(f"{gset.surface}: S-degrees are not a Z-basis")
            rows[i + 1][j] = int(x)
    return DegreeMatrix(labels, kinds, rows, "s")


def reference_degree_matrix(ref: ReferencePresentation) -> DegreeMatrix:
    return DegreeMatrix(list(ref.variables), [None] * len(ref.variables),
                        [list(r) for r in ref.matrix], "e")


def match_degree_matrix(computed: DegreeMatrix, reference: DegreeMatrix,
                       fixed: Optional[Dict[int, int]] = None,
                       row_perm: Optional[Sequence[int]] = None) -> List[int]:
    """Column permutation ``p`` with computed column j equal to reference column p[j].

    ``fixed`` pins some columns (computed index -> reference index), for
    generators whose variable the reference names explicitly. ``row_perm``
    reorders the reference rows first.
    """
    if len(computed.rows) != len(reference.rows) or computed.ncols != reference.ncols:
        raise MatchError("matrices have different shapes")
    ref_rows = reference.rows if row_perm is None else [reference.rows[i] for i in row_perm]
    ref_cols = [tuple(r[j] for r in ref_rows) for j in range(reference.ncols)]
    fixed = dict(fixed or {})
    candidates = []
    for j in range(computed.ncols):
        col = computed.column(j)
        if j in fixed:
            opts = [fixed[j]] if ref_cols[fixed[j]] == col else []
        else:
            opts = [k for k, c in enumerate(ref_cols) if c == col]
        if not opts:
            raise MatchError(f"column {computed.labels[j]} has no partner")
        candidates.append(opts)
    perm: List[int] = []
    used = set()

    def assign(j):
        if j == len(candidates):
            return True
        for k in candidates[j]:
            if k not in used:
                used.add(k)
                perm.append(k)
                if assign(j + 1):
                    return True
                perm.pop()
                used.discard(k)
        return False

    if not assign(0):
        raise MatchError("no column permutation equates the matrices")
    return perm

"""Reference Cox-ring presentations shipped under ``data/coxrings``.

Each file holds the degree matrix (rows e0..e9, one column per generator),
the printed relations and, where known, the plane sections s_i that the
non-exceptional generators map to.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional

from .catalog import CatalogError, canonical_name, data_dir
from .exactfield import QQ, QQ_EPS
from .multipoly import Poly, PolyRing

__all__ = ["ReferencePresentation", "GradedPresentation", "load_reference", "parse_reference"]


@dataclass
class ReferencePresentation:
    name: str
    field_name: str
    params: Dict[str, Fraction]
    t_vars: List[str]
    s_vars: List[str]
    matrix: List[List[int]]
    relation_texts: List[str]
    section_texts: Dict[str, str] = field(default_factory=dict)
    sections_derived: bool = False
    errata: Dict[int, str] = field(default_factory=dict)  # 1-based relation index -> printed text

    @property
    def variables(self) -> List[str]:
        return self.t_vars + self.s_vars

    @property
    def field(self):
        return QQ_EPS if self.field_name == "QQ(e)" else QQ

    def column(self, var: str) -> tuple:
        j = self.variables.index(var)
        return tuple(row[j] for row in self.matrix)

    def columns(self) -> Dict[str, tuple]:
        return {v: self.column(v) for v in self.variables}

    def ring(self) -> PolyRing:
        return PolyRing(self.variables, self.field)

    def relations(self, ring: Optional[PolyRing] = None) -> List[Poly]:
        ring = ring or self.ring()
        return [_parse(t, ring, self.params) for t in self.relation_texts]

    def printed_relations(self, ring: Optional[PolyRing] = None) -> List[Poly]:
        """Relations as printed, before the corrections listed under [errata]."""
        ring = ring or self.ring()
        texts = [self.errata.get(i, t) for i, t in enumerate(self.relation_texts, 1)]
        return [_parse(t, ring, self.params) for t in texts]

    def has_sections(self) -> bool:
        return bool(self.section_texts)

    def sections(self) -> List[Poly]:
        plane = PolyRing(["x0", "x1", "x2"], self.field)
        return [_parse(self.section_texts[v], plane, self.params) for v in self.t_vars]


def _parse(text: str, ring: PolyRing, params: Dict[str, Fraction]) -> Poly:
    names = [n for n in params if n not in ring.index]
    if not names:
        return ring.parse(text)
    big = PolyRing(list(ring.names) + names, ring.field)
    p = big.parse(text)
    assignment = {n: ring.var(n) for n in ring.names}
    for n in names:
        assignment[n] = ring.const(params[n])
    return p.substitute(assignment, ring)


def parse_reference(text: str) -> ReferencePresentation:
    header: Dict[str, str] = {}
    section = None
    matrix: List[List[int]] = []
    relations: List[str] = []
    sections: Dict[str, str] = {}
    errata: Dict[int, str] = {}
    derived = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]").strip()
            if section == "sections derived":
                section, derived = "sections", True
            continue
        if section is None:
            k, _, v = line.partition("=")
            header[k.strip()] = v.strip()
        elif section == "matrix":
            matrix.append([int(x) for x in line.split()])
        elif section == "relations":
            if relations and relations[-1].endswith(("+", "-")):
                relations[-1] += " " + line
            else:
                relations.append(line)
        elif section == "sections":
            k, _, v = line.partition("=")
            sections[k.strip()] = v.strip()
        elif section == "errata":
            k, _, v = line.partition("=")
            errata[int(k)] = v.strip()
        else:
            raise CatalogError(f"unknown section [{section}]")
    params = {}
    if header.get("params"):
        for item in header["params"].split(","):
            k, _, v = item.partition("=")
            params[k.strip()] = Fraction(v.strip())
    ref = ReferencePresentation(
        name=header["name"],
        field_name=header.get("field", "QQ"),
        params=params,
        t_vars=header["T"].split(),
        s_vars=header["S"].split(),
        matrix=matrix,
        relation_texts=relations,
        section_texts=sections,
        sections_derived=derived,
        errata=errata,
    )
    width = len(ref.variables)
    if len(matrix) != 10 or any(len(r) != width for r in matrix):
        raise CatalogError(f"{ref.name}: degree matrix must be 10 x {width}")
    return ref


@lru_cache(maxsize=None)
def _load(name: str, root: str) -> ReferencePresentation:
    path = data_dir(root or None) / "coxrings" / f"{name}.txt"
    try:
        return parse_reference(path.read_text())
    except FileNotFoundError:
        raise CatalogError(f"missing reference file {path}") from None


def load_reference(name: str, data: Optional[str] = None) -> ReferencePresentation:
    n = canonical_name(name)
    return _load(n, str(data_dir(data)))


@dataclass
class GradedPresentation:
    """Generators with degrees in an abelian group Z^r + sum Z/d_i, and relations.

    ``invariants`` lists one entry per degree coordinate: 0 for a free
    factor, d > 1 for a torsion factor Z/d.
    """

    name: str
    ring: PolyRing
    degrees: Dict[str, tuple]
    relations: List[Poly]
    invariants: List[int] = field(default_factory=lambda: [0] * 10)

    @property
    def variables(self) -> List[str]:
        return list(self.ring.names)

    def reduce_degree(self, deg) -> tuple:
        return tuple(x % d if d else x for x, d in zip(deg, self.invariants))

    def degree_of_monomial(self, mono) -> tuple:
        tot = [0] * len(self.invariants)
        for n, e in zip(self.ring.names, mono):
            if e:
                for i, x in enumerate(self.degrees[n]):
                    tot[i] += e * x
        return self.reduce_degree(tot)

    def is_homogeneous(self) -> bool:
        for p in self.relations:
            if len({self.degree_of_monomial(m) for m in p.terms}) > 1:
                return False
        return True

    @classmethod
    def from_reference(cls, ref: "ReferencePresentation") -> "GradedPresentation":
        ring = ref.ring()
        return cls(ref.name, ring, ref.columns(), ref.relations(ring))

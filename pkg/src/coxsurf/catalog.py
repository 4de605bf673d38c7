"""The sixteen extremal rational elliptic surfaces as data.

Each surface is described by a text file under ``data/surfaces``: its fiber
configuration, Mordell-Weil group, cubic pencil, and every negative curve
with its class in the basis e0..e9 and the Cox-ring variable defining it.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from math import gcd
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .exactfield import QQ, QQ_EPS
from .multipoly import Poly, PolyRing
from .picard import F, RANK, DivisorClass, intersect

__all__ = [
    "SURFACE_NAMES",
    "KodairaFiberType",
    "fiber_type",
    "Curve",
    "Fiber",
    "SurfaceDescriptor",
    "ValidationReport",
    "CatalogError",
    "UnknownSurfaceError",
    "data_dir",
    "load_surface",
    "load_all",
    "parse_surface",
    "validate_surface",
    "pencil_member",
    "mw_sum",
    "triv_lattice_coordinates",
    "height_contribution",
]

SURFACE_NAMES = (
    "X_22", "X_211", "X_411", "X_9111", "X_33", "X_321", "X_8211", "X_44",
    "X_431", "X_222", "X_141", "X_6321", "X_11", "X_5511", "X_4422", "X_3333",
)

ENV_VAR = "COXSURF_DATA"


class CatalogError(ValueError):
    """Malformed or inconsistent catalog data."""


class UnknownSurfaceError(KeyError):
    pass


# ---------------------------------------------------------------------------
# Kodaira fibers


@dataclass(frozen=True)
class KodairaFiberType:
    tag: str
    multiplicities: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]  # (i, j, intersection number)
    euler: int
    group: Tuple[int, ...]  # invariant factors of the component group
    simple: Dict[int, Tuple[int, ...]] = field(default_factory=dict, compare=False, hash=False)

    @property
    def ncomponents(self) -> int:
        return len(self.multiplicities)

    @property
    def reducible(self) -> bool:
        return self.ncomponents > 1

    def adjacency(self) -> Dict[int, Dict[int, int]]:
        adj = {i: {} for i in range(self.ncomponents)}
        for i, j, w in self.edges:
            adj[i][j] = w
            adj[j][i] = w
        return adj

    def component_group_element(self, i: int) -> Tuple[int, ...]:
        """Image of the simple component i in the component group."""
        if i not in self.simple:
            raise ValueError(f"component {i} of {self.tag} is not simple")
        return self.simple[i]


@lru_cache(maxsize=None)
def fiber_type(tag: str) -> KodairaFiberType:
    """Component graph and multiplicities of a Kodaira fiber."""
    if tag == "II":
        return KodairaFiberType("II", (1,), (), 2, ())
    if tag == "III":
        return KodairaFiberType("III", (1, 1), ((0, 1, 2),), 3, (2,), {0: (0,), 1: (1,)})
    if tag == "IV":
        return KodairaFiberType("IV", (1, 1, 1), ((0, 1, 1), (1, 2, 1), (0, 2, 1)), 4, (3,),
                                {0: (0,), 1: (1,), 2: (2,)})
    if tag == "IV*":
        edges = ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (2, 5, 1), (5, 6, 1))
        return KodairaFiberType("IV*", (1, 2, 3, 2, 1, 2, 1), edges, 8, (3,),
                                {0: (0,), 4: (1,), 6: (2,)})
    if tag == "III*":
        edges = tuple((i, i + 1, 1) for i in range(6)) + ((3, 7, 1),)
        return KodairaFiberType("III*", (1, 2, 3, 4, 3, 2, 1, 2), edges, 9, (2,),
                                {0: (0,), 6: (1,)})
    if tag == "II*":
        edges = tuple((i, i + 1, 1) for i in range(7)) + ((5, 8, 1),)
        return KodairaFiberType("II*", (1, 2, 3, 4, 5, 6, 4, 2, 3), edges, 10, (), {0: ()})
    m = re.fullmatch(r"I(\d+)(\*?)", tag)
    if not m:
        raise CatalogError(f"unknown Kodaira type {tag!r}")
    n = int(m.group(1))
    if m.group(2):
        mult = (1, 1) + (2,) * (n + 1) + (1, 1)
        edges = [(0, 2, 1), (1, 2, 1)]
        edges += [(i, i + 1, 1) for i in range(2, n + 2)]
        edges += [(n + 2, n + 3, 1), (n + 2, n + 4, 1)]
        if n % 2 == 0:
            simple = {0: (0, 0), 1: (1, 0), n + 3: (0, 1), n + 4: (1, 1)}
            group = (2, 2)
        else:
            simple = {0: (0,), 1: (2,), n + 3: (1,), n + 4: (3,)}
            group = (4,)
        return KodairaFiberType(tag, mult, tuple(edges), n + 6, group, simple)
    if n < 1:
        raise CatalogError("I_n needs n >= 1")
    if n == 1:
        return KodairaFiberType("I1", (1,), (), 1, ())
    if n == 2:
        edges = ((0, 1, 2),)
    else:
        edges = tuple((i, (i + 1) % n, 1) for i in range(n))
    return KodairaFiberType(tag, (1,) * n, edges, n, (n,), {i: (i,) for i in range(n)})


def group_add(group: Sequence[int], a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    return tuple((x + y) % n for x, y, n in zip(a, b, group))


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Curve:
    label: str
    cls: DivisorClass
    generator: str  # Cox-ring variable defining the curve
    fiber: Optional[int] = None  # 1-based reducible-fiber index for components
    index: Optional[int] = None  # Theta index inside the fiber

    @property
    def kind(self) -> str:
        return "(-2)-curve" if self.fiber is not None else "(-1)-curve"

    @property
    def is_section(self) -> bool:
        return self.fiber is None


@dataclass
class Fiber:
    number: int  # position in the reducible-fiber numbering
    type: KodairaFiberType
    components: List[Curve]

    def component(self, i: int) -> Curve:
        for c in self.components:
            if c.index == i:
                return c
        raise KeyError(i)

    def weighted_sum(self) -> DivisorClass:
        total = DivisorClass((0,) * RANK)
        for c in self.components:
            total = total + c.cls * self.type.multiplicities[c.index]
        return total


@dataclass
class SurfaceDescriptor:
    name: str
    fiber_tags: List[str]
    mw: Tuple[int, int]
    pencil: Tuple[str, str]
    field_name: str
    params: Dict[str, Fraction]
    curves: List[Curve]
    incidences: List[Tuple[str, str, int]]
    mw_elements: Dict[str, Tuple[int, int]]

    # derived views --------------------------------------------------------
    def __post_init__(self):
        self._by_label = {c.label: c for c in self.curves}
        self._by_generator = {c.generator: c for c in self.curves}

    @property
    def sections(self) -> List[Curve]:
        return [c for c in self.curves if c.is_section]

    @property
    def components(self) -> List[Curve]:
        return [c for c in self.curves if not c.is_section]

    @property
    def mw_order(self) -> int:
        return self.mw[0] * self.mw[1]

    @property
    def reducible_fibers(self) -> List[Fiber]:
        types = [fiber_type(t) for t in self.fiber_tags]
        out = []
        j = 0
        for ft in types:
            if not ft.reducible:
                continue
            j += 1
            comps = sorted((c for c in self.curves if c.fiber == j), key=lambda c: c.index)
            out.append(Fiber(j, ft, comps))
        return out

    def curve(self, label: str) -> Curve:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"{self.name} has no curve {label!r}") from None

    def by_generator(self, var: str) -> Curve:
        return self._by_generator[var]

    def has_generator(self, var: str) -> bool:
        return var in self._by_generator

    @property
    def euler_sum(self) -> int:
        return sum(fiber_type(t).euler for t in self.fiber_tags)

    def section_label(self, a: int, b: int) -> str:
        for lab, (x, y) in self.mw_elements.items():
            if (x, y) == (a % self.mw[0], b % self.mw[1]):
                return lab
        raise KeyError((a, b))

    def mw_add(self, p: str, q: str) -> str:
        a1, b1 = self.mw_elements[p]
        a2, b2 = self.mw_elements[q]
        return self.section_label(a1 + a2, b1 + b2)

    def pencil_ring(self) -> PolyRing:
        fld = QQ_EPS if self.field_name == "QQ(e)" else QQ
        return PolyRing(["x0", "x1", "x2"], fld)

    def pencil_forms(self) -> Tuple[Poly, Poly]:
        ring = self.pencil_ring()
        return tuple(_parse_with_params(s, ring, self.params) for s in self.pencil)


def _parse_with_params(text: str, ring: PolyRing, params: Dict[str, Fraction]) -> Poly:
    if not params:
        return ring.parse(text)
    big = PolyRing(list(ring.names) + sorted(params), ring.field)
    p = big.parse(text)
    assignment = {n: ring.var(n) for n in ring.names}
    for k, v in params.items():
        assignment[k] = ring.const(v)
    return p.substitute(assignment, ring)


# ---------------------------------------------------------------------------
# file format


_CURVE_LINE = re.compile(r"^(\S+)\s*:\s*\[([^\]]*)\]\s*(\S+)\s*$")


def parse_surface(text: str) -> SurfaceDescriptor:
    header: Dict[str, str] = {}
    section = None
    curves: List[Curve] = []
    incidences: List[Tuple[str, str, int]] = []
    mw_elements: Dict[str, Tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        try:
            if section is None:
                key, _, value = line.partition("=")
                if not _:
                    raise CatalogError("expected key = value")
                header[key.strip()] = value.strip()
            elif section == "curves":
                m = _CURVE_LINE.match(line)
                if not m:
                    raise CatalogError("expected 'label : [10 ints] variable'")
                label, coords, var = m.groups()
                vec = DivisorClass(tuple(int(x) for x in coords.split(",")))
                fib = idx = None
                cm = re.fullmatch(r"Th(\d+)\.(\d+)", label)
                if cm:
                    idx, fib = int(cm.group(1)), int(cm.group(2))
                elif not re.fullmatch(r"P\d+(\+Q\d+)?|Q\d+", label):
                    raise CatalogError(f"bad curve label {label!r}")
                curves.append(Curve(label, vec, var, fib, idx))
            elif section == "incidences":
                a, b, n = line.split()
                incidences.append((a, b, int(n)))
            elif section == "mw":
                label, _, coords = line.partition("=")
                a, b = (int(x) for x in coords.split())
                mw_elements[label.strip()] = (a, b)
            else:
                raise CatalogError(f"unknown section [{section}]")
        except (ValueError, CatalogError) as exc:
            raise CatalogError(f"line {lineno}: {exc}: {raw!r}") from None
    for key in ("name", "fibers", "mw", "pencil"):
        if key not in header:
            raise CatalogError(f"missing header field {key!r}")
    mw = tuple(int(x) for x in header["mw"].split())
    if len(mw) == 1:
        mw = (mw[0], 1)
    pa, _, pb = header["pencil"].partition(";")
    params = {}
    if header.get("params"):
        for item in header["params"].split(","):
            k, _, v = item.partition("=")
            params[k.strip()] = Fraction(v.strip())
    return SurfaceDescriptor(
        name=header["name"],
        fiber_tags=header["fibers"].split(),
        mw=mw,
        pencil=(pa.strip(), pb.strip()),
        field_name=header.get("field", "QQ"),
        params=params,
        curves=curves,
        incidences=incidences,
        mw_elements=mw_elements,
    )


def format_surface(s: SurfaceDescriptor) -> str:
    lines = [
        f"name = {s.name}",
        f"fibers = {' '.join(s.fiber_tags)}",
        f"mw = {s.mw[0]} {s.mw[1]}",
        f"pencil = {s.pencil[0]} ; {s.pencil[1]}",
        f"field = {s.field_name}",
    ]
    if s.params:
        lines.append("params = " + ", ".join(f"{k}={v}" for k, v in sorted(s.params.items())))
    lines += ["", "[mw]"]
    for lab, (a, b) in s.mw_elements.items():
        lines.append(f"{lab} = {a} {b}")
    lines += ["", "[curves]"]
    for c in s.curves:
        lines.append(f"{c.label} : [{', '.join(str(x) for x in c.cls.coords)}] {c.generator}")
    lines += ["", "[incidences]"]
    for a, b, n in s.incidences:
        lines.append(f"{a} {b} {n}")
    return "\n".join(lines) + "\n"


def data_dir(override: Optional[str] = None) -> Path:
    """Catalog root: explicit override, then $COXSURF_DATA, then the bundled copy."""
    if override:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("coxsurf") / "data"))


def canonical_name(name: str) -> str:
    n = name.strip()
    if not n.startswith("X_"):
        n = "X_" + n.lstrip("X").lstrip("_")
    n = n.replace("(a)", "")
    if n not in SURFACE_NAMES:
        raise UnknownSurfaceError(name)
    return n


def load_surface(name: str, data: Optional[str] = None, validate: bool = True) -> SurfaceDescriptor:
    n = canonical_name(name)
    path = data_dir(data) / "surfaces" / f"{n}.txt"
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise CatalogError(f"missing catalog file {path}") from None
    s = parse_surface(text)
    if s.name != n:
        raise CatalogError(f"{path} describes {s.name}, expected {n}")
    if validate:
        report = validate_surface(s)
        if not report.ok:
            raise CatalogError(f"{n} fails validation: " + "; ".join(report.failures[:5]))
    return s


def load_all(data: Optional[str] = None, validate: bool = True) -> Dict[str, SurfaceDescriptor]:
    return {n: load_surface(n, data, validate) for n in SURFACE_NAMES}


def pencil_member(s: SurfaceDescriptor, t) -> Poly:
    """The cubic A + t*B of the pencil; ``t = None`` or ``'inf'`` gives B."""
    a, b = s.pencil_forms()
    if t is None or (isinstance(t, str) and t.lower() in ("inf", "oo", "infinity")):
        return b
    return a + b.scale(a.ring.field(t))


# ---------------------------------------------------------------------------
# Mordell-Weil group law from the lattice


def _solve(matrix: List[List[int]], rhs: Sequence[int]) -> Optional[List[Fraction]]:
    """Solve a square system over Q; None when singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def _triv_basis(s: SurfaceDescriptor, zero: Curve) -> List[DivisorClass]:
    basis = [zero.cls, F]
    for fib in s.reducible_fibers:
        basis += [c.cls for c in fib.components if c.index != 0]
    return basis


def triv_lattice_coordinates(s: SurfaceDescriptor, v: DivisorClass, zero: Optional[Curve] = None):
    """Coordinates of ``v`` in the trivial lattice spanned by the zero section,
    the fiber class and the non-identity fiber components."""
    zero = zero or s.curve("P0")
    basis = _triv_basis(s, zero)
    if len(basis) != RANK:
        raise CatalogError(f"trivial lattice of {s.name} has rank {len(basis)}, expected {RANK}")
    inv = _inverse(tuple(b.coords for b in basis))
    if inv is None:
        return None
    num, den = inv
    return [Fraction(sum(a * b for a, b in zip(row, v.coords)), den) for row in num]


@lru_cache(maxsize=256)
def _inverse(cols: Tuple[Tuple[int, ...], ...]):
    # inverse of the matrix with the given columns as (integer matrix, denominator), or None
    m = [[cols[j][i] for j in range(RANK)] for i in range(RANK)]
    out = []
    for k in range(RANK):
        col = _solve(m, [int(i == k) for i in range(RANK)])
        if col is None:
            return None
        out.append(col)
    den = 1
    for col in out:
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
    num = tuple(tuple(int(out[k][i] * den) for k in range(RANK)) for i in range(RANK))
    return num, den


def mw_sum(s: SurfaceDescriptor, p: Curve, q: Curve, zero: Optional[Curve] = None) -> Curve:
    """The section R with R = P + Q - O modulo the trivial lattice."""
    zero = zero or s.curve("P0")
    target = p.cls + q.cls - zero.cls
    for r in s.sections:
        coords = triv_lattice_coordinates(s, target - r.cls, zero)
        if coords is not None and all(c.denominator == 1 for c in coords):
            return r
    raise CatalogError(f"no section equals {p.label} + {q.label} in {s.name}")


def height_contribution(ft: KodairaFiberType, i: int) -> Fraction:
    """Local correction term of the height pairing at simple component i."""
    if i == 0:
        return Fraction(0)
    tag = ft.tag
    if tag in ("III",):
        return Fraction(1, 2)
    if tag in ("IV",):
        return Fraction(2, 3)
    if tag == "IV*":
        return Fraction(4, 3)
    if tag == "III*":
        return Fraction(3, 2)
    m = re.fullmatch(r"I(\d+)(\*?)", tag)
    n = int(m.group(1))
    if m.group(2):
        return Fraction(1) if i == 1 else 1 + Fraction(n, 4)
    return Fraction(i * (n - i), n)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    surface: str
    checks: Dict[str, bool] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, check: str, passed: bool, message: str = ""):
        self.checks[check] = self.checks.get(check, True) and passed
        if not passed:
            self.failures.append(f"({check}) {message}")


def validate_surface(s: SurfaceDescriptor) -> ValidationReport:
    r = ValidationReport(s.name)
    fibers = s.reducible_fibers

    # (a) weighted fiber sums equal -K
    for fib in fibers:
        if len(fib.components) != fib.type.ncomponents:
            r.record("a", False, f"fiber {fib.number} ({fib.type.tag}) has {len(fib.components)} components")
            continue
        total = fib.weighted_sum()
        r.record("a", total == F, f"fiber {fib.number} sums to {total}, not -K")
        adj = fib.type.adjacency()
        for c1 in fib.components:
            for c2 in fib.components:
                if c1.index < c2.index:
                    want = adj[c1.index].get(c2.index, 0)
                    got = intersect(c1.cls, c2.cls)
                    r.record("a", got == want, f"{c1.label}.{c2.label} = {got}, graph says {want}")

    # (b) self-intersections
    for c in s.curves:
        want = -1 if c.is_section else -2
        r.record("b", c.cls.square == want, f"{c.label}^2 = {c.cls.square}")
        if c.is_section:
            r.record("b", intersect(F, c.cls) == 1, f"-K.{c.label} = {intersect(F, c.cls)}")

    # (c) listed incidences exact, (d) unlisted section/component pairs zero
    listed = {(a, b): n for a, b, n in s.incidences}
    for sec in s.sections:
        for comp in s.components:
            got = intersect(sec.cls, comp.cls)
            want = listed.get((sec.label, comp.label))
            if want is not None:
                r.record("c", got == want, f"{sec.label}.{comp.label} = {got}, listed {want}")
            else:
                r.record("d", got == 0, f"{sec.label}.{comp.label} = {got} but not listed")
    for a, b, _ in s.incidences:
        if a not in s._by_label or b not in s._by_label:
            r.record("c", False, f"incidence mentions unknown curve {a} or {b}")
    if "P0" in s._by_label:
        for fib in fibers:
            try:
                got = intersect(s.curve("P0").cls, fib.component(0).cls)
            except KeyError:
                continue
            r.record("c", got == 1, f"P0 misses Th0.{fib.number}")

    # (e) sections pairwise disjoint
    secs = s.sections
    for i, p in enumerate(secs):
        for q in secs[i + 1:]:
            got = intersect(p.cls, q.cls)
            r.record("e", got == 0, f"{p.label}.{q.label} = {got}")

    # (f) curve count
    expected = sum(fiber_type(t).ncomponents for t in s.fiber_tags if fiber_type(t).reducible)
    expected += s.mw_order
    r.record("f", len(s.curves) == expected, f"{len(s.curves)} curves, expected {expected}")
    r.record("f", len(secs) == s.mw_order, f"{len(secs)} sections for a group of order {s.mw_order}")
    r.record("f", set(s.mw_elements) == {c.label for c in secs},
             "section labels disagree with the group table")
    r.record("f", s.euler_sum == 12, f"Euler numbers sum to {s.euler_sum}")

    # (g) group law: lattice sum agrees with the table and with component groups
    if r.ok and "P0" in s._by_label:
        for p, q in product(secs, repeat=2):
            lattice = mw_sum(s, p, q)
            table = s.mw_add(p.label, q.label)
            r.record("g", lattice.label == table, f"{p.label}+{q.label}: lattice {lattice.label}, table {table}")
        zero = s.curve("P0")
        images = {}
        for sec in secs:
            height = Fraction(2 + 2 * intersect(sec.cls, zero.cls))
            image = []
            for fib in fibers:
                hits = [c for c in fib.components if intersect(sec.cls, c.cls) > 0]
                if len(hits) != 1 or fib.type.multiplicities[hits[0].index] != 1:
                    r.record("g", False, f"{sec.label} does not meet fiber {fib.number} in one simple component")
                    continue
                height -= height_contribution(fib.type, hits[0].index)
                image.append(fib.type.component_group_element(hits[0].index))
            r.record("g", height == 0, f"{sec.label} has height {height}")
            images[sec.label] = image
        # sections map homomorphically into the product of component groups
        if r.ok:
            for p, q in product(secs, repeat=2):
                want = images[s.mw_add(p.label, q.label)]
                got = [group_add(fib.type.group, x, y)
                       for fib, x, y in zip(fibers, images[p.label], images[q.label])]
                r.record("g", got == want, f"component groups disagree on {p.label}+{q.label}")
    return r

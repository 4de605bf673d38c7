"""Relations of the Cox ring from plane models of the generators.

The non-exceptional generators T_i map to plane forms s_i. The kernel J of
T_i -> s_i is made Cl(X)-homogeneous by attaching monomials in the
exceptional variables S_j, and saturating by the S_j gives J'. When
dim J' = 12 the ideal J' is the full ideal of relations.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .catalog import SurfaceDescriptor, _solve, load_surface
from .generators import GeneratorSet, minimal_generators
from .groebner import (DEFAULT_BUDGET, GroebnerTimeout, Ideal, krull_dimension, membership,
                       ring_map_kernel, saturate_by_variables)
from .multipoly import Poly, PolyRing, weighted_grevlex
from .picard import RANK
from .tables import ReferencePresentation, load_reference

__all__ = [
    "Rehomogenizer",
    "RelationResult",
    "grading_weights",
    "rehomogenize",
    "compute_kernel",
    "compute_relations",
    "verify_homogeneity",
    "member_via_dehomogenization",
    "EXPECTED_DIMENSION",
]

log = logging.getLogger(__name__)

EXPECTED_DIMENSION = RANK + 2

# pairing with this class is positive on every generator degree of every surface
_H = (136, 9, 8, 7, 6, 5, 4, 3, 2, 1)


def _pair_h(deg) -> int:
    return sum(a * b for a, b in zip(_H, deg))


def grading_weights(degrees: Sequence[Sequence[int]]) -> List[int]:
    """Positive integer weights w with w(T) determined by deg(T)."""
    w = [_pair_h(d) for d in degrees]
    if min(w) <= 0:
        raise ValueError("grading weights are not positive")
    return w


@dataclass
class Rehomogenizer:
    """T_i -> T_i * m_i(S) with m_i making the K_S-part of the degree vanish."""

    t_vars: List[str]
    s_vars: List[str]
    exponents: Dict[str, List[int]]  # T-variable -> exponent vector on s_vars

    @classmethod
    def from_degrees(cls, t_degrees: Dict[str, Sequence[int]], s_degrees: Dict[str, Sequence[int]]):
        s_vars = list(s_degrees)
        m = [[s_degrees[v][i] for v in s_vars] for i in range(1, RANK)]
        for v in s_vars:
            if s_degrees[v][0] != 0:
                raise ValueError(f"exceptional variable {v} has nonzero e0-degree")
        exps = {}
        for t, d in t_degrees.items():
            # sum_j c_j deg S_j = -(K_S part of deg T)
            sol = _solve(m, [-d[i] for i in range(1, RANK)])
            if sol is None or any(Fraction(x).denominator != 1 for x in sol):
                raise ValueError("S-degrees are not a Z-basis of K_S")
            exps[t] = [int(x) for x in sol]
        return cls(list(t_degrees), s_vars, exps)

    def monomial(self, t: str) -> Dict[str, int]:
        return {s: c for s, c in zip(self.s_vars, self.exponents[t]) if c}


def rehomogenize(g: Poly, r: Rehomogenizer, target: PolyRing) -> Poly:
    """Substitute T_i -> T_i m_i(S) and clear S-exponents to the smallest nonnegative shift."""
    src = g.ring
    t_idx = [src.index[t] for t in r.t_vars]
    t_tgt = [target.index[t] for t in r.t_vars]
    s_tgt = [target.index[s] for s in r.s_vars]
    raw = []
    for mono, c in g.terms.items():
        svec = [0] * len(r.s_vars)
        for ti, t in zip(t_idx, r.t_vars):
            e = mono[ti]
            if e:
                for j, x in enumerate(r.exponents[t]):
                    svec[j] += e * x
        raw.append((mono, svec, c))
    shift = [min(sv[j] for _, sv, _ in raw) for j in range(len(r.s_vars))] if raw else []
    terms = {}
    for mono, svec, c in raw:
        out = [0] * target.nvars
        for ti, tt in zip(t_idx, t_tgt):
            out[tt] = mono[ti]
        for j, st in enumerate(s_tgt):
            out[st] = svec[j] - shift[j]
        terms[tuple(out)] = c
    return Poly(target, terms)


def verify_homogeneity(polys: Sequence[Poly], degrees: Dict[str, Sequence[int]]) -> bool:
    """Every monomial of each polynomial has the same total degree."""
    for p in polys:
        names = p.ring.names
        for n in p.variables():
            if n not in degrees:
                raise KeyError(f"no degree for variable {n}")
        seen = None
        for mono in p.terms:
            tot = [0] * RANK
            for n, e in zip(names, mono):
                if e:
                    for i, x in enumerate(degrees[n]):
                        tot[i] += e * x
            tot = tuple(tot)
            if seen is None:
                seen = tot
            elif tot != seen:
                return False
    return True


@dataclass
class RelationResult:
    surface: str
    ring: PolyRing
    kernel: Ideal  # J, in the non-exceptional variables
    ideal: Optional[Ideal]  # J', or None when saturation did not finish
    dimension: Optional[int]
    timings: Dict[str, float] = field(default_factory=dict)
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def certificate(self) -> str:
        if self.dimension == EXPECTED_DIMENSION:
            return "equals I(X)"
        if self.ideal is not None:
            return "containment only"
        return "incomplete"

    def sorted_generators(self) -> List[Poly]:
        if self.ideal is None:
            return []
        return sorted(self.ideal.generators, key=lambda p: (p.total_degree(), p.to_str()))


def _setup(s: SurfaceDescriptor, ref: ReferencePresentation, gset: GeneratorSet):
    if not ref.has_sections():
        raise ValueError(f"{s.name}: no plane sections available")
    degs = {g.variable: g.degree for g in gset if g.variable}
    missing = [v for v in ref.variables if v not in degs]
    if missing:
        raise ValueError(f"{s.name}: generators without a variable: {missing}")
    t_vars = list(ref.t_vars)
    s_vars = list(ref.s_vars)
    sections = ref.sections()
    for t, sec in zip(t_vars, sections):
        d0 = degs[t][0]
        if any(sum(m) != d0 for m in sec.terms):
            raise ValueError(f"{s.name}: section of {t} is not a form of degree {d0}")
    return degs, t_vars, s_vars, sections


def compute_kernel(s: SurfaceDescriptor, ref: Optional[ReferencePresentation] = None,
                   gset: Optional[GeneratorSet] = None, budget: int = DEFAULT_BUDGET) -> Ideal:
    """J = ker(T_i -> s_i)."""
    ref = ref or load_reference(s.name)
    gset = gset or minimal_generators(s, ref)
    degs, t_vars, _, sections = _setup(s, ref, gset)
    return ring_map_kernel(sections, t_vars, [degs[t][0] for t in t_vars], budget=budget)


def compute_relations(s, budget: int = DEFAULT_BUDGET, ref: Optional[ReferencePresentation] = None,
                      dimension: bool = True) -> RelationResult:
    """Run kernel, rehomogenization, saturation and the dimension count.

    A stage that exceeds ``budget`` is recorded in ``errors`` and the later
    stages are skipped.
    """
    if isinstance(s, str):
        s = load_surface(s)
    ref = ref or load_reference(s.name)
    gset = minimal_generators(s, ref)
    degs, t_vars, s_vars, sections = _setup(s, ref, gset)
    ring = PolyRing(ref.variables, ref.field)
    timings, errors = {}, {}

    t0 = time.perf_counter()
    kernel = ring_map_kernel(sections, t_vars, [degs[t][0] for t in t_vars], budget=budget)
    timings["kernel"] = time.perf_counter() - t0
    log.info("%s: kernel has %d generators", s.name, len(kernel.generators))

    r = Rehomogenizer.from_degrees({t: degs[t] for t in t_vars}, {v: degs[v] for v in s_vars})
    homog = [rehomogenize(g, r, ring) for g in kernel.generators]
    if not verify_homogeneity(homog, degs):
        raise AssertionError(f"{s.name}: rehomogenized kernel is not homogeneous")

    weights = grading_weights([degs[v] for v in ring.names])
    result = RelationResult(s.name, ring, kernel, None, None, timings, errors)
    t0 = time.perf_counter()
    try:
        sat = saturate_by_variables(Ideal(ring, homog), s_vars, weights, budget=budget)
    except GroebnerTimeout as exc:
        errors["saturation"] = str(exc)
        return result
    timings["saturation"] = time.perf_counter() - t0
    result.ideal = sat
    if dimension:
        t0 = time.perf_counter()
        try:
            result.dimension = krull_dimension(sat, weighted_grevlex(weights), budget=budget)
        except GroebnerTimeout as exc:
            errors["dimension"] = str(exc)
        timings["dimension"] = time.perf_counter() - t0
    return result


def member_via_dehomogenization(f: Poly, kernel: Ideal, s_vars: Sequence[str],
                                degrees: Dict[str, Sequence[int]], budget: int = DEFAULT_BUDGET) -> bool:
    """Membership of a Cl(X)-homogeneous f in J' through f(S = 1) in J.

    Valid because J' is the S-saturation of the rehomogenized kernel: both
    sides agree after inverting the S-variables, and f is homogeneous.
    """
    if not verify_homogeneity([f], degrees):
        raise ValueError("membership shortcut needs a homogeneous polynomial")
    g = f.evaluate_at_one(s_vars)
    return membership(kernel.ring.convert(g) if g.ring != kernel.ring else g, kernel, budget=budget)

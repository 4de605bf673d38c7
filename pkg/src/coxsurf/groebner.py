"""Buchberger's algorithm and the ideal operations built on it.

The engine works on raw ``{exponent tuple: coefficient}`` dictionaries; the
public functions take and return :class:`~coxsurf.multipoly.Poly` objects.
Every basis computation runs under a step budget and raises
:class:`GroebnerTimeout` when it is exhausted, never returning a partial basis.
"""

from __future__ import annotations

import heapq
import logging
from typing import Dict, Iterable, List, Sequence

from .multipoly import (GREVLEX, Monomial, MonomialOrder, Poly, PolyRing,
                        block_order, weighted_grevlex)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000

__all__ = [
    "GroebnerTimeout",
    "Ideal",
    "groebner_basis",
    "normal_form",
    "membership",
    "ring_map_kernel",
    "saturate",
    "saturate_by_variables",
    "krull_dimension",
    "ideals_equal",
    "s_polynomial",
    "is_groebner_basis",
    "DEFAULT_BUDGET",
]


class GroebnerTimeout(RuntimeError):
    """The reduction-step budget ran out before the basis was complete."""


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        if limit <= 0:
            raise ValueError("budget must be positive")
        self.limit = limit
        self.used = 0

    def step(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise GroebnerTimeout(f"Groebner budget of {self.limit} reduction steps exceeded")


def _mask(m: Monomial) -> int:
    bits = 0
    for i, e in enumerate(m):
        if e:
            bits |= 1 << i
    return bits


def _divides(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _disjoint(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Elem:
    """A basis element: monic polynomial with cached leading data."""

    __slots__ = ("terms", "lm", "mask", "sugar")

    def __init__(self, terms, lm, sugar):
        self.terms = terms
        self.lm = lm
        self.mask = _mask(lm)
        self.sugar = sugar


class _Engine:
    def __init__(self, order: MonomialOrder, budget: _Budget, weights: Sequence[int] | None = None):
        self.order = order
        self.key_fn = order.key
        self._keys: Dict[Monomial, tuple] = {}
        self.budget = budget
        self.weights = weights

    def key(self, m):
        k = self._keys.get(m)
        if k is None:
            k = self.key_fn(m)
            self._keys[m] = k
        return k

    def neg_key(self, m):
        return tuple(-x for x in self.key(m))

    def degree(self, m):
        if self.weights is None:
            return sum(m)
        return sum(a * b for a, b in zip(self.weights, m))

    def lead(self, terms) -> Monomial:
        return max(terms, key=self.key)

    def monic(self, terms):
        lm = self.lead(terms)
        lc = terms[lm]
        if lc != 1:
            inv = 1 / lc
            terms = {m: c * inv for m, c in terms.items()}
        return terms, lm

    def make_elem(self, terms, sugar=None):
        terms, lm = self.monic(terms)
        if sugar is None:
            sugar = max(self.degree(m) for m in terms)
        return _Elem(terms, lm, sugar)

    def find_divisor(self, m, mmask, basis):
        for g in basis:
            if g.mask & ~mmask == 0 and _divides(g.lm, m):
                return g
        return None

    def reduce(self, f: dict, basis: List[_Elem], full: bool = True) -> dict:
        """Remainder of ``f`` on division by ``basis`` (monic leading terms)."""
        f = dict(f)
        if not f:
            return f
        heap = [(self.neg_key(m), m) for m in f]
        heapq.heapify(heap)
        rem = {}
        budget = self.budget
        while heap:
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if c is None:
                continue
            g = self.find_divisor(m, _mask(m), basis) if basis else None
            if g is None:
                rem[m] = c
                del f[m]
                if not full:
                    rem.update(f)
                    return rem
                continue
            budget.step()
            q = tuple(a - b for a, b in zip(m, g.lm))
            del f[m]
            for gm, gc in g.terms.items():
                if gm is g.lm or gm == g.lm:
                    continue
                nm = tuple(a + b for a, b in zip(gm, q))
                v = f.get(nm)
                if v is None:
                    f[nm] = -c * gc
                    heapq.heappush(heap, (self.neg_key(nm), nm))
                else:
                    v = v - c * gc
                    if v:
                        f[nm] = v
                    else:
                        del f[nm]
        return rem

    def spoly(self, a: _Elem, b: _Elem) -> dict:
        lcm = _lcm(a.lm, b.lm)
        qa = tuple(x - y for x, y in zip(lcm, a.lm))
        qb = tuple(x - y for x, y in zip(lcm, b.lm))
        out = {}
        for m, c in a.terms.items():
            out[tuple(x + y for x, y in zip(m, qa))] = c
        for m, c in b.terms.items():
            nm = tuple(x + y for x, y in zip(m, qb))
            v = out.get(nm)
            if v is None:
                out[nm] = -c
            else:
                v = v - c
                if v:
                    out[nm] = v
                else:
                    del out[nm]
        return out

    # -- Buchberger with Gebauer-Moeller pair management ----------------
    def buchberger(self, polys: Iterable[dict], strategy: str = "normal") -> List[_Elem]:
        elems: List[_Elem] = []
        active: List[int] = []
        pairs: Dict[tuple, tuple] = {}

        def pair_entry(i, j):
            a, b = elems[i], elems[j]
            lcm = _lcm(a.lm, b.lm)
            da = self.degree(tuple(x - y for x, y in zip(lcm, a.lm)))
            db = self.degree(tuple(x - y for x, y in zip(lcm, b.lm)))
            sugar = max(a.sugar + da, b.sugar + db)
            return lcm, sugar

        def update(h: int):
            hl = elems[h].lm
            cand = []
            for g in active:
                lcm, sugar = pair_entry(h, g)
                cand.append((g, lcm, sugar, _disjoint(hl, elems[g].lm)))
            # chain criterion among the new pairs
            kept = []
            for idx, (g, lcm, sugar, disj) in enumerate(cand):
                if disj:
                    kept.append((g, lcm, sugar, disj))
                    continue
                redundant = False
                for jdx, (_, lcm2, _, _) in enumerate(cand):
                    if jdx == idx:
                        continue
                    if _divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                        redundant = True
                        break
                if not redundant:
                    kept.append((g, lcm, sugar, disj))
            # product criterion
            new_pairs = [(g, lcm, sugar) for (g, lcm, sugar, disj) in kept if not disj]
            # prune old pairs whose lcm is divisible by lm(h) strictly
            for key in list(pairs):
                i, j = key
                lcm_ij = pairs[key][0]
                if (_divides(hl, lcm_ij)
                        and _lcm(elems[i].lm, hl) != lcm_ij
                        and _lcm(elems[j].lm, hl) != lcm_ij):
                    del pairs[key]
            for g, lcm, sugar in new_pairs:
                pairs[(g, h)] = (lcm, sugar)
            # drop basis elements whose leading monomial is divisible by lm(h)
            active[:] = [g for g in active if not _divides(hl, elems[g].lm)]
            active.append(h)

        def add(terms, sugar=None):
            e = self.make_elem(terms, sugar)
            elems.append(e)
            update(len(elems) - 1)

        start = []
        for p in polys:
            if p:
                start.append(p)
        # deterministic: smallest leading monomial first
        start.sort(key=lambda t: self.key(self.lead(t)))
        for p in start:
            r = self.reduce(p, [elems[g] for g in active])
            if r:
                add(r)

        while pairs:
            if strategy == "sugar":
                key = min(pairs, key=lambda k: (pairs[k][1], self.key(pairs[k][0]), k))
            else:
                key = min(pairs, key=lambda k: (self.key(pairs[k][0]), k))
            lcm, sugar = pairs.pop(key)
            i, j = key
            s = self.spoly(elems[i], elems[j])
            self.budget.step()
            if not s:
                continue
            r = self.reduce(s, [elems[g] for g in active])
            if r:
                add(r, sugar)
        return [elems[g] for g in active]

    def reduced(self, basis: List[_Elem]) -> List[_Elem]:
        basis = sorted(basis, key=lambda e: self.key(e.lm))
        minimal = []
        for i, e in enumerate(basis):
            if any(_divides(o.lm, e.lm) for o in basis[:i]):
                continue
            minimal.append(e)
        out = []
        for i, e in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            tail = {m: c for m, c in e.terms.items() if m != e.lm}
            r = self.reduce(tail, others)
            r[e.lm] = e.terms[e.lm]
            out.append(_Elem(r, e.lm, e.sugar))
        out.sort(key=lambda e: self.key(e.lm))
        return out


# ---------------------------------------------------------------------------
# public API


class Ideal:
    """A finitely generated ideal with per-order cached reduced Groebner bases."""

    def __init__(self, ring: PolyRing, generators: Iterable[Poly]):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                g = ring.convert(g)
            if g:
                gens.append(g)
        self.generators = gens
        self._cache: Dict[MonomialOrder, List[Poly]] = {}

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators in {self.ring.nvars} variables)"

    def __contains__(self, p: Poly) -> bool:
        return membership(p, self)

    def groebner(self, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET,
                 strategy: str = "normal") -> List[Poly]:
        return groebner_basis(self, order, budget=budget, strategy=strategy)

    def is_zero(self) -> bool:
        return not self.generators


def _order_weights(order: MonomialOrder):
    return order.weights if order.kind in ("wgrevlex", "block") else None


def groebner_basis(ideal: Ideal, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET,
                   strategy: str = "normal") -> List[Poly]:
    """Reduced Groebner basis of ``ideal`` with respect to ``order``.

    Raises GroebnerTimeout once ``budget`` reduction steps are used up.
    """
    cached = ideal._cache.get(order)
    if cached is not None:
        return cached
    ring = ideal.ring
    if not ideal.generators:
        ideal._cache[order] = []
        return []
    eng = _Engine(order, _Budget(budget), _order_weights(order))
    basis = eng.reduced(eng.buchberger([g.terms for g in ideal.generators], strategy))
    log.debug("basis of %d elements after %d steps", len(basis), eng.budget.used)
    result = [Poly(ring, e.terms) for e in basis]
    ideal._cache[order] = result
    return result


def _elems(ring: PolyRing, basis: List[Poly], order: MonomialOrder, budget: _Budget):
    eng = _Engine(order, budget, _order_weights(order))
    elems = []
    for g in basis:
        lm = eng.lead(g.terms)
        elems.append(_Elem(g.terms, lm, 0))
    return eng, elems


def normal_form(p: Poly, ideal: Ideal, order: MonomialOrder = GREVLEX,
                budget: int = DEFAULT_BUDGET) -> Poly:
    """Unique remainder of ``p`` modulo ``ideal``."""
    if p.ring != ideal.ring:
        p = ideal.ring.convert(p)
    basis = groebner_basis(ideal, order, budget=budget)
    eng, elems = _elems(ideal.ring, basis, order, _Budget(budget))
    return Poly(ideal.ring, eng.reduce(p.terms, elems))


def membership(p: Poly, ideal: Ideal, order: MonomialOrder = GREVLEX,
               budget: int = DEFAULT_BUDGET) -> bool:
    return normal_form(p, ideal, order, budget).is_zero()


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    eng = _Engine(order, _Budget(DEFAULT_BUDGET), _order_weights(order))
    a = eng.make_elem(f.terms)
    b = eng.make_elem(g.terms)
    return Poly(f.ring, eng.spoly(a, b))


def is_groebner_basis(basis: Sequence[Poly], order: MonomialOrder = GREVLEX,
                      budget: int = DEFAULT_BUDGET) -> bool:
    """Check that every S-polynomial of ``basis`` reduces to zero."""
    if not basis:
        return True
    ring = basis[0].ring
    eng, elems = _elems(ring, [b.monic(order) for b in basis], order, _Budget(budget))
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if eng.reduce(eng.spoly(elems[i], elems[j]), elems):
                return False
    return True


def ideals_equal(a: Ideal, b: Ideal, order: MonomialOrder = GREVLEX,
                 budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the reduced Groebner bases coincide."""
    if a.ring != b.ring:
        raise ValueError("ideals live in different rings")
    ga = groebner_basis(a, order, budget=budget)
    gb = groebner_basis(b, order, budget=budget)
    return set(ga) == set(gb) and len(ga) == len(gb)


def _eliminate(ring: PolyRing, gens: List[Poly], drop: Sequence[str], keep_ring: PolyRing,
               weights: Sequence[int] | None, budget: int, strategy: str) -> List[Poly]:
    """Generators of ``<gens> ∩ k[keep_ring]`` via a block order with ``drop`` first."""
    names = list(drop) + [n for n in ring.names if n not in drop]
    big = PolyRing(names, ring.field)
    w = None
    if weights is not None:
        wmap = dict(zip(ring.names, weights))
        w = [wmap[n] for n in names]
    order = block_order(len(drop), w)
    ideal = Ideal(big, [big.convert(g) for g in gens])
    basis = groebner_basis(ideal, order, budget=budget, strategy=strategy)
    k = len(drop)
    out = [keep_ring.convert(g) for g in basis if all(not any(m[:k]) for m in g.terms)]
    return out


def ring_map_kernel(images: Sequence[Poly], source_names: Sequence[str] | None = None,
                    degrees: Sequence[int] | None = None, budget: int = DEFAULT_BUDGET,
                    strategy: str = "sugar") -> Ideal:
    """Kernel of ``k[T1..Tm] -> R, T_i -> images[i]`` by elimination.

    When ``degrees`` is given each image must be homogeneous of that degree
    (standard grading on the target); the elimination then uses the matching
    weighted block order.
    """
    if not images:
        raise ValueError("no images")
    target = images[0].ring
    m = len(images)
    if source_names is None:
        source_names = [f"T{i + 1}" for i in range(m)]
    source_names = list(source_names)
    if len(source_names) != m:
        raise ValueError("one source variable per image")
    clash = set(source_names) & set(target.names)
    if clash:
        raise ValueError(f"source and target variables overlap: {sorted(clash)}")
    if degrees is not None:
        for img, d in zip(images, degrees):
            if img.ring != target:
                raise ValueError("images must share a ring")
            if any(sum(mono) != d for mono in img.terms):
                raise ValueError(f"image {img} is not homogeneous of degree {d}")
    big = PolyRing(list(target.names) + source_names, target.field)
    gens = []
    for name, img in zip(source_names, images):
        gens.append(big.var(name) - big.convert(img))
    weights = None
    if degrees is not None:
        weights = [1] * target.nvars + list(degrees)
    src = PolyRing(source_names, target.field)
    kernel = _eliminate(big, gens, list(target.names), src, weights, budget, strategy)
    ideal = Ideal(src, kernel)
    for g in kernel:
        img = g.substitute({n: target.convert(im) for n, im in zip(source_names, images)}, target)
        if img:
            raise AssertionError(f"kernel element {g} does not vanish")
    return ideal


def saturate(ideal: Ideal, f: Poly, budget: int = DEFAULT_BUDGET,
             weights: Sequence[int] | None = None, strategy: str = "sugar") -> Ideal:
    """``I : f^inf`` via an auxiliary inverse variable ``w`` with ``w*f - 1``."""
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ring = ideal.ring
    wname = "_w"
    while wname in ring.index:
        wname += "_"
    big = PolyRing((wname,) + ring.names, ring.field)
    gens = [big.convert(g) for g in ideal.generators]
    gens.append(big.var(wname) * big.convert(f) - big.one())
    w = None
    if weights is not None:
        fdeg = max(sum(a * b for a, b in zip(weights, m)) for m in f.terms)
        # w*f - 1 is not homogeneous; the weights only steer the block order
        w = [max(1, fdeg)] + list(weights)
    basis = _eliminate(big, gens, [wname], ring, w, budget, strategy)
    return Ideal(ring, basis)


def saturate_by_variables(ideal: Ideal, names: Sequence[str], weights: Sequence[int],
                          budget: int = DEFAULT_BUDGET) -> Ideal:
    """``I : (x_1 ... x_k)^inf`` for an ideal homogeneous under positive ``weights``.

    Saturates one variable at a time: with the variable placed last in a
    weighted reverse-lexicographic order, dividing every element of the
    reduced basis by its largest power of that variable gives a basis of the
    saturation.
    """
    ring = ideal.ring
    wmap = dict(zip(ring.names, weights))
    for g in ideal.generators:
        degs = {sum(wmap[n] * e for n, e in zip(ring.names, m)) for m in g.terms}
        if len(degs) > 1:
            raise ValueError(f"{g} is not homogeneous for the given weights")
    current = list(ideal.generators)
    for name in names:
        order_names = [n for n in ring.names if n != name] + [name]
        r = PolyRing(order_names, ring.field)
        order = weighted_grevlex([wmap[n] for n in order_names])
        basis = groebner_basis(Ideal(r, [r.convert(g) for g in current]), order, budget=budget)
        stripped = []
        for g in basis:
            k = min(m[-1] for m in g.terms)
            if k:
                g = Poly(r, {m[:-1] + (m[-1] - k,): c for m, c in g.terms.items()})
            stripped.append(g)
        current = [ring.convert(g) for g in stripped]
    return Ideal(ring, current)


def _min_hitting_set(edges: List[int], nvars: int) -> int:
    """Size of a smallest variable set meeting every support (bitmask) in ``edges``."""
    edges = sorted(set(edges), key=lambda e: bin(e).count("1"))
    # drop supersets: a set hitting the subset hits the superset
    minimal = []
    for e in edges:
        if not any((o & e) == o for o in minimal):
            minimal.append(e)
    best = [nvars]

    def search(chosen: int, size: int):
        if size >= best[0]:
            return
        for e in minimal:
            if e & chosen == 0:
                bits = [i for i in range(nvars) if e >> i & 1]
                for i in bits:
                    search(chosen | (1 << i), size + 1)
                return
        best[0] = size

    search(0, 0)
    return best[0]


def krull_dimension(ideal: Ideal, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET) -> int:
    """Dimension of ``R/I``: the largest variable set avoiding every leading monomial.

    Returns -1 for the unit ideal.
    """
    basis = groebner_basis(ideal, order, budget=budget)
    n = ideal.ring.nvars
    if not basis:
        return n
    eng = _Engine(order, _Budget(budget), _order_weights(order))
    supports = []
    for g in basis:
        lm = eng.lead(g.terms)
        if not any(lm):
            return -1
        supports.append(_mask(lm))
    return n - _min_hitting_set(supports, n)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxsurf.acceptance import brute_force_member
from coxsurf.groebner import (
    GroebnerTimeout,
    Ideal,
    groebner_basis,
    ideals_equal,
    is_groebner_basis,
    krull_dimension,
    membership,
    ring_map_kernel,
    s_polynomial,
    saturate,
    saturate_by_variables,
)
from coxsurf.multipoly import PolyRing, lex

R = PolyRing(["x", "y", "z"])
x, y, z = R.gens()


def test_twisted_cubic_basis_and_dimension():
    plane = PolyRing(["s", "t"])
    s, t = plane.gens()
    ker = ring_map_kernel([s ** 3, s ** 2 * t, s * t ** 2, t ** 3], ["a", "b", "c", "d"], [3, 3, 3, 3])
    assert len(groebner_basis(ker)) == 3
    assert krull_dimension(ker) == 2


def test_s_polynomial_cancels_leading_terms():
    f, g = x ** 2 - y, x * y - z
    sp = s_polynomial(f, g)
    assert sp.leading_monomial() not in (f.leading_monomial(), g.leading_monomial())


def test_lex_elimination():
    gb = groebner_basis(Ideal(R, [x - y ** 2, y - z ** 3]), lex())
    assert any(p.variables() == ["x", "z"] or set(p.variables()) == {"x", "z"} for p in gb)


def test_saturation_removes_embedded_component():
    i = Ideal(R, [x * y, x * z])
    sat = saturate(i, x)
    assert ideals_equal(sat, Ideal(R, [y, z]))
    sat2 = saturate_by_variables(Ideal(R, [x * y, x * z]), ["y"], [1, 1, 1])
    assert ideals_equal(sat2, Ideal(R, [x]))


def test_budget_is_enforced():
    big = PolyRing([f"v{i}" for i in range(6)])
    gens = [sum(big.gens()[i:], big.zero()) ** 3 - big.gens()[i] for i in range(6)]
    with pytest.raises(GroebnerTimeout):
        groebner_basis(Ideal(big, gens), budget=5)


def test_zero_ideal_dimension():
    assert krull_dimension(Ideal(R, [])) == 3
    assert krull_dimension(Ideal(R, [R.one()])) < 0


# property checks --------------------------------------------------------------

S = PolyRing(["u", "v", "w"])


def homogeneous(degree):
    monos = []
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            monos.append((a, b, degree - a - b))
    return st.dictionaries(st.sampled_from(monos), st.integers(-3, 3), min_size=1, max_size=3).map(
        lambda d: sum((S.monomial(m, c) for m, c in d.items()), S.zero()))


ideals = st.lists(st.integers(1, 3).flatmap(homogeneous), min_size=1, max_size=3)


@settings(max_examples=100, deadline=None)
@given(ideals, st.integers(2, 4).flatmap(homogeneous))
def test_membership_matches_linear_algebra(gens, f):
    gens = [g for g in gens if g]
    if not gens or not f:
        return
    assert membership(f, Ideal(S, gens)) == brute_force_member(f, gens)


@settings(max_examples=40, deadline=None)
@given(ideals, st.lists(st.integers(0, 2).flatmap(homogeneous), min_size=1, max_size=3))
def test_combinations_are_members(gens, cofactors):
    gens = [g for g in gens if g]
    if not gens:
        return
    f = sum((c * g for c, g in zip(cofactors, gens)), S.zero())
    assert membership(f, Ideal(S, gens))


@settings(max_examples=40, deadline=None)
@given(ideals)
def test_basis_is_closed_under_s_polynomials(gens):
    gens = [g for g in gens if g]
    if not gens:
        return
    assert is_groebner_basis(groebner_basis(Ideal(S, gens)))


@settings(max_examples=20, deadline=None)
@given(ideals)
def test_saturation_is_idempotent(gens):
    gens = [g for g in gens if g]
    if not gens:
        return
    u = S.var("u")
    once = saturate(Ideal(S, gens), u)
    assert ideals_equal(once, saturate(once, u))

import pytest

from coxsurf.acceptance import MEMBERSHIP_SURFACES, X411_KERNEL
from coxsurf.groebner import Ideal, ideals_equal, membership
from coxsurf.multipoly import PolyRing, weighted_grevlex
from coxsurf.relations import (
    EXPECTED_DIMENSION,
    Rehomogenizer,
    compute_kernel,
    compute_relations,
    grading_weights,
    member_via_dehomogenization,
    rehomogenize,
    verify_homogeneity,
)
from coxsurf.tables import load_reference


def test_weights_are_positive_on_every_generator():
    for name in ("X_22", "X_411", "X_6321", "X_3333"):
        ref = load_reference(name)
        assert all(w > 0 for w in grading_weights([ref.column(v) for v in ref.variables]))


def test_x411_kernel(surfaces):
    k = compute_kernel(surfaces["X_411"])
    expected = Ideal(k.ring, [k.ring.parse(t) for t in X411_KERNEL])
    assert ideals_equal(k, expected)


def test_x411_relations_equal_the_table(surfaces):
    ref = load_reference("X_411")
    r = compute_relations(surfaces["X_411"], ref=ref)
    assert r.dimension == EXPECTED_DIMENSION and r.certificate == "equals I(X)"
    w = weighted_grevlex(grading_weights([ref.column(v) for v in r.ring.names]))
    assert ideals_equal(r.ideal, Ideal(r.ring, ref.relations(r.ring)), w)


def test_x411_printed_relation_is_not_homogeneous():
    ref = load_reference("X_411")
    printed = ref.printed_relations()
    assert not verify_homogeneity([printed[1]], ref.columns())
    assert verify_homogeneity(ref.relations(), ref.columns())


def test_rehomogenized_kernel_is_homogeneous(surfaces):
    ref = load_reference("X_411")
    degs = ref.columns()
    k = compute_kernel(surfaces["X_411"], ref)
    r = Rehomogenizer.from_degrees({t: degs[t] for t in ref.t_vars}, {s: degs[s] for s in ref.s_vars})
    ring = PolyRing(ref.variables)
    assert verify_homogeneity([rehomogenize(g, r, ring) for g in k.generators], degs)


@pytest.mark.parametrize("name", MEMBERSHIP_SURFACES)
def test_table_relations_are_members(name):
    ref = load_reference(name)
    r = compute_relations(name, ref=ref)
    degs = ref.columns()
    order = weighted_grevlex(grading_weights([degs[v] for v in r.ring.names]))
    for f in ref.relations(r.ring):
        assert membership(f, r.ideal, order)
        assert member_via_dehomogenization(f, r.kernel, ref.s_vars, degs)
    assert r.dimension == EXPECTED_DIMENSION


def test_dehomogenization_rejects_inhomogeneous_input():
    ref = load_reference("X_22")
    ring = PolyRing(ref.variables)
    k = Ideal(PolyRing(ref.t_vars), [])
    with pytest.raises(ValueError):
        member_via_dehomogenization(ring.parse("T1 + T2*T5"), k, ref.s_vars, ref.columns())


def test_surfaces_without_sections_raise(surfaces):
    with pytest.raises(ValueError):
        compute_relations(surfaces["X_9111"])


@pytest.mark.slow
def test_x6321_membership():
    ref = load_reference("X_6321")
    r = compute_relations("X_6321", budget=20_000_000, ref=ref)
    degs = ref.columns()
    order = weighted_grevlex(grading_weights([degs[v] for v in r.ring.names]))
    assert all(membership(f, r.ideal, order) for f in ref.relations(r.ring))
    assert len(ref.relation_texts) == 16


def test_x3333_representatives_vanish(surfaces):
    ref = load_reference("X_3333")
    k = compute_kernel(surfaces["X_3333"], ref)
    degs = ref.columns()
    assert all(member_via_dehomogenization(f, k, ref.s_vars, degs) for f in ref.relations())

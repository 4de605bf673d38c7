import pytest

from coxsurf.acceptance import CONIC_BUNDLE_TABLE, TYPE_IV_CENSUS
from coxsurf.catalog import SURFACE_NAMES
from coxsurf.curves import (
    CurveSetError,
    classify_curve_set,
    conic_bundles,
    conic_bundles_with_unique_reducible_fiber,
    curve_graph,
    generalized_minus_one_chains,
    orthogonal_complement,
    type_iv_generator_divisors,
    type_iv_lattice_search,
)
from coxsurf.picard import F, intersect


def test_graph_of_x22(surfaces):
    g = curve_graph(surfaces["X_22"])
    assert len(g.labels) == 10
    assert g.neighbors("P0") == {"Th0.1": 1}


def test_fiber_components_are_orthogonal_to_f(surfaces):
    s = surfaces["X_22"]
    assert {c.label for c in orthogonal_complement(F, s)} == {c.label for c in s.components}


def test_classify_shapes(surfaces):
    s = surfaces["X_22"]
    shape = classify_curve_set([s.curve(f"Th{i}.1") for i in range(1, 9)])
    assert (shape.kind, shape.dynkin) == ("generalized (-2)-curve", "E8")
    chain = classify_curve_set([s.curve("P0")] + [s.curve(f"Th{i}.1") for i in range(3)])
    assert chain.kind == "generalized (-1)-curve"
    assert chain.chain == ("P0", "Th0.1", "Th1.1", "Th2.1")
    with pytest.raises(CurveSetError):
        classify_curve_set([s.curve("P0"), s.curve("Th5.1")])


def test_length_nine_chains_exist_only_with_one_fiber(surfaces):
    for name in ("X_22", "X_211"):
        assert generalized_minus_one_chains(surfaces[name], 9)


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_conic_bundle_table(surfaces, name):
    got = sorted(sorted(cb.support_labels().items())
                 for cb in conic_bundles_with_unique_reducible_fiber(surfaces[name]))
    assert got == sorted(sorted(d.items()) for d in CONIC_BUNDLE_TABLE.get(name, []))


def test_conic_bundles_are_conics(surfaces):
    for s in surfaces.values():
        for cb in conic_bundles(s):
            assert intersect(cb.cls, cb.cls) == 0
            assert intersect(F, cb.cls) == 2


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_type_iv_census(surfaces, name):
    divs = type_iv_generator_divisors(surfaces[name])
    assert len(divs) == TYPE_IV_CENSUS.get(name, 0)
    for d in divs:
        assert intersect(d, d) == 1 and intersect(F, d) == 3


def test_symmetric_convention_doubles_x9111(surfaces):
    s = surfaces["X_9111"]
    assert len(type_iv_generator_divisors(s, "symmetric")) == 6
    oriented = set(type_iv_generator_divisors(s))
    assert oriented < set(type_iv_generator_divisors(s, "symmetric"))


def test_lattice_search_agrees_with_symmetric_list(surfaces):
    s = surfaces["X_9111"]
    assert set(type_iv_lattice_search(s)) == set(type_iv_generator_divisors(s, "symmetric"))

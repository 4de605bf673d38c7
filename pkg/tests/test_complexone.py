from fractions import Fraction

import pytest

from coxsurf.complexone import (
    COMPLEXITY_ONE,
    POLE,
    complexity_one_presentation,
    hj_eval,
    hj_solve_unknown,
    ow_consistency,
    ow_graph,
    parse_quotients,
    presentation_dimension,
)


@pytest.mark.parametrize("q", [[2, 2, 2, 2, 2, 1, 6], [2, 1, 2], [2, 2, 1, 3]])
def test_identities(q):
    assert hj_eval(q) == 0


def test_eval_values():
    assert hj_eval([3]) == 3
    assert hj_eval([2, 2]) == Fraction(3, 2)
    assert hj_eval([1, 2]) == Fraction(1, 2)
    assert hj_eval([1, 1, 1]) is POLE
    assert hj_eval([2, 1, 1]) is POLE


@pytest.mark.parametrize("q,x", [([2, 2, 2, 2, 2, None, 6], 1), ([2, None, 2], 1), ([None], 0)])
def test_solve(q, x):
    assert hj_solve_unknown(q) == x


def test_solve_with_target_and_failures():
    assert hj_solve_unknown([None], 5) == 5
    with pytest.raises(ValueError):
        hj_solve_unknown([2, 2])
    with pytest.raises(ValueError):
        hj_solve_unknown([None, None])


def test_parse():
    assert parse_quotients("2,1,2") == [2, 1, 2]
    assert parse_quotients("[2, x, 2]") == [2, None, 2]
    with pytest.raises(ValueError):
        parse_quotients("2,,1")


@pytest.mark.parametrize("name", COMPLEXITY_ONE)
def test_graphs_are_consistent(name):
    assert ow_consistency(name) == []
    assert presentation_dimension(name) == 12


def test_presentation_sizes():
    assert (complexity_one_presentation("X_22").ngenerators, complexity_one_presentation("X_22").nrelations) == (13, 1)
    p = complexity_one_presentation("X_11(a)")
    assert (p.ngenerators, p.nrelations) == (14, 2)
    pres = complexity_one_presentation("X_44").presentation
    expected = pres.ring.parse("T2T5T6^2T7^3 - T3T8T9^2T10^3 - T4T11T12^2T13^3")
    assert pres.relations == [expected] or pres.relations == [-expected]


def test_x11_relations_share_a_degree():
    pres = complexity_one_presentation("X_11").presentation
    degs = {pres.degree_of_monomial(next(iter(r.terms))) for r in pres.relations}
    assert len(degs) == 1


def test_unknown_surface():
    with pytest.raises(KeyError):
        ow_graph("X_411")

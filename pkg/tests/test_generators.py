import json

import pytest

from coxsurf.catalog import SURFACE_NAMES
from coxsurf.generators import (
    MatchError,
    degree_matrix,
    match_degree_matrix,
    minimal_generators,
    reference_degree_matrix,
)
from coxsurf.tables import load_reference


@pytest.mark.parametrize("name", SURFACE_NAMES)
def test_counts_and_matrix_match_the_table(surfaces, name):
    ref = load_reference(name)
    g = minimal_generators(surfaces[name], ref)
    assert len(g) == len(ref.variables)
    fixed = {j: ref.variables.index(e.variable) for j, e in enumerate(g) if e.variable}
    perm = match_degree_matrix(degree_matrix(g, "e"), reference_degree_matrix(ref), fixed)
    assert sorted(perm) == list(range(len(ref.variables)))


def test_x411_kinds(surfaces):
    c = minimal_generators(surfaces["X_411"]).counts()
    assert c == {"(-1)-curve": 2, "(-2)-curve": 9, "conic-bundle smooth fiber": 3,
                 "smooth fiber of pi": 1, "type-(iv)": 0}


def test_exceptional_degrees_form_a_basis(surfaces):
    g = minimal_generators(surfaces["X_22"])
    assert len(g.exceptional) == 9
    m = degree_matrix(g, "s")
    for lab in g.exceptional:
        j = m.labels.index(lab)
        col = m.column(j)
        assert col[0] == 0 and sorted(col[1:]) == [0] * 8 + [1]


def test_mismatch_is_reported(surfaces):
    ref = load_reference("X_22")
    g = minimal_generators(surfaces["X_22"], ref)
    m = degree_matrix(g, "e")
    m.rows[0][0] += 1
    with pytest.raises(MatchError):
        match_degree_matrix(m, reference_degree_matrix(ref))


def test_json_shape(surfaces):
    d = minimal_generators(surfaces["X_411"]).to_json()
    assert d["surface"] == "X_411" and len(d["generators"]) == 15
    json.dumps(d)

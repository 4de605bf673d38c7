import pytest

from coxsurf.contract import (
    CONTRACTIONS,
    ContractError,
    compare_to_target,
    contract_cox,
    contract_to_target,
    eliminate_linear,
    load_contraction,
    quotient_grading,
    apply_signs,
    sign_twist,
    smith_normal_form,
)
from coxsurf.multipoly import PolyRing
from coxsurf.tables import GradedPresentation, load_reference


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def _det(m):
    from fractions import Fraction
    a = [[Fraction(x) for x in r] for r in m]
    n, d = len(a), Fraction(1)
    for i in range(n):
        p = next((k for k in range(i, n) if a[k][i]), None)
        if p is None:
            return 0
        if p != i:
            a[i], a[p] = a[p], a[i]
            d = -d
        d *= a[i][i]
        for k in range(i + 1, n):
            f = a[k][i] / a[i][i]
            a[k] = [x - f * y for x, y in zip(a[k], a[i])]
    return d


@pytest.mark.parametrize("m", [[[2, 4], [6, 8]], [[0, 3, 0], [2, 0, 0]], [[4, 6, 10], [6, 9, 15], [2, 3, 5]]])
def test_smith_normal_form(m):
    u, d, v = smith_normal_form(m)
    assert _matmul(_matmul(u, m), v) == d
    assert abs(_det(u)) == 1 and abs(_det(v)) == 1
    diag = [d[i][i] for i in range(min(len(m), len(m[0])))]
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)


def _x6321():
    return GradedPresentation.from_reference(load_reference("X_6321"))


def test_cayley_grading():
    ref = load_reference("X_6321")
    cols = [ref.column(v) for v in ("T10", "T12", "T14", "T1", "T2", "T3", "T7")]
    g = quotient_grading(cols, 10)
    assert (g.free_rank, g.torsion) == (3, [2])


def test_trivial_gradings():
    g = quotient_grading([], 10)
    assert (g.free_rank, g.torsion) == (10, [])
    ref = load_reference("X_22")
    g = quotient_grading([ref.column(v) for v in ref.s_vars], 10)
    assert (g.free_rank, g.torsion) == (1, [])


def test_empty_contraction_is_identity():
    p = _x6321()
    cp = contract_cox(p, [])
    assert cp.variables == p.variables and cp.relations == p.relations


def test_only_negative_curves_can_be_contracted():
    x411 = GradedPresentation.from_reference(load_reference("X_411"))
    with pytest.raises(ContractError):
        contract_cox(x411, ["T3"])
    with pytest.raises(ContractError):
        contract_cox(_x6321(), ["T99"])


def test_contraction_is_associative():
    p = _x6321()
    a = contract_cox(contract_cox(p, ["T10"]), ["T12", "T14"])
    b = contract_cox(p, ["T10", "T12", "T14"])
    assert a.variables == b.variables and a.relations == b.relations
    assert str(a.grading()) == str(b.grading())


def test_eliminate_linear_small_cases():
    ring = PolyRing(["T1", "T2", "T3"])
    p = GradedPresentation("t", ring, {v: (0,) * 10 for v in ring.names}, [ring.parse("T1 - T2T3")])
    out = eliminate_linear(p)
    assert out.variables == ["T2", "T3"] and out.relations == []
    q = GradedPresentation("t", ring, {v: (0,) * 10 for v in ring.names}, [ring.parse("T1T2 - T3^2")])
    assert eliminate_linear(q).variables == list(ring.names)


@pytest.mark.parametrize("name", CONTRACTIONS)
def test_stored_contractions(name):
    cp, target = contract_to_target(name)
    assert cp.is_homogeneous()
    ok, signs = compare_to_target(cp, target)
    assert ok
    if target.grading:
        assert str(cp.grading()) == target.grading
    assert signs in ({}, {"T4": -1})


def test_cayley_counts():
    cp, target = contract_to_target("Y_cayley")
    assert len(cp.variables) == 9
    assert len(load_contraction("Y_cayley").relation_texts) == 10
    assert len(load_contraction("Y_cayley_resolved").variables) == 13


def test_sign_twist():
    ring = PolyRing(["a", "b", "c"])
    f = ring.parse("a*b + c^2")
    g = ring.parse("a*b - c^2")
    signs = sign_twist(f, g)
    assert signs is not None and apply_signs(f, signs) in (g, -g)
    assert sign_twist(f, ring.parse("a*b + 2*c^2")) is None
    assert sign_twist(ring.parse("a + b + c"), ring.parse("a + b - c")) == {"c": -1}

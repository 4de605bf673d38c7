from hypothesis import given, settings
from hypothesis import strategies as st

from coxsurf.exactfield import QQ_EPS
from coxsurf.multipoly import PolyRing, grevlex, lex, weighted_grevlex

R = PolyRing(["x", "y", "z"])


def test_parse_juxtaposed_variables():
    ring = PolyRing([f"T{i}" for i in range(1, 13)])
    p = ring.parse("T1T3^2 + T10T11")
    assert p == ring.var("T1") * ring.var("T3") ** 2 + ring.var("T10") * ring.var("T11")


def test_parse_eps_coefficients():
    ring = PolyRing(["x", "y"], QQ_EPS)
    p = ring.parse("e*x + (1+e)y")
    assert p.coefficient({"x": 1}) * p.coefficient({"x": 1}) == -p.coefficient({"y": 1})


def test_orders_differ():
    a, b = (2, 0, 0), (0, 1, 1)
    assert lex().key(a) > lex().key(b)
    assert grevlex().key(a) > grevlex().key(b)
    w = weighted_grevlex([1, 5, 5])
    assert w.key(b) > w.key(a)


def test_evaluate_at_one_and_substitute():
    x, y, z = R.gens()
    p = x * y ** 2 - z
    assert p.evaluate_at_one(["y"]) == R.convert(x - z)
    assert p.substitute({"x": y, "y": y, "z": z}, R) == y ** 3 - z


coeffs = st.integers(-5, 5)
monos = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monos, coeffs, max_size=5).map(
    lambda d: sum((R.monomial(m, c) for m, c in d.items()), R.zero()))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f - f == R.zero()


@settings(max_examples=40, deadline=None)
@given(polys)
def test_to_str_parses_back(f):
    assert R.parse(f.to_str()) == f

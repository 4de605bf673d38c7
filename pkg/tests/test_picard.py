import pytest

from coxsurf.picard import F, K, DivisorClass, NotNefError, e, gram_matrix, harbourne_h1, intersect, riemann_roch_chi


def test_canonical_class():
    assert intersect(K, K) == 0
    assert intersect(F, e(1)) == 1
    assert intersect(e(0), e(0)) == 1 and intersect(e(3), e(3)) == -1


def test_gram_matrix_is_diagonal():
    g = gram_matrix()
    assert g[0][0] == 1 and all(g[i][i] == -1 for i in range(1, 10))
    assert all(g[i][j] == 0 for i in range(10) for j in range(10) if i != j)


def test_riemann_roch():
    assert riemann_roch_chi(DivisorClass((0,) * 10)) == 1
    assert riemann_roch_chi(F) == 1
    assert riemann_roch_chi(e(0)) == 3


def test_class_arithmetic():
    a = e(0) - e(1)
    assert 2 * a == a + a
    assert -(a - a) == DivisorClass((0,) * 10)
    with pytest.raises(ValueError):
        DivisorClass((1, 2))


def test_harbourne_on_a_surface(surfaces):
    s = surfaces["X_22"]
    assert harbourne_h1(F, s) == 1
    assert harbourne_h1(2 * F, s) == 2
    with pytest.raises(NotNefError):
        harbourne_h1(s.curves[0].cls, s)

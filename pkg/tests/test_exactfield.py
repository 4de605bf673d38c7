from fractions import Fraction

import pytest

from coxsurf.exactfield import EPS, QQ, QQ_EPS, Cyclotomic3, format_coefficient, parse_coefficient


def test_eps_is_a_primitive_cube_root():
    assert EPS ** 3 == 1
    assert EPS * EPS + EPS + 1 == 0
    assert EPS != 1


def test_inverse_and_division():
    x = Cyclotomic3(2, -3)
    assert x * x.inverse() == 1
    assert (x / x) == 1
    with pytest.raises(ZeroDivisionError):
        Cyclotomic3(0, 0).inverse()


def test_rational_elements_compare_with_fractions():
    assert Cyclotomic3(Fraction(1, 2), 0) == Fraction(1, 2)
    assert Cyclotomic3(1, 0).is_rational()


def test_parse_and_format_round_trip():
    for text in ("3/2", "-e", "1 + 2e", "-1/3 - e"):
        c = parse_coefficient(text)
        assert parse_coefficient(format_coefficient(c)) == c
    with pytest.raises(ValueError):
        parse_coefficient("")


def test_field_coercion():
    assert QQ(3) == Fraction(3)
    assert QQ_EPS(2) == Cyclotomic3(2, 0)
    assert QQ.one == 1 and QQ_EPS.zero == 0

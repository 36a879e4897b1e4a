import math
from fractions import Fraction

import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from cuspforge.numfield import (
    QQ,
    FieldError,
    NumberField,
    fe_sign,
    fe_sqrt,
    fe_to_float,
    fe_to_mpf,
    format_rational,
    parse_rational,
)

SQRT2 = NumberField([-2, 0, 1], ["1", "2"])
# cusp field polynomial of 5_2; its real root lies in (-6, -5)
CUSP52 = NumberField([56, -4, 2, 1], ["-6", "-5"])

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def elems(field):
    return st.lists(rationals, min_size=field.degree, max_size=field.degree).map(field.from_coeffs)


def test_rational_parsing_is_reduced():
    q = parse_rational("6/-4")
    assert q == mpq(-3, 2) and q.denominator > 0
    assert format_rational(mpq(-3, 2)) == "-3/2"
    assert parse_rational(Fraction(2, 4)) == mpq(1, 2)
    with pytest.raises(FieldError):
        parse_rational("1/0")


def test_reduction_by_cusp_polynomial():
    a = CUSP52.gen()
    assert a * (a * a) == -2 * a * a + 4 * a - 56


def test_no_reduction_below_degree():
    a = CUSP52.gen()
    assert (a + 1) * (a - 1) == a * a - 1


def test_interval_must_isolate_one_root():
    with pytest.raises(FieldError):
        NumberField([-2, 0, 1], ["-2", "2"])
    with pytest.raises(FieldError):
        NumberField([-1, 0, 1], ["0", "2"])  # rational root
    with pytest.raises(FieldError):
        NumberField([1, 2, 1], ["-2", "0"])  # not squarefree


def test_sign_examples():
    assert fe_sign(SQRT2.zero()) == 0
    assert fe_sign(mpq(-3, 7)) == -1
    assert fe_sign(QQ(mpq(-3, 7))) == -1
    assert fe_sign(SQRT2.gen() - 1) == 1
    # sqrt2 - 1.4142135623730951 is tiny and positive: 1.41421356237309504880...
    assert fe_sign(SQRT2.gen() - mpq(14142135623730950, 10**16)) == 1
    assert fe_sign(SQRT2.gen() - mpq(14142135623730951, 10**16)) == -1


def test_to_float_examples():
    assert fe_to_float(QQ(mpq(1, 2))) == 0.5
    assert fe_to_float(SQRT2.zero()) == 0.0
    assert abs(fe_to_float(SQRT2.gen()) - math.sqrt(2)) < 1e-15
    with mpmath.workprec(300):
        got = fe_to_mpf(SQRT2.gen(), 256)
        assert abs(got - mpmath.sqrt(2)) < mpmath.mpf(2) ** -250


def test_cusp_root_matches_numeric_root():
    r = fe_to_float(CUSP52.gen())
    assert abs(56 - 4 * r + 2 * r * r + r**3) < 1e-9
    assert -6 < r < -5


def test_sqrt_in_field():
    r = fe_sqrt(SQRT2(2))
    assert r * r == SQRT2(2) and fe_sign(r) == 1
    assert fe_sqrt(QQ(mpq(9, 4))) == QQ(mpq(3, 2))


@given(elems(CUSP52), elems(CUSP52), elems(CUSP52))
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * x.inverse() == CUSP52.one()
        assert (y / x) * x == y


@given(elems(SQRT2))
def test_sign_zero_iff_zero(x):
    assert (fe_sign(x) == 0) == x.is_zero()


@given(elems(CUSP52), elems(CUSP52))
def test_float_respects_order(x, y):
    s = fe_sign(x - y)
    fx, fy = fe_to_float(x), fe_to_float(y)
    tol = 1e-9 * max(1.0, abs(fx), abs(fy))
    if s > 0:
        assert fx >= fy - tol
    elif s < 0:
        assert fx <= fy + tol


def test_division_by_zero_and_mixing():
    with pytest.raises((FieldError, ZeroDivisionError)):
        SQRT2.one() / SQRT2.zero()
    with pytest.raises(FieldError):
        SQRT2.one() + CUSP52.one()


def test_json_round_trip():
    d = CUSP52.to_json()
    again = NumberField.from_json(d)
    assert again.min_poly == CUSP52.min_poly
    x = CUSP52.from_coeffs([1, mpq(2, 3), -5])
    assert again.from_coeffs(x.to_json()).c == x.c

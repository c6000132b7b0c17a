from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dunkl.exact import (
    ComplexRational,
    SingularMatrixError,
    abs_squared,
    format_rational,
    invert_matrix,
    parse_rational,
    parse_scalar,
    solve_columns,
)

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=6)


@given(rationals, rationals, rationals, rationals)
def test_complex_rational_ring(a, b, c, d):
    z = ComplexRational(a, b)
    w = ComplexRational(c, d)
    assert (z + w) - w == z
    assert z * w == w * z
    assert z * (w + 1) == z * w + z
    if w:
        assert (z / w) * w == z


def test_complex_rational_pow_and_conj():
    z = ComplexRational(Fraction(1, 2), Fraction(-1, 3))
    assert z**0 == 1
    assert z**3 == z * z * z
    assert z.conjugate().im == Fraction(1, 3)
    assert abs_squared(z) == Fraction(1, 4) + Fraction(1, 9)


def test_real_complex_rational_matches_fraction():
    z = ComplexRational(Fraction(3, 4))
    assert z == Fraction(3, 4)
    assert hash(z) == hash(Fraction(3, 4))
    assert ComplexRational(0, 1) != Fraction(0)


def test_float_boundary():
    z = ComplexRational(1, 2)
    assert isinstance(z * 0.5, complex)
    assert z * 0.5 == (1 + 2j) * 0.5


def test_parse_and_format():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2
    assert parse_rational(0.5) == Fraction(1, 2)
    assert parse_scalar({"re": "1/2", "im": "1/3"}) == ComplexRational(
        Fraction(1, 2), Fraction(1, 3)
    )
    assert parse_scalar({"re": "1/2", "im": 0}) == Fraction(1, 2)
    assert format_rational(Fraction(-3, 7)) == "-3/7"
    assert format_rational(Fraction(4)) == "4"


def test_solve_columns_exact():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    (x,) = solve_columns(a, [[Fraction(5), Fraction(10)]])
    assert x == [Fraction(1), Fraction(3)]


def test_invert_matrix_roundtrip():
    a = [
        [Fraction(1), Fraction(2), Fraction(0)],
        [Fraction(0), Fraction(1), Fraction(4)],
        [Fraction(1), Fraction(0), Fraction(1)],
    ]
    inv = invert_matrix(a)
    n = 3
    prod = [
        [sum(a[i][k] * inv[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    assert prod == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def test_singular_matrix_raises():
    a = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    with pytest.raises(SingularMatrixError):
        solve_columns(a, [[Fraction(1), Fraction(0)]])


def test_complex_rational_linear_solve():
    i = ComplexRational(0, 1)
    a = [[i, ComplexRational(1)], [ComplexRational(1), i]]
    (x,) = solve_columns(a, [[ComplexRational(1), ComplexRational(0)]])
    # verify by substitution
    assert a[0][0] * x[0] + a[0][1] * x[1] == 1
    assert a[1][0] * x[0] + a[1][1] * x[1] == 0

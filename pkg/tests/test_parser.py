import re

import pytest
from hypothesis import given

from conftest import comm_polys
from reesdmod.parser import ParseError, UnknownVariable, format_xy, parse_polynomial, read_ideal_file
from reesdmod.poly_core import CommPoly, R_CTX, S_CTX

x, y = R_CTX.gens()


def test_basic():
    assert parse_polynomial("x^5 + 2*x*y^4") == x ** 5 + 2 * x * y ** 4


def test_repeated_product():
    assert parse_polynomial("x^5") == parse_polynomial("x*x*x*x*x")


def test_implicit_multiplication_and_aliases():
    assert parse_polynomial("2x y") == parse_polynomial("2*x1*x2")
    assert parse_polynomial("(x - y)(x + y)") == x ** 2 - y ** 2


def test_rationals():
    p = parse_polynomial("1/2x^2 - (x-y)^2")
    assert format_xy(p) == "-1/2*x^2 + 2*x*y - y^2"
    assert parse_polynomial("x/4") * 4 == x


def test_s_context():
    p = parse_polynomial("x1*T2 - x2*T1", S_CTX)
    assert p.bidegree() == (1, 1)


@pytest.mark.parametrize("text,column,msg", [
    ("x^", 3, "exponent must be a nonnegative integer"),
    ("x^-1", 3, "exponent must be a nonnegative integer"),
    ("(x+y", 5, "expected ')'"),
    ("3/0*x", 2, "division by zero"),
    ("x/y", 2, "division is only allowed by constants"),
    ("x^2.5", 4, "unexpected character"),
    ("", 1, "empty expression"),
])
def test_syntax_errors(text, column, msg):
    with pytest.raises(ParseError, match=re.escape(f"line 1, column {column}: {msg}")):
        parse_polynomial(text)


def test_unknown_variable():
    with pytest.raises(UnknownVariable, match="unknown variable z"):
        parse_polynomial("x + z")


def test_ideal_file():
    polys = read_ideal_file("x^2\n# a comment\nx*y\ny^2  # tail\n")
    assert polys == [x ** 2, x * y, y ** 2]
    with pytest.raises(ValueError, match="exactly three"):
        read_ideal_file("x\ny\n")
    with pytest.raises(UnknownVariable, match="line 3, column 1"):
        read_ideal_file("x\ny\nz\n")


@given(comm_polys(max_deg=5, max_terms=6))
def test_roundtrip(p):
    assert parse_polynomial(format_xy(p)) == p
    assert parse_polynomial(str(p)) == p


def test_zero():
    assert parse_polynomial("x - x") == CommPoly.zero(R_CTX)

"""Surface syntax: expression parsing, canonical printing, germ files."""

from fractions import Fraction

import pytest
from hypothesis import given

from germkit.errors import GermConditionError, ParseError
from germkit.germparse import (
    GermFile,
    LAbs,
    LMax,
    LVar,
    parse_germ_file,
    parse_lipschitz,
    parse_polynomial,
    print_lipschitz,
    print_polynomial,
    render_germ_file,
)
from germkit.polycore import Polynomial

from conftest import VAR_NAMES, polynomials

XY = ("x", "y")


def test_parse_golden_quasihomogeneous():
    p = parse_polynomial("x^4 - 2*x^2*y^3 - 4*x*y^5 + y^6 + y^7", XY)
    assert p.terms == {
        (4, 0): 1,
        (2, 3): -2,
        (1, 5): -4,
        (0, 6): 1,
        (0, 7): 1,
    }


def test_parse_rational_coefficients():
    p = parse_polynomial("1/2*x - 3/4*y^2", XY)
    assert p.coefficient((1, 0)) == Fraction(1, 2)
    assert p.coefficient((0, 2)) == Fraction(-3, 4)


def test_parse_precedence_and_unary_minus():
    assert parse_polynomial("x + y*x^2", XY) == parse_polynomial("(x) + (y*(x^2))", XY)
    assert parse_polynomial("-x^2", XY) == -parse_polynomial("x^2", XY)
    assert parse_polynomial("(-x)^2", XY) == parse_polynomial("x^2", XY)
    assert parse_polynomial("x - -y", XY) == parse_polynomial("x + y", XY)


def test_parse_strips_comments_and_whitespace():
    assert parse_polynomial("x |+ y".replace("|", ""), XY) == parse_polynomial(
        "x+y  # tail comment", XY
    )


def test_print_is_sorted_by_degree_then_reverse_lex():
    p = parse_polynomial("y^7 + y^6 - 4*x*y^5 - 2*x^2*y^3 + x^4", XY)
    assert print_polynomial(p, XY) == "x^4 - 2*x^2*y^3 - 4*x*y^5 + y^6 + y^7"


def test_print_edge_cases():
    assert print_polynomial(Polynomial.zero(2), XY) == "0"
    assert print_polynomial(Polynomial.constant(2, Fraction(-1, 3)), XY) == "-1/3"
    assert print_polynomial(parse_polynomial("-x + 1/2", XY), XY) == "1/2 - x"


@given(polynomials(nvars=2))
def test_print_then_parse_is_identity(p):
    assert parse_polynomial(print_polynomial(p, XY), XY) == p


@given(polynomials(nvars=3))
def test_print_then_parse_is_identity_three_vars(p):
    names = VAR_NAMES[: p.nvars]
    assert parse_polynomial(print_polynomial(p, names), names) == p


@pytest.mark.parametrize(
    "text, fragment, line, col",
    [
        ("x + w", "unknown variable 'w'", 1, 5),
        ("x ^ -2", "exponent must be a non-negative integer literal", 1, 3),
        ("x +", "unexpected 'end of input'", 1, 4),
        ("1/0 + x", "zero denominator", 1, 3),
        ("x $ y", "unexpected character '$'", 1, 3),
        ("2 x", "unexpected 'x'", 1, 3),
        ("(x + y", "expected ')'", 1, 7),
    ],
)
def test_parse_errors_carry_position(text, fragment, line, col):
    with pytest.raises(ParseError) as err:
        parse_polynomial(text, XY)
    assert fragment in err.value.message
    assert err.value.line == line
    assert err.value.column == col


# -- Lipschitz expressions ----------------------------------------------------


def test_lipschitz_parse_and_evaluate():
    e = parse_lipschitz("max(abs(x), min(y, 2)) - 1/2*x", XY)
    assert isinstance(e, object)
    assert e.evaluate_exact([Fraction(-3), Fraction(7)]) == Fraction(3) + Fraction(3, 2)
    assert e.evaluate([-3.0, 7.0]) == 4.5


def test_lipschitz_reserved_names_need_calls():
    e = parse_lipschitz("abs(x)", XY)
    assert isinstance(e, LAbs) and isinstance(e.arg, LVar)
    with pytest.raises(ParseError):
        parse_lipschitz("abs(x, y)", XY)
    with pytest.raises(ParseError):
        parse_lipschitz("min(x)", XY)


def test_lipschitz_print_round_trip():
    for text in ("abs(x) + max(x, y)", "min(x, y) * (x - 2)", "abs(x - abs(y))"):
        e = parse_lipschitz(text, XY)
        assert parse_lipschitz(print_lipschitz(e, XY), XY) == e
    assert isinstance(parse_lipschitz("max(x, y)", XY), LMax)


# -- germ files ---------------------------------------------------------------

WELL_FORMED = """\
# a plane curve pair
format 1
kind polynomial-map

vars x y
component x^2 + y^3   # first coordinate
component x^2*y
"""


def test_germ_file_parse_golden():
    germ = parse_germ_file(WELL_FORMED)
    assert germ.var_names == ("x", "y")
    assert germ.kind == "polynomial-map"
    assert germ.components == (
        parse_polynomial("x^2 + y^3", XY),
        parse_polynomial("x^2*y", XY),
    )


def test_germ_file_render_golden():
    germ = parse_germ_file(WELL_FORMED)
    assert render_germ_file(germ) == (
        "format 1\n"
        "kind polynomial-map\n"
        "vars x y\n"
        "component x^2 + y^3\n"
        "component x^2*y\n"
    )
    assert parse_germ_file(render_germ_file(germ)) == germ


def test_germ_file_lipschitz_kind():
    germ = parse_germ_file(
        "format 1\nkind lipschitz-map\nvars u v\ncomponent abs(u) - abs(v)\n"
    )
    assert germ.kind == "lipschitz-map"
    assert germ.components[0].evaluate_exact([Fraction(-2), Fraction(1)]) == 1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("kind polynomial-map\nvars x\ncomponent x", "must start with a format line"),
        ("format 2\n", "unsupported format version"),
        ("format 1\nformat 1\n", "duplicate format"),
        ("format 1\nkind waffle\n", "unknown kind"),
        ("format 1\nkind polynomial-map\nvars x x\ncomponent x", "duplicate variable"),
        ("format 1\nkind polynomial-map\nvars abs\ncomponent 0", "reserved"),
        ("format 1\nkind polynomial-map\ncomponent x", "component before vars"),
        ("format 1\nvars x\ncomponent x", "component before kind"),
        ("format 1\nkind polynomial-map\nvars x\nwidget 3", "unknown directive"),
        ("format 1\nkind polynomial-map\nvars x\n", "no components"),
    ],
)
def test_germ_file_structural_errors(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_germ_file(text)
    assert fragment in err.value.message


def test_germ_file_error_positions_are_line_accurate():
    # line numbers count file lines; columns count within the expression text
    with pytest.raises(ParseError) as err:
        parse_germ_file("format 1\nkind polynomial-map\nvars x y\ncomponent x + w\n")
    assert err.value.line == 4
    assert err.value.column == 5


def test_germ_file_requires_vanishing_at_origin():
    with pytest.raises(GermConditionError):
        parse_germ_file("format 1\nkind polynomial-map\nvars x y\ncomponent x + 1\n")
    with pytest.raises(GermConditionError):
        parse_germ_file(
            "format 1\nkind lipschitz-map\nvars x\ncomponent abs(x) + 1\n"
        )
    # abs(x) - x vanishes at 0 even though it is not a polynomial
    parse_germ_file("format 1\nkind lipschitz-map\nvars x\ncomponent abs(x) - x\n")

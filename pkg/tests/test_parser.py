import pytest
from hypothesis import given, settings

from lie_sfunctions.errors import ParseError
from lie_sfunctions.numeric import gr
from lie_sfunctions.ode import build_ode
from lie_sfunctions.parser import (
    parse_darboux,
    parse_ode,
    parse_poly,
    parse_rational,
    print_canonical,
    tokenize,
)
from lie_sfunctions.poly import XYZS

from helpers import EX1, EX2, ETA1_EX1, I1_EX2, I2_EX2
from strategies import darboux_members

P = parse_poly


def test_parse_examples():
    assert parse_ode(EX1) == build_ode(P("2*y-3*z*y+z^2*y-z*x+z^2*x"), P("y*(y-x)"))
    assert parse_ode(EX2) == build_ode(P("-x^2-4*y^4-2*y^2"), P("4*y^3"))
    assert parse_ode("y'' = 0").phi.is_zero()


def test_y_prime_is_z():
    assert parse_ode("y'' = y'*x") == parse_ode("y'' = z*x")


def test_print_examples():
    assert print_canonical(P("x+y*z+s*y^2", XYZS)) == "x + y*z + y^2*s"
    assert print_canonical(gr(0, 1)) == "i"
    assert print_canonical(parse_rational("0")) == "0"


def test_print_is_parseable():
    for text in (ETA1_EX1, I1_EX2, I2_EX2):
        e = parse_darboux(text)
        assert parse_darboux(print_canonical(e)) == e


def test_precedence():
    assert parse_poly("-x^2") == -(P("x") * P("x"))
    assert parse_poly("2*x^2*3") == P("6*x^2")
    assert parse_rational("x/y/z") == parse_rational("x/(y*z)")
    assert parse_poly("x-y-z") == P("x") - P("y") - P("z")


@pytest.mark.parametrize(
    "text, token",
    [
        ("y'' = (x", "("),
        ("y'' = y''", "y''"),
        ("y'' = x^(1/2)", "("),
        ("y'' = x^y", "y"),
        ("y'' = 2x", "x"),
        ("y'' = x $ 2", "$"),
        ("y'' = x/(y-y)", "(y-y)"),
        ("y = x", "y"),
    ],
)
def test_errors_carry_spans(text, token):
    with pytest.raises(ParseError) as exc:
        parse_ode(text)
    diags = exc.value.diagnostics
    assert diags
    for d in diags:
        assert 0 <= d.span.start < d.span.end <= len(text)
        assert text[d.span.start:d.span.end] in token or token.startswith(text[d.span.start:d.span.end])
        assert d.render(text)


def test_tokens_cover_input():
    toks = tokenize("y'' = (x + y')^2/3")
    assert [t.text for t in toks if t.text][:3] == ["y''", "=", "("]


@settings(max_examples=200, deadline=None)
@given(darboux_members())
def test_darboux_round_trip(e):
    assert parse_darboux(print_canonical(e)) == e.canonical()

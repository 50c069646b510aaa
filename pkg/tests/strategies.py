"""Hypothesis strategies for polynomials, rational functions and ODEs."""

from fractions import Fraction

from hypothesis import strategies as st

from lie_sfunctions.expr import DarbouxExpression
from lie_sfunctions.numeric import GaussianRational, gr
from lie_sfunctions.ode import build_ode
from lie_sfunctions.parser import parse_poly, parse_rational
from lie_sfunctions.poly import XYZ, MultiPoly, RationalFunction

small_fractions = st.builds(
    Fraction, st.integers(-9, 9), st.sampled_from([1, 1, 1, 2, 3])
)


@st.composite
def scalars(draw, complex_=True):
    re = draw(small_fractions)
    im = draw(small_fractions) if complex_ and draw(st.booleans()) else 0
    return GaussianRational(re, im)


def exponents(nvars=3, max_exp=2):
    return st.tuples(*[st.integers(0, max_exp)] * nvars)


@st.composite
def polys(draw, vars=XYZ, max_terms=4, max_exp=2, complex_=True, nonzero=False):
    terms = draw(
        st.dictionaries(
            exponents(len(vars), max_exp), scalars(complex_), min_size=1 if nonzero else 0, max_size=max_terms
        )
    )
    p = MultiPoly(terms, vars)
    if nonzero and p.is_zero():
        p = MultiPoly.one(vars)
    return p


@st.composite
def rationals(draw, max_terms=3, max_exp=2, complex_=True):
    num = draw(polys(max_terms=max_terms, max_exp=max_exp, complex_=complex_))
    den = draw(polys(max_terms=max_terms, max_exp=max_exp, complex_=complex_, nonzero=True))
    return RationalFunction(num, den)


@st.composite
def odes(draw):
    """Random rational 2ODEs with small numerator and a short denominator."""
    M = draw(polys(max_terms=3, max_exp=2, complex_=False))
    N = draw(st.sampled_from(["1", "x", "y", "y+1", "x-y", "z+x"]))
    return build_ode(M, parse_poly(N))


COPRIME_BASES = [parse_poly(t) for t in ("x", "y", "z+1", "x-y", "x+y*z")]
EXPONENTS = [gr(Fraction(1, 2)), gr(Fraction(1, 3)), gr(0, 1), gr(Fraction(-1, 2), 2), gr(2)]


@st.composite
def darboux_terms(draw):
    r = draw(rationals(max_terms=2, max_exp=1))
    g = draw(st.one_of(st.just(parse_rational("0")), rationals(max_terms=2, max_exp=1)))
    idx = draw(st.lists(st.integers(0, len(COPRIME_BASES) - 1), max_size=2, unique=True))
    powers = [(COPRIME_BASES[i], draw(st.sampled_from(EXPONENTS))) for i in idx]
    return DarbouxExpression.product(r, g, powers)


@st.composite
def darboux_members(draw, logs=True):
    e = DarbouxExpression()
    for t in draw(st.lists(darboux_terms(), min_size=1, max_size=2)):
        e = e + t
    if logs:
        idx = draw(st.lists(st.integers(0, len(COPRIME_BASES) - 1), max_size=2, unique=True))
        e = e + DarbouxExpression.log_terms(
            [(COPRIME_BASES[i], draw(st.sampled_from(EXPONENTS))) for i in idx]
        )
    return e


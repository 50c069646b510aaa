import pytest
import sympy
from hypothesis import given, settings

from lie_sfunctions.errors import InexactDivision
from lie_sfunctions.factor import poly_factor_limited
from lie_sfunctions.modgcd import modular_gcd
from lie_sfunctions.parser import parse_poly, parse_rational
from lie_sfunctions.poly import MultiPoly, RationalFunction, poly_arith, poly_diff, poly_gcd, rat_normalize

from helpers import X, Y, Z, to_sympy
from strategies import polys, rationals

P = parse_poly


def test_mul_conjugate_factors():
    prod = poly_arith("mul", P("x+2*y*z-2*i*y^2"), P("x+2*y*z+2*i*y^2"))
    assert prod == P("x^2 + 4*x*y*z + 4*y^2*z^2 + 4*y^4")
    oracle = sympy.expand((X + 2 * Y * Z - 2 * sympy.I * Y**2) * (X + 2 * Y * Z + 2 * sympy.I * Y**2))
    assert sympy.expand(to_sympy(prod) - oracle) == 0


def test_exact_div():
    assert poly_arith("exact_div", P("x^2-y^2"), P("x-y")) == P("x+y")
    with pytest.raises(InexactDivision):
        poly_arith("exact_div", P("x^2+y"), P("x-y"))


def test_additive_inverse():
    p = P("3*y*z-y*z^2-x*z^2-2*y+x*z")
    assert poly_arith("add", p, -p).is_zero()


def test_diff_examples():
    d = poly_diff(P("-x^2-4*y^4-2*y^2"), "y")
    assert d == P("-16*y^3-4*y")
    assert sympy.expand(to_sympy(d) - sympy.diff(-X**2 - 4 * Y**4 - 2 * Y**2, Y)) == 0
    assert poly_diff(P("x+y*z"), "z") == P("y")
    assert poly_diff(P("7"), "x").is_zero()


def test_gcd_examples():
    assert poly_gcd(P("(x-y)*y"), P("(x-y)*(z-1)")) == P("x-y")
    assert poly_gcd(P("x+1"), P("y+1")) == P("1")
    p = P("x+2*y*z-2*i*y^2")
    assert poly_gcd(p, p) == p.monic()


def _same_factors(got, expected):
    got = sorted((f.monic().sort_key(), k) for f, k in got)
    expected = sorted((f.monic().sort_key(), k) for f, k in expected)
    return got == expected


def test_factor_monomials_and_binomials():
    p = P("x*y*z*(x-y)*(z*x-y)")
    fl = poly_factor_limited(p)
    assert _same_factors(fl, [(P(t), 1) for t in ("y", "x", "z", "x-y", "z*x-y")])
    # independent oracle
    _, sym = sympy.factor_list(to_sympy(p))
    assert len(sym) == len(fl)


def test_factor_gaussian_split():
    fl = poly_factor_limited(P("x^2+4*x*y*z+4*y^2*z^2+4*y^4"))
    assert _same_factors(fl, [(P("x+2*y*z-2*i*y^2"), 1), (P("x+2*y*z+2*i*y^2"), 1)])
    _, sym = sympy.factor_list(X**2 + 4 * X * Y * Z + 4 * Y**2 * Z**2 + 4 * Y**4, gaussian=True)
    assert len(sym) == 2
    for f, _ in fl:
        assert any(sympy.simplify(to_sympy(f) / g).is_constant() for g, _ in sym)


def test_factor_irreducible():
    assert _same_factors(poly_factor_limited(P("x-y")), [(P("x-y"), 1)])


def test_factor_multiplicity():
    fl = poly_factor_limited(P("3*(x-y)^2*(z-1)"))
    assert _same_factors(fl, [(P("x-y"), 2), (P("z-1"), 1)])


def test_rat_normalize_examples():
    assert rat_normalize(P("(x^2-y^2)*y"), P("(x-y)*y^2")) == parse_rational("(x+y)/y")
    r = rat_normalize(MultiPoly.zero(), P("y^3"))
    assert r.num.is_zero() and r.den == P("1")
    r = rat_normalize(P("2*y-3*z*y+z^2*y-z*x+z^2*x"), P("y*(y-x)"))
    assert r.den.leading_coefficient().is_one()
    assert r.den == P("x*y-y^2")
    assert r.num == P("-(2*y-3*z*y+z^2*y-z*x+z^2*x)")


def test_rat_normalize_pins_gcd():
    r = RationalFunction(P("(x+1)*(y-2)"), P("(x+1)*(z+3)"))
    assert r.num == P("y-2") and r.den == P("z+3")


# -- properties -----------------------------------------------------------------

@settings(max_examples=500, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert (a - a).is_zero()


@settings(max_examples=200, deadline=None)
@given(polys(max_terms=5, max_exp=3))
def test_diff_commutes(p):
    for u, v in (("x", "y"), ("x", "z"), ("y", "z")):
        assert p.diff(u).diff(v) == p.diff(v).diff(u)


@settings(max_examples=200, deadline=None)
@given(polys(max_terms=3, nonzero=True), polys(max_terms=3, nonzero=True))
def test_factor_remultiplies(a, b):
    p = a * b
    if p.is_constant():
        return
    fl = poly_factor_limited(p)
    prod = MultiPoly.const(fl.unit)
    for f, k in fl:
        prod = prod * f**k
    assert prod == p


@settings(max_examples=200, deadline=None)
@given(rationals())
def test_rat_normalize_idempotent(r):
    again = rat_normalize(r.num, r.den)
    assert again == r
    assert again.num == r.num and again.den == r.den


@settings(max_examples=200, deadline=None)
@given(polys(nonzero=True), polys(nonzero=True))
def test_exact_div_round_trip(a, b):
    assert (a * b).exact_div(b) == a


@settings(max_examples=100, deadline=None)
@given(polys(max_terms=3), polys(max_terms=3))
def test_mul_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=100, deadline=None)
@given(polys(max_terms=3, complex_=False, nonzero=True), polys(max_terms=3, complex_=False, nonzero=True),
       polys(max_terms=2, complex_=False, nonzero=True))
def test_gcd_contains_common_factor(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert g.divides(a * c) and g.divides(b * c)
    assert c.divides(g)
    sym = sympy.gcd(to_sympy(a * c), to_sympy(b * c))
    assert sympy.simplify(to_sympy(g) / sym).is_constant()


def test_modular_gcd_gaussian_factor():
    f = P("x+2*y*z-2*i*y^2")
    a = f**2 * P("x-y") * P("z+1/3")
    b = f * P("(x-y)^2") * P("y+7*i")
    g = modular_gcd(a, b, lambda t: MultiPoly(t))
    assert g == (f * P("x-y")).monic()
    assert poly_gcd(a, b) == g


def test_modular_gcd_high_degree():
    # degree 12 in each argument; the remainder sequence is impractical here
    c = P("x*y - (2/3+i)*z^2 + 5")
    a = c * P("x^3*z^2 - y^4 + i*x*y*z + 1") ** 2
    b = c * P("y^3*x - z^5 + 2*x + 3*i") ** 2
    assert poly_gcd(a, b) == c.monic()


@settings(max_examples=60, deadline=None)
@given(polys(max_terms=3, nonzero=True), polys(max_terms=3, nonzero=True), polys(max_terms=3, nonzero=True))
def test_gaussian_gcd_matches_sympy(a, b, c):
    if (a * c).is_constant() or (b * c).is_constant():
        return
    g = poly_gcd(a * c, b * c)
    assert c.divides(g) and g.divides(a * c) and g.divides(b * c)
    gens = sympy.symbols("x y z")
    sym = sympy.gcd(sympy.Poly(to_sympy(a * c), *gens, extension=True),
                    sympy.Poly(to_sympy(b * c), *gens, extension=True))
    assert sym.total_degree() == max(g.total_degree(), 0)

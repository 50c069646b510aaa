"""Shared fixtures data, oracles and comparators for the test suite.

Published values are transcribed verbatim into the input grammar.  sympy is
used only here, as an independent oracle for hand-derivable values.
"""

from __future__ import annotations

import functools
import io
import json
import time

import sympy

from lie_sfunctions.cli import run
from lie_sfunctions.expr import DarbouxExpression, partial
from lie_sfunctions.parser import parse_darboux, parse_ode, parse_poly, print_canonical
from lie_sfunctions.pipeline import Config, analyze
from lie_sfunctions.poly import XYZS

EX1 = "y'' = (2*y - 3*z*y + z^2*y - z*x + z^2*x)/(y*(y-x))"
EX2 = "y'' = -(x^2 + 4*y^4 + 2*y^2)/(4*y^3)"
FLAT = "y'' = 0"
DAMPED = "y'' = z"

EX1_FLAGS = ["--deg-s", "4", "--deg-darboux", "1"]
EX2_FLAGS = ["--deg-s", "6", "--deg-darboux", "2"]

# published values, example 1
S1_EX1 = "(z-1)*(y+x)/(y*(x-y))"
S2_EX1 = "x*(-2*y+z*y+z*x)*(z-1)/((x-y)*(z*x-y)*y)"
DARBOUX_EX1 = [("y", "(x-y)*z"), ("x-y", "-(z-1)*y"), ("z-1", "2*y-z*y-z*x")]
ETA1_EX1 = "-(x-y)^2*exp((x-y)/((z-1)*y))/y"
ETA2_EX1 = "(z*x-y)*(x-y)^2/((z-1)*y)"
I1_EX1 = "y*(z-1)/(y-x)^2"
I2_EX1_INTEGRAND = "exp((y-x)/(y*(z-1)))*(-2*y+z*y+z*x)*y/(y-x)^3"
SCRIPTD_EX1 = {
    "x": "y^4+y^2*x^2-2*y^3*x",
    "y": "-2*z*y^3*x+z*y^4+z*y^2*x^2",
    "z": "y*z*x^2-y*x^2*z^2+2*y^3+2*y^2*z*x+y^3*z^2-3*z*y^3-2*x*y^2",
    "s": "(y^2*x^2+y^4-2*y^3*x)*s^2+(-2*z*y*x^2+2*z*y^3+2*x*y^2+y*x^2-3*y^3)*s"
         "-z^2*x^2+z*x^2+z^2*y^2-2*z*y*x+2*y^2-3*z*y^2+2*z^2*y*x",
}

# published values, example 2
S1_EX2 = "-(x+y*z)/y^2"
S2_EX2 = ("(4*y^4*x+8*y^5*z+4*y^2*x+4*y^3*z+x^3+2*x^2*y*z+2*i*(x^2*y^2+4*y^6))"
          "/(4*(-y+z*x+2*y*z^2+2*i*y^2*z)*y^3)")
DARBOUX_EX2 = [
    ("y", "4*y^2*z"),
    ("x+2*y*z+2*i*y^2", "-2*y*(x-2*y*z-2*i*y^2)"),
    ("x+2*y*z-2*i*y^2", "-2*y*(x-2*y*z+2*i*y^2)"),
]
ETA1_EX2 = "4*y^3/((x+2*y*z-2*i*y^2)*(x+2*y*z+2*i*y^2))"
ETA2_EX2 = "-(-y+z*x+2*y*z^2+2*i*y^2*z)/(4*(x+2*y*z+2*i*y^2))"
I1_EX2 = "4*x-2*i*log((x+2*y*z-2*i*y^2)/(x+2*y*z+2*i*y^2))"
I2_EX2 = "1/2*y^2+1/2*i*x+log(y)-1/2*log(x+2*y*z+2*i*y^2)-1/8*x^2/y^2+1/2*z^2"
SCRIPTD_EX2 = {
    "x": "16*y^6",
    "y": "16*y^6*z",
    "z": "4*y^2*(-4*y^5-2*y^3-y*x^2)",
    "s": "4*y^2*(-3*x^2+4*y^4*s^2-2*y^2+4*y^4)",
}

CONFIGS = {
    "ex1": (EX1, Config(deg_s=4, deg_darboux=1)),
    "ex2": (EX2, Config(deg_s=6, deg_darboux=2)),
    "flat": (FLAT, Config()),
    "damped": (DAMPED, Config()),
}


@functools.lru_cache(maxsize=None)
def analysis(name: str):
    text, cfg = CONFIGS[name]
    return analyze(parse_ode(text), cfg)


@functools.lru_cache(maxsize=None)
def cli_report(command: str, ode: str, *flags: str):
    """(exit code, parsed JSON, raw stdout, elapsed seconds) for one CLI run."""
    out, err = io.StringIO(), io.StringIO()
    t = time.perf_counter()
    code = run([command, ode, *flags, "--format", "json"], out, err)
    elapsed = time.perf_counter() - t
    return code, json.loads(out.getvalue()), out.getvalue(), elapsed


def cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# -- comparators ---------------------------------------------------------------

def gradient(e: DarbouxExpression):
    return tuple(partial(e, v).canonical() for v in "xyz")


def constant_ratio(a: DarbouxExpression, b: DarbouxExpression):
    """a/b as a scalar when it is a nonzero constant, else None."""
    if not a.terms or not b.terms:
        return None
    q = (a / b).canonical()
    if not q.is_rational():
        return None
    r = q.as_rational()
    if not r.is_constant() or r.is_zero():
        return None
    return r.num.constant_value() / r.den.constant_value()


def proportional_gradients(g1, g2):
    """Scalar c != 0 with g1 = c*g2 componentwise, or None."""
    c = None
    for a, b in zip(g1, g2):
        if not b.terms:
            if a.terms:
                return None
            continue
        c = constant_ratio(a, b)
        break
    if c is None:
        return None
    for a, b in zip(g1, g2):
        if not (a - b.scale(c)).is_zero():
            return None
    return c


def affine_equivalent(I: DarbouxExpression, J: DarbouxExpression) -> bool:
    """I = c1*J + c2 for constants c1 != 0, c2: gradients proportional."""
    return proportional_gradients(gradient(I), gradient(J)) is not None


def eta_matches(returned, published: str) -> bool:
    target = parse_darboux(published)
    return any(constant_ratio(e, target) is not None for e in returned)


def scriptD_proportional(D, published: dict):
    """Single constant k with D.coeffs[v] = k * published[v] for all v."""
    k = None
    for v in ("x", "y", "z", "s"):
        ours = D.coeffs[v]
        theirs = parse_poly(published[v], XYZS)
        if k is None:
            k = ours.leading_coefficient() / theirs.leading_coefficient()
        if ours != theirs.scale(k):
            return None
    return k


# -- sympy oracle --------------------------------------------------------------

X, Y, Z, S = sympy.symbols("x y z s")
_NS = {"x": X, "y": Y, "z": Z, "s": S, "i": sympy.I, "exp": sympy.exp, "log": sympy.log}


def to_sympy(value) -> sympy.Expr:
    text = value if isinstance(value, str) else print_canonical(value)
    return sympy.sympify(text.replace("^", "**"), locals=_NS)


def sym_equal(a, b) -> bool:
    return sympy.simplify(to_sympy(a) - to_sympy(b)) == 0


def sym_phi(ode_text: str) -> sympy.Expr:
    return to_sympy(ode_text.split("=", 1)[1])


def sym_Dx(expr: sympy.Expr, phi: sympy.Expr) -> sympy.Expr:
    return sympy.diff(expr, X) + Z * sympy.diff(expr, Y) + phi * sympy.diff(expr, Z)

"""Exact S-functions, Darboux-form symmetries and first integrals of
rational second-order ODEs y'' = M/N."""

from .numeric import GaussianRational
from .poly import MultiPoly, RationalFunction
from .ode import Rational2ODE, build_ode, apply_Dx, build_D, build_scriptD
from .parser import parse_ode, parse_poly, parse_rational, parse_darboux, print_canonical
from .darboux import find_darboux, find_linear_s_eigenpolys
from .sfunctions import SFunction, certify_s, extract_s
from .expr import DarbouxExpression
from .symmetry import candidate_pool, solve_eta, verify_symmetry, sfunction_of
from .integrals import integrating_factors, gradient_of, integrate_gradient, verify_first_integral
from .pipeline import Config, analyze

__all__ = [
    "GaussianRational",
    "MultiPoly",
    "RationalFunction",
    "Rational2ODE",
    "build_ode",
    "apply_Dx",
    "build_D",
    "build_scriptD",
    "parse_ode",
    "parse_poly",
    "parse_rational",
    "parse_darboux",
    "print_canonical",
    "find_darboux",
    "find_linear_s_eigenpolys",
    "SFunction",
    "certify_s",
    "extract_s",
    "DarbouxExpression",
    "candidate_pool",
    "solve_eta",
    "verify_symmetry",
    "sfunction_of",
    "integrating_factors",
    "gradient_of",
    "integrate_gradient",
    "verify_first_integral",
    "Config",
    "analyze",
]

__version__ = "0.1.0"

"""Rational second-order ODEs y'' = M/N and the derivations built from them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Mapping, Sequence, Tuple

from .errors import ZeroDenominator, ZeroSFunction
from .poly import XYZ, XYZS, MultiPoly, RationalFunction, poly_gcd


class Derivation:
    """Polynomial vector field ``sum_v coeffs[v] * d/dv``."""

    def __init__(self, vars: Sequence[str], coeffs: Mapping[str, MultiPoly]):
        self.vars = tuple(vars)
        self.coeffs: Dict[str, MultiPoly] = {
            v: coeffs.get(v, MultiPoly.zero(self.vars)).with_vars(self.vars) for v in self.vars
        }

    def __call__(self, p: MultiPoly) -> MultiPoly:
        p = p.with_vars(self.vars)
        out = MultiPoly.zero(self.vars)
        for v in self.vars:
            c = self.coeffs[v]
            if c.is_zero():
                continue
            dp = p.diff(v)
            if not dp.is_zero():
                out = out + c * dp
        return out

    apply = __call__

    def apply_rational(self, f: RationalFunction) -> RationalFunction:
        num = f.num.with_vars(self.vars)
        den = f.den.with_vars(self.vars)
        if den.is_constant():
            return RationalFunction(self(num), den)
        return RationalFunction(self(num) * den - num * self(den), den * den)

    def max_coefficient_degree(self) -> int:
        return max((c.total_degree() for c in self.coeffs.values()), default=-1)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.vars == other.vars and self.coeffs == other.coeffs

    def __repr__(self):
        inner = ", ".join(f"{v}: {self.coeffs[v]}" for v in self.vars)
        return f"Derivation({inner})"


@dataclass(frozen=True)
class Rational2ODE:
    """y'' = M/N with gcd(M, N) = 1 and N monic under graded-lex order."""

    M: MultiPoly
    N: MultiPoly

    @cached_property
    def phi(self) -> RationalFunction:
        return RationalFunction(self.M, self.N, normalized=True)

    @cached_property
    def phi_y(self) -> RationalFunction:
        return self.phi.diff("y")

    @cached_property
    def phi_z(self) -> RationalFunction:
        return self.phi.diff("z")

    @cached_property
    def D(self) -> Derivation:
        return build_D(self)

    @cached_property
    def scriptD(self) -> Derivation:
        return build_scriptD(self)

    def __str__(self):
        from .parser import print_canonical

        return print_canonical(self)


def build_ode(M_raw: MultiPoly, N_raw: MultiPoly) -> Rational2ODE:
    if N_raw.is_zero():
        raise ZeroDenominator("N must be nonzero")
    M = M_raw.with_vars(XYZ)
    N = N_raw.with_vars(XYZ)
    if not M.is_zero():
        g = poly_gcd(M, N)
        if not g.is_constant():
            M = M.exact_div(g)
            N = N.exact_div(g)
    else:
        N = MultiPoly.one(XYZ)
    lc = N.leading_coefficient()
    if not lc.is_one():
        inv = lc.inverse()
        M, N = M.scale(inv), N.scale(inv)
    return Rational2ODE(M, N)


def apply_Dx(ode: Rational2ODE, f: RationalFunction) -> RationalFunction:
    """Total derivative d/dx along solutions: (D[f])/N."""
    f = f.with_vars(XYZ)
    D = ode.D
    if f.den.is_constant():
        return RationalFunction(D(f.num), ode.N * f.den)
    num = D(f.num) * f.den - f.num * D(f.den)
    return RationalFunction(num, ode.N * f.den * f.den)


def build_D(ode: Rational2ODE) -> Derivation:
    z = MultiPoly.var("z", XYZ)
    return Derivation(XYZ, {"x": ode.N, "y": ode.N * z, "z": ode.M})


def gamma_coefficients(ode: Rational2ODE) -> Tuple[MultiPoly, MultiPoly]:
    """(Gamma1, Gamma0) = (N*M_z - M*N_z, M*N_y - N*M_y)."""
    M, N = ode.M, ode.N
    g1 = N * M.diff("z") - M * N.diff("z")
    g0 = M * N.diff("y") - N * M.diff("y")
    return g1, g0


def build_scriptD(ode: Rational2ODE) -> Derivation:
    M, N = ode.M.with_vars(XYZS), ode.N.with_vars(XYZS)
    g1, g0 = (g.with_vars(XYZS) for g in gamma_coefficients(ode))
    s = MultiPoly.var("s", XYZS)
    z = MultiPoly.var("z", XYZS)
    N2 = N * N
    return Derivation(
        XYZS,
        {"x": N2, "y": N2 * z, "z": N * M, "s": N2 * s * s + g1 * s + g0},
    )


@dataclass(frozen=True)
class Auxiliary1ODE:
    """d(dependent)/d(independent) = rhs with one jet variable frozen."""

    kind: str
    fixed_variable: str
    parameter: str
    independent: str
    dependent: str
    rhs: RationalFunction


_AUX_VARS = {
    "A1": ("a1", "u", "v"),
    "A2": ("a2", "t", "v"),
    "A3": ("a3", "t", "u"),
}


def _aux_sub(f: RationalFunction, kind: str) -> RationalFunction:
    vars = _AUX_VARS[kind]
    if kind == "A1":
        mapping = {"x": "a1", "y": "u", "z": "v"}
    elif kind == "A2":
        mapping = {"x": "t", "y": "a2", "z": "v"}
    else:
        mapping = {"x": "t", "y": "u", "z": "a3"}
    images = {k: MultiPoly.var(v, vars) for k, v in mapping.items()}
    return f.with_vars(XYZ).substitute(images, vars)


def auxiliary_ode(ode: Rational2ODE, S: RationalFunction, kind: str) -> Auxiliary1ODE:
    """One auxiliary 1ODE: A1 freezes x, A2 freezes y, A3 freezes z."""
    S = S.with_vars(XYZ)
    z = MultiPoly.var("z", XYZ)
    if kind == "A1":
        return Auxiliary1ODE("A1", "x", "a1", "u", "v", -_aux_sub(S, "A1"))
    if kind == "A2":
        return Auxiliary1ODE("A2", "y", "a2", "t", "v", _aux_sub(ode.phi + S * z, "A2"))
    if kind == "A3":
        if S.is_zero():
            raise ZeroSFunction("A3 needs a nonzero S-function")
        return Auxiliary1ODE("A3", "z", "a3", "t", "u", _aux_sub((ode.phi + S * z) / S, "A3"))
    raise ValueError(f"unknown auxiliary kind {kind!r}")


def auxiliary_odes(ode: Rational2ODE, S: RationalFunction):
    """(A1, A2, A3); A3 is ``None`` when S vanishes identically."""
    A3 = None if S.is_zero() else auxiliary_ode(ode, S, "A3")
    return auxiliary_ode(ode, S, "A1"), auxiliary_ode(ode, S, "A2"), A3


def evolutionary_form(xi: RationalFunction, eta: RationalFunction) -> RationalFunction:
    """eta_bar = eta - z*xi."""
    z = MultiPoly.var("z", XYZ)
    return eta.with_vars(XYZ) - xi.with_vars(XYZ) * z

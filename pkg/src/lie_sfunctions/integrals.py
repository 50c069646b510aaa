"""Integrating factors, gradients and first integrals from pairs of
S-functions with their symmetries.

With R = 1/((S_other - S)*eta_other) the one-form
R*((phi + S*z) dx - S dy - dz) is closed, so its potential I is a first
integral.  Integration is attempted in the rational-plus-logarithms class
only; anything else is reported through its exact gradient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DegenerateSPair
from .expr import DarbouxExpression, dx_total, partial
from .factor import poly_factor_limited
from .numeric import GaussianRational
from .ode import Rational2ODE, apply_Dx
from .poly import XYZ, MultiPoly, RationalFunction, dense_monomials, poly_lcm
from .sfunctions import SFunction
from .solver import solve_linear

Gradient = Tuple[DarbouxExpression, DarbouxExpression, DarbouxExpression]

CLOSED_FORM = "ClosedForm"
GRADIENT_ONLY = "GradientOnly"


@dataclass
class GradientReport:
    gradient: Gradient
    closed: bool
    r_identity: bool
    rs_identity: bool
    diagnostics: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closed and self.r_identity and self.rs_identity


@dataclass
class FirstIntegralResult:
    gradient: Gradient
    closed_form: Optional[DarbouxExpression]
    status: str
    verified: bool
    diagnostics: List[str] = field(default_factory=list)


def _rf(S) -> RationalFunction:
    return (S.value if isinstance(S, SFunction) else S).with_vars(XYZ)


def integrating_factors(S1, eta2: DarbouxExpression, S2, eta1: DarbouxExpression):
    """(R1, R2) = (1/((S2 - S1)*eta2), 1/((S1 - S2)*eta1))."""
    s1, s2 = _rf(S1), _rf(S2)
    diff = s2 - s1
    if diff.is_zero():
        raise DegenerateSPair("the two S-functions coincide")
    R1 = eta2.scale(diff).reciprocal()
    R2 = eta1.scale(-diff).reciprocal()
    return R1, R2


def gradient_of(ode: Rational2ODE, R: DarbouxExpression, S, seed: int = 0) -> GradientReport:
    """(R*(phi + S*z), -R*S, -R) with closedness and R-identity checks."""
    S = _rf(S)
    z = RationalFunction.from_poly(MultiPoly.var("z", XYZ))
    Ix = R.scale(ode.phi + S * z)
    Iy = R.scale(-S)
    Iz = -R
    diags = []
    closed = True
    for (a, va), (b, vb) in (((Ix, "y"), (Iy, "x")), ((Ix, "z"), (Iz, "x")), ((Iy, "z"), (Iz, "y"))):
        if not (partial(a, va) - partial(b, vb)).is_zero(seed):
            closed = False
            diags.append(f"mixed partials d{va} vs d{vb} disagree")
    dR = dx_total(ode, R)
    e1 = (dR + R.scale(ode.phi_z + S)).is_zero(seed)
    e2 = (dR.scale(S) + R.scale(apply_Dx(ode, S) + ode.phi_y)).is_zero(seed)
    if not e1:
        diags.append("D_x[R] + R*(phi_z + S) is not zero")
    if not e2:
        diags.append("S*D_x[R] + R*D_x[S] + R*phi_y is not zero")
    return GradientReport((Ix, Iy, Iz), closed, e1, e2, diags)


def _factor_dens(dens: Sequence[MultiPoly]) -> Dict[MultiPoly, int]:
    mult: Dict[MultiPoly, int] = {}
    for d in dens:
        if d.is_constant():
            continue
        for f, k in poly_factor_limited(d, known=list(mult)):
            f = f.monic()
            mult[f] = max(mult.get(f, 0), k)
    return mult


def _as_product(A: MultiPoly, logs: List[Tuple[MultiPoly, GaussianRational]]) -> Optional[DarbouxExpression]:
    """sum g_j log p_j with rationally dependent g_j as a rational function
    prod p_j^k_j (integer k_j, gcd 1, first nonzero positive)."""
    if not A.is_zero() or not logs:
        return None
    g0 = logs[0][1]
    ratios = []
    for _, g in logs:
        r = g / g0
        if not r.is_real():
            return None
        ratios.append(r.re)
    den = 1
    for r in ratios:
        den = den * r.denominator // gcd(den, r.denominator)
    ks = [int(r * den) for r in ratios]
    g = 0
    for k in ks:
        g = gcd(g, k)
    ks = [k // g for k in ks]
    if ks[0] < 0:
        ks = [-k for k in ks]
    num = MultiPoly.one(XYZ)
    dd = MultiPoly.one(XYZ)
    for (p, _), k in zip(logs, ks):
        if k > 0:
            num = num * p ** k
        else:
            dd = dd * p ** (-k)
    return DarbouxExpression.rational(RationalFunction(num, dd))


def integrate_gradient(g: Gradient, ode: Optional[Rational2ODE] = None, extra_degree: int = 1) -> Optional[DarbouxExpression]:
    """Potential of a closed rational gradient in the class A/B + sum g_j log p_j.

    B carries every denominator factor with its multiplicity lowered by one
    (the Hermite split), the p_j are all denominator factors, and A is dense
    of bounded degree.  Matching the three partials is a linear system.
    Returns None when a component is not rational or no potential exists
    within the degree bound.
    """
    comps = []
    for c in g:
        if not c.is_rational():
            return None
        comps.append(c.as_rational())
    mult = _factor_dens([c.den for c in comps])
    bases = sorted(mult, key=lambda p: (p.total_degree(), p.sort_key()))
    B = MultiPoly.one(XYZ)
    for p in bases:
        if mult[p] > 1:
            B = B * p ** (mult[p] - 1)
    excess = max((c.num.total_degree() - c.den.total_degree() for c in comps if not c.is_zero()), default=0)
    degA = B.total_degree() + max(excess, 0) + extra_degree
    lm = B.leading_monomial()
    A_monos = [m for m in dense_monomials(3, degA) if m != lm]
    nA = len(A_monos)
    n = nA + len(bases)
    rows, rhs = [], []
    B2 = B * B
    P_all = MultiPoly.one(XYZ)
    for p in bases:
        P_all = P_all * p
    for v, c in zip(XYZ, comps):
        W = poly_lcm(poly_lcm(B2, P_all), c.den)
        WB2 = W.exact_div(B2)
        Bv = B.diff(v)
        images = []
        for m in A_monos:
            mp = MultiPoly.monomial(m, 1, XYZ)
            images.append((mp.diff(v) * B - mp * Bv) * WB2)
        for p in bases:
            images.append(p.diff(v) * W.exact_div(p))
        target = c.num * W.exact_div(c.den)
        monos = set(target.terms)
        for img in images:
            monos.update(img.terms)
        for mono in monos:
            rows.append({j: img.terms[mono] for j, img in enumerate(images) if mono in img.terms})
            rhs.append(target.terms.get(mono, GaussianRational(0)))
    sol = solve_linear(rows, rhs, n)
    if sol.particular is None:
        return None
    vec = sol.particular
    A = MultiPoly({m: vec[j] for j, m in enumerate(A_monos) if vec[j]}, XYZ)
    logs = [(p, vec[nA + j]) for j, p in enumerate(bases) if vec[nA + j]]
    I = _as_product(A, logs)
    if I is None:
        I = DarbouxExpression.rational(RationalFunction(A, B)) + DarbouxExpression((), logs)
        check = I
    else:
        # the product form is a function of the potential; compare directions
        check = None
    if check is not None:
        for v, c in zip(XYZ, comps):
            if not (partial(check, v) - DarbouxExpression.rational(c)).is_zero():
                return None
    if ode is not None and not verify_first_integral(ode, I):
        return None
    return I


def verify_first_integral(ode: Rational2ODE, I: DarbouxExpression, seed: int = 0) -> bool:
    return dx_total(ode, I).is_zero(seed)


def cross_application(ode: Rational2ODE, eta: DarbouxExpression, gradient: Gradient) -> DarbouxExpression:
    """X[I] = eta*I_y + D_x[eta]*I_z from the gradient of I."""
    zeta = dx_total(ode, eta)
    return (eta * gradient[1] + zeta * gradient[2]).canonical()


def jacobian_minors(g1: Gradient, g2: Gradient) -> List[DarbouxExpression]:
    """The three 2x2 minors of the Jacobian of (I1, I2) in (x, y, z)."""
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out.append((g1[i] * g2[j] - g1[j] * g2[i]).canonical())
    return out


def first_integral(ode: Rational2ODE, R: DarbouxExpression, S, seed: int = 0) -> FirstIntegralResult:
    rep = gradient_of(ode, R, S, seed)
    if not rep.ok:
        return FirstIntegralResult(rep.gradient, None, GRADIENT_ONLY, False, rep.diagnostics)
    I = integrate_gradient(rep.gradient, ode)
    if I is None:
        return FirstIntegralResult(rep.gradient, None, GRADIENT_ONLY, True, rep.diagnostics)
    return FirstIntegralResult(rep.gradient, I, CLOSED_FORM, verify_first_integral(ode, I, seed), rep.diagnostics)

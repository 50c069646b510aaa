"""Darboux-form symmetries eta_bar from a certified S-function.

The ansatz ``eta_bar = exp(A/B) * prod p_i^c_i`` turns the defining
relation ``D[eta_bar]/eta_bar = -N*P/Q`` into a linear system in the
exponents ``c_i`` and the coefficients of ``A`` once denominators are
cleared.  ``B`` runs over products of pool members, smallest degree first.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .darboux import DarbouxPair, cofactor_of
from .errors import NonRationalLogDerivative, NoSymmetryWithinBounds, VerificationFailure
from .expr import DarbouxExpression, dx_total, partial
from .factor import poly_factor_limited
from .numeric import GaussianRational
from .ode import Rational2ODE
from .poly import XYZ, MultiPoly, RationalFunction, dense_monomials, mono_key
from .sfunctions import SFunction
from .solver import solve_linear

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoolEntry:
    """A pool polynomial; ``cofactor`` is None for factors of den(S) that
    are not Darboux polynomials of D."""

    p: MultiPoly
    cofactor: Optional[MultiPoly]


@dataclass
class SymmetryResult:
    eta_bar: DarbouxExpression
    S: SFunction
    verified: bool
    # Darboux first-integral factors F: eta_bar * F**k is again a solution
    family: List[DarbouxExpression] = field(default_factory=list)


def _as_rf(S) -> RationalFunction:
    return (S.value if isinstance(S, SFunction) else S).with_vars(XYZ)


def candidate_pool(ode: Rational2ODE, S, darboux: Sequence[DarbouxPair]) -> List[PoolEntry]:
    """Darboux polynomials of D plus the irreducible factors of den(S)."""
    S = _as_rf(S)
    pool: Dict[MultiPoly, PoolEntry] = {}
    for d in darboux:
        p = d.p.with_vars(XYZ).monic()
        if p not in pool:
            pool[p] = PoolEntry(p, d.q.with_vars(XYZ))
    if not S.den.is_constant():
        for f, _ in poly_factor_limited(S.den, known=list(pool)):
            f = f.monic()
            if f not in pool:
                pool[f] = PoolEntry(f, cofactor_of(ode.D, f))
    return sorted(pool.values(), key=lambda e: (e.p.total_degree(), e.p.sort_key()))


def _b_candidates(pool: Sequence[PoolEntry], bound: int) -> List[MultiPoly]:
    out = []
    for exps in itertools.product(range(bound + 1), repeat=len(pool)):
        if not any(exps):
            continue
        B = MultiPoly.one(XYZ)
        for e, k in zip(pool, exps):
            if k:
                B = B * e.p ** k
        out.append(B)
    out.sort(key=lambda b: (b.total_degree(), b.sort_key()))
    return out


def _solve_stage(ode, P, Q, pool, B: Optional[MultiPoly], A_monos):
    """Linear system for one choice of B; returns (c, A, kernel) or None."""
    D, N = ode.D, ode.N
    T = MultiPoly.one(XYZ)
    for e in pool:
        if e.cofactor is None:
            T = T * e.p
    Bp = B if B is not None else MultiPoly.one(XYZ)
    B2 = Bp * Bp
    QTB2 = Q * T * B2
    images = []
    for e in pool:
        if e.cofactor is not None:
            images.append(QTB2 * e.cofactor)
        else:
            images.append(Q * D(e.p) * T.exact_div(e.p) * B2)
    if B is not None:
        DB = D(B)
        QT = Q * T
        for m in A_monos:
            mp = MultiPoly.monomial(m, 1, XYZ)
            images.append(QT * (B * D(mp) - mp * DB))
    const = N * P * T * B2
    monos = set(const.terms)
    for img in images:
        monos.update(img.terms)
    rows, rhs = [], []
    for mono in sorted(monos, key=mono_key, reverse=True):
        rows.append({j: img.terms[mono] for j, img in enumerate(images) if mono in img.terms})
        rhs.append(-const.terms[mono] if mono in const.terms else GaussianRational(0))
    sol = solve_linear(rows, rhs, len(images))
    if sol.particular is None:
        return None
    return sol.particular, sol.kernel


def _assemble(pool, B, A_monos, vec, scale_to_monic: bool) -> DarbouxExpression:
    n = len(pool)
    powers = [(e.p, vec[i]) for i, e in enumerate(pool) if vec[i]]
    g = None
    if B is not None:
        A = MultiPoly({m: vec[n + j] for j, m in enumerate(A_monos) if vec[n + j]}, XYZ)
        if not A.is_zero():
            g = RationalFunction(A, B)
    eta = DarbouxExpression.product(1, g, powers)
    if scale_to_monic:
        lc = eta.rational_part.num.leading_coefficient()
        eta = eta.scale(RationalFunction.const(lc.inverse(), XYZ))
    return eta


def _kernel_shifts(k: int, bound: int):
    """Integer shift vectors, the zero shift first, then by increasing size."""
    shifts = list(itertools.product(range(-bound, bound + 1), repeat=k))
    shifts.sort(key=lambda v: (sum(abs(n) for n in v), max((abs(n) for n in v), default=0), [-n for n in v]))
    return shifts


def solve_eta(
    ode: Rational2ODE,
    S,
    pool: Sequence[PoolEntry],
    exp_power_bound: int = 2,
    A_degree_slack: int = 1,
    seed: int = 0,
    max_rays: Optional[int] = None,
) -> List[SymmetryResult]:
    """Darboux-form eta_bar with -D_x[eta_bar]/eta_bar = S.

    Stage 0 has no exponential.  Later stages take B = 1 and then pool
    products with exponents up to ``exp_power_bound``; ``A`` is dense of
    degree ``deg B + A_degree_slack`` with the coefficient at lm(B) pinned to
    zero (A -> A + k*B only rescales eta_bar).  The first stage with a
    solution wins: two solutions for the same S differ by a first integral,
    and the kernel of the linear system yields Darboux first integrals F_j
    (reported in ``family``).  The first result is the particular solution
    with free unknowns set to zero; it is followed by the rays
    eta_bar * prod F_j^n_j over the exp-free generators F_j with
    0 < max|n_j| <= ``max_rays`` (default ``exp_power_bound``).
    """
    Sf = S if isinstance(S, SFunction) else SFunction(_as_rf(S), certified=True)
    Srf = _as_rf(S)
    P, Q = Srf.num, Srf.den
    pool = list(pool)
    stages: List[Tuple[Optional[MultiPoly], list]] = [(None, [])]
    B_list = [MultiPoly.one(XYZ)] + (_b_candidates(pool, exp_power_bound) if pool else [])
    for B in B_list:
        lm = B.leading_monomial()
        monos = [m for m in dense_monomials(3, B.total_degree() + A_degree_slack) if m != lm]
        stages.append((B, monos))
    for B, A_monos in stages:
        out = _solve_stage(ode, P, Q, pool, B, A_monos)
        if out is None:
            continue
        vec, kernel = out
        family = [_assemble(pool, B, A_monos, k, False) for k in kernel]
        results = []
        seen = set()
        n = len(pool)
        # only power-type generators are used for extra rays
        powers_only = [k for k in kernel if not any(k[n:])]
        for shift in _kernel_shifts(len(powers_only), exp_power_bound if max_rays is None else max_rays):
            v = list(vec)
            for n, k in zip(shift, powers_only):
                if n:
                    v = [a + n * b for a, b in zip(v, k)]
            eta = _assemble(pool, B, A_monos, v, True)
            if eta in seen:
                continue
            seen.add(eta)
            residual = verify_symmetry(ode, eta)
            if not residual.is_zero(seed):
                raise VerificationFailure(f"eta_bar {eta} fails the symmetry condition")
            if sfunction_of(ode, eta) != Srf:
                raise VerificationFailure(f"eta_bar {eta} does not reproduce its S-function")
            results.append(SymmetryResult(eta, Sf, True, family))
        log.debug("eta_bar found with B=%s, %d rays", B, len(results))
        return results
    raise NoSymmetryWithinBounds(f"no Darboux-form eta_bar for S = {Srf} within bounds")


def verify_symmetry(ode: Rational2ODE, eta_bar: DarbouxExpression) -> DarbouxExpression:
    """Residual D_x^2[eta] - D_x[eta]*phi_z - eta*phi_y, canonical."""
    if eta_bar.logs:
        raise ValueError("eta_bar must not contain logarithms")
    d1 = dx_total(ode, eta_bar)
    d2 = dx_total(ode, d1)
    return (d2 - d1.scale(ode.phi_z) - eta_bar.scale(ode.phi_y)).canonical()


def sfunction_of(ode: Rational2ODE, eta_bar: DarbouxExpression) -> RationalFunction:
    """-D_x[eta_bar]/eta_bar as a rational function."""
    if eta_bar.logs or not eta_bar.terms:
        raise NonRationalLogDerivative("eta_bar must be a nonzero product without logarithms")
    if not eta_bar.is_single_term():
        raise NonRationalLogDerivative("eta_bar is a sum of independent Darboux terms")
    t = eta_bar.terms[0]
    d = dx_total(ode, eta_bar)
    if not d.terms:
        return RationalFunction.const(0, XYZ)
    if len(d.terms) != 1 or d.terms[0].key != t.key:
        raise NonRationalLogDerivative("logarithmic derivative is not rational")
    return -(d.terms[0].coeff / t.coeff)


def point_symmetry_residuals(
    ode: Rational2ODE, S, eta_bar: DarbouxExpression, a1
) -> Optional[List[RationalFunction]]:
    """Linearized point-symmetry condition of the auxiliary 1ODE A1
    dv/du = -S(a1, u, v) for Y = eta(a1,u,v) d_u + zeta(a1,u,v) d_v with
    zeta = D_x[eta].

    [Y, D_u] must be proportional to D_u = d_u - S d_v, i.e.

        eta*S_u + zeta*S_v + zeta_u - S*zeta_v + S*(eta_u - S*eta_v) = 0.

    Returns one rational function in (u, v) per Darboux group (all zero
    when the condition holds), or None when x = a1 hits a pole.
    """
    S = _as_rf(S)
    zeta = dx_total(ode, eta_bar)
    Sy, Sz = S.diff("y"), S.diff("z")
    eta_u = partial(eta_bar, "y")
    eta_v = partial(eta_bar, "z")
    expr = (
        eta_bar.scale(Sy)
        + zeta.scale(Sz)
        + partial(zeta, "y")
        - partial(zeta, "z").scale(S)
        + (eta_u - eta_v.scale(S)).scale(S)
    ).canonical()
    a1 = GaussianRational.coerce(a1)
    vars = ("u", "v")
    images = {
        "x": MultiPoly.const(a1, vars),
        "y": MultiPoly.var("u", vars),
        "z": MultiPoly.var("v", vars),
    }
    for p in eta_bar.bases() + [S.den, ode.N]:
        if p.substitute(images, vars).is_zero():
            return None
    out = []
    for t in expr.terms:
        den = t.coeff.den.substitute(images, vars)
        if den.is_zero():
            return None
        out.append(RationalFunction(t.coeff.num.substitute(images, vars), den))
    return out

"""Darboux polynomials of D = N*D_x and linear-in-s eigenpolynomials of the
extended derivation on (x, y, z, s).

Both searches fix a leading monomial, write the unknown polynomial and the
cofactor with undetermined coefficients, match coefficients and hand the
resulting degree-two system to :func:`solver.solve_system`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import SolverBudgetExceeded, VerificationFailure
from .factor import poly_factor_limited
from .numeric import ONE, GaussianRational
from .ode import Derivation, Rational2ODE, gamma_coefficients
from .poly import XYZ, XYZS, MultiPoly, dense_monomials, mono_key, poly_gcd
from .solver import Equation, solve_system

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DarbouxPair:
    p: MultiPoly
    q: MultiPoly
    possibly_reducible: bool = False


@dataclass(frozen=True)
class LinearSEigenpoly:
    """a*s + b with scriptD[a*s + b] = (N^2*s + lambda0)*(a*s + b)."""

    a: MultiPoly
    b: MultiPoly
    lambda0: MultiPoly

    def as_poly(self) -> MultiPoly:
        s = MultiPoly.var("s", XYZS)
        return self.a.with_vars(XYZS) * s + self.b.with_vars(XYZS)


@dataclass
class SearchStats:
    systems: int = 0
    branches: int = 0
    stuck: int = 0
    abandoned: int = 0
    budget_hits: int = 0


class _Ansatz:
    """Coefficient-matching builder for Delta[p] - (q_fixed + q)*p = 0."""

    def __init__(self, vars: Tuple[str, ...]):
        self.vars = vars
        self.eqs: Dict[tuple, Equation] = {}

    def add(self, mono: tuple, key: tuple, c: GaussianRational) -> None:
        e = self.eqs.get(mono)
        if e is None:
            e = self.eqs[mono] = {}
        prev = e.get(key)
        s = c if prev is None else prev + c
        if s:
            e[key] = s
        else:
            e.pop(key, None)

    def add_poly(self, poly_terms, key: tuple, scale: GaussianRational = ONE) -> None:
        for m, c in poly_terms.items():
            self.add(m, key, c * scale if not scale.is_one() else c)

    def equations(self) -> List[Equation]:
        return [e for _, e in sorted(self.eqs.items(), key=lambda t: mono_key(t[0]), reverse=True) if e]


def _shift(e1, e2):
    return tuple(a + b for a, b in zip(e1, e2))


def _solve_eigen(
    delta: Derivation,
    p_support: List[tuple],
    lead: tuple,
    q_support: List[tuple],
    q_fixed: Optional[MultiPoly],
    budget: int,
    stats: SearchStats,
):
    """Solve Delta[p] = (q_fixed + q)*p with p = lead + sum(free coeffs)."""
    vars = delta.vars
    free = [m for m in p_support if m != lead]
    np_ = len(free)
    idx_p = {m: i for i, m in enumerate(free)}
    idx_q = {m: np_ + i for i, m in enumerate(q_support)}
    A = _Ansatz(vars)
    images: Dict[tuple, MultiPoly] = {}

    def image(m):
        img = images.get(m)
        if img is None:
            mp = MultiPoly.monomial(m, 1, vars)
            img = delta(mp)
            if q_fixed is not None:
                img = img - q_fixed * mp
            images[m] = img
        return img

    A.add_poly(image(lead).terms, ())
    for m in free:
        A.add_poly(image(m).terms, (idx_p[m],))
    for mq, k in idx_q.items():
        A.add(_shift(mq, lead), (k,), -ONE)
        for mp, j in idx_p.items():
            A.add(_shift(mq, mp), (j, k), -ONE)
    stats.systems += 1
    try:
        out = solve_system(A.equations(), np_ + len(q_support), budget)
    except SolverBudgetExceeded as exc:
        stats.budget_hits += 1
        stats.abandoned += exc.abandoned
        sols = exc.partial
    else:
        sols = out.solutions
        stats.branches += out.branches
        stats.stuck += out.stuck
    results = []
    for sol in sols:
        p_terms = {lead: ONE}
        for m, i in idx_p.items():
            v = sol.get(i)
            if v:
                p_terms[m] = v
        q_terms = {}
        for m, k in idx_q.items():
            v = sol.get(k)
            if v:
                q_terms[m] = v
        results.append((MultiPoly(p_terms, vars), MultiPoly(q_terms, vars)))
    return results


def cofactor_of(delta: Derivation, p: MultiPoly) -> Optional[MultiPoly]:
    """Delta[p]/p when the division is exact, else ``None``."""
    p = p.with_vars(delta.vars)
    q, r = delta(p).divmod(p)
    return q if r.is_zero() else None


def _canonical_pairs(pairs: Dict[MultiPoly, DarbouxPair]) -> List[DarbouxPair]:
    return sorted(pairs.values(), key=lambda d: (d.p.total_degree(), d.p.sort_key()))


def find_darboux(
    D: Derivation,
    max_deg: int,
    budget: int = 10_000,
    min_deg: int = 1,
    stats: Optional[SearchStats] = None,
    max_factor_degree: int = 2,
) -> List[DarbouxPair]:
    """Monic irreducible Darboux polynomials of degree <= ``max_deg``."""
    if max_deg < 1:
        raise ValueError("max_deg must be at least 1")
    stats = stats if stats is not None else SearchStats()
    n = len(D.vars)
    q_deg = max(D.max_coefficient_degree() - 1, 0)
    q_support = dense_monomials(n, q_deg)
    found: Dict[MultiPoly, DarbouxPair] = {}
    for d in range(max(min_deg, 1), max_deg + 1):
        support = dense_monomials(n, d)
        for lead in [m for m in support if sum(m) == d]:
            p_support = [m for m in support if mono_key(m) <= mono_key(lead)]
            for p, q in _solve_eigen(D, p_support, lead, q_support, None, budget, stats):
                if D(p) != q * p:
                    raise VerificationFailure(f"Darboux candidate {p} failed re-check")
                _add_split(D, p, found, max_factor_degree)
    return _canonical_pairs(found)


def _add_split(D: Derivation, p: MultiPoly, found: Dict[MultiPoly, DarbouxPair], k: int) -> None:
    factors = poly_factor_limited(p, k, known=list(found))
    flagged = set(factors.possibly_reducible)
    for f, _ in factors:
        f = f.monic()
        if f in found:
            continue
        q = cofactor_of(D, f)
        if q is None:
            raise VerificationFailure(f"factor {f} of a Darboux polynomial is not Darboux")
        found[f] = DarbouxPair(f, q, f in flagged)


def lambda_degree_bound(ode: Rational2ODE) -> int:
    """Degree bound for the s^0 part of the cofactor."""
    N = ode.N
    g1, g0 = gamma_coefficients(ode)
    mD = ode.D.max_coefficient_degree()
    dn = N.total_degree()
    return max(dn + mD - 1, g0.total_degree(), g1.total_degree(), 2 * dn)


def _b_slack(ode: Rational2ODE, lam: int) -> int:
    g1, _ = gamma_coefficients(ode)
    dn = ode.N.total_degree()
    mD = ode.D.max_coefficient_degree()
    return max(0, max(dn + mD - 1, g1.total_degree(), lam) - 2 * dn)


def _reduce_eigen(ode: Rational2ODE, a: MultiPoly, b: MultiPoly) -> LinearSEigenpoly:
    if not b.is_zero():
        g = poly_gcd(a, b)
        if not g.is_constant():
            a, b = a.exact_div(g), b.exact_div(g)
    else:
        a = MultiPoly.one(XYZ)
    lc = a.leading_coefficient().inverse()
    a, b = a.scale(lc), b.scale(lc)
    N = ode.N
    g1, g0 = gamma_coefficients(ode)
    lam, r = (N * ode.D(a) + g1 * a - N * N * b).divmod(a)
    if not r.is_zero():
        raise VerificationFailure("reduced eigenpolynomial lost its cofactor")
    e = LinearSEigenpoly(a, b, lam)
    verify_linear_s(ode, e)
    return e


def verify_linear_s(ode: Rational2ODE, e: LinearSEigenpoly) -> None:
    p = e.as_poly()
    s = MultiPoly.var("s", XYZS)
    cof = ode.N.with_vars(XYZS) ** 2 * s + e.lambda0.with_vars(XYZS)
    if ode.scriptD(p) != cof * p:
        raise VerificationFailure(f"eigenpolynomial {p} failed re-check")


def find_linear_s_eigenpolys(
    ode: Rational2ODE,
    max_deg: int,
    budget: int = 10_000,
    min_deg: int = 1,
    stats: Optional[SearchStats] = None,
) -> List[LinearSEigenpoly]:
    """Eigenpolynomials a*s + b of the extended derivation with deg a <= max_deg.

    Results are reduced to coprime (a, b), normalized so that ``a`` is monic
    and deduplicated.  Level ``d`` only enumerates leading monomials of ``a``
    that are new at that level, so calling with ``min_deg = max_deg = d`` for
    increasing ``d`` covers the same ground as one call.
    """
    if max_deg < 1:
        raise ValueError("max_deg must be at least 1")
    stats = stats if stats is not None else SearchStats()
    scriptD = ode.scriptD
    lam_deg = lambda_degree_bound(ode)
    delta = _b_slack(ode, lam_deg)
    # lambda0 lives in (x, y, z); embed its monomials with s-exponent 0
    q_support = [m + (0,) for m in dense_monomials(3, lam_deg)]
    s = MultiPoly.var("s", XYZS)
    N = ode.N.with_vars(XYZS)
    q_fixed = N * N * s
    found: Dict[tuple, LinearSEigenpoly] = {}
    lo = max(min_deg, 1)
    for d in range(lo, max_deg + 1):
        a_all = dense_monomials(3, d)
        leads = [m for m in a_all if d - delta <= sum(m) <= d]
        if d == lo:
            leads = [m for m in a_all if sum(m) <= d] if lo == 1 else leads
        for L in leads:
            a_support = [m for m in a_all if mono_key(m) <= mono_key(L)]
            b_deg = min(d, sum(L) + delta)
            b_support = dense_monomials(3, b_deg)
            p_support = [m + (1,) for m in a_support] + [m + (0,) for m in b_support]
            lead = L + (1,)
            for p, q in _solve_eigen(scriptD, p_support, lead, q_support, q_fixed, budget, stats):
                a = MultiPoly(
                    {e[:3]: c for e, c in p.terms.items() if e[3] == 1}, XYZ
                )
                b = MultiPoly(
                    {e[:3]: c for e, c in p.terms.items() if e[3] == 0}, XYZ
                )
                e = _reduce_eigen(ode, a, b)
                key = (e.a, e.b)
                if key not in found:
                    found[key] = e
    return sorted(
        found.values(),
        key=lambda e: (max(e.a.total_degree(), e.b.total_degree()), e.a.sort_key(), e.b.sort_key()),
    )

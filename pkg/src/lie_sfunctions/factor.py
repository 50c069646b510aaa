"""Limited multivariate factorization over Q(i).

Squarefree decomposition, content extraction per variable, exact tests for
factors that are linear or quadratic in some variable, and a bounded
undetermined-coefficient ansatz for everything else.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .numeric import ONE, GaussianRational, gr_sqrt
from .poly import MultiPoly, dense_monomials, mono_key, poly_gcd


class FactorList(list):
    """List of ``(factor, multiplicity)``; ``possibly_reducible`` holds the
    factors the bounded ansatz could neither split nor prove irreducible."""

    def __init__(self, items=(), unit: GaussianRational = ONE, possibly_reducible=()):
        super().__init__(items)
        self.unit = unit
        self.possibly_reducible = list(possibly_reducible)


def poly_sqrt(p: MultiPoly) -> Optional[MultiPoly]:
    """Exact square root of ``p`` or ``None``."""
    if p.is_zero():
        return p
    lm = p.leading_monomial()
    if any(k % 2 for k in lm):
        return None
    c = gr_sqrt(p.terms[lm])
    if c is None:
        return None
    root_lm = tuple(k // 2 for k in lm)
    root = MultiPoly.monomial(root_lm, c, p.vars)
    two_lead_inv = (c * 2).inverse()
    rest = p - root * root
    # each step fixes the next-largest monomial of the root
    limit = len(dense_monomials(len(p.vars), sum(root_lm))) + 1
    for _ in range(limit):
        if rest.is_zero():
            return root
        m = rest.leading_monomial()
        shift = tuple(i - j for i, j in zip(m, root_lm))
        if any(k < 0 for k in shift) or mono_key(shift) >= mono_key(root_lm):
            return None
        t = MultiPoly.monomial(shift, rest.terms[m] * two_lead_inv, p.vars)
        rest = rest - t * (root * 2 + t)
        root = root + t
    return root if rest.is_zero() else None


def content_in(p: MultiPoly, v: str) -> MultiPoly:
    coeffs = sorted(p.coefficients_in(v).values(), key=lambda q: len(q.terms))
    g = coeffs[0].monic()
    for c in coeffs[1:]:
        if g.is_constant():
            return MultiPoly.one(p.vars)
        g = poly_gcd(g, c)
    return g.monic()


def squarefree_decomposition(p: MultiPoly) -> List[Tuple[MultiPoly, int]]:
    """Pairs ``(f, k)`` with pairwise coprime squarefree monic ``f``; the
    product of ``f**k`` equals ``p`` up to a scalar."""
    out: Dict[int, MultiPoly] = {}

    def merge(k, f):
        if f.is_constant():
            return
        out[k] = out[k] * f if k in out else f

    def rec(q: MultiPoly, mult: int):
        if q.is_constant():
            return
        fv = q.free_vars()
        v = fv[0]
        c = content_in(q, v)
        if not c.is_constant():
            rec(c, mult)
            q = q.exact_div(c)
        if q.is_constant():
            return
        # Yun's algorithm in v on the v-primitive part
        dq = q.diff(v)
        a = poly_gcd(q, dq)
        b = q.exact_div(a)
        cpoly = dq.exact_div(a)
        d = cpoly - b.diff(v)
        i = 1
        while not b.is_constant():
            a = poly_gcd(b, d)
            merge(i * mult, a.monic())
            b = b.exact_div(a)
            cpoly = d.exact_div(a)
            d = cpoly - b.diff(v)
            i += 1

    rec(p, 1)
    return sorted(((f.monic(), k) for k, f in out.items()), key=lambda t: t[1])


def split_quadratic(p: MultiPoly) -> Optional[List[MultiPoly]]:
    """Factor ``p`` using a variable of degree at most two.

    Returns the factor list (length 1 means proven irreducible) or ``None``
    when every variable has degree above two.
    """
    fv = p.free_vars()
    if not fv:
        return [p]
    for v in fv:
        c = content_in(p, v)
        if not c.is_constant():
            left = split_quadratic(c) or [c]
            right = split_quadratic(p.exact_div(c)) or [p.exact_div(c)]
            return left + right
    degs = {v: p.degree(v) for v in fv}
    if any(d == 1 for d in degs.values()):
        return [p]
    cands = [v for v in fv if degs[v] == 2]
    if not cands:
        return None
    v = cands[0]
    co = p.coefficients_in(v)
    a, b = co.get(2), co.get(1, MultiPoly.zero(p.vars))
    c = co.get(0, MultiPoly.zero(p.vars))
    disc = b * b - a * c * 4
    r = poly_sqrt(disc)
    if r is None:
        return [p]
    vpoly = MultiPoly.var(v, p.vars)
    f1 = a * vpoly * 2 + b - r
    f1 = f1.exact_div(content_in(f1, v))
    f2 = p.exact_div(f1)
    return [f1, f2]


def _ansatz_factor(p: MultiPoly, k: int, budget: int) -> Optional[Tuple[MultiPoly, MultiPoly]]:
    """Find ``p = g*h`` with ``1 <= deg g <= k`` by undetermined coefficients."""
    from .solver import solve_system

    vars = p.vars
    n = len(vars)
    dp = p.total_degree()
    lm_p = p.leading_monomial()
    for dg in range(1, min(k, dp // 2) + 1):
        dh = dp - dg
        g_monos = dense_monomials(n, dg)
        h_monos = dense_monomials(n, dh)
        for L in [m for m in g_monos if sum(m) == dg]:
            Lh = tuple(i - j for i, j in zip(lm_p, L))
            if any(x < 0 for x in Lh):
                continue
            # g monic with leading monomial L; h has leading monomial Lh
            g_free = [m for m in g_monos if mono_key(m) < mono_key(L)]
            h_free = [m for m in h_monos if mono_key(m) <= mono_key(Lh)]
            idx_g = {m: i for i, m in enumerate(g_free)}
            idx_h = {m: i + len(g_free) for i, m in enumerate(h_free)}
            eqs: Dict[tuple, dict] = {}

            def add(mono, key, c):
                e = eqs.setdefault(mono, {})
                prev = e.get(key)
                s = c if prev is None else prev + c
                if s:
                    e[key] = s
                else:
                    e.pop(key, None)

            g_terms = [(L, None)] + [(m, idx_g[m]) for m in g_free]
            h_terms = [(m, idx_h[m]) for m in h_free]
            for mg, ig in g_terms:
                for mh, ih in h_terms:
                    mono = tuple(a + b for a, b in zip(mg, mh))
                    key = (ih,) if ig is None else (min(ig, ih), max(ig, ih))
                    add(mono, key, ONE)
            for mono, c in p.terms.items():
                add(mono, (), -c)
            outcome = solve_system([e for e in eqs.values() if e], len(g_free) + len(h_free), budget)
            for sol in outcome.solutions:
                g = MultiPoly.monomial(L, 1, vars)
                for m, i in idx_g.items():
                    g = g + MultiPoly.monomial(m, sol[i], vars)
                if g.total_degree() >= 1 and g.divides(p):
                    return g, p.exact_div(g)
    return None


def _split_irreducible(p: MultiPoly, k: int, known: Sequence[MultiPoly], budget: int, flagged: list) -> List[MultiPoly]:
    if p.is_constant():
        return []
    # monomial content
    mins = [min(e[i] for e in p.terms) for i in range(len(p.vars))]
    if any(mins):
        out = []
        for i, m in enumerate(mins):
            out.extend([MultiPoly.var(p.vars[i], p.vars)] * m)
        return out + _split_irreducible(
            p.exact_div(MultiPoly.monomial(tuple(mins), 1, p.vars)), k, known, budget, flagged
        )
    if p.total_degree() == 1:
        return [p.monic()]
    for f in known:
        if f.total_degree() < p.total_degree() and f.divides(p):
            return [f.monic()] + _split_irreducible(p.exact_div(f), k, known, budget, flagged)
    parts = split_quadratic(p)
    if parts is not None:
        if len(parts) == 1:
            return [p.monic()]
        out = []
        for q in parts:
            out.extend(_split_irreducible(q, k, known, budget, flagged))
        return out
    found = _ansatz_factor(p, k, budget)
    if found is not None:
        g, h = found
        return _split_irreducible(g, k, known, budget, flagged) + _split_irreducible(h, k, known, budget, flagged)
    if p.total_degree() > 2 * k + 1:
        flagged.append(p.monic())
    return [p.monic()]


def poly_factor_limited(
    p: MultiPoly,
    max_factor_degree: int = 2,
    known: Iterable[MultiPoly] = (),
    budget: int = 2000,
) -> FactorList:
    """Factor ``p`` into monic irreducibles with multiplicities.

    ``known`` lists polynomials tried first as trial divisors.  The product
    of the factors raised to their multiplicities times ``unit`` is ``p``.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    known = [q.with_vars(p.vars) for q in known if not q.is_constant()]
    counts: Dict[MultiPoly, int] = {}
    flagged: list = []
    for f, mult in squarefree_decomposition(p):
        for g in _split_irreducible(f, max_factor_degree, known, budget, flagged):
            g = g.monic()
            counts[g] = counts.get(g, 0) + mult
    items = sorted(counts.items(), key=lambda t: (t[0].total_degree(), t[0].sort_key()))
    product = MultiPoly.one(p.vars)
    for f, m in items:
        product = product * f ** m
    unit = p.leading_coefficient() / product.leading_coefficient()
    if product.scale(unit) != p:
        raise AssertionError("factorization does not reproduce its input")
    return FactorList(items, unit, flagged)

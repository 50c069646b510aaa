"""Exact solver for small polynomial systems from coefficient matching.

An equation is a dict from a key to a :class:`GaussianRational` coefficient.
A key is a sorted tuple of unknown indices with repetition, so ``()`` is the
constant term, ``(i,)`` is ``u_i`` and ``(i, i, j)`` is ``u_i^2*u_j``.  Input
systems have degree at most two; higher degrees only appear internally after
nonlinear substitution.

Each branch alternates three moves:

* eliminating linear equations;
* cancelling unknowns that are known to be nonzero;
* row-reducing with nonlinear monomials as leading columns, to expose
  hidden linear relations.

When these stall, it branches on an equation that splits into factors.
Free unknowns left at the end are set to zero, so a positive-dimensional
family yields one representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NonBilinearSystem, SolverBudgetExceeded
from .numeric import ONE, ZERO, GaussianRational, gr_sqrt

Key = Tuple[int, ...]
Equation = Dict[Key, GaussianRational]

# cap on the degree produced by nonlinear substitution
MAX_INTERNAL_DEGREE = 8


@dataclass
class BilinearSystem:
    """Unknown names, a group label per unknown, and the equations.

    Quadratic terms must pair unknowns from different groups.
    """

    unknowns: List[str]
    equations: List[Equation]
    groups: Optional[List[int]] = None

    def validate(self) -> None:
        n = len(self.unknowns)
        for eq in self.equations:
            for key in eq:
                if any(k < 0 or k >= n for k in key) or len(key) > 2:
                    raise NonBilinearSystem(f"bad term key {key}")
                if len(key) == 2:
                    i, j = key
                    if i == j:
                        raise NonBilinearSystem(
                            f"square of {self.unknowns[i]} is not bilinear"
                        )
                    if self.groups is not None and self.groups[i] == self.groups[j]:
                        raise NonBilinearSystem(
                            f"{self.unknowns[i]}*{self.unknowns[j]} pairs one group with itself"
                        )


def _add_into(target: Equation, key: Key, c: GaussianRational) -> None:
    prev = target.get(key)
    if prev is None:
        if c:
            target[key] = c
    else:
        s = prev + c
        if s:
            target[key] = s
        else:
            del target[key]


def _mul_key(k1: Key, k2: Key) -> Key:
    if not k1:
        return k2
    if not k2:
        return k1
    if len(k1) == 1 and len(k2) == 1:
        a, b = k1[0], k2[0]
        return (a, b) if a <= b else (b, a)
    return tuple(sorted(k1 + k2))


def _poly_mul(a: Equation, b: Equation) -> Equation:
    out: Equation = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            _add_into(out, _mul_key(k1, k2), v1 * v2)
    return out


def _substitute(eq: Equation, u: int, expr: Equation) -> Equation:
    """Replace unknown ``u`` by the polynomial ``expr``."""
    out: Equation = {}
    powers = {1: expr}
    for key, c in eq.items():
        m = key.count(u)
        if not m:
            _add_into(out, key, c)
            continue
        p = powers.get(m)
        if p is None:
            p = expr
            for _ in range(m - 1):
                p = _poly_mul(p, expr)
            powers[m] = p
        rest = tuple(k for k in key if k != u)
        for k, v in p.items():
            _add_into(out, _mul_key(k, rest), c * v)
    return out


def _unknowns_of(eq: Equation) -> set:
    s = set()
    for key in eq:
        s.update(key)
    return s


def _degree(eq: Equation) -> int:
    return max((len(k) for k in eq), default=0)


def _proportional(a: Equation, b: Equation) -> bool:
    if a.keys() != b.keys() or not a:
        return False
    k0 = next(iter(a))
    r = b[k0] / a[k0]
    return all(b[k] == a[k] * r for k in a)


def _uniq(roots):
    out = []
    for r in roots:
        if r not in out:
            out.append(r)
    return sorted(out, key=lambda g: g.sort_key())


def univariate_roots(coeffs: Dict[int, GaussianRational]) -> List[GaussianRational]:
    """Roots in Q(i) of a univariate polynomial given as power -> coefficient.

    Degrees up to two are solved in closed form.  Higher degrees use
    high-precision numeric roots as candidates, each confirmed exactly.
    """
    coeffs = {k: c for k, c in coeffs.items() if c}
    deg = max(coeffs)
    low = min(coeffs)
    roots = []
    if low > 0:
        roots.append(ZERO)
        coeffs = {k - low: c for k, c in coeffs.items()}
        deg -= low
    if deg == 1:
        roots.append(-coeffs.get(0, ZERO) / coeffs[1])
    elif deg == 2:
        a, b, c = coeffs[2], coeffs.get(1, ZERO), coeffs.get(0, ZERO)
        r = gr_sqrt(b * b - a * c * 4)
        if r is not None:
            inv = (a * 2).inverse()
            roots += [(-b + r) * inv, (-b - r) * inv]
    elif deg > 2:
        roots += _numeric_candidates(coeffs, deg)
    return _uniq(roots)


def _numeric_candidates(coeffs, deg):
    import mpmath

    def horner(x):
        v = ZERO
        for k in range(deg, -1, -1):
            v = v * x + coeffs.get(k, ZERO)
        return v

    def mp(q: Fraction):
        return mpmath.mpf(q.numerator) / q.denominator

    out = []
    with mpmath.workdps(60):
        poly = [mpmath.mpc(mp(c.re), mp(c.im)) for c in (coeffs.get(k, ZERO) for k in range(deg, -1, -1))]
        try:
            approx = mpmath.polyroots(poly, maxsteps=400, extraprec=400)
        except mpmath.libmp.libhyper.NoConvergence:
            return out
        for z in approx:
            re = Fraction(mpmath.nstr(z.real, 50, min_fixed=-1e9, max_fixed=1e9)).limit_denominator(10**15)
            im = Fraction(mpmath.nstr(z.imag, 50, min_fixed=-1e9, max_fixed=1e9)).limit_denominator(10**15)
            cand = GaussianRational(re, im)
            if horner(cand).is_zero():
                out.append(cand)
    return out


def _split(eq: Equation):
    """Branch alternatives for an equation that factors.

    Returns ``None`` when no split is found, otherwise a list of
    ``(equation, [forms known to be nonzero])``; an empty list means the
    equation has no solution over Q(i).
    """
    if all(len(k) <= 1 for k in eq):
        return None
    common = None
    for key in eq:
        ks = set(key)
        common = ks if common is None else common & ks
        if not common:
            break
    if common:
        t = min(common)
        rest: Equation = {}
        for key, c in eq.items():
            ks = list(key)
            ks.remove(t)
            _add_into(rest, tuple(ks), c)
        tform = {(t,): ONE}
        if _proportional(tform, rest):
            return [(tform, [])]
        return [(tform, []), (rest, [tform])]
    unk = sorted(_unknowns_of(eq))
    if len(unk) == 1:
        u = unk[0]
        roots = univariate_roots({len(k): c for k, c in eq.items()})
        return [({(u,): ONE, (): -r}, []) for r in roots]
    if _degree(eq) > 2:
        return None
    parts = _split_quadratic_form(eq, unk)
    if parts is None:
        return None
    f1, f2 = parts
    if _proportional(f1, f2):
        return [(f1, [])]
    return [(f1, []), (f2, [f1])]


def _split_quadratic_form(eq: Equation, unk: List[int]):
    """Factor a quadratic in several unknowns into affine pieces over Q(i)."""
    from .factor import split_quadratic
    from .poly import MultiPoly

    names = tuple(f"u{i}" for i in unk)
    pos = {u: n for n, u in enumerate(unk)}
    terms = {}
    for key, c in eq.items():
        e = [0] * len(unk)
        for k in key:
            e[pos[k]] += 1
        terms[tuple(e)] = c
    parts = split_quadratic(MultiPoly(terms, names))
    if parts is None or len(parts) != 2:
        return None
    alts = []
    for f in parts:
        if f.total_degree() != 1:
            return None
        aff: Equation = {}
        for e, c in f.terms.items():
            aff[tuple(unk[i] for i, k in enumerate(e) if k)] = c
        alts.append(aff)
    return alts


def _cancel_nonzero(eq: Equation, singles: set) -> Equation:
    """Divide out unknowns that are known to be nonzero."""
    while True:
        common = None
        for key in eq:
            ks = set(key)
            common = ks if common is None else common & ks
            if not common:
                return eq
        hit = common & singles
        if not hit:
            return eq
        t = min(hit)
        out: Equation = {}
        for key, c in eq.items():
            ks = list(key)
            ks.remove(t)
            out[tuple(ks)] = c
        eq = out


def _col_key(key: Key):
    # nonlinear monomials first so they are eliminated before linear ones
    return (-len(key), key)


def _linearize(eqs: List[Equation]) -> Tuple[List[Equation], bool]:
    """Row-reduce with nonlinear monomials as leading columns.

    Returns the echelon rows and whether some row lost all nonlinear terms.
    """
    pivots: Dict[Key, Equation] = {}
    order: List[Key] = []
    found_linear = False
    for e in sorted(eqs, key=len):
        row = dict(e)
        while row:
            lead = min(row, key=_col_key)
            piv = pivots.get(lead)
            if piv is None:
                break
            f = row[lead]
            for k, c in piv.items():
                _add_into(row, k, -(f * c))
        if not row:
            continue
        lead = min(row, key=_col_key)
        inv = row[lead].inverse()
        row = {k: c * inv for k, c in row.items()}
        pivots[lead] = row
        order.append(lead)
        if len(lead) < 2 and _degree(e) >= 2:
            found_linear = True
    return [pivots[k] for k in order], found_linear


def _isolated_unknown(eqs: List[Equation]):
    """An equation in which some unknown occurs only as a constant-coefficient
    linear term, chosen to keep the degree after substitution small."""
    best = None
    for e in eqs:
        deg = _degree(e)
        for key in e:
            if len(key) != 1:
                continue
            u = key[0]
            if sum(k.count(u) for k in e) != 1:
                continue
            worst = 0
            for other in eqs:
                if other is e:
                    continue
                for k in other:
                    m = k.count(u)
                    if m:
                        worst = max(worst, len(k) - m + m * deg)
            cost = (worst, len(e))
            if best is None or cost < best[0]:
                best = (cost, e, u)
    if best is None or best[0][0] > MAX_INTERNAL_DEGREE:
        return None
    return best[1], best[2]


@dataclass
class _Branch:
    equations: List[Equation]
    steps: List[Tuple[int, Equation]] = field(default_factory=list)
    nonzero: List[Equation] = field(default_factory=list)


class _Search:
    def __init__(self, n_unknowns: int, budget: int):
        self.n = n_unknowns
        self.budget = budget
        self.branches = 0
        self.stuck = 0
        self.solutions: List[Dict[int, GaussianRational]] = []

    def _eliminate(self, br: _Branch, eqs, nonzero, lin: Equation, u: int):
        inv = lin[(u,)].inverse()
        expr: Equation = {}
        for key, c in lin.items():
            if key != (u,):
                expr[key] = -(c * inv)
        br.steps.append((u, expr))
        new = []
        for e in eqs:
            if e is lin:
                continue
            if any(u in key for key in e):
                e = _substitute(e, u, expr)
                if not e:
                    continue
            new.append(e)
        nonzero = [_substitute(f, u, expr) if any(u in k for k in f) else f for f in nonzero]
        return new, nonzero

    def propagate(self, br: _Branch) -> bool:
        """Simplify a branch in place; False on contradiction."""
        eqs = [e for e in br.equations if e]
        nonzero = list(br.nonzero)
        linearized = False
        while True:
            singles = set()
            for f in nonzero:
                if not f:
                    return False
                if len(f) == 1:
                    (k,) = f
                    if len(k) == 1:
                        singles.add(k[0])
            nonzero = [f for f in nonzero if not (len(f) == 1 and () in f)]
            lin = None
            for i, e in enumerate(eqs):
                if singles:
                    e = _cancel_nonzero(e, singles)
                    eqs[i] = e
                if len(e) == 1 and () in e:
                    return False
                if all(len(k) <= 1 for k in e) and any(len(k) == 1 for k in e):
                    if lin is None or len(e) < len(lin):
                        lin = e
            if lin is None and not linearized:
                eqs, gained = _linearize(eqs)
                linearized = True
                if gained:
                    continue
            if lin is None:
                br.equations = eqs
                br.nonzero = nonzero
                return True
            linearized = False
            u = min(k[0] for k in lin if len(k) == 1)
            eqs, nonzero = self._eliminate(br, eqs, nonzero, lin, u)

    def choose_split(self, eqs: List[Equation]):
        # Monomial equations c*u*v = 0: branch on the most frequent unknown;
        # the nonzero branch then clears it from every such equation.
        freq: Dict[int, int] = {}
        for e in eqs:
            if len(e) == 1:
                (key,) = e
                for k in set(key):
                    freq[k] = freq.get(k, 0) + 1
        if freq:
            t = min(freq, key=lambda k: (-freq[k], k))
            tform = {(t,): ONE}
            return [(tform, []), (None, [tform])]
        best = None
        for e in sorted(eqs, key=len):
            if best is not None and len(e) > best[0] + 2:
                break
            alts = _split(e)
            if alts is None:
                continue
            if len(alts) <= 1:
                return alts
            if best is None or len(e) < best[0]:
                best = (len(e), alts)
        return None if best is None else best[1]

    def run(self, br: _Branch) -> None:
        stack = [br]
        while stack:
            cur = stack.pop()
            if not self.propagate(cur):
                continue
            if not cur.equations:
                self.solutions.append(self.back_substitute(cur.steps))
                continue
            alts = self.choose_split(cur.equations)
            if alts is None:
                iso = _isolated_unknown(cur.equations)
                if iso is None:
                    self.stuck += 1
                    continue
                e, u = iso
                cur.equations, cur.nonzero = self._eliminate(cur, cur.equations, cur.nonzero, e, u)
                stack.append(cur)
                continue
            children = []
            for eq, nz in alts:
                children.append(
                    _Branch(
                        equations=([eq] if eq is not None else []) + cur.equations,
                        steps=list(cur.steps),
                        nonzero=cur.nonzero + nz,
                    )
                )
            self.branches += len(children)
            if self.branches > self.budget:
                raise SolverBudgetExceeded(
                    f"branch budget {self.budget} exhausted",
                    partial=self.solutions,
                    abandoned=len(stack) + len(children),
                )
            stack.extend(reversed(children))

    def back_substitute(self, steps) -> Dict[int, GaussianRational]:
        values: Dict[int, GaussianRational] = {}
        for u, expr in reversed(steps):
            v = ZERO
            for key, c in expr.items():
                t = c
                for k in key:
                    t = t * values.get(k, ZERO)
                v = v + t
            values[u] = v
        return values


def evaluate_equation(eq: Equation, values: Dict[int, GaussianRational]) -> GaussianRational:
    total = ZERO
    for key, c in eq.items():
        t = c
        for k in key:
            t = t * values.get(k, ZERO)
        total = total + t
    return total


@dataclass
class SolveOutcome:
    solutions: List[Dict[int, GaussianRational]]
    branches: int
    stuck: int = 0


def solve_system(
    equations: Sequence[Equation], n_unknowns: int, budget: int = 10_000
) -> SolveOutcome:
    """Solve a polynomial system without the bilinearity precondition.

    Branches that admit neither a split nor a bounded-degree substitution
    are counted in ``stuck`` rather than silently dropped.
    """
    search = _Search(n_unknowns, budget)
    search.run(_Branch(equations=[dict(e) for e in equations if e]))
    sols = []
    seen = set()
    for s in search.solutions:
        full = {i: s.get(i, ZERO) for i in range(n_unknowns)}
        for eq in equations:
            if evaluate_equation(eq, full):
                raise AssertionError("solver produced a non-solution")
        key = tuple(full[i] for i in range(n_unknowns))
        if key not in seen:
            seen.add(key)
            sols.append(full)
    sols.sort(key=lambda f: tuple(f[i].sort_key() for i in range(n_unknowns)))
    return SolveOutcome(sols, search.branches, search.stuck)


def bilinear_solve(system: BilinearSystem, budget: int = 10_000) -> List[Dict[str, GaussianRational]]:
    """All solutions reachable by elimination and branching on factorable
    equations.

    Raises :class:`SolverBudgetExceeded` when more than ``budget`` branches
    are needed.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    system.validate()
    out = solve_system(system.equations, len(system.unknowns), budget)
    names = system.unknowns
    return [{names[i]: v for i, v in sol.items()} for sol in out.solutions]


@dataclass
class LinearSolution:
    """``particular + span(kernel)`` over Q(i); ``particular`` is None when
    the system is inconsistent."""

    particular: Optional[List[GaussianRational]]
    kernel: List[List[GaussianRational]]
    pivots: List[int]


def solve_linear(rows: Sequence[Dict[int, GaussianRational]], rhs: Sequence[GaussianRational], n: int) -> LinearSolution:
    """Exact sparse Gauss-Jordan for ``sum_j rows[i][j]*u_j = rhs[i]``.

    The particular solution sets every free unknown to zero; the kernel has
    one basis vector per free unknown.
    """
    work = []
    for row, b in zip(rows, rhs):
        r = {j: c for j, c in row.items() if c}
        b = GaussianRational.coerce(b)
        if r or b:
            work.append((r, b))
    pivot_rows: Dict[int, Tuple[Dict[int, GaussianRational], GaussianRational]] = {}
    for r, b in work:
        # reduce by existing pivots
        for col in [c for c in r if c in pivot_rows]:
            if col not in r:
                continue
            f = r[col]
            prow, pb = pivot_rows[col]
            for j, c in prow.items():
                _add_into_col(r, j, -(f * c))
            b = b - f * pb
        if not r:
            if b:
                return LinearSolution(None, [], sorted(pivot_rows))
            continue
        col = min(r)
        inv = r[col].inverse()
        r = {j: c * inv for j, c in r.items()}
        b = b * inv
        # keep earlier pivot rows fully reduced
        for pc, (prow, pb) in list(pivot_rows.items()):
            f = prow.get(col)
            if f:
                for j, c in r.items():
                    _add_into_col(prow, j, -(f * c))
                pivot_rows[pc] = (prow, pb - f * b)
        pivot_rows[col] = (r, b)
    particular = [ZERO] * n
    for col, (prow, pb) in pivot_rows.items():
        particular[col] = pb
    free = [j for j in range(n) if j not in pivot_rows]
    kernel = []
    for fcol in free:
        v = [ZERO] * n
        v[fcol] = ONE
        for col, (prow, _) in pivot_rows.items():
            c = prow.get(fcol)
            if c:
                v[col] = -c
        kernel.append(v)
    return LinearSolution(particular, kernel, sorted(pivot_rows))


def _add_into_col(row: Dict[int, GaussianRational], j: int, c: GaussianRational) -> None:
    prev = row.get(j)
    if prev is None:
        if c:
            row[j] = c
        return
    s = prev + c
    if s:
        row[j] = s
    else:
        del row[j]

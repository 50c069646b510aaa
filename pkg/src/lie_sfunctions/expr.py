"""Darboux-class expressions and their calculus.

A :class:`DarbouxExpression` is a finite sum

    sum_k  r_k * exp(g_k) * prod_j p_j^(c_kj)   +   sum_l  gamma_l * log(f_l)

with rational functions ``r_k, g_k``, monic irreducible polynomials
``p_j, f_l`` and exponents ``c_kj`` in Q(i) whose real part lies in [0, 1)
(integer parts are absorbed into ``r_k``).  Terms with the same ``(g, c)``
signature form a group.  Distinct groups and distinct logarithms are
linearly independent over the rational functions, which reduces zero
testing to exact rational arithmetic per group.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import UndecidedZeroTest
from .numeric import ZERO, GaussianRational, format_scalar
from .poly import XYZ, MultiPoly, RationalFunction, format_poly, format_rational, poly_gcd

PowerFactors = Tuple[Tuple[MultiPoly, GaussianRational], ...]
GroupKey = Tuple[RationalFunction, PowerFactors]


def _split_exponent(c: GaussianRational) -> Tuple[int, GaussianRational]:
    """c = n + f with integer n and Re(f) in [0, 1)."""
    re = c.re
    n = math.floor(re)
    return n, c - n


def _zero_rf() -> RationalFunction:
    return RationalFunction.const(0, XYZ)


def _base_key(p: MultiPoly):
    return p.sort_key()


def _canonical_powers(pairs: Iterable[Tuple[MultiPoly, GaussianRational]]):
    """Merge equal bases, peel integer exponent parts.

    Returns ``(integer_part_as_rational_function, power_factors)``.
    """
    acc: Dict[MultiPoly, GaussianRational] = {}
    for p, c in pairs:
        c = GaussianRational.coerce(c)
        if not c:
            continue
        p = p.with_vars(XYZ)
        if p.is_constant():
            raise ValueError("power factor bases must be non-constant")
        if not p.leading_coefficient().is_one():
            raise ValueError(f"power factor base {p} must be monic")
        acc[p] = acc.get(p, ZERO) + c
    num = MultiPoly.one(XYZ)
    den = MultiPoly.one(XYZ)
    out = []
    for p in sorted(acc, key=_base_key):
        n, f = _split_exponent(acc[p])
        if n > 0:
            num = num * p ** n
        elif n < 0:
            den = den * p ** (-n)
        if f:
            out.append((p, f))
    return RationalFunction(num, den), tuple(out)


def _canonical_exp(g: RationalFunction) -> RationalFunction:
    return g.with_vars(XYZ)


@dataclass(frozen=True)
class DarbouxTerm:
    coeff: RationalFunction
    exp_arg: RationalFunction
    powers: PowerFactors

    @property
    def key(self) -> GroupKey:
        return (self.exp_arg, self.powers)


def _group_sort_key(key: GroupKey):
    g, powers = key
    return (
        0 if g.is_zero() else 1,
        g.sort_key(),
        len(powers),
        tuple((p.sort_key(), c.sort_key()) for p, c in powers),
    )


class DarbouxExpression:
    """Immutable sum of Darboux terms plus logarithms (see module docstring)."""

    __slots__ = ("_summands", "_logs", "_canonical")

    def __init__(self, summands: Sequence[Tuple[GroupKey, RationalFunction]] = (), logs=()):
        self._summands = tuple(summands)
        log_acc: Dict[MultiPoly, GaussianRational] = {}
        for p, g in logs:
            g = GaussianRational.coerce(g)
            if g:
                log_acc[p] = log_acc.get(p, ZERO) + g
        self._logs = tuple(
            sorted(((p, g) for p, g in log_acc.items() if g), key=lambda t: _base_key(t[0]))
        )
        self._canonical = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def rational(cls, r) -> "DarbouxExpression":
        if isinstance(r, MultiPoly):
            r = RationalFunction.from_poly(r.with_vars(XYZ))
        elif not isinstance(r, RationalFunction):
            r = RationalFunction.const(r, XYZ)
        r = r.with_vars(XYZ)
        if r.is_zero():
            return cls()
        return cls([((_zero_rf(), ()), r)])

    @classmethod
    def product(
        cls,
        rational_part=None,
        exp_argument: Optional[RationalFunction] = None,
        power_factors: Iterable[Tuple[MultiPoly, GaussianRational]] = (),
    ) -> "DarbouxExpression":
        """r * exp(g) * prod p^c with monic bases."""
        if rational_part is None:
            r = RationalFunction.const(1, XYZ)
        elif isinstance(rational_part, RationalFunction):
            r = rational_part.with_vars(XYZ)
        elif isinstance(rational_part, MultiPoly):
            r = RationalFunction.from_poly(rational_part.with_vars(XYZ))
        else:
            r = RationalFunction.const(rational_part, XYZ)
        extra, powers = _canonical_powers(power_factors)
        r = r * extra
        g = _zero_rf() if exp_argument is None else _canonical_exp(exp_argument)
        if r.is_zero():
            return cls()
        return cls([((g, powers), r)])

    @classmethod
    def log_terms(cls, pairs: Iterable[Tuple[MultiPoly, GaussianRational]]) -> "DarbouxExpression":
        """sum gamma*log(p), expanded over monic irreducible factors of each p
        (additive constants dropped)."""
        from .factor import poly_factor_limited

        logs = []
        for p, g in pairs:
            p = p.with_vars(XYZ)
            if p.is_constant():
                continue
            for f, k in poly_factor_limited(p):
                logs.append((f, GaussianRational.coerce(g) * k))
        return cls((), logs)

    # -- canonical view -------------------------------------------------
    def _groups(self) -> Dict[GroupKey, List[RationalFunction]]:
        groups: Dict[GroupKey, List[RationalFunction]] = {}
        for key, r in self._summands:
            groups.setdefault(key, []).append(r)
        return groups

    @property
    def terms(self) -> Tuple[DarbouxTerm, ...]:
        if self._canonical is None:
            out = []
            for key, rs in self._groups().items():
                total = rs[0]
                for r in rs[1:]:
                    total = total + r
                if not total.is_zero():
                    out.append(DarbouxTerm(total, key[0], key[1]))
            out.sort(key=lambda t: _group_sort_key(t.key))
            self._canonical = tuple(out)
        return self._canonical

    @property
    def logs(self) -> Tuple[Tuple[MultiPoly, GaussianRational], ...]:
        return self._logs

    def canonical(self) -> "DarbouxExpression":
        return DarbouxExpression([(t.key, t.coeff) for t in self.terms], self._logs)

    def is_single_term(self) -> bool:
        return len(self.terms) == 1 and not self._logs

    def is_rational(self) -> bool:
        return not self._logs and all(
            t.exp_arg.is_zero() and not t.powers for t in self.terms
        )

    def as_rational(self) -> RationalFunction:
        if not self.is_rational():
            raise ValueError("expression is not a rational function")
        return self.terms[0].coeff if self.terms else _zero_rf()

    # product-form accessors
    def _single(self) -> DarbouxTerm:
        if not self.is_single_term():
            raise ValueError("expression is not a single Darboux product")
        return self.terms[0]

    @property
    def rational_part(self) -> RationalFunction:
        return self._single().coeff

    @property
    def exp_argument(self) -> RationalFunction:
        return self._single().exp_arg

    @property
    def power_factors(self) -> PowerFactors:
        return self._single().powers

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return DarbouxExpression(self._summands + other._summands, self._logs + other._logs)

    __radd__ = __add__

    def __neg__(self):
        return DarbouxExpression(
            [(k, -r) for k, r in self._summands], [(p, -g) for p, g in self._logs]
        )

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, r) -> "DarbouxExpression":
        """Multiply by a rational function (logs only by constants)."""
        if not isinstance(r, RationalFunction):
            r = RationalFunction.from_poly(r) if isinstance(r, MultiPoly) else RationalFunction.const(r, XYZ)
        r = r.with_vars(XYZ)
        if self._logs and not r.is_constant():
            raise NotImplementedError("log terms times a non-constant leave the class")
        c = r.num.constant_value() / r.den.constant_value() if r.is_constant() else None
        return DarbouxExpression(
            [(k, s * r) for k, s in self._summands],
            [(p, g * c) for p, g in self._logs] if c is not None else (),
        )

    def __mul__(self, other):
        if isinstance(other, (RationalFunction, MultiPoly, int, Fraction, GaussianRational)):
            return self.scale(other)
        if not isinstance(other, DarbouxExpression):
            return NotImplemented
        if self._logs or other._logs:
            if other.is_rational() and (not other._logs):
                return self.scale(other.as_rational())
            if self.is_rational() and (not self._logs):
                return other.scale(self.as_rational())
            raise NotImplementedError("products of logarithmic expressions leave the class")
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                extra, powers = _canonical_powers(t1.powers + t2.powers)
                g = t1.exp_arg + t2.exp_arg
                out.append(((g, powers), t1.coeff * t2.coeff * extra))
        return DarbouxExpression(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "DarbouxExpression":
        t = self._single()
        extra, powers = _canonical_powers((p, -c) for p, c in t.powers)
        return DarbouxExpression([((-t.exp_arg, powers), t.coeff.inverse() * extra)])

    def __truediv__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __pow__(self, k):
        """Single products only; any Q(i) exponent is allowed."""
        t = self._single()
        k = GaussianRational.coerce(k)
        if k.is_integer():
            n = int(k.re)
            coeff = t.coeff ** n
            pairs = [(p, c * k) for p, c in t.powers]
            extra, powers = _canonical_powers(pairs)
            g = t.exp_arg * RationalFunction.const(k, XYZ)
            return DarbouxExpression([((g, powers), coeff * extra)])
        # non-integer power of the rational part needs its factorization
        from .factor import poly_factor_limited

        pairs = [(p, c * k) for p, c in t.powers]
        num, den = t.coeff.num, t.coeff.den
        unit = num.leading_coefficient()
        if not unit.is_one():
            raise ValueError("non-integer power of a non-monic rational part")
        for f, m in poly_factor_limited(num) if not num.is_constant() else []:
            pairs.append((f, k * m))
        for f, m in poly_factor_limited(den) if not den.is_constant() else []:
            pairs.append((f, -(k * m)))
        extra, powers = _canonical_powers(pairs)
        g = t.exp_arg * RationalFunction.const(k, XYZ)
        return DarbouxExpression([((g, powers), extra)])

    # -- calculus -------------------------------------------------------
    def _derive(
        self,
        d_rat: Callable[[RationalFunction], RationalFunction],
        logd: Callable[[MultiPoly], RationalFunction],
    ) -> "DarbouxExpression":
        out = []
        logd_cache: Dict[MultiPoly, RationalFunction] = {}

        def cached_logd(p):
            v = logd_cache.get(p)
            if v is None:
                v = logd_cache[p] = logd(p)
            return v

        for t in self.terms:
            inner = d_rat(t.coeff)
            factor = _zero_rf()
            if not t.exp_arg.is_zero():
                factor = factor + d_rat(t.exp_arg)
            for p, c in t.powers:
                factor = factor + cached_logd(p) * RationalFunction.const(c, XYZ)
            if not factor.is_zero():
                inner = inner + t.coeff * factor
            if not inner.is_zero():
                out.append((t.key, inner))
        for p, g in self._logs:
            out.append(((_zero_rf(), ()), cached_logd(p) * RationalFunction.const(g, XYZ)))
        return DarbouxExpression(out)

    def partial(self, v: str) -> "DarbouxExpression":
        return partial(self, v)

    def dx_total(self, ode) -> "DarbouxExpression":
        return dx_total(ode, self)

    # -- zero testing ---------------------------------------------------
    def bases(self) -> List[MultiPoly]:
        seen = []
        for key, _ in self._summands:
            for p, _c in key[1]:
                if p not in seen:
                    seen.append(p)
        for p, _ in self._logs:
            if p not in seen:
                seen.append(p)
        return seen

    def is_zero(self, seed: int = 0, screen_points: int = 20) -> bool:
        return is_zero(self, seed, screen_points)

    # -- numerics -------------------------------------------------------
    def evaluate(self, point: Dict[str, complex]) -> complex:
        """Floating-point value using principal branches."""
        total = 0j
        for t in self.terms:
            v = _eval_rf(t.coeff, point)
            if not t.exp_arg.is_zero():
                v *= cmath.exp(_eval_rf(t.exp_arg, point))
            for p, c in t.powers:
                v *= cmath.exp(c.to_complex() * cmath.log(_eval_poly(p, point)))
            total += v
        for p, g in self._logs:
            total += g.to_complex() * cmath.log(_eval_poly(p, point))
        return total

    # -- equality / text --------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, DarbouxExpression):
            return NotImplemented
        return self.terms == other.terms and self._logs == other._logs

    def __hash__(self):
        return hash((self.terms, self._logs))

    def __str__(self):
        return format_darboux(self)

    def __repr__(self):
        return f"DarbouxExpression({self})"


def _lift(other) -> Optional[DarbouxExpression]:
    if isinstance(other, DarbouxExpression):
        return other
    if isinstance(other, (RationalFunction, MultiPoly, int, Fraction, GaussianRational)):
        return DarbouxExpression.rational(other)
    return None


def _eval_poly(p: MultiPoly, point) -> complex:
    total = 0j
    for e, c in p.terms.items():
        t = c.to_complex()
        for v, k in zip(p.vars, e):
            if k:
                t *= complex(point[v]) ** k
        total += t
    return total


def _eval_rf(r: RationalFunction, point) -> complex:
    return _eval_poly(r.num, point) / _eval_poly(r.den, point)


def partial(e: DarbouxExpression, v: str) -> DarbouxExpression:
    """Formal partial derivative in v (one of x, y, z)."""
    if v not in XYZ:
        from .errors import UnknownVariable

        raise UnknownVariable(v)
    return e._derive(lambda r: r.diff(v), lambda p: RationalFunction(p.diff(v), p))


def dx_total(ode, e: DarbouxExpression) -> DarbouxExpression:
    """Total derivative D_x = d/dx + z d/dy + phi d/dz on the class."""
    from .ode import apply_Dx

    D = ode.D
    return e._derive(lambda r: apply_Dx(ode, r), lambda p: RationalFunction(D(p), ode.N * p))


def _sample_point(rng: random.Random) -> Dict[str, GaussianRational]:
    return {
        v: GaussianRational(Fraction(rng.randint(-40, 40), rng.randint(1, 9)))
        for v in XYZ
    }


def _screen_group(rs: List[RationalFunction], rng: random.Random, points: int) -> Optional[bool]:
    """Exact evaluation at random points: False if a nonzero value is seen."""
    tried = 0
    attempts = 0
    while tried < points and attempts < 4 * points:
        attempts += 1
        pt = _sample_point(rng)
        total = ZERO
        ok = True
        for r in rs:
            d = r.den.evaluate(pt)
            if d.is_zero():
                ok = False
                break
            total = total + r.num.evaluate(pt) / d
        if not ok:
            continue
        tried += 1
        if total:
            return False
    return None


def _sum_is_zero(rs: List[RationalFunction]) -> bool:
    if len(rs) == 1:
        return rs[0].is_zero()
    # numerator over the product of distinct denominators; no gcds needed
    dens: List[MultiPoly] = []
    for r in rs:
        if r.den not in dens:
            dens.append(r.den)
    num = MultiPoly.zero(XYZ)
    for r in rs:
        other = MultiPoly.one(XYZ)
        for d in dens:
            if d != r.den:
                other = other * d
        num = num + r.num * other
    return num.is_zero()


def is_zero(e: DarbouxExpression, seed: int = 0, screen_points: int = 20) -> bool:
    """Exact zero test; raises :class:`UndecidedZeroTest` when the bases of
    power factors and logarithms are not pairwise coprime."""
    bases = e.bases()
    for i, p in enumerate(bases):
        for q in bases[i + 1:]:
            if not poly_gcd(p, q).is_constant():
                raise UndecidedZeroTest(f"bases {p} and {q} share a factor")
    if any(g for _, g in e.logs):
        return False
    rng = random.Random(seed)
    groups = e._groups()
    for key in sorted(groups, key=_group_sort_key):
        if _screen_group(groups[key], rng, screen_points) is False:
            return False
    return all(_sum_is_zero(rs) for rs in groups.values())


def _format_exponent(c: GaussianRational) -> str:
    return format_scalar(c)


def format_darboux(e: DarbouxExpression) -> str:
    parts = []
    for t in e.terms:
        pieces = []
        coeff = format_rational(t.coeff)
        if len(t.coeff.num.terms) > 1 or not t.coeff.den.is_constant():
            coeff = f"({coeff})"
        pieces.append(coeff)
        if not t.exp_arg.is_zero():
            pieces.append(f"exp({format_rational(t.exp_arg)})")
        for p, c in t.powers:
            pieces.append(f"({format_poly(p)})^({_format_exponent(c)})")
        if pieces[0] == "1" and len(pieces) > 1:
            pieces = pieces[1:]
        parts.append("*".join(pieces))
    for p, g in e.logs:
        if g.is_one():
            parts.append(f"log({format_poly(p)})")
        else:
            parts.append(f"({format_scalar(g)})*log({format_poly(p)})")
    return " + ".join(parts) if parts else "0"

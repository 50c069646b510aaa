"""Sparse multivariate polynomials and rational functions over Q(i).

A :class:`MultiPoly` maps exponent tuples to nonzero :class:`GaussianRational`
coefficients.  Monomials are ordered graded-lexicographically with the
variables in the order of ``MultiPoly.vars`` (``x > y > z > s`` for the
standard jet coordinates).
"""

from __future__ import annotations

import heapq
import random
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from .errors import InexactDivision, UnknownVariable, ZeroDenominator
from .modgcd import modular_gcd
from .numeric import ONE, ZERO, GaussianRational, Scalar, format_scalar

Exponent = Tuple[int, ...]

XYZ = ("x", "y", "z")
XYZS = ("x", "y", "z", "s")

_VAR_RANK = {"x": 0, "y": 1, "z": 2, "s": 3}


def merge_vars(*groups: Sequence[str]) -> Tuple[str, ...]:
    """Union of variable names in canonical order (x, y, z, s, then alphabetical)."""
    names = set()
    for g in groups:
        names.update(g)
    return tuple(sorted(names, key=lambda v: (_VAR_RANK.get(v, 99), v)))


def mono_key(e: Exponent) -> tuple:
    return (sum(e), e)


def _coerce(c) -> GaussianRational:
    return c if isinstance(c, GaussianRational) else GaussianRational.coerce(c)


class MultiPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] = None, vars: Sequence[str] = XYZ):
        self.vars = tuple(vars)
        clean: Dict[Exponent, GaussianRational] = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                c = _coerce(c)
                if c:
                    if len(e) != n:
                        raise ValueError(f"exponent {e} does not match variables {self.vars}")
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Dict[Exponent, GaussianRational], vars: Tuple[str, ...]) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = XYZ) -> "MultiPoly":
        vars = tuple(vars)
        c = _coerce(c)
        return cls._wrap({(0,) * len(vars): c} if c else {}, vars)

    @classmethod
    def zero(cls, vars: Sequence[str] = XYZ) -> "MultiPoly":
        return cls._wrap({}, tuple(vars))

    @classmethod
    def one(cls, vars: Sequence[str] = XYZ) -> "MultiPoly":
        return cls.const(1, vars)

    @classmethod
    def var(cls, name: str, vars: Sequence[str] = XYZ) -> "MultiPoly":
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariable(name)
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._wrap({e: ONE}, vars)

    @classmethod
    def monomial(cls, e: Exponent, c: Scalar = 1, vars: Sequence[str] = XYZ) -> "MultiPoly":
        return cls({tuple(e): c}, vars)

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> GaussianRational:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, v: str) -> int:
        i = self._index(v)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def free_vars(self) -> Tuple[str, ...]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def _index(self, v: str) -> int:
        try:
            return self.vars.index(v)
        except ValueError:
            raise UnknownVariable(v) from None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    def leading_monomial(self) -> Exponent:
        return max(self.terms, key=mono_key)

    def leading_coefficient(self) -> GaussianRational:
        if not self.terms:
            return ZERO
        return self.terms[self.leading_monomial()]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc.is_one():
            return self
        return self.scale(lc.inverse())

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    # -- variable handling ----------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        """Re-express over ``vars`` (must contain every variable actually used)."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            if v in vars:
                pos.append((i, vars.index(v)))
        n = len(vars)
        kept = {i for i, _ in pos}
        out = {}
        for e, c in self.terms.items():
            for i, k in enumerate(e):
                if k and i not in kept:
                    raise UnknownVariable(self.vars[i])
            ne = [0] * n
            for i, j in pos:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return MultiPoly._wrap(out, vars)

    def _align(self, other: "MultiPoly"):
        if self.vars == other.vars:
            return self, other
        vs = merge_vars(self.vars, other.vars)
        return self.with_vars(vs), other.with_vars(vs)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, GaussianRational)):
                other = MultiPoly.const(other, self.vars)
            else:
                return NotImplemented
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            prev = out.get(e)
            if prev is None:
                out[e] = c
            else:
                s = prev + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._wrap(out, a.vars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._wrap({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, GaussianRational)):
                other = MultiPoly.const(other, self.vars)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "MultiPoly":
        c = _coerce(c)
        if not c:
            return MultiPoly.zero(self.vars)
        if c.is_one():
            return self
        return MultiPoly._wrap({e: v * c for e, v in self.terms.items()}, self.vars)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, GaussianRational)):
                return self.scale(other)
            return NotImplemented
        a, b = self._align(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: Dict[Exponent, GaussianRational] = {}
        bt = list(b.terms.items())
        n = len(a.vars)
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                if n == 3:
                    e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                else:
                    e = tuple(i + j for i, j in zip(e1, e2))
                p = c1 * c2
                prev = out.get(e)
                out[e] = p if prev is None else prev + p
        return MultiPoly._wrap({e: c for e, c in out.items() if c}, a.vars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, e: Exponent, c: Scalar = ONE) -> "MultiPoly":
        c = _coerce(c)
        return MultiPoly._wrap(
            {tuple(i + j for i, j in zip(m, e)): v * c for m, v in self.terms.items()},
            self.vars,
        )

    def divmod(self, divisor: "MultiPoly"):
        """Multivariate division by a single polynomial (grlex leading terms)."""
        a, b = self._align(divisor)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lm_b = b.leading_monomial()
        lc_inv = b.terms[lm_b].inverse()
        rest = dict(a.terms)
        quot: Dict[Exponent, GaussianRational] = {}
        rem: Dict[Exponent, GaussianRational] = {}
        b_terms = list(b.terms.items())
        while rest:
            m = max(rest, key=mono_key)
            c = rest[m]
            if all(i >= j for i, j in zip(m, lm_b)):
                shift = tuple(i - j for i, j in zip(m, lm_b))
                f = c * lc_inv
                quot[shift] = quot.get(shift, ZERO) + f
                for eb, cb in b_terms:
                    e = tuple(i + j for i, j in zip(eb, shift))
                    v = rest.get(e, ZERO) - f * cb
                    if v:
                        rest[e] = v
                    else:
                        rest.pop(e, None)
            else:
                rem[m] = c
                del rest[m]
        return MultiPoly._wrap(quot, a.vars), MultiPoly._wrap(rem, a.vars)

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        q = _exact_quotient(*self._align(divisor))
        if q is None:
            raise InexactDivision(f"{self} is not divisible by {divisor}")
        return q

    def divides(self, other: "MultiPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return _exact_quotient(*other._align(self)) is not None

    # -- calculus and evaluation ------------------------------------------
    def diff(self, v: str) -> "MultiPoly":
        i = self._index(v)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return MultiPoly._wrap(out, self.vars)

    def evaluate(self, point: Mapping[str, Scalar]) -> GaussianRational:
        vals = [_coerce(point[v]) for v in self.vars]
        powers = [dict() for _ in self.vars]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = vals[i] ** k
                        powers[i][k] = p
                    t = t * p
            total = total + t
        return total

    def substitute(self, mapping: Mapping[str, "MultiPoly"], vars: Sequence[str] = None) -> "MultiPoly":
        """Replace variables by polynomials; result lives over ``vars``."""
        if vars is None:
            vs = [self.vars]
            for p in mapping.values():
                if isinstance(p, MultiPoly):
                    vs.append(p.vars)
            vars = merge_vars(*vs)
            vars = tuple(v for v in vars if v not in mapping or any(
                isinstance(p, MultiPoly) and v in p.vars for p in mapping.values()))
        vars = tuple(vars)
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, MultiPoly):
                    img = MultiPoly.const(img, vars)
                images.append(img.with_vars(vars))
            else:
                images.append(MultiPoly.var(v, vars))
        cache = [dict() for _ in self.vars]
        total = MultiPoly.zero(vars)
        for e, c in self.terms.items():
            t = MultiPoly.const(c, vars)
            for i, k in enumerate(e):
                if k:
                    p = cache[i].get(k)
                    if p is None:
                        p = images[i] ** k
                        cache[i][k] = p
                    t = t * p
            total = total + t
        return total

    def conjugate(self) -> "MultiPoly":
        return MultiPoly._wrap({e: c.conjugate() for e, c in self.terms.items()}, self.vars)

    def coefficients_in(self, v: str) -> Dict[int, "MultiPoly"]:
        """View as a polynomial in ``v``: power -> coefficient (still over ``self.vars``)."""
        i = self._index(v)
        out: Dict[int, Dict[Exponent, GaussianRational]] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly._wrap(t, self.vars) for k, t in out.items()}

    # -- equality / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if self.vars == other.vars:
                return self.terms == other.terms
            a, b = self._align(other)
            return a.terms == b.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == MultiPoly.const(other, self.vars)
        return NotImplemented

    def __reduce__(self):
        # the cached hash depends on per-process string hashing
        return (MultiPoly, (self.terms, self.vars))

    def __hash__(self):
        if self._hash is None:
            used = self.free_vars()
            p = self.with_vars(used) if used != self.vars else self
            self._hash = hash((used, frozenset(p.terms.items())))
        return self._hash

    def sort_key(self) -> tuple:
        """Total order: compare term lists in descending grlex order."""
        return tuple(
            (mono_key(e), c.sort_key()) for e, c in self.sorted_terms()
        )

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return format_poly(self)


def _exact_quotient(a: MultiPoly, b: MultiPoly):
    """a/b if b divides a exactly, else None; stops at the first remainder term."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lm_b = b.leading_monomial()
    lc_inv = b.terms[lm_b].inverse()
    b_rest = [(e, c) for e, c in b.terms.items() if e != lm_b]
    rest = dict(a.terms)
    heap = [(-sum(e), tuple(-k for k in e)) for e in rest]
    heapq.heapify(heap)
    quot: Dict[Exponent, GaussianRational] = {}
    while heap:
        _, neg = heapq.heappop(heap)
        m = tuple(-k for k in neg)
        c = rest.pop(m, None)
        if c is None:
            continue
        if not all(i >= j for i, j in zip(m, lm_b)):
            return None
        shift = tuple(i - j for i, j in zip(m, lm_b))
        f = c * lc_inv
        quot[shift] = f
        for eb, cb in b_rest:
            e = tuple(i + j for i, j in zip(eb, shift))
            old = rest.get(e)
            v = (ZERO if old is None else old) - f * cb
            if v:
                if old is None:
                    heapq.heappush(heap, (-sum(e), tuple(-k for k in e)))
                rest[e] = v
            elif old is not None:
                del rest[e]
    return MultiPoly._wrap(quot, a.vars)


def _format_monomial(e: Exponent, vars: Sequence[str]) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    """Canonical text, terms listed from the smallest graded-lex monomial up."""
    if p.is_zero():
        return "0"
    out = []
    for idx, (e, c) in enumerate(reversed(p.sorted_terms())):
        mono = _format_monomial(e, p.vars)
        negative = False
        if c.is_real():
            negative = c.re < 0
            mag = -c if negative else c
            ctext = format_scalar(mag)
        elif c.re == 0:
            negative = c.im < 0
            mag = -c if negative else c
            ctext = format_scalar(mag)
        else:
            ctext = f"({format_scalar(c)})"
            mag = c
        if mono:
            if mag.is_one():
                term = mono
            else:
                term = f"{ctext}*{mono}"
        else:
            term = ctext
        if idx == 0:
            out.append(f"-{term}" if negative else term)
        else:
            out.append(f" - {term}" if negative else f" + {term}")
    return "".join(out)


def poly_arith(op: str, a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "exact_div":
        return a.exact_div(b)
    raise ValueError(f"unknown operation {op!r}")


def poly_diff(p: MultiPoly, v: str) -> MultiPoly:
    return p.diff(v)


# -- greatest common divisors ------------------------------------------------

# Coprimality is screened through images in GF(P) with P = 1 mod 4, where i
# maps to a square root of -1.  A degree-0 image gcd is a proof, provided the
# leading coefficients survive the reduction.
_P = 1000000009
_I_MOD = next(pow(c, (_P - 1) // 4, _P) for c in range(2, 100) if pow(c, (_P - 1) // 2, _P) == _P - 1)


def _mod_image(c: GaussianRational):
    a, b, d = c.parts
    if d % _P == 0:
        return None
    return (a + b * _I_MOD) * pow(d, -1, _P) % _P


def _eval_mod(p: MultiPoly, pt: Sequence[int]):
    total = 0
    for e, c in p.terms.items():
        img = _mod_image(c)
        if img is None:
            return None
        for base, k in zip(pt, e):
            if k:
                img = img * pow(base, k, _P) % _P
        total += img
    return total % _P


def _gcd_degree_mod(a: Dict[int, int], b: Dict[int, int]) -> int:
    a = {k: c for k, c in a.items() if c}
    b = {k: c for k, c in b.items() if c}
    while b:
        db = max(b)
        inv = pow(b[db], -1, _P)
        while a and max(a) >= db:
            da = max(a)
            f = a[da] * inv % _P
            shift = da - db
            for k, c in b.items():
                v = (a.get(k + shift, 0) - f * c) % _P
                if v:
                    a[k + shift] = v
                else:
                    a.pop(k + shift, None)
        a, b = b, a
    return max(a) if a else -1


def _content_in(p: MultiPoly, v: str) -> MultiPoly:
    coeffs = list(p.coefficients_in(v).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, c)
    return g.monic() if not g.is_constant() else MultiPoly.one(p.vars)


def _probably_coprime(a: MultiPoly, b: MultiPoly, v: str, rng: random.Random) -> bool:
    """True only if a modular image proves gcd(a, b) has degree 0 in ``v``."""
    i = a.vars.index(v)
    ca, cb = a.coefficients_in(v), b.coefficients_in(v)
    da, db = max(ca), max(cb)
    for _ in range(3):
        pt = [rng.randrange(1, _P) for _ in a.vars]
        pt[i] = 1
        ua = {k: _eval_mod(c, pt) for k, c in ca.items()}
        ub = {k: _eval_mod(c, pt) for k, c in cb.items()}
        if None in ua.values() or None in ub.values() or not ua[da] or not ub[db]:
            continue
        return _gcd_degree_mod(ua, ub) == 0
    return False


def _pseudo_rem(a: MultiPoly, b: MultiPoly, v: str) -> MultiPoly:
    i = a.vars.index(v)
    db = b.degree(v)
    cb = b.coefficients_in(v)
    lcb = cb[db]
    tail = b - lcb.mul_monomial(tuple(db if j == i else 0 for j in range(len(a.vars))))
    while not a.is_zero() and a.degree(v) >= db:
        da = a.degree(v)
        ca = a.coefficients_in(v)
        lca = ca[da]
        rest = a - lca.mul_monomial(tuple(da if j == i else 0 for j in range(len(a.vars))))
        shift = tuple(da - db if j == i else 0 for j in range(len(a.vars)))
        a = rest * lcb - (lca * tail).mul_monomial(shift)
    return a


def _primitive_in(p: MultiPoly, v: str) -> MultiPoly:
    c = _content_in(p, v)
    if c.is_constant():
        return p
    return p.exact_div(c)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor, normalized to leading coefficient 1."""
    a, b = a._align(b)
    vars = a.vars
    if a.is_zero():
        if b.is_zero():
            raise ValueError("gcd(0, 0) is undefined")
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MultiPoly.one(vars)
    if a == b:
        return a.monic()
    # monomial content shortcut
    if len(a.terms) == 1 or len(b.terms) == 1:
        mono_a = _min_exponents(a)
        mono_b = _min_exponents(b)
        e = tuple(min(i, j) for i, j in zip(mono_a, mono_b))
        return MultiPoly.monomial(e, 1, vars)
    # split off monomial content before any remainder sequence
    mono_a, mono_b = _min_exponents(a), _min_exponents(b)
    if any(mono_a) or any(mono_b):
        e = tuple(min(i, j) for i, j in zip(mono_a, mono_b))
        neg = lambda m: tuple(-k for k in m)
        g = poly_gcd(a.mul_monomial(neg(mono_a)), b.mul_monomial(neg(mono_b)))
        return g.mul_monomial(e)
    fa, fb = set(a.free_vars()), set(b.free_vars())
    # a variable present in only one argument cannot occur in the gcd
    for v in vars:
        if (v in fa) != (v in fb):
            if v in fa:
                return poly_gcd(_content_in(a, v), b)
            return poly_gcd(a, _content_in(b, v))
    common = [v for v in vars if v in fa]
    # main variable: smallest combined degree
    v = min(common, key=lambda w: (a.degree(w) + b.degree(w), vars.index(w)))
    rng = random.Random(hash((a.sort_key(), b.sort_key())) & 0xFFFFFFFF)
    if _probably_coprime(a, b, v, rng):
        ca, cb = _content_in(a, v), _content_in(b, v)
        return poly_gcd(ca, cb) if not (ca.is_constant() or cb.is_constant()) else MultiPoly.one(vars)
    g = modular_gcd(a, b, lambda terms: MultiPoly._wrap(terms, vars))
    if g is not None:
        return g
    # remainder sequence, only if the modular images never verified
    ca, cb = _content_in(a, v), _content_in(b, v)
    if ca.is_constant() or cb.is_constant():
        g_content = MultiPoly.one(vars)
    else:
        g_content = poly_gcd(ca, cb)
    pa = (a.exact_div(ca) if not ca.is_constant() else a).monic()
    pb = (b.exact_div(cb) if not cb.is_constant() else b).monic()
    if pa.degree(v) < pb.degree(v):
        pa, pb = pb, pa
    while True:
        r = _pseudo_rem(pa, pb, v)
        if r.is_zero():
            g = pb
            break
        if r.degree(v) <= 0:
            g = MultiPoly.one(vars)
            break
        # over a field the scalar factor is free; keep coefficients small
        pa, pb = pb, _primitive_in(r, v).monic()
    if not g.is_constant():
        g = _primitive_in(g, v)
    return (g * g_content).monic()


def _min_exponents(p: MultiPoly) -> Exponent:
    exps = list(p.terms)
    return tuple(min(e[i] for e in exps) for i in range(len(p.vars)))


def poly_lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    g = poly_gcd(a, b)
    return (a * b.exact_div(g)).monic()


# -- rational functions --------------------------------------------------------

class RationalFunction:
    """Quotient ``num/den`` with gcd cancelled and a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, *, normalized: bool = False):
        if den is None:
            den = MultiPoly.one(num.vars)
        num, den = num._align(den)
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if not normalized:
            if num.is_zero():
                den = MultiPoly.one(num.vars)
            else:
                g = poly_gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                lc = den.leading_coefficient()
                if not lc.is_one():
                    inv = lc.inverse()
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFunction":
        return cls(p, MultiPoly.one(p.vars), normalized=True)

    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = XYZ) -> "RationalFunction":
        return cls.from_poly(MultiPoly.const(c, vars))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def with_vars(self, vars) -> "RationalFunction":
        return RationalFunction(self.num.with_vars(vars), self.den.with_vars(vars), normalized=True)

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RationalFunction.const(other, self.vars)
        raise TypeError

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if self.den.is_constant():
            return RationalFunction(self.num * other.den + other.num, other.den)
        if other.den.is_constant():
            return RationalFunction(self.num + other.num * self.den, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return RationalFunction(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if other.is_constant():
            c = other.num.constant_value()
            if not c:
                return RationalFunction.const(0, self.vars)
            return RationalFunction(self.num.scale(c), self.den, normalized=True)
        if self.is_constant():
            return other * self
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, other.den) if not self.num.is_zero() else MultiPoly.one(self.vars)
        g2 = poly_gcd(other.num, self.den) if not other.num.is_zero() else MultiPoly.one(self.vars)
        n1 = self.num.exact_div(g1) if not g1.is_constant() else self.num
        d2 = other.den.exact_div(g1) if not g1.is_constant() else other.den
        n2 = other.num.exact_div(g2) if not g2.is_constant() else other.num
        d1 = self.den.exact_div(g2) if not g2.is_constant() else self.den
        num, den = n1 * n2, d1 * d2
        if num.is_zero():
            return RationalFunction.const(0, num.vars)
        lc = den.leading_coefficient().inverse()
        return RationalFunction(num.scale(lc), den.scale(lc), normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, normalized=True)

    def diff(self, v: str) -> "RationalFunction":
        if self.den.is_constant():
            return RationalFunction(self.num.diff(v), self.den, normalized=True)
        return RationalFunction(
            self.num.diff(v) * self.den - self.num * self.den.diff(v), self.den * self.den
        )

    def evaluate(self, point) -> GaussianRational:
        d = self.den.evaluate(point)
        if d.is_zero():
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.evaluate(point) / d

    def substitute(self, mapping, vars=None) -> "RationalFunction":
        num = self.num.substitute(mapping, vars)
        den = self.den.substitute(mapping, vars)
        num, den = num._align(den)
        return RationalFunction(num, den)

    def conjugate(self) -> "RationalFunction":
        return RationalFunction(self.num.conjugate(), self.den.conjugate())

    def __eq__(self, other):
        if isinstance(other, (MultiPoly, int, Fraction, GaussianRational)):
            other = self._lift(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def sort_key(self):
        return (self.den.sort_key(), self.num.sort_key())

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        return format_rational(self)


def format_rational(r: RationalFunction) -> str:
    if r.den.is_constant():
        return format_poly(r.num)
    num = format_poly(r.num)
    if len(r.num.terms) > 1:
        num = f"({num})"
    den = format_poly(r.den)
    if len(r.den.terms) == 1 and len(r.den.free_vars()) == 1 and r.den.leading_coefficient().is_one():
        return f"{num}/{den}"
    return f"{num}/({den})"


def rat_normalize(num: MultiPoly, den: MultiPoly) -> RationalFunction:
    return RationalFunction(num, den)


def dense_monomials(nvars: int, max_deg: int, min_deg: int = 0) -> list:
    """All exponent tuples of total degree in [min_deg, max_deg], descending grlex."""
    out = []

    def rec(prefix, remaining, left):
        if left == 1:
            out.append(prefix + (remaining,))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + (k,), remaining - k, left - 1)

    for deg in range(max_deg, min_deg - 1, -1):
        if nvars == 0:
            if deg == 0:
                out.append(())
            continue
        rec((), deg, nvars)
    return out

"""Rational S-functions: extraction from eigenpolynomials and Riccati checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional

from .darboux import LinearSEigenpoly
from .errors import DegenerateEigenpoly
from .ode import Rational2ODE, apply_Dx
from .poly import XYZ, RationalFunction


@dataclass(frozen=True)
class SFunction:
    value: RationalFunction
    source: Optional[LinearSEigenpoly] = None
    certified: bool = False
    sign_note: str = ""

    @property
    def P(self):
        return self.value.num

    @property
    def Q(self):
        return self.value.den

    def __str__(self):
        return str(self.value)


def certify_s(ode: Rational2ODE, S: RationalFunction) -> RationalFunction:
    """Riccati residual D_x[S] - S^2 - phi_z*S + phi_y (zero iff S qualifies)."""
    S = S.with_vars(XYZ)
    return apply_Dx(ode, S) - S * S - ode.phi_z * S + ode.phi_y


def extract_s(ode: Rational2ODE, e: LinearSEigenpoly) -> SFunction:
    """S = -b/a from the root of a*s + b, certified on the spot."""
    if e.a.is_zero():
        raise DegenerateEigenpoly("eigenpolynomial has no s-term")
    S = RationalFunction(-e.b, e.a)
    ok = certify_s(ode, S).is_zero()
    note = ""
    if ok and not e.b.is_zero():
        flipped = RationalFunction(e.b, e.a)
        if not certify_s(ode, flipped).is_zero():
            note = "root of a*s + b is -b/a; the opposite sign b/a fails the Riccati equation"
    return SFunction(S, e, ok, note)


def _s_order(s: SFunction):
    v = s.value
    return (max(v.num.total_degree(), v.den.total_degree()), v.den.sort_key(), v.num.sort_key())


def dedupe_s(items: Iterable[SFunction]) -> List[SFunction]:
    """Certified S-functions only, pairwise distinct, in canonical order."""
    seen = {}
    for s in items:
        if not s.certified:
            continue
        if s.value not in seen:
            seen[s.value] = s
    return sorted(seen.values(), key=_s_order)

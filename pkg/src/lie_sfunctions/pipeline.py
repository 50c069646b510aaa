"""End-to-end analysis: operators, S-functions, symmetries, first integrals.

Every ``verified`` flag placed in a report is recomputed from exact
residuals right before emission; an internally produced result that fails
its own re-check raises :class:`VerificationFailure`.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .darboux import DarbouxPair, LinearSEigenpoly, SearchStats, find_darboux, find_linear_s_eigenpolys
from .errors import NoSymmetryWithinBounds, VerificationFailure
from .expr import DarbouxExpression
from .integrals import (
    CLOSED_FORM,
    FirstIntegralResult,
    first_integral,
    verify_first_integral,
)
from .ode import Rational2ODE
from .parser import print_canonical
from .sfunctions import SFunction, certify_s, dedupe_s, extract_s
from .symmetry import SymmetryResult, candidate_pool, solve_eta, verify_symmetry

log = logging.getLogger(__name__)

SCHEMA = "lie-sfunctions/report"
SCHEMA_VERSION = 1


@dataclass
class Config:
    deg_s: int = 6
    deg_darboux: int = 4
    exp_power_bound: int = 2
    A_degree_slack: int = 1
    branch_budget: int = 10_000
    seed: int = 0
    min_s: int = 2  # stop escalating deg-s once this many S are certified

    def echo(self) -> Dict[str, int]:
        return {
            "deg_s": self.deg_s,
            "deg_darboux": self.deg_darboux,
            "exp_power_bound": self.exp_power_bound,
            "A_degree_slack": self.A_degree_slack,
            "branch_budget": self.branch_budget,
            "seed": self.seed,
        }


@dataclass
class PairIntegral:
    index: int  # which S of the pair the integral belongs to
    other: int
    eta_other: DarbouxExpression
    R: DarbouxExpression
    result: FirstIntegralResult


@dataclass
class Analysis:
    ode: Rational2ODE
    config: Config
    darboux: List[DarbouxPair] = field(default_factory=list)
    eigenpolys: List[LinearSEigenpoly] = field(default_factory=list)
    sfunctions: List[SFunction] = field(default_factory=list)
    symmetries: Dict[int, List[SymmetryResult]] = field(default_factory=dict)
    integrals: List[PairIntegral] = field(default_factory=list)
    diagnostics: List[str] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    stats: SearchStats = field(default_factory=SearchStats)
    s_levels: int = 0


class _Timer:
    def __init__(self, analysis: Analysis, name: str):
        self.a, self.name = analysis, name

    def __enter__(self):
        self.t = time.perf_counter()

    def __exit__(self, *exc):
        self.a.timings[self.name] = self.a.timings.get(self.name, 0.0) + 1000 * (time.perf_counter() - self.t)


def run_sfunctions(a: Analysis) -> None:
    """Degree-escalated eigenpolynomial search with early exit."""
    cfg = a.config
    with _Timer(a, "eigenpolys"):
        found: List[LinearSEigenpoly] = []
        for d in range(1, cfg.deg_s + 1):
            level = find_linear_s_eigenpolys(a.ode, d, cfg.branch_budget, min_deg=d, stats=a.stats)
            found.extend(e for e in level if e not in found)
            a.s_levels = d
            certified = dedupe_s(extract_s(a.ode, e) for e in found)
            if len(certified) >= cfg.min_s:
                break
        a.eigenpolys = found
    with _Timer(a, "sfunctions"):
        a.sfunctions = dedupe_s(extract_s(a.ode, e) for e in a.eigenpolys)


def run_darboux(a: Analysis) -> None:
    with _Timer(a, "darboux"):
        a.darboux = find_darboux(a.ode.D, a.config.deg_darboux, a.config.branch_budget, stats=a.stats)


def run_symmetries(a: Analysis) -> None:
    cfg = a.config
    with _Timer(a, "symmetries"):
        for i, S in enumerate(a.sfunctions):
            pool = candidate_pool(a.ode, S, a.darboux)
            try:
                a.symmetries[i] = solve_eta(
                    a.ode, S, pool, cfg.exp_power_bound, cfg.A_degree_slack, cfg.seed
                )
            except NoSymmetryWithinBounds:
                a.diagnostics.append(f"no Darboux-form symmetry within bounds for S = {print_canonical(S.value)}")


def run_first_integrals(a: Analysis) -> None:
    """All unordered pairs of S-functions that both carry symmetries."""
    with _Timer(a, "first_integrals"):
        idx = sorted(a.symmetries)
        for i, j in itertools.combinations(idx, 2):
            for me, other in ((i, j), (j, i)):
                a.integrals.append(_pair_integral(a, me, other))


def _pair_integral(a: Analysis, me: int, other: int) -> PairIntegral:
    """First integral attached to S[me], with R built from a ray of
    eta[other].  Rays are scanned in order; the first one giving a closed
    gradient is used (eta[other] is only fixed up to first integrals)."""
    S_me, S_other = a.sfunctions[me], a.sfunctions[other]
    fallback = None
    for ray in a.symmetries[other]:
        R = ray.eta_bar.scale(S_other.value - S_me.value).reciprocal()
        fi = first_integral(a.ode, R, S_me, a.config.seed)
        if fi.verified:
            return PairIntegral(me, other, ray.eta_bar, R, fi)
        if fallback is None:
            fallback = PairIntegral(me, other, ray.eta_bar, R, fi)
    a.diagnostics.append(
        f"no closed gradient for S = {print_canonical(S_me.value)} from the symmetries of "
        f"S = {print_canonical(S_other.value)}"
    )
    return fallback


def analyze(ode: Rational2ODE, config: Optional[Config] = None, stages=("s", "darboux", "symmetries", "integrals")) -> Analysis:
    a = Analysis(ode, config or Config())
    if "s" in stages:
        run_sfunctions(a)
    if "darboux" in stages:
        run_darboux(a)
    if "symmetries" in stages:
        run_symmetries(a)
    if "integrals" in stages:
        run_first_integrals(a)
    return a


# -- report ------------------------------------------------------------------

def _pc(v) -> str:
    return print_canonical(v)


def _powers(e: DarbouxExpression):
    return [{"base": _pc(p), "exponent": _pc(c)} for p, c in e.power_factors]


def recheck(a: Analysis) -> Tuple[List[bool], Dict[int, List[bool]], List[bool]]:
    """Exact residuals behind every verified flag."""
    seed = a.config.seed
    s_ok = [certify_s(a.ode, S.value).is_zero() for S in a.sfunctions]
    sym_ok = {}
    for i, rays in a.symmetries.items():
        sym_ok[i] = [verify_symmetry(a.ode, r.eta_bar).is_zero(seed) for r in rays]
    fi_ok = []
    for pi in a.integrals:
        r = pi.result
        if r.status == CLOSED_FORM:
            ok = verify_first_integral(a.ode, r.closed_form, seed)
        else:
            from .integrals import gradient_of

            ok = gradient_of(a.ode, pi.R, a.sfunctions[pi.index], seed).ok
        fi_ok.append(ok)
    for S, ok in zip(a.sfunctions, s_ok):
        if S.certified and not ok:
            raise VerificationFailure(f"S = {_pc(S.value)} lost its Riccati certificate")
    for i, oks in sym_ok.items():
        for r, ok in zip(a.symmetries[i], oks):
            if r.verified and not ok:
                raise VerificationFailure(f"eta_bar = {_pc(r.eta_bar)} failed the symmetry re-check")
    for pi, ok in zip(a.integrals, fi_ok):
        if pi.result.verified and not ok:
            raise VerificationFailure("a first integral failed its re-check")
    return s_ok, sym_ok, fi_ok


def build_report(a: Analysis, command: str = "analyze", sections=None, timings: bool = True) -> dict:
    s_ok, sym_ok, fi_ok = recheck(a)
    sections = sections or ("darboux_D", "eigenpolys_scriptD", "s_functions", "symmetries", "first_integrals")
    rep = {
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "command": command,
        "ode": {"M": _pc(a.ode.M), "N": _pc(a.ode.N), "phi": _pc(a.ode.phi)},
    }
    if "darboux_D" in sections:
        rep["darboux_D"] = [
            {"p": _pc(d.p), "cofactor": _pc(d.q), "possibly_reducible": d.possibly_reducible}
            for d in a.darboux
        ]
    if "eigenpolys_scriptD" in sections:
        rep["eigenpolys_scriptD"] = [
            {"a": _pc(e.a), "b": _pc(e.b), "lambda0": _pc(e.lambda0), "poly": _pc(e.as_poly())}
            for e in a.eigenpolys
        ]
    if "s_functions" in sections:
        rep["s_functions"] = [
            {"value": _pc(S.value), "riccati_ok": ok, "sign_note": S.sign_note}
            for S, ok in zip(a.sfunctions, s_ok)
        ]
    if "symmetries" in sections:
        syms = []
        for i in sorted(a.symmetries):
            rays = a.symmetries[i]
            r = rays[0]
            syms.append(
                {
                    "S": _pc(a.sfunctions[i].value),
                    "eta_bar": _pc(r.eta_bar),
                    "rational_part": _pc(r.eta_bar.rational_part),
                    "exp_argument": _pc(r.eta_bar.exp_argument),
                    "power_factors": _powers(r.eta_bar),
                    "verified": sym_ok[i][0],
                    "family": [_pc(f) for f in r.family],
                    "rays": [
                        {"eta_bar": _pc(x.eta_bar), "verified": ok}
                        for x, ok in zip(rays[1:], sym_ok[i][1:])
                    ],
                }
            )
        rep["symmetries"] = syms
    if "first_integrals" in sections:
        fis = []
        for pi, ok in zip(a.integrals, fi_ok):
            r = pi.result
            fis.append(
                {
                    "S": _pc(a.sfunctions[pi.index].value),
                    "paired_with": _pc(a.sfunctions[pi.other].value),
                    "eta_other": _pc(pi.eta_other),
                    "integrating_factor": _pc(pi.R),
                    "status": r.status,
                    "gradient": [_pc(c) for c in r.gradient],
                    "closed_form": _pc(r.closed_form) if r.closed_form is not None else None,
                    "verified": ok,
                    "diagnostics": list(r.diagnostics),
                }
            )
        rep["first_integrals"] = fis
    rep["diagnostics"] = list(a.diagnostics)
    rep["search"] = {
        "s_levels": a.s_levels,
        "systems": a.stats.systems,
        "branches": a.stats.branches,
        "stuck": a.stats.stuck,
        "abandoned": a.stats.abandoned,
        "budget_hits": a.stats.budget_hits,
    }
    rep["config_echo"] = a.config.echo()
    if timings:
        rep["timings"] = {k: round(v, 3) for k, v in sorted(a.timings.items())}
    return rep

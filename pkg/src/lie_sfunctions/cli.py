"""Command-line interface.

Exit codes: 0 success, 2 nothing found within bounds (or a supplied value
failed verification), 3 parse error, 4 solver budget exhausted everywhere,
5 internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from .errors import ParseError, VerificationFailure
from .parser import parse_darboux, parse_ode, parse_rational, print_canonical
from .pipeline import (
    SCHEMA,
    SCHEMA_VERSION,
    Analysis,
    Config,
    build_report,
    run_darboux,
    run_first_integrals,
    run_sfunctions,
    run_symmetries,
)
from .sfunctions import SFunction, certify_s

EXIT_OK = 0
EXIT_NOTHING = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4
EXIT_INTERNAL = 5


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("ode", help="ODE text, e.g. \"y'' = -z/x\"")
    p.add_argument("--deg-s", type=int, default=6, help="max degree of a in a*s + b (default 6)")
    p.add_argument("--deg-darboux", "--deg", type=int, default=4, dest="deg_darboux",
                   help="max degree of Darboux polynomials of D (default 4)")
    p.add_argument("--exp-power-bound", type=int, default=2)
    p.add_argument("--A-degree-slack", type=int, default=1, dest="A_degree_slack")
    p.add_argument("--branch-budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0, help="numeric-screen seed")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--no-timings", action="store_true", help="omit timings (byte-stable output)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lie-sfunctions",
        description="S-functions, Darboux-form symmetries and first integrals of y'' = M/N.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("analyze", "run the full pipeline"),
        ("darboux", "Darboux polynomials of D only"),
        ("sfunctions", "eigenpolynomials of the extended operator and S-functions"),
        ("symmetries", "Darboux-form symmetries"),
        ("first-integrals", "integrating factors and first integrals"),
        ("verify", "check user-supplied S, eta_bar or first integrals"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        if name in ("symmetries", "first-integrals", "verify"):
            p.add_argument("--s", action="append", default=[], metavar="S",
                           help="S-function (repeatable); skips the S search")
        if name in ("symmetries", "first-integrals"):
            p.add_argument("--from-report", metavar="FILE",
                           help="take S-functions from a prior JSON report")
        if name == "verify":
            p.add_argument("--eta", action="append", default=[], metavar="ETA")
            p.add_argument("--I", action="append", default=[], metavar="I", dest="integrals")
    return ap


def _config(args) -> Config:
    return Config(
        deg_s=args.deg_s,
        deg_darboux=args.deg_darboux,
        exp_power_bound=args.exp_power_bound,
        A_degree_slack=args.A_degree_slack,
        branch_budget=args.branch_budget,
        seed=args.seed,
    )


def _supplied_s(a: Analysis, args) -> bool:
    texts = list(getattr(args, "s", []) or [])
    path = getattr(args, "from_report", None)
    if path:
        with open(path, encoding="utf-8") as fh:
            prior = json.load(fh)
        texts += [s["value"] for s in prior.get("s_functions", [])]
    if not texts:
        return False
    out = []
    for t in texts:
        S = parse_rational(t)
        ok = certify_s(a.ode, S).is_zero()
        if not ok:
            a.diagnostics.append(f"supplied S = {print_canonical(S)} fails the Riccati equation")
        out.append(SFunction(S, None, ok, ""))
    from .sfunctions import dedupe_s

    a.sfunctions = dedupe_s(out)
    return True


def _verify_report(a: Analysis, args, timings: bool) -> dict:
    from .expr import dx_total
    from .symmetry import sfunction_of, verify_symmetry

    seed = args.seed
    rep = {
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "command": "verify",
        "ode": {"M": print_canonical(a.ode.M), "N": print_canonical(a.ode.N), "phi": print_canonical(a.ode.phi)},
        "s_functions": [],
        "symmetries": [],
        "first_integrals": [],
    }
    for t in args.s:
        S = parse_rational(t)
        res = certify_s(a.ode, S)
        rep["s_functions"].append(
            {"value": print_canonical(S), "riccati_ok": res.is_zero(), "residual": print_canonical(res)}
        )
    for t in args.eta:
        eta = parse_darboux(t)
        res = verify_symmetry(a.ode, eta)
        entry = {"eta_bar": print_canonical(eta), "verified": res.is_zero(seed), "residual": print_canonical(res)}
        try:
            entry["S"] = print_canonical(sfunction_of(a.ode, eta))
        except Exception as exc:  # log derivative outside the rationals
            entry["S"] = None
            entry["note"] = str(exc)
        rep["symmetries"].append(entry)
    for t in args.integrals:
        I = parse_darboux(t)
        d = dx_total(a.ode, I).canonical()
        rep["first_integrals"].append(
            {"closed_form": print_canonical(I), "verified": d.is_zero(seed), "D_x": print_canonical(d)}
        )
    rep["diagnostics"] = []
    rep["config_echo"] = a.config.echo()
    if timings:
        rep["timings"] = {}
    return rep


def _text(rep: dict) -> str:
    lines = [f"ODE: y'' = {rep['ode']['phi']}"]
    for d in rep.get("darboux_D", []):
        lines.append(f"Darboux p = {d['p']}   cofactor = {d['cofactor']}")
    for e in rep.get("eigenpolys_scriptD", []):
        lines.append(f"eigenpolynomial {e['poly']}   lambda0 = {e['lambda0']}")
    for s in rep.get("s_functions", []):
        lines.append(f"S = {s['value']}   riccati_ok = {s['riccati_ok']}")
    for y in rep.get("symmetries", []):
        lines.append(f"eta_bar = {y['eta_bar']}   verified = {y['verified']}" + (f"   (S = {y['S']})" if y.get("S") else ""))
    for f in rep.get("first_integrals", []):
        what = f.get("closed_form") or "gradient (" + ", ".join(f.get("gradient", [])) + ")"
        lines.append(f"I = {what}   status = {f.get('status', '-')}   verified = {f['verified']}")
    for d in rep.get("diagnostics", []):
        lines.append(f"note: {d}")
    if "timings" in rep and rep["timings"]:
        lines.append("timings (ms): " + ", ".join(f"{k}={v}" for k, v in rep["timings"].items()))
    return "\n".join(lines)


def _exit_code(a: Analysis, command: str) -> int:
    if command in ("analyze", "symmetries", "first-integrals"):
        if not a.sfunctions:
            if a.stats.systems and a.stats.budget_hits == a.stats.systems:
                return EXIT_BUDGET
            return EXIT_NOTHING
        if not a.symmetries:
            return EXIT_NOTHING
    if command == "sfunctions" and not a.sfunctions:
        if a.stats.systems and a.stats.budget_hits == a.stats.systems:
            return EXIT_BUDGET
        return EXIT_NOTHING
    if command == "darboux" and not a.darboux:
        if a.stats.systems and a.stats.budget_hits == a.stats.systems:
            return EXIT_BUDGET
        return EXIT_NOTHING
    return EXIT_OK


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    try:
        ode = parse_ode(args.ode)
    except ParseError as exc:
        for d in exc.diagnostics:
            print(d.render(args.ode), file=stderr)
        return EXIT_PARSE
    a = Analysis(ode, _config(args))
    timings = not args.no_timings
    cmd = args.command
    try:
        if cmd == "verify":
            rep = _verify_report(a, args, timings)
            ok = all(e["riccati_ok"] for e in rep["s_functions"]) and all(
                e["verified"] for e in rep["symmetries"] + rep["first_integrals"]
            )
            code = EXIT_OK if ok else EXIT_NOTHING
        else:
            if cmd == "darboux":
                run_darboux(a)
                sections = ("darboux_D",)
            elif cmd == "sfunctions":
                run_sfunctions(a)
                sections = ("eigenpolys_scriptD", "s_functions")
            else:
                if not _supplied_s(a, args):
                    run_sfunctions(a)
                run_darboux(a)
                run_symmetries(a)
                if cmd == "symmetries":
                    sections = ("s_functions", "symmetries")
                else:
                    run_first_integrals(a)
                    sections = None if cmd == "analyze" else ("s_functions", "first_integrals")
            rep = build_report(a, cmd, sections, timings)
            code = _exit_code(a, cmd)
    except ParseError as exc:
        for d in exc.diagnostics:
            print(str(d), file=stderr)
        return EXIT_PARSE
    except VerificationFailure as exc:
        print(f"internal verification failure: {exc}", file=stderr)
        return EXIT_INTERNAL
    for d in rep.get("diagnostics", []):
        print(f"note: {d}", file=stderr)
    if args.format == "json":
        stdout.write(json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stdout.write(_text(rep) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Text input and canonical output.

Grammar (no implicit multiplication)::

    ode      := "y''" "=" ratexpr
    ratexpr  := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | "+" unary | power
    power    := atom ("^" INT)?
    atom     := INT | "x" | "y" | "y'" | "z" | "s" | "i" | "(" ratexpr ")"

``y'`` and ``z`` denote the same coordinate.  ``s`` is only accepted when
the caller asks for the extended variable set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Sequence

from .errors import ParseError
from .numeric import GaussianRational, I, format_scalar
from .poly import XYZ, MultiPoly, RationalFunction, format_poly, format_rational


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


@dataclass(frozen=True)
class ParseDiagnostic:
    message: str
    span: SourceSpan
    severity: str = "error"

    def __str__(self):
        return f"{self.severity} at {self.span.start}..{self.span.end}: {self.message}"

    def render(self, text: str) -> str:
        caret = " " * self.span.start + "^" * max(1, self.span.end - self.span.start)
        return f"{self}\n  {text}\n  {caret}"


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, EOF
    text: str
    start: int
    end: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<ypp>y'')|(?P<yp>y')|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()=])"
)


_FUNCTIONS = ("exp", "log")


def _fail(message: str, start: int, end: int):
    raise ParseError([ParseDiagnostic(message, SourceSpan(start, max(end, start + 1)))])


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            _fail(f"unexpected character {text[pos]!r}", pos, pos + 1)
        kind = m.lastgroup
        s, e = m.span()
        if kind == "ws":
            pass
        elif kind == "int":
            tokens.append(Token("INT", m.group(), s, e))
        elif kind in ("ypp", "yp"):
            tokens.append(Token("NAME", m.group(), s, e))
        elif kind == "name":
            tokens.append(Token("NAME", m.group(), s, e))
        else:
            tokens.append(Token("OP", m.group(), s, e))
        pos = e
    # reject implicit multiplication such as "2x" or "x y" or ")("
    for a, b in zip(tokens, tokens[1:]):
        if a.text in _FUNCTIONS and b.text == "(":
            continue
        a_end = a.kind in ("INT", "NAME") or a.text == ")"
        b_start = b.kind in ("INT", "NAME") or b.text == "("
        if a_end and b_start:
            _fail("implicit multiplication is not allowed; insert '*'", b.start, b.end)
    tokens.append(Token("EOF", "", len(text), len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.text = text
        self.vars = tuple(vars)
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text:
            what = "end of input" if t.kind == "EOF" else repr(t.text)
            _fail(f"expected {text!r}, found {what}", t.start, t.end)
        return self.advance()

    def const(self, c) -> RationalFunction:
        return RationalFunction.const(c, self.vars)

    def ratexpr(self) -> RationalFunction:
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RationalFunction:
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            rhs_start = self.tok.start
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    _fail("division by zero", rhs_start, self.tokens[self.pos - 1].end)
                value = value / rhs
        return value

    def unary(self) -> RationalFunction:
        if self.tok.text == "-":
            self.advance()
            return -self.unary()
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            t = self.tok
            if t.text == "-" or t.text == "(":
                _fail("exponents must be non-negative integer literals", t.start, t.end)
            if t.kind != "INT":
                what = "end of input" if t.kind == "EOF" else repr(t.text)
                _fail(f"exponent must be a non-negative integer literal, found {what}", t.start, t.end)
            self.advance()
            if self.tok.text == "^":
                _fail("chained exponents are ambiguous; use parentheses", self.tok.start, self.tok.end)
            return base ** int(t.text)
        return base

    def atom(self) -> RationalFunction:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return self.const(int(t.text))
        if t.kind == "NAME":
            self.advance()
            name = t.text
            if name == "y''":
                _fail("y'' may only appear on the left-hand side", t.start, t.end)
            if name == "y'":
                name = "z"
            if name == "i":
                return self.const(I)
            if name in self.vars:
                return RationalFunction.from_poly(MultiPoly.var(name, self.vars))
            _fail(f"unknown identifier {t.text!r}", t.start, t.end)
        if t.text == "(":
            open_tok = self.advance()
            value = self.ratexpr()
            if self.tok.text != ")":
                t2 = self.tok
                if t2.kind == "EOF":
                    _fail("unbalanced parenthesis: '(' is never closed", open_tok.start, open_tok.end)
                _fail(f"expected ')', found {t2.text!r}", t2.start, t2.end)
            self.advance()
            return value
        if t.kind == "EOF":
            _fail("unexpected end of input", max(0, t.start - 1), t.end)
        if t.text == ")":
            _fail("unbalanced parenthesis: unexpected ')'", t.start, t.end)
        _fail(f"unexpected {t.text!r}", t.start, t.end)

    def finish(self):
        t = self.tok
        if t.kind != "EOF":
            if t.text == ")":
                _fail("unbalanced parenthesis: unexpected ')'", t.start, t.end)
            _fail(f"unexpected {t.text!r} after expression", t.start, t.end)


class _DarbouxParser(_Parser):
    """Same grammar over DarbouxExpression values, plus ``exp(...)``,
    ``log(...)`` and parenthesized Q(i) exponents such as ``(p)^(1/2)``."""

    def const(self, c):
        from .expr import DarbouxExpression

        return DarbouxExpression.rational(RationalFunction.const(c, self.vars))

    def ratexpr(self):
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            start = self.tok.start
            rhs = self.unary()
            end = self.tokens[self.pos - 1].end
            try:
                if op.text == "*":
                    value = value * rhs
                else:
                    if not rhs.terms and not rhs.logs:
                        _fail("division by zero", start, end)
                    value = value / rhs
            except (ValueError, NotImplementedError) as exc:
                _fail(f"expression leaves the supported class: {exc}", start, end)
        return value

    def power(self):
        base = self.atom()
        if self.tok.text != "^":
            return base
        self.advance()
        t = self.tok
        if t.kind == "INT":
            self.advance()
            k = GaussianRational(int(t.text))
        elif t.text == "(":
            self.advance()
            inner = _Parser(self.text, ())
            inner.tokens, inner.pos = self.tokens, self.pos
            r = inner.ratexpr()
            self.pos = inner.pos
            self.expect(")")
            k = r.num.constant_value() / r.den.constant_value()
        else:
            what = "end of input" if t.kind == "EOF" else repr(t.text)
            _fail(f"exponent must be an integer or a parenthesized constant, found {what}", t.start, t.end)
        try:
            return base ** k
        except (ValueError, NotImplementedError) as exc:
            _fail(f"unsupported power: {exc}", t.start, self.tokens[self.pos - 1].end)

    def atom(self):
        from .expr import DarbouxExpression

        t = self.tok
        if t.kind == "NAME" and t.text in _FUNCTIONS:
            self.advance()
            self.expect("(")
            start = self.tok.start
            inner = _Parser(self.text, self.vars)
            inner.tokens, inner.pos = self.tokens, self.pos
            arg = inner.ratexpr()
            self.pos = inner.pos
            end = self.tok.end
            self.expect(")")
            if t.text == "exp":
                return DarbouxExpression.product(1, arg)
            if arg.is_zero():
                _fail("log of zero", start, end)
            return DarbouxExpression.log_terms([(arg.num, 1), (arg.den, -1)])
        if t.kind == "NAME" and t.text not in ("y''", "y'", "i") and t.text in self.vars:
            self.advance()
            return DarbouxExpression.rational(MultiPoly.var(t.text, self.vars))
        if t.kind == "NAME" and t.text == "y'":
            self.advance()
            return DarbouxExpression.rational(MultiPoly.var("z", self.vars))
        if t.text == "(":
            open_tok = self.advance()
            value = self.ratexpr()
            if self.tok.text != ")":
                t2 = self.tok
                if t2.kind == "EOF":
                    _fail("unbalanced parenthesis: '(' is never closed", open_tok.start, open_tok.end)
                _fail(f"expected ')', found {t2.text!r}", t2.start, t2.end)
            self.advance()
            return value
        r = super().atom()
        return r if isinstance(r, DarbouxExpression) else DarbouxExpression.rational(r)


def parse_darboux(text: str):
    """Parse an expression of the Darboux class with optional logarithms."""
    p = _DarbouxParser(text, XYZ)
    if p.tok.kind == "EOF":
        _fail("empty expression", 0, 0)
    value = p.ratexpr()
    p.finish()
    return value.canonical()


def parse_rational(text: str, vars: Sequence[str] = XYZ) -> RationalFunction:
    p = _Parser(text, vars)
    if p.tok.kind == "EOF":
        _fail("empty expression", 0, 0)
    value = p.ratexpr()
    p.finish()
    return value


def parse_poly(text: str, vars: Sequence[str] = XYZ) -> MultiPoly:
    r = parse_rational(text, vars)
    if not r.den.is_constant():
        _fail("expected a polynomial, got a rational function", 0, len(text))
    return r.num.scale(r.den.constant_value().inverse())


def parse_scalar(text: str) -> GaussianRational:
    r = parse_rational(text, ())
    return r.num.constant_value() / r.den.constant_value()


def parse_ode(text: str):
    """Parse ``y'' = <ratexpr>`` into a normalized :class:`Rational2ODE`."""
    from .ode import build_ode

    p = _Parser(text, XYZ)
    t = p.tok
    if t.text != "y''":
        _fail("an ODE must start with \"y''\"", t.start, t.end)
    p.advance()
    p.expect("=")
    if p.tok.kind == "EOF":
        _fail("missing right-hand side", p.tok.start, p.tok.end)
    phi = p.ratexpr()
    p.finish()
    return build_ode(phi.num, phi.den)


def print_canonical(value) -> str:
    """Deterministic, re-parseable text for any engine value."""
    from .ode import Rational2ODE

    if isinstance(value, GaussianRational):
        return format_scalar(value)
    if isinstance(value, MultiPoly):
        return format_poly(value)
    if isinstance(value, RationalFunction):
        return format_rational(value)
    if isinstance(value, Rational2ODE):
        return "y'' = " + format_rational(value.phi)
    from .expr import DarbouxExpression, format_darboux

    if isinstance(value, DarbouxExpression):
        return format_darboux(value)
    if isinstance(value, int):
        return str(value)
    return str(value)

"""Polynomial expression parsing and canonical printing.

Grammar: signed sums of products of factors; a factor is an integer or
rational literal ("3", "5/2"), a variable, or a parenthesized expression;
"^" raises to a nonnegative integer power and "*" between factors is
optional.  Conventions fix the variable list and the expected degree, so
"x0^2 + x1" fails loudly in a quadric slot.  Printing is canonical (terms
in descending lexicographic order), and parse(print(p)) == p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import DegreeMismatch, ParseError
from .poly import MPoly
from .rationals import QuadExt

P3_VARS = ("x0", "x1", "x2", "x3")
P4_VARS = ("x0", "x1", "x2", "x3", "x4")
BIDEG_VARS = ("u", "v", "s", "w")

#: convention id -> (variables, validator description)
CONVENTIONS = {
    "quadric": (P3_VARS, ("homogeneous", 2)),
    "cubic": (P3_VARS, ("homogeneous", 3)),
    "p3": (P3_VARS, None),
    "p4cubic": (P4_VARS, ("homogeneous", 3)),
    "bidegree33": (BIDEG_VARS, ("bidegree", (3, 3))),
    "bidegree": (BIDEG_VARS, None),
}

_NUMBER = re.compile(r"\d+(/\d+)?")


@dataclass(frozen=True)
class PolyExpr:
    source: str
    poly: MPoly
    convention: str


class _Tokenizer:
    def __init__(self, text: str, variables: Tuple[str, ...]):
        self.text = text
        self.pos = 0
        self.variables = sorted(variables, key=len, reverse=True)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None, self.pos
        ch = self.text[self.pos]
        if ch in "+-*^()":
            return ("op", ch), self.pos
        m = _NUMBER.match(self.text, self.pos)
        if m:
            return ("num", m.group(0)), self.pos
        for v in self.variables:
            if self.text.startswith(v, self.pos):
                return ("var", v), self.pos
        raise ParseError(f"unexpected character {ch!r}", self.pos)

    def next(self):
        tok, pos = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", pos)
        kind, value = tok
        self.pos = pos + len(value)
        return tok

    def done(self):
        tok, _ = self.peek()
        return tok is None


class _Parser:
    def __init__(self, text: str, variables: Tuple[str, ...]):
        self.toks = _Tokenizer(text, variables)
        self.variables = tuple(variables)

    def parse(self) -> MPoly:
        value = self.expr()
        if not self.toks.done():
            _, pos = self.toks.peek()
            raise ParseError("trailing input", pos)
        return value

    def expr(self) -> MPoly:
        sign = 1
        tok, _ = self.toks.peek()
        if tok == ("op", "-"):
            self.toks.next()
            sign = -1
        elif tok == ("op", "+"):
            self.toks.next()
        total = self.term() * sign
        while True:
            tok, _ = self.toks.peek()
            if tok == ("op", "+"):
                self.toks.next()
                total = total + self.term()
            elif tok == ("op", "-"):
                self.toks.next()
                total = total - self.term()
            else:
                return total

    def term(self) -> MPoly:
        value = self.factor()
        while True:
            tok, _ = self.toks.peek()
            if tok == ("op", "*"):
                self.toks.next()
                value = value * self.factor()
            elif tok is not None and (tok[0] in ("num", "var") or tok == ("op", "(")):
                value = value * self.factor()
            else:
                return value

    def factor(self) -> MPoly:
        base = self.atom()
        while True:
            tok, _ = self.toks.peek()
            if tok != ("op", "^"):
                return base
            self.toks.next()
            etok, pos = self.toks.peek()
            if etok is None or etok[0] != "num" or "/" in etok[1]:
                raise ParseError("exponent must be a nonnegative integer", pos)
            self.toks.next()
            base = base ** int(etok[1])

    def atom(self) -> MPoly:
        tok, pos = self.toks.peek()
        if tok is None:
            raise ParseError("expected a factor", pos)
        kind, value = tok
        if kind == "num":
            self.toks.next()
            return MPoly.const(self.variables, Fraction(value))
        if kind == "var":
            self.toks.next()
            return MPoly.var(self.variables, value)
        if tok == ("op", "("):
            self.toks.next()
            inner = self.expr()
            close, pos2 = self.toks.peek()
            if close != ("op", ")"):
                raise ParseError("expected ')'", pos2)
            self.toks.next()
            return inner
        if tok == ("op", "-"):
            self.toks.next()
            return -self.factor()
        raise ParseError(f"unexpected token {value!r}", pos)


def _validate(poly: MPoly, convention: str):
    rule = CONVENTIONS[convention][1]
    if rule is None:
        return
    kind, target = rule
    if kind == "homogeneous":
        if poly.is_zero() or poly.homogeneous_degree() != target:
            raise DegreeMismatch(
                f"expected a homogeneous form of degree {target}, got {poly!r}"
            )
    elif kind == "bidegree":
        from .singularities import bidegree_of

        if bidegree_of(poly) != target:
            raise DegreeMismatch(f"expected bidegree {target}, got {poly!r}")


def parse_poly(text: str, convention: str = "p3") -> PolyExpr:
    """Parse an expression under a variable convention; exact coefficients."""
    if convention not in CONVENTIONS:
        raise ParseError(f"unknown convention {convention!r}", 0)
    variables = CONVENTIONS[convention][0]
    poly = _Parser(text, variables).parse()
    _validate(poly, convention)
    return PolyExpr(text, poly, convention)


# -- printing --------------------------------------------------------------------

def _coeff_str(c) -> Tuple[str, str]:
    """(sign, magnitude-string); QuadExt coefficients print parenthesized."""
    if isinstance(c, QuadExt):
        return "+", f"({c!r})"
    c = Fraction(c)
    sign = "-" if c < 0 else "+"
    return sign, str(abs(c))


def _mono_str(variables, exp) -> str:
    parts = []
    for v, e in zip(variables, exp):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: MPoly) -> str:
    """Canonical text form: descending lex monomials, exact coefficients."""
    if p.is_zero():
        return "0"
    pieces = []
    for exp, c in p.sorted_terms():
        sign, mag = _coeff_str(c)
        mono = _mono_str(p.vars, exp)
        if mono and mag == "1":
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = mag
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out

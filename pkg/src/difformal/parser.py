"""Text <-> DiffPoly.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := "-" factor | "+" factor | primary ("^" uint | "^" "(" uint ")")?
    primary := "x" | "y" "'"* | "y^(" uint ")" | "(" expr ")" | int ("/" uint)?

Multiplication must be explicit.  ``y^(n)`` is the n-th derivative while
``y^n`` is a power of y.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, NamedTuple

from .algebra import ParamPoly, format_ppoly
from .diffpoly import DiffMonomial, DiffPoly
from .errors import ExprSyntaxError, UnsupportedError

MAX_EXPONENT = 100
MAX_PRIMES = 4


class Token(NamedTuple):
    kind: str  # NUM, X, Y, OP, END
    value: object
    pos: int


def tokenize(src: str) -> List[Token]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == ".":
                raise UnsupportedError("decimal literals are not supported; use a/b", i)
            tokens.append(Token("NUM", int(src[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            name = src[i:j]
            if name == "x":
                tokens.append(Token("X", None, i))
                i = j
            elif name == "y":
                k = j
                while k < n and src[k] == "'":
                    k += 1
                primes = k - j
                if primes == 0 and src.startswith("^(", j):
                    m = j + 2
                    while m < n and src[m].isspace():
                        m += 1
                    d = m
                    while d < n and src[d].isdigit():
                        d += 1
                    e = d
                    while e < n and src[e].isspace():
                        e += 1
                    if d > m and e < n and src[e] == ")":
                        tokens.append(Token("Y", int(src[m:d]), i))
                        i = e + 1
                        continue
                    # not a derivative index: let the exponent rule report it
                tokens.append(Token("Y", primes, i))
                i = k
            else:
                raise UnsupportedError(f"unknown identifier {name!r}", i)
            continue
        if ch in "+-*/^()":
            tokens.append(Token("OP", ch, i))
            i += 1
            continue
        if ch == "'":
            raise ExprSyntaxError("prime must follow y", i)
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token("END", None, n))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_op(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.value == ch

    def expect_op(self, ch: str) -> Token:
        tok = self.peek()
        if not (tok.kind == "OP" and tok.value == ch):
            raise ExprSyntaxError(f"expected {ch!r}, found {_describe(tok)}", tok.pos)
        return self.advance()

    def parse(self) -> DiffPoly:
        tok = self.peek()
        if tok.kind == "END":
            raise ExprSyntaxError("empty expression", tok.pos)
        result = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            if tok.kind in ("X", "Y", "NUM") or (tok.kind == "OP" and tok.value == "("):
                raise ExprSyntaxError("implicit multiplication is not allowed; use '*'", tok.pos)
            raise ExprSyntaxError(f"unexpected {_describe(tok)}", tok.pos)
        return result

    def expr(self) -> DiffPoly:
        acc = self.term()
        while self.at_op("+") or self.at_op("-"):
            op = self.advance().value
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> DiffPoly:
        acc = self.factor()
        while self.at_op("*"):
            self.advance()
            acc = acc * self.factor()
        return acc

    def factor(self) -> DiffPoly:
        if self.at_op("-"):
            self.advance()
            return -self.factor()
        if self.at_op("+"):
            self.advance()
            return self.factor()
        base = self.primary()
        if self.at_op("^"):
            self.advance()
            base = base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.peek()
        if tok.kind == "NUM":
            self.advance()
            value = tok.value
        elif tok.kind == "OP" and tok.value == "(":
            self.advance()
            inner = self.peek()
            if inner.kind != "NUM":
                raise UnsupportedError("exponents must be non-negative integers", inner.pos)
            self.advance()
            value = inner.value
            if self.at_op("/"):
                raise UnsupportedError("exponents must be integers", self.peek().pos)
            self.expect_op(")")
        elif tok.kind in ("X", "Y") or (tok.kind == "OP" and tok.value == "-"):
            raise UnsupportedError("exponents must be non-negative integer literals", tok.pos)
        else:
            raise ExprSyntaxError(f"expected exponent, found {_describe(tok)}", tok.pos)
        if self.at_op("/"):
            raise UnsupportedError("exponents must be integers", self.peek().pos)
        if value > MAX_EXPONENT:
            raise UnsupportedError(f"exponent {value} exceeds limit {MAX_EXPONENT}", tok.pos)
        return value

    def primary(self) -> DiffPoly:
        tok = self.peek()
        if tok.kind == "X":
            self.advance()
            return DiffPoly.x()
        if tok.kind == "Y":
            self.advance()
            return DiffPoly.y(tok.value)
        if tok.kind == "NUM":
            self.advance()
            value = Fraction(tok.value)
            if self.at_op("/"):
                slash = self.advance()
                den = self.peek()
                if den.kind != "NUM":
                    raise ExprSyntaxError("'/' only forms rational literals a/b", slash.pos)
                self.advance()
                if den.value == 0:
                    raise ExprSyntaxError("zero denominator", den.pos)
                value = value / den.value
            return DiffPoly.const(value)
        if tok.kind == "OP" and tok.value == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        if tok.kind == "END":
            raise ExprSyntaxError("unexpected end of input", tok.pos)
        raise ExprSyntaxError(f"unexpected {_describe(tok)}", tok.pos)


def _describe(tok: Token) -> str:
    if tok.kind == "END":
        return "end of input"
    if tok.kind == "OP":
        return repr(tok.value)
    if tok.kind == "NUM":
        return f"number {tok.value}"
    if tok.kind == "X":
        return "'x'"
    return "'y'"


def parse_diffpoly(src: str) -> DiffPoly:
    """Parse ``src`` into a fully expanded DiffPoly."""
    return _Parser(src).parse()


# -- formatting -----------------------------------------------------------


def _y_factor(i: int, e: int) -> str:
    base = "y" + "'" * i if i <= MAX_PRIMES else f"y^({i})"
    if e == 1:
        return base
    if i == 0:
        return f"y^{e}"
    return f"({base})^{e}"


def _x_factor(a: int) -> str:
    return "x" if a == 1 else f"x^{a}"


def y_part(derivs) -> str:
    return "*".join(_y_factor(i, e) for i, e in enumerate(derivs) if e)


def monomial_str(m: DiffMonomial) -> str:
    parts = []
    if m.x_exp:
        parts.append(_x_factor(m.x_exp))
    if m.derivs:
        parts.append(y_part(m.derivs))
    return "*".join(parts)


def _signed_term(c: ParamPoly, mstr: str):
    """Return (negative, body) for the term ``c * mstr``."""
    if c.is_constant():
        v = c.constant_value()
        neg = v < 0
        a = -v if neg else v
        if not mstr:
            return neg, str(a)
        if a == 1:
            return neg, mstr
        return neg, f"{a}*{mstr}"
    if len(c.terms) == 1:
        (pm, coef), = c.terms.items()
        neg = coef < 0
        body = format_ppoly(-c if neg else c)
        return neg, f"{body}*{mstr}" if mstr else body
    body = f"({format_ppoly(c)})"
    return False, f"{body}*{mstr}" if mstr else body


def _join(pieces) -> str:
    out = []
    for idx, (neg, body) in enumerate(pieces):
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_diffpoly(p: DiffPoly) -> str:
    """Deterministic rendering in descending lexicographic order.

    Terms sharing the same y-part and having rational coefficients are grouped
    under an x-polynomial, e.g. ``(x^2 - x)*y'``.
    """
    if not p.terms:
        return "0"
    groups = {}
    for m, c in p.sorted_terms(descending=True):
        groups.setdefault(m.derivs, []).append((m.x_exp, c))
    pieces = []
    for derivs, items in groups.items():
        ystr = y_part(derivs)
        grouped = len(items) > 1 and derivs and all(c.is_constant() for _, c in items)
        if not grouped:
            for a, c in items:
                mstr = "*".join(s for s in ((_x_factor(a) if a else ""), ystr) if s)
                pieces.append(_signed_term(c, mstr))
            continue
        lead = items[0][1].constant_value()
        flip = lead < 0
        inner = []
        for a, c in items:
            v = c.constant_value()
            if flip:
                v = -v
            inner.append(_signed_term(ParamPoly.const(v), _x_factor(a) if a else ""))
        pieces.append((flip, f"({_join(inner)})*{ystr}"))
    return _join(pieces)


__all__ = ["parse_diffpoly", "format_diffpoly", "tokenize", "monomial_str"]

"""Recursive-descent parser for exact polynomial expressions.

Grammar (whitespace insignificant):

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' nat)?
    atom     := rational | rational 'i' | 'i' | 'x' | 'y' | '(' expr ')'
    rational := nat ('/' nat)?

Implicit multiplication is rejected ("2x" is a syntax error).  A leading
sign on the first term is the only unary use of '+'/'-'.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .polyalg import ExactComplex, Poly1, Poly2


class _Tokens:
    def __init__(self, text: str, variables: tuple):
        self.text = text
        self.variables = variables
        self.tokens = []
        self._lex()
        self.pos = 0

    def _lex(self):
        t, i, n = self.text, 0, len(self.text)
        while i < n:
            ch = t[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and (t[j].isdigit() or t[j] == "."):
                    j += 1
                self.tokens.append(("num", t[i:j], i))
                i = j
                continue
            if ch.isalpha():
                j = i
                while j < n and t[j].isalpha():
                    j += 1
                self.tokens.append(("name", t[i:j], i))
                i = j
                continue
            if ch in "+-*/^()":
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        self.tokens.append(("end", "", n))

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok


class _Parser:
    """Builds Poly2 values directly; variables beyond the declared ones are
    reported as unknown identifiers."""

    def __init__(self, text: str, variables=("x", "y"), allow_decimal=False):
        self.toks = _Tokens(text, variables)
        self.variables = variables
        self.allow_decimal = allow_decimal

    def parse(self) -> Poly2:
        value = self._expr()
        kind, text, pos = self.toks.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return value

    def _expr(self) -> Poly2:
        kind, _, _ = self.toks.peek()
        negate = False
        if kind in ("+", "-"):
            self.toks.next()
            negate = kind == "-"
        value = self._term()
        if negate:
            value = -value
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "+":
                self.toks.next()
                value = value + self._term()
            elif kind == "-":
                self.toks.next()
                value = value - self._term()
            else:
                return value

    def _term(self) -> Poly2:
        value = self._factor()
        while True:
            kind, text, pos = self.toks.peek()
            if kind == "*":
                self.toks.next()
                value = value * self._factor()
            elif kind in ("num", "name", "("):
                raise ParseError(
                    f"implicit multiplication is not allowed before {text!r}", pos)
            else:
                return value

    def _factor(self) -> Poly2:
        value = self._atom()
        kind, _, _ = self.toks.peek()
        if kind == "^":
            self.toks.next()
            k2, text, pos = self.toks.next()
            if k2 != "num" or "." in text or "/" in text:
                raise ParseError("exponent must be a natural number", pos)
            value = value ** int(text)
        return value

    def _atom(self) -> Poly2:
        kind, text, pos = self.toks.next()
        if kind == "(":
            value = self._expr()
            k2, _, p2 = self.toks.next()
            if k2 != ")":
                raise ParseError("expected ')'", p2)
            return value
        if kind == "num":
            q = self._rational(text, pos)
            k2, t2, _ = self.toks.peek()
            if k2 == "name" and t2 == "i":
                self.toks.next()
                return Poly2.constant(ExactComplex(0, q))
            return Poly2.constant(ExactComplex(q))
        if kind == "name":
            if text == "i":
                return Poly2.constant(ExactComplex(0, 1))
            if text in self.variables:
                # map the first declared variable onto x, the second onto y
                axis = "x" if text == self.variables[0] else "y"
                return Poly2.variable(axis)
            raise ParseError(f"unknown identifier {text!r}", pos)
        raise ParseError(f"expected a value, found {text or 'end of input'!r}", pos)

    def _rational(self, text: str, pos: int) -> Fraction:
        if "." in text:
            if not self.allow_decimal:
                raise ParseError("decimal literals are not allowed; use p/q", pos)
            try:
                q = Fraction(text)
            except ValueError:
                raise ParseError(f"malformed number {text!r}", pos) from None
        else:
            q = Fraction(int(text))
        kind, _, _ = self.toks.peek()
        if kind == "/":
            save = self.toks.pos
            self.toks.next()
            k2, t2, p2 = self.toks.next()
            if k2 != "num" or "." in t2:
                # not a rational literal after all (e.g. "x/..."): rewind
                self.toks.pos = save
                return q
            if int(t2) == 0:
                raise ParseError("zero denominator", p2)
            q = q / int(t2)
        return q


def parse_poly(text: str) -> Poly2:
    """Parse an exact bivariate polynomial in x and y."""
    return _Parser(text).parse()


def parse_series(text: str) -> list:
    """Parse a one-variable germ expression in z into ascending complex
    coefficients [a1, a2, ...] (constant term must be absent or zero).

    Decimal literals are accepted here; germ coefficients are numeric data.
    """
    p = _Parser(text, variables=("z",), allow_decimal=True).parse()
    if p.degree_in("y") > 0:
        raise ParseError("series must use the single variable z", 0)
    row = p.restrict_y0()
    coeffs = [c.to_complex() for c in row.coeffs]
    if coeffs and coeffs[0] != 0:
        raise ParseError("germ series must fix the origin (no constant term)", 0)
    return coeffs[1:]


def parse_one_form(text: str):
    """Parse "A*dx + B*dy" style input; returns (P, Q) with the convention
    that the form is P dy - Q dx.

    dx and dy are treated as terminal symbols that may appear once per term,
    only as factors.
    """
    # tokenize on top-level '+'/'-' while respecting parentheses
    terms, depth, start, signs = [], 0, 0, []
    sign = 1
    i = 0
    text = text.strip()
    if text.startswith(("+", "-")):
        sign = -1 if text[0] == "-" else 1
        i = start = 1
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0:
            terms.append(text[start:i])
            signs.append(sign)
            sign = 1 if ch == "+" else -1
            start = i + 1
        i += 1
    terms.append(text[start:])
    signs.append(sign)

    coef_dx, coef_dy = Poly2(), Poly2()
    for sgn, term in zip(signs, terms):
        factors = _split_top_level(term, "*")
        which = None
        rest = []
        for f in factors:
            fs = f.strip()
            if fs in ("dx", "dy"):
                if which is not None:
                    raise ParseError("a term may contain dx or dy once", 0)
                which = fs
            else:
                rest.append(fs)
        if which is None:
            raise ParseError(f"term {term.strip()!r} lacks dx or dy", 0)
        poly = parse_poly("*".join(rest)) if rest else Poly2.constant(1)
        if sgn < 0:
            poly = -poly
        if which == "dx":
            coef_dx = coef_dx + poly
        else:
            coef_dy = coef_dy + poly
    return coef_dy, -coef_dx


def _split_top_level(text: str, sep: str):
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts

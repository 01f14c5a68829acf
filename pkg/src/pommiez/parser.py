"""Expression front-end for exponential polynomials.

Grammar (whitespace insensitive):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)?
    atom   := rationalComplex | 'z' | 'exp' '(' expr ')' | '(' expr ')'

``rationalComplex`` literals are ``3``, ``3/4``, ``i``, ``3i``, ``3/4i``;
general complex constants are spelled as expressions, e.g. ``(1+2i)``.
The argument of ``exp`` must normalize to a linear form lambda*z with a
Gaussian-rational lambda (NonlinearExponent otherwise).  Parsing returns
the normalized ExpPoly, and ``format_exppoly`` prints a canonical form that
round-trips through the parser.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExprSyntaxError, NonlinearExponent
from .funcspace import ExpPoly
from .poly import Poly, _is_zero_scalar
from .scalar import GaussRational, QI_ONE, QI_ZERO

_TOK_NUM = "num"
_TOK_I = "i"
_TOK_Z = "z"
_TOK_EXP = "exp"
_TOK_OP = "op"
_TOK_EOF = "eof"


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            den = 1
            if j < n and text[j] == "/":
                k = j + 1
                if k >= n or not text[k].isdigit():
                    raise ExprSyntaxError("expected digits after '/'", j + 1)
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                den = int(text[k:m])
                if den == 0:
                    raise ExprSyntaxError("zero denominator", k)
                j = m
            tokens.append((_TOK_NUM, Fraction(num, den), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word == "z":
                tokens.append((_TOK_Z, None, i))
            elif word == "i":
                tokens.append((_TOK_I, None, i))
            elif word == "exp":
                tokens.append((_TOK_EXP, None, i))
            else:
                raise ExprSyntaxError(f"unknown identifier {word!r}", i)
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((_TOK_OP, ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append((_TOK_EOF, None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value, at = self.peek()
        if kind != _TOK_OP or value != op:
            raise ExprSyntaxError(f"expected {op!r}", at)
        return self.advance()

    def parse(self):
        value = self.expr()
        kind, _, at = self.peek()
        if kind != _TOK_EOF:
            raise ExprSyntaxError("trailing input", at)
        return value

    def expr(self):
        kind, value, _ = self.peek()
        negate = False
        if kind == _TOK_OP and value == "-":
            self.advance()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, value, _ = self.peek()
            if kind == _TOK_OP and value in "+-":
                self.advance()
                rhs = self.term()
                acc = acc + rhs if value == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == _TOK_OP and value == "*":
                self.advance()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        kind, value, at = self.peek()
        if kind == _TOK_OP and value == "^":
            self.advance()
            kind, value, at = self.peek()
            if kind != _TOK_NUM or value.denominator != 1:
                raise ExprSyntaxError("expected a natural-number exponent", at)
            self.advance()
            return base ** int(value)
        return base

    def atom(self):
        kind, value, at = self.advance()
        if kind == _TOK_NUM:
            nxt_kind, _, _ = self.peek()
            if nxt_kind == _TOK_I:
                self.advance()
                return ExpPoly.from_poly(Poly.constant(GaussRational(0, value)))
            return ExpPoly.from_poly(Poly.constant(GaussRational(value)))
        if kind == _TOK_I:
            return ExpPoly.from_poly(Poly.constant(GaussRational(0, 1)))
        if kind == _TOK_Z:
            return ExpPoly.from_poly(Poly.x())
        if kind == _TOK_EXP:
            self.expect_op("(")
            inner = self.expr()
            self.expect_op(")")
            return self._exponential(inner, at)
        if kind == _TOK_OP and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError("expected a value", at)

    def _exponential(self, inner, at):
        if inner.is_zero():
            return ExpPoly.one()
        if not inner.is_polynomial():
            raise NonlinearExponent(position=at)
        poly = inner.terms[GaussRational(0)]
        if poly.degree > 1 or not _is_zero_scalar(poly[0]):
            raise NonlinearExponent(position=at)
        lam = poly[1]
        if not isinstance(lam, GaussRational):
            raise NonlinearExponent("exponent coefficient must be exact", at)
        return ExpPoly.exponential(lam)


def parse_expr(text):
    """Parse expression text into a normalized ExpPoly."""
    return _Parser(text).parse()


def _format_fraction(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(c):
    """A grammar-conforming rendering of a Gaussian-rational coefficient."""
    if not isinstance(c, GaussRational):
        c = GaussRational(c)
    if c.im == 0:
        body = _format_fraction(c.re)
        return body if c.re >= 0 else f"({body})"
    if c.re == 0:
        if c.im == 1:
            return "i"
        body = f"{_format_fraction(c.im)}i"
        return body if c.im > 0 else f"(0-{_format_fraction(-c.im)}i)"
    re_part = _format_fraction(c.re)
    if c.im > 0:
        im_part = "i" if c.im == 1 else f"{_format_fraction(c.im)}i"
        return f"({re_part}+{im_part})"
    im_part = "i" if c.im == -1 else f"{_format_fraction(-c.im)}i"
    return f"({re_part}-{im_part})"


def _format_poly(p):
    parts = []
    for k, c in enumerate(p.coeffs):
        if _is_zero_scalar(c):
            continue
        if k == 0:
            parts.append(format_scalar(c))
        else:
            zp = "z" if k == 1 else f"z^{k}"
            if c == QI_ONE:
                parts.append(zp)
            else:
                parts.append(f"{format_scalar(c)}*{zp}")
    return " + ".join(parts) if parts else "0"


def format_exppoly(f):
    """Canonical textual form; parse(format(f)) == f structurally."""
    if f.is_zero():
        return "0"
    chunks = []
    for lam, p in f.sorted_terms():
        poly_txt = _format_poly(p)
        if lam.is_zero():
            chunks.append(poly_txt)
            continue
        if lam == QI_ONE:
            exp_txt = "exp(z)"
        else:
            exp_txt = f"exp({format_scalar(lam)}*z)"
        if p.degree == 0 and p[0] == QI_ONE:
            chunks.append(exp_txt)
        elif p.degree == 0:
            chunks.append(f"{format_scalar(p[0])}*{exp_txt}")
        else:
            chunks.append(f"({poly_txt})*{exp_txt}")
    return " + ".join(chunks)

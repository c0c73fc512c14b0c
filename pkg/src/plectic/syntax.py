"""Text syntax for polynomials, multivector fields and differential forms.

Grammar (whitespace-insensitive)::

    expr    := [+|-] term { (+|-) term }
    term    := power { [*] power }          juxtaposition multiplies
    power   := atom { ^ (INT | atom) }      ^INT is a power, ^basis a wedge
    atom    := INT [/ INT] | xK | dK | dxK | ( expr )

``xK`` is a coordinate, ``dK`` the coordinate vector field and ``dxK`` the
coordinate one-form.  Examples: ``(x1^2*x3 - x4) dx5^dx6``,
``x1^2 d1 - d2 - 2*x1*x3 d3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .coefficients import Polynomial
from .graded_algebra import Cotensor, Tensor, _Exterior


class ParseError(ValueError):
    """Syntax error; ``column`` is 1-based within the parsed text."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<form>dx\d+)|(?P<vec>d\d+)|(?P<var>x\d+)|(?P<op>[-+*/^()]))")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", col)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, nvars: int, kind: type | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.kind = kind  # Tensor, Cotensor or None for plain polynomials

    # token helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.take()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}, found {tok.text or 'end of input'!r}", tok.col)

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def starts_atom(self) -> bool:
        tok = self.peek()
        return tok.kind in ("num", "form", "vec", "var") or (tok.kind == "op" and tok.text == "(")

    # arithmetic on mixed values
    def lift(self, v):
        if isinstance(v, Polynomial) and self.kind is not None:
            return self.kind.scalar(self.nvars, v)
        return v

    def add(self, a, b, negate: bool):
        if negate:
            b = -b
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            return a + b
        return self.lift(a) + self.lift(b)

    def mul(self, a, b, col: int):
        if isinstance(a, Polynomial) or isinstance(b, Polynomial):
            return a * b if isinstance(b, Polynomial) else b.scale(a)
        raise ParseError("use '^' to wedge basis elements", col)

    # grammar
    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.col)
        return self.lift(value)

    def expr(self):
        negate = False
        if self.at_op("+", "-"):
            negate = self.take().text == "-"
        value = self.term()
        if negate:
            value = -value
        while self.at_op("+", "-"):
            neg = self.take().text == "-"
            value = self.add(value, self.term(), neg)
        return value

    def term(self):
        value = self.power()
        while True:
            if self.at_op("*"):
                tok = self.take()
                if not self.starts_atom():
                    raise ParseError("expected a factor after '*'", tok.col)
            elif not self.starts_atom():
                return value
            col = self.peek().col
            value = self.mul(value, self.power(), col)

    def power(self):
        value = self.atom()
        while self.at_op("^"):
            caret = self.take()
            nxt = self.peek()
            if nxt.kind == "num" and isinstance(value, Polynomial):
                value = value ** int(self.take().text)
            elif isinstance(value, _Exterior) and nxt.kind in ("form", "vec") or (
                isinstance(value, _Exterior) and nxt.kind == "op" and nxt.text == "("
            ):
                rhs = self.lift(self.atom())
                if not isinstance(rhs, _Exterior):
                    raise ParseError("wedge needs a basis element", nxt.col)
                value = value.wedge(rhs)
            else:
                raise ParseError(f"unexpected {nxt.text or 'end of input'!r} after '^'", nxt.col)
        return value

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            num = int(tok.text)
            if self.at_op("/"):
                self.take()
                den = self.take()
                if den.kind != "num" or int(den.text) == 0:
                    raise ParseError("expected a nonzero denominator", den.col)
                return Polynomial.constant(self.nvars, Fraction(num, int(den.text)))
            return Polynomial.constant(self.nvars, num)
        if tok.kind == "var":
            return self.index_atom(tok, lambda i: Polynomial.variable(self.nvars, i))
        if tok.kind in ("form", "vec"):
            want = Cotensor if tok.kind == "form" else Tensor
            if self.kind is not want:
                expected = "a polynomial" if self.kind is None else (
                    "a cotensor" if self.kind is Cotensor else "a tensor")
                raise ParseError(f"{tok.text!r} is not allowed in {expected}", tok.col)
            return self.index_atom(tok, lambda i: want.basis(self.nvars, i))
        if tok.kind == "op" and tok.text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.col)

    def index_atom(self, tok: _Tok, build):
        i = int(re.sub(r"\D", "", tok.text))
        if not 1 <= i <= self.nvars:
            raise ParseError(f"index {i} out of range 1..{self.nvars}", tok.col)
        return build(i)


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    return _Parser(text, nvars, None).parse()


def parse_tensor(text: str, nvars: int) -> Tensor:
    return _Parser(text, nvars, Tensor).parse()


def parse_cotensor(text: str, nvars: int) -> Cotensor:
    return _Parser(text, nvars, Cotensor).parse()

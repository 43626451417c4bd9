"""Expression syntax for elements of I_n.

Grammar (precedence ``^`` > ``*`` > binary ``+``/``-``, all left-associative)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := atom ('^' INT)*
    atom    := NUMBER ('/' NUMBER)? | generator | tensor | '(' expr ')'

Generators are ``D1``, ``I1``, ``H1``, ``X1`` and ``e1[r,c]`` (``∂`` and ``∫``
are accepted for ``D`` and ``I``).  A printed monomial such as ``H^2 I⊗e[0,1]``
is a *tensor* atom: slot factors without subscripts, juxtaposed inside a slot
and separated by ``⊗`` (or ``@``).  Juxtaposition is otherwise an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, e, generator, one, slot_element, band, matrix_unit
from .errors import IndexOutOfRange, ParseError

_GEN_LETTERS = {"D": "deriv", "∂": "deriv", "I": "integ", "∫": "integ", "H": "euler", "X": "coord"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<gen>[DI∂∫HX])(?P<gslot>\d+)?
  | (?P<e>e)(?P<eslot>\d+)?\[\s*(?P<row>\d+)\s*,\s*(?P<col>\d+)\s*\]
  | (?P<op>[-+*^/()⊗@])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # num, gen, e, op, end
    text: str
    offset: int
    value: object = None


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        off = _byte_offset(text, pos)
        if m.group("num"):
            tokens.append(Token("num", m.group("num"), off, int(m.group("num"))))
        elif m.group("gen"):
            slot = m.group("gslot")
            tokens.append(Token("gen", m.group(0), off, (_GEN_LETTERS[m.group("gen")],
                                                        int(slot) if slot else None)))
        elif m.group("e"):
            slot = m.group("eslot")
            tokens.append(Token("e", m.group(0), off, (int(slot) if slot else None,
                                                      int(m.group("row")), int(m.group("col")))))
        elif m.group("op"):
            op = m.group("op")
            tokens.append(Token("op", "⊗" if op == "@" else op, off))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


# --- syntax tree ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Gen:
    kind: str
    slot: int


@dataclass(frozen=True)
class Unit:
    slot: int
    row: int
    col: int


@dataclass(frozen=True)
class Tensor:
    """A printed basis monomial: one factor list per slot."""
    slots: tuple


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


Expression = object


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = tokenize(text)
        self.pos = 0
        self.n = n

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, op: str) -> Token:
        if self.tok.kind != "op" or self.tok.text != op:
            raise ParseError(f"expected {op!r}", self.tok.offset)
        return self.advance()

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def check_slot(self, slot: int, tok: Token) -> int:
        if not 1 <= slot <= self.n:
            raise IndexOutOfRange(f"slot {slot} not in 1..{self.n}", tok.offset)
        return slot

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.kind in ("num", "gen", "e") or self.at_op("("):
                raise ParseError("juxtaposition is not multiplication; write '*'", self.tok.offset)
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at_op("*"):
            self.advance()
            node = BinOp("*", node, self.unary())
        return node

    def unary(self):
        if self.at_op("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while self.at_op("^"):
            self.advance()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return tok.value
        if self.at_op("("):
            # allow "(3)" but not a negative or compound exponent
            self.advance()
            if self.tok.kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal", self.tok.offset)
            value = self.advance().value
            self.expect(")")
            return value
        raise ParseError("exponent must be a nonnegative integer literal", tok.offset)

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            value = Fraction(tok.value)
            if self.at_op("/") and self.tokens[self.pos + 1].kind == "num":
                self.advance()
                den = self.advance()
                if den.value == 0:
                    raise ParseError("zero denominator", den.offset)
                value = value / den.value
            if value == 1 and self.at_op("⊗"):
                return self.tensor([[]])
            return Num(value)
        if tok.kind == "gen":
            kind, slot = tok.value
            if slot is None:
                return self.tensor()
            self.advance()
            return Gen(kind, self.check_slot(slot, tok))
        if tok.kind == "e":
            slot, row, col = tok.value
            if slot is None:
                return self.tensor()
            self.advance()
            return Unit(self.check_slot(slot, tok), row, col)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.offset)
        raise ParseError(f"unexpected {tok.text!r}", tok.offset)

    def tensor(self, slots=None):
        """Read ``f f ... ⊗ f f ... ⊗ ...`` with unsubscripted factors."""
        start = self.tok
        slots = slots if slots is not None else []
        if not slots:
            slots.append(self.slot_factors())
        while self.at_op("⊗"):
            self.advance()
            slots.append(self.slot_factors())
        if len(slots) != self.n:
            raise IndexOutOfRange(f"monomial has {len(slots)} slots, expected {self.n}", start.offset)
        return Tensor(tuple(tuple(s) for s in slots))

    def slot_factors(self) -> list:
        factors = []
        while True:
            tok = self.tok
            if tok.kind == "num" and tok.value == 1 and not factors:
                self.advance()
                return factors
            if tok.kind == "gen" and tok.value[1] is None:
                self.advance()
                k = 1
                if self.at_op("^"):
                    self.advance()
                    k = self.exponent()
                factors.append((tok.value[0], k))
            elif tok.kind == "e" and tok.value[0] is None:
                self.advance()
                factors.append(("unit", tok.value[1:]))
            else:
                break
        if not factors:
            raise ParseError("expected a slot factor", self.tok.offset)
        return factors


def parse(text: str, n: int) -> Expression:
    if n < 1:
        raise ValueError("n must be at least 1")
    return _Parser(text, n).parse()


def _slot_value(factors, slot: int, n: int) -> AlgebraElement:
    value = one(n)
    for name, arg in factors:
        if name == "unit":
            f = slot_element([(matrix_unit(*arg), 1)], slot, n)
        elif name == "coord":
            f = generator("coord", slot, n) ** arg
        else:
            shift = {"deriv": (0, -1), "integ": (0, 1), "euler": (1, 0)}[name]
            f = slot_element([(band(*shift), 1)], slot, n) ** arg
        value = value * f
    return value


def evaluate(expr: Expression, n: int) -> AlgebraElement:
    if isinstance(expr, str):
        expr = parse(expr, n)
    if isinstance(expr, Num):
        return AlgebraElement.scalar(expr.value, n)
    if isinstance(expr, Gen):
        return generator(expr.kind, expr.slot, n)
    if isinstance(expr, Unit):
        return e(expr.row, expr.col, expr.slot, n)
    if isinstance(expr, Tensor):
        value = one(n)
        for k, factors in enumerate(expr.slots):
            value = value * _slot_value(factors, k + 1, n)
        return value
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, n)
    if isinstance(expr, Pow):
        return evaluate(expr.base, n) ** expr.exponent
    if isinstance(expr, BinOp):
        a, b = evaluate(expr.left, n), evaluate(expr.right, n)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        return a * b
    raise TypeError(f"not an expression node: {expr!r}")


def parse_element(text: str, n: int) -> AlgebraElement:
    return evaluate(parse(text, n), n)

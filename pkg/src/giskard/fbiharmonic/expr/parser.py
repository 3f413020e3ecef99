"""Recursive-descent parser for the expression grammar.

::

    expr     := term (("+"|"-") term)*
    term     := factor (("*"|"/") factor)*
    factor   := atom ("^" exponent)? | "-" factor
    atom     := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
    exponent := NUMBER | "(" "-"? NUMBER ("/" NUMBER)? ")"

Integer literals are stored as exact rationals, decimal literals as floats,
and exponents always as exact rationals.
"""

import re
from fractions import Fraction
from typing import NamedTuple

from ..errors import ExpressionSyntaxError, UnknownFunctionError
from ..jets.elementary import FUNCTION_NAMES
from .nodes import (
    VARIABLE_NAMES,
    Binary,
    Constant,
    Expr,
    Parameter,
    Power,
    Unary,
    Variable,
)

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(
                f"Unexpected character {text[position]!r}", position=position, text=text
            )
        if match.lastgroup != "space":
            tokens.append(Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    def __init__(self, text: str):
        self._text = text
        self._tokens = tokenize(text)
        self._index = 0

    @property
    def token(self) -> Token:
        return self._tokens[self._index]

    def _advance(self) -> Token:
        token = self.token
        if token.kind != "end":
            self._index += 1
        return token

    def _error(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.token
        return ExpressionSyntaxError(message, position=token.position, text=self._text)

    def _expect(self, text: str) -> Token:
        if self.token.text != text or self.token.kind == "number":
            found = self.token.text or "end of input"
            raise self._error(f"Expected {text!r}, found {found!r}")
        return self._advance()

    def parse(self) -> Expr:
        if self.token.kind == "end":
            raise self._error("Empty expression")
        node = self.expr()
        if self.token.kind != "end":
            raise self._error(f"Unexpected token {self.token.text!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.token.text in ("+", "-") and self.token.kind == "op":
            op = self._advance().text
            node = Binary(op=op, left=node, right=self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.token.text in ("*", "/") and self.token.kind == "op":
            op = self._advance().text
            node = Binary(op=op, left=node, right=self.factor())
        return node

    def factor(self) -> Expr:
        if self.token.kind == "op" and self.token.text == "-":
            self._advance()
            return Unary(fn="neg", child=self.factor())
        node = self.atom()
        if self.token.kind == "op" and self.token.text == "^":
            self._advance()
            node = Power(base=node, exponent=self.exponent())
        return node

    def atom(self) -> Expr:
        token = self.token
        if token.kind == "number":
            self._advance()
            return Constant(value=_number(token.text))
        if token.kind == "ident":
            self._advance()
            is_call = self.token.kind == "op" and self.token.text == "("
            if is_call:
                if token.text not in FUNCTION_NAMES:
                    raise UnknownFunctionError(
                        f"Unknown function {token.text!r}",
                        position=token.position,
                        text=self._text,
                    )
                self._advance()
                child = self.expr()
                self._expect(")")
                return Unary(fn=token.text, child=child)
            if token.text in FUNCTION_NAMES:
                raise self._error(f"Function {token.text!r} must be called", token)
            if token.text in VARIABLE_NAMES:
                return Variable(name=token.text)
            return Parameter(name=token.text)
        if token.kind == "op" and token.text == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        found = token.text or "end of input"
        raise self._error(f"Unexpected token {found!r}")

    def exponent(self) -> Fraction:
        token = self.token
        if token.kind == "number":
            self._advance()
            return _rational(token.text)
        if token.kind == "op" and token.text == "(":
            self._advance()
            sign = 1
            if self.token.kind == "op" and self.token.text == "-":
                self._advance()
                sign = -1
            numerator = self._exponent_number()
            denominator = Fraction(1)
            if self.token.kind == "op" and self.token.text == "/":
                self._advance()
                denominator = self._exponent_number()
                if denominator == 0:
                    raise self._error("Malformed rational exponent: zero denominator")
            self._expect(")")
            return sign * numerator / denominator
        raise self._error("Malformed rational exponent")

    def _exponent_number(self) -> Fraction:
        if self.token.kind != "number":
            raise self._error("Malformed rational exponent")
        return _rational(self._advance().text)


def _rational(text: str) -> Fraction:
    return Fraction(text)


def _number(text: str) -> Fraction | float:
    if text.isdigit():
        return Fraction(int(text))
    return float(text)


def parse(text: str) -> Expr:
    """Parse ``text`` into an immutable expression tree.

    Parameters
    ----------
    text : str
        Expression in the grammar of this module.

    Returns
    -------
    Expr
        The root node.

    Raises
    ------
    ExpressionSyntaxError
        On a syntax error or a malformed rational exponent; ``position`` points
        at the offending token.
    UnknownFunctionError
        When an identifier is called but is not a registered function.
    """
    return Parser(text).parse()

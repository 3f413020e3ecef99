from fractions import Fraction
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict

from ..jets.elementary import FUNCTION_NAMES

VARIABLE_NAMES = frozenset([f"x{i}" for i in range(1, 10)] + ["z"])

UnaryFunction = Literal["neg", "exp", "ln", "sqrt", "sin", "cos", "atan", "abs"]
BinaryOperator = Literal["+", "-", "*", "/"]

assert FUNCTION_NAMES < set(UnaryFunction.__args__)


def ambient_variables(n: int) -> tuple[str, ...]:
    """Coordinate names of an ambient space of dimension ``n``: ``x1..x{n-1}, z``."""
    if not 1 <= n <= 10:
        raise ValueError(f"Ambient dimension must be in [1, 10], got {n}")
    return tuple(f"x{i}" for i in range(1, n)) + ("z",)


def chart_variables(m: int) -> tuple[str, ...]:
    """Coordinate names of an ``m``-dimensional chart: ``x1..xm``."""
    if not 1 <= m <= 9:
        raise ValueError(f"Chart dimension must be in [1, 9], got {m}")
    return tuple(f"x{i}" for i in range(1, m + 1))


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator) if value >= 0 else f"({value.numerator})"
    return f"({value.numerator}/{value.denominator})"


class _Node(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class Constant(_Node):
    kind: Literal["constant"] = "constant"
    value: Fraction | float

    def __str__(self) -> str:
        if isinstance(self.value, Fraction):
            return _format_rational(self.value)
        text = repr(self.value)
        return text if self.value >= 0 else f"({text})"


class Variable(_Node):
    kind: Literal["variable"] = "variable"
    name: str

    def __str__(self) -> str:
        return self.name


class Parameter(_Node):
    kind: Literal["parameter"] = "parameter"
    name: str

    def __str__(self) -> str:
        return self.name


class Unary(_Node):
    kind: Literal["unary"] = "unary"
    fn: UnaryFunction
    child: "Expr"

    def __str__(self) -> str:
        if self.fn == "neg":
            return f"(-{self.child})"
        return f"{self.fn}({self.child})"


class Binary(_Node):
    kind: Literal["binary"] = "binary"
    op: BinaryOperator
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


class Power(_Node):
    kind: Literal["power"] = "power"
    base: "Expr"
    exponent: Fraction

    def __str__(self) -> str:
        base = str(self.base)
        if isinstance(self.base, Power):
            base = f"({base})"
        return f"{base}^{_format_rational(self.exponent)}"


Expr = Union[Constant, Variable, Parameter, Unary, Binary, Power]

for _model in (Unary, Binary, Power):
    _model.model_rebuild()


def free_identifiers(e: Expr) -> tuple[frozenset[str], frozenset[str]]:
    """Variable names and parameter names occurring in ``e``."""
    variables: set[str] = set()
    parameters: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        match node:
            case Variable(name=name):
                variables.add(name)
            case Parameter(name=name):
                parameters.add(name)
            case Unary(child=child):
                stack.append(child)
            case Binary(left=left, right=right):
                stack.extend((left, right))
            case Power(base=base):
                stack.append(base)
    return frozenset(variables), frozenset(parameters)


def substitute(e: Expr, replacements: dict[str, Expr]) -> Expr:
    """Replace variables or parameters by name with other expressions."""
    match e:
        case Variable(name=name) | Parameter(name=name) if name in replacements:
            return replacements[name]
        case Unary(fn=fn, child=child):
            return Unary(fn=fn, child=substitute(child, replacements))
        case Binary(op=op, left=left, right=right):
            return Binary(
                op=op,
                left=substitute(left, replacements),
                right=substitute(right, replacements),
            )
        case Power(base=base, exponent=exponent):
            return Power(base=substitute(base, replacements), exponent=exponent)
    return e


def is_constant(e: Expr) -> bool:
    """True when ``e`` mentions no variables (parameters are treated as constants)."""
    variables, _ = free_identifiers(e)
    return not variables

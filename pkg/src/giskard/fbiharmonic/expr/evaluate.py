from numbers import Real
from typing import Any, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import DomainError, SingularPointError, UnboundIdentifierError
from ..jets.elementary import apply_elementary
from ..jets.jet import SINGULAR_THRESHOLD, Jet, JetOp, jet_combine, seeds
from .nodes import Binary, Constant, Expr, Parameter, Power, Unary, Variable

Scalar = float | Jet


class Bindings(BaseModel):
    """Values for the free identifiers of an expression.

    Parameters are late-bound reals. Variables are bound to reals or to jets;
    when they are jets the evaluation yields the jet of the expression.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    parameters: dict[str, float] = Field(default_factory=dict)
    variables: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_disjoint(self) -> "Bindings":
        overlap = set(self.parameters) & set(self.variables)
        if overlap:
            raise ValueError(f"Identifiers bound twice: {sorted(overlap)}")
        return self

    @classmethod
    def at_point(
        cls,
        point: Sequence[float],
        parameters: dict[str, float] | None = None,
        order: int | None = None,
        names: Sequence[str] | None = None,
    ) -> "Bindings":
        """Bind the coordinates of ``point`` to reals, or to seeded jets of ``order``.

        Default names are ``x1..x{n-1}, z``; ``x{n}`` is bound as an alias of ``z``.
        """
        n = len(point)
        if names is None:
            names = tuple(f"x{i}" for i in range(1, n)) + ("z",)
        if len(names) != n:
            raise ValueError(f"Expected {n} variable names, got {len(names)}")
        values = seeds(point, order) if order else [float(p) for p in point]
        variables = dict(zip(names, values))
        if names[-1] == "z" and n <= 9:
            variables.setdefault(f"x{n}", variables["z"])
        return cls(parameters=dict(parameters or {}), variables=variables)

    def with_parameters(self, **parameters: float) -> "Bindings":
        return Bindings(
            parameters={**self.parameters, **parameters}, variables=self.variables
        )

    def lookup_variable(self, name: str) -> Scalar:
        if name not in self.variables:
            raise UnboundIdentifierError(name)
        return self.variables[name]

    def lookup_parameter(self, name: str) -> float:
        if name not in self.parameters:
            raise UnboundIdentifierError(name)
        return float(self.parameters[name])


def _divide(left: Scalar, right: Scalar) -> Scalar:
    if isinstance(left, Jet) and isinstance(right, Jet):
        return jet_combine(left, right, JetOp.DIV)
    if isinstance(right, Real) and abs(right) < SINGULAR_THRESHOLD:
        raise SingularPointError("Division by a vanishing value", value=float(right))
    return left / right


def _evaluate(e: Expr, b: Bindings) -> Scalar:
    match e:
        case Constant(value=value):
            return float(value)
        case Variable(name=name):
            return b.lookup_variable(name)
        case Parameter(name=name):
            return b.lookup_parameter(name)
        case Unary(fn="neg", child=child):
            return -evaluate(child, b)
        case Unary(fn=fn, child=child):
            return apply_elementary(evaluate(child, b), fn)
        case Binary(op=op, left=left, right=right):
            lhs, rhs = evaluate(left, b), evaluate(right, b)
            match op:
                case "+":
                    return lhs + rhs
                case "-":
                    return lhs - rhs
                case "*":
                    return lhs * rhs
                case "/":
                    return _divide(lhs, rhs)
        case Power(base=base, exponent=exponent):
            return apply_elementary(evaluate(base, b), "pow", exponent)
    raise TypeError(f"Not an expression node: {e!r}")


def evaluate(e: Expr, b: Bindings) -> Scalar:
    """Evaluate ``e`` bottom-up over reals or jets.

    Raises
    ------
    UnboundIdentifierError
        When a free identifier has no binding.
    DomainError
        When an elementary function or a division leaves its domain. The
        error carries the innermost offending subexpression.
    """
    try:
        return _evaluate(e, b)
    except DomainError as err:
        raise err.with_expression(str(e))

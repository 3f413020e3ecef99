from .evaluate import Bindings, Scalar, evaluate
from .nodes import (
    VARIABLE_NAMES,
    Binary,
    Constant,
    Expr,
    Parameter,
    Power,
    Unary,
    Variable,
    ambient_variables,
    chart_variables,
    free_identifiers,
    is_constant,
    substitute,
)
from .parser import parse

__all__ = [
    "VARIABLE_NAMES",
    "Binary",
    "Bindings",
    "Constant",
    "Expr",
    "Parameter",
    "Power",
    "Scalar",
    "Unary",
    "Variable",
    "ambient_variables",
    "chart_variables",
    "evaluate",
    "free_identifiers",
    "is_constant",
    "parse",
    "substitute",
]

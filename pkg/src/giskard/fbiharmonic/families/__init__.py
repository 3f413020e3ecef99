from .ansatz import AnsatzEquation, AnsatzReduction, ansatz_reduce, critical_exponent, polynomial_text
from .catalog import FamilyName, FamilySpec, catalog, family_names
from .equations import (
    EquationId,
    ReducedEquation,
    ode_residual,
    ode_terms,
    ode_value,
    pro1_residual,
)

__all__ = [
    "AnsatzEquation",
    "AnsatzReduction",
    "EquationId",
    "FamilyName",
    "FamilySpec",
    "ReducedEquation",
    "ansatz_reduce",
    "catalog",
    "critical_exponent",
    "family_names",
    "ode_residual",
    "ode_terms",
    "ode_value",
    "polynomial_text",
    "pro1_residual",
]

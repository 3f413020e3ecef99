from .residuals import ResidualReport, residual_at, weighted_ode_defect
from .umbilical import UmbilicalIdentities, umbilical_theory_check
from .verdict import (
    Evidence,
    Verdict,
    VerdictKind,
    classify,
    first_counterexample,
    sample_residuals,
    verdict_from,
)

__all__ = [
    "Evidence",
    "ResidualReport",
    "UmbilicalIdentities",
    "Verdict",
    "VerdictKind",
    "classify",
    "first_counterexample",
    "residual_at",
    "sample_residuals",
    "umbilical_theory_check",
    "verdict_from",
    "weighted_ode_defect",
]

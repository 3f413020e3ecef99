from .config import OutputFormat, RunConfig, Tolerances
from .errors import (
    ConstraintError,
    Counterexample,
    DomainError,
    Error,
    ExpressionSyntaxError,
    VerificationError,
)
from .expr import Bindings, evaluate, parse
from .families import (
    AnsatzEquation,
    FamilyName,
    FamilySpec,
    ReducedEquation,
    ansatz_reduce,
    catalog,
    ode_residual,
    pro1_residual,
)
from .geometry import (
    ConformalSpace,
    CurvatureClaim,
    ImmersionChart,
    curvature_at,
    curvature_scan,
    geometry_at,
    sectional,
)
from .jets import Jet, fd_oracle, seed, seeds
from .limiter import SampleLimiter
from .sampling import ErrorPolicy, Sampler
from .verification import (
    ResidualReport,
    Verdict,
    VerdictKind,
    classify,
    residual_at,
    umbilical_theory_check,
)

__all__ = [
    "AnsatzEquation",
    "Bindings",
    "ConformalSpace",
    "ConstraintError",
    "Counterexample",
    "CurvatureClaim",
    "DomainError",
    "Error",
    "ErrorPolicy",
    "ExpressionSyntaxError",
    "FamilyName",
    "FamilySpec",
    "ImmersionChart",
    "Jet",
    "OutputFormat",
    "ReducedEquation",
    "ResidualReport",
    "RunConfig",
    "SampleLimiter",
    "Sampler",
    "Tolerances",
    "Verdict",
    "VerdictKind",
    "VerificationError",
    "ansatz_reduce",
    "catalog",
    "classify",
    "curvature_at",
    "curvature_scan",
    "evaluate",
    "fd_oracle",
    "geometry_at",
    "ode_residual",
    "parse",
    "pro1_residual",
    "residual_at",
    "sectional",
    "seed",
    "seeds",
    "umbilical_theory_check",
]

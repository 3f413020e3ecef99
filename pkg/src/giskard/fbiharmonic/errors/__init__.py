from .domain_errors import (
    ConstraintError,
    DegeneratePlaneError,
    DomainError,
    NoAdmissibleSampleError,
    RankDeficiencyError,
    SingularPointError,
    UmbilicityError,
    UnboundIdentifierError,
)
from .serializable import Counterexample, Error
from .syntax_errors import ExpressionSyntaxError, UnknownFunctionError
from .verification_errors import VerificationError

__all__ = [
    "ConstraintError",
    "Counterexample",
    "DegeneratePlaneError",
    "DomainError",
    "Error",
    "ExpressionSyntaxError",
    "NoAdmissibleSampleError",
    "RankDeficiencyError",
    "SingularPointError",
    "UmbilicityError",
    "UnboundIdentifierError",
    "UnknownFunctionError",
    "VerificationError",
]

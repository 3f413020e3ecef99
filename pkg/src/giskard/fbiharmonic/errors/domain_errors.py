from typing import Any


class DomainError(ValueError):
    """A quantity was evaluated outside the domain where it is smooth."""

    def __init__(
        self,
        message: str,
        *,
        value: Any | None = None,
        expression: str | None = None,
    ):
        super().__init__(message)
        self.value = value
        self.expression = expression

    def with_expression(self, expression: str) -> "DomainError":
        """Attach the innermost subexpression, keeping an existing one."""
        if self.expression is None:
            self.expression = expression
        return self

    def __str__(self) -> str:
        message = super().__str__()
        if self.expression is not None:
            message = f"{message} in `{self.expression}`"
        return message


class SingularPointError(DomainError):
    """Division by a quantity that vanishes at the expansion point."""


class RankDeficiencyError(DomainError):
    """The differential of an immersion chart drops rank."""


class DegeneratePlaneError(ValueError):
    """Two vectors do not span a 2-plane."""


class UmbilicityError(ValueError):
    """An identity that holds only at umbilical points was requested elsewhere."""


class ConstraintError(ValueError):
    """A family parameter violates the family's admissibility constraints."""

    def __init__(
        self,
        message: str,
        *,
        family: str | None = None,
        parameter: str | None = None,
    ):
        super().__init__(message)
        self.family = family
        self.parameter = parameter


class UnboundIdentifierError(LookupError):
    """An expression refers to a parameter or variable without a binding."""

    def __init__(self, name: str):
        super().__init__(f"No binding for identifier `{name}`")
        self.name = name


class NoAdmissibleSampleError(RuntimeError):
    """The sampler could not produce a single admissible point."""

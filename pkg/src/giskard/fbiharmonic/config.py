import os
from enum import StrEnum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

SEED_ENV_VAR = "FBH_SEED"


class OutputFormat(StrEnum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class Tolerances(BaseModel):
    """Thresholds shared by residual verification and curvature claims.

    Attributes
    ----------
    verify : float
        A normalized residual below this value counts as vanishing.
    falsify : float
        A normalized residual above this value counts as a clear violation.
        Residuals between ``verify`` and ``falsify`` are inconclusive.
    umbilic : float
        Relative spread of principal curvatures below which a point is umbilic.
    constancy : float
        ``|grad f|`` above this value marks ``f`` as nonconstant. Kept apart from
        ``verify`` so that loosening ``verify`` never flips properness.
    zero_curvature : float
        Absolute bound for the ``zero`` curvature claim.
    """

    verify: float = Field(default=1e-8, gt=0)
    falsify: float = Field(default=1e-3, gt=0)
    umbilic: float = Field(default=1e-9, gt=0)
    constancy: float = Field(default=1e-8, gt=0)
    zero_curvature: float = Field(default=1e-10, gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "Tolerances":
        if self.falsify < self.verify:
            raise ValueError(f"falsify ({self.falsify:g}) must not be below verify ({self.verify:g})")
        return self


def default_seed() -> int:
    """Seed from the ``FBH_SEED`` environment variable, 0 when unset."""
    return int(os.environ.get(SEED_ENV_VAR, "0"))


class RunConfig(BaseModel):
    """Everything that determines the output of one CLI run."""

    command: str
    family: str | None = None
    m: int | None = None
    n: int | None = None
    sigma: str | None = None
    guards: tuple[str, ...] = ()
    hyperplane: str | None = None
    immersion: str | None = None
    orientation: Literal[1, -1] = 1
    f: str | None = None
    f_factor: str | None = None
    exponent_shift: float = 0.0
    expect: str | None = None
    equation: str | None = None
    parameters: dict[str, float] = Field(default_factory=dict)
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default_factory=default_seed)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    box: tuple[float, float] | None = None
    jobs: int = Field(default=1, ge=1)
    output_format: OutputFormat = OutputFormat.TEXT
    output: Path | None = None

    @field_validator("seed")
    @classmethod
    def _fit_seed(cls, seed: int) -> int:
        if not -(2**63) <= seed < 2**64:
            raise ValueError(f"Seed must fit in 64 bits, got {seed}")
        return seed

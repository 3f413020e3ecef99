from pydantic import BaseModel, Field


class Error(BaseModel):
    """A basic serializable error."""

    message: str
    sample_index: int | None = Field(default=None)

    def __str__(self) -> str:
        return "ERROR: " + self.message


class Counterexample(BaseModel):
    """The first sample point where a claimed identity fails."""

    sample_index: int
    x: list[float]
    term: str
    value: float

    def __str__(self) -> str:
        point = ", ".join(f"{v:.6g}" for v in self.x)
        return (
            f"sample {self.sample_index} at x=({point}): "
            f"{self.term} = {self.value:.3e}"
        )

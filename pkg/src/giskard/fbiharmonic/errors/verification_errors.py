class VerificationError(RuntimeError):
    """An error that occurs while evaluating a sample of a verification run."""

    def __init__(
        self,
        message: str,
        *,
        exception: Exception | None = None,
        sample_index: int | None = None,
    ):
        super().__init__(message)
        self.exception = exception
        self.sample_index = sample_index

class ExpressionSyntaxError(ValueError):
    """The expression text does not follow the grammar."""

    def __init__(self, message: str, *, position: int, text: str):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownFunctionError(ExpressionSyntaxError):
    """A call to a function name that is not registered."""

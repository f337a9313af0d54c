class NumericalError(ArithmeticError):
    """A computation could not produce a numerically meaningful result."""


class ConvergenceError(NumericalError):
    """An iterative solver gave up.

    ``partial`` holds whatever was computed before the failure (for the
    decomposition: the accepted ``(coeffs, vectors)`` so far).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial

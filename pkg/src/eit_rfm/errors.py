"""Exception hierarchy. The CLI maps ValidationError to exit 1, NumericalError to exit 2."""


class ValidationError(ValueError):
    """Input outside the admissible set."""


class DegenerateParameterError(ValidationError):
    """A closed-form symbol hit a (near) zero denominator."""


class NumericalError(ArithmeticError):
    """A numerical stage failed or produced an unusable result."""


class EmptySpectrumError(NumericalError):
    """No singular value passes the regularization filter."""

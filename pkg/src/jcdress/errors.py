"""Exception types shared across the package."""


class DomainError(ValueError):
    """A physical or mathematical precondition was violated."""


class PrecisionExhausted(ArithmeticError):
    """Extended-precision evaluation could not reach the requested accuracy."""

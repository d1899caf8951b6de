"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DivergenceError(ArithmeticError):
    """The requested quantity is infinite (divergent series, integral or norm)."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class NotHilbertSchmidtError(DomainError):
    """The operator is not Hilbert-Schmidt, so its trace of K*K is infinite."""

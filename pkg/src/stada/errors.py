"""Exception types shared across the package."""


class StadaError(Exception):
    """Base class for package-specific errors."""


class BackendMismatchError(StadaError):
    """Operands carry different scalar backends."""


class ParseError(StadaError):
    """Syntax error in a textual expression; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidGeneratorError(StadaError):
    """A generator set violates one of its defining relations."""


class InvalidSpinError(StadaError):
    """An element fails the spin-group membership conditions."""


class ConvergenceError(StadaError):
    """An iterative computation failed to converge."""


class ConsistencyError(StadaError):
    """A constructed object violates an invariant that should hold by construction."""


class DomainError(StadaError):
    """An argument lies outside the mathematical domain of the operation."""

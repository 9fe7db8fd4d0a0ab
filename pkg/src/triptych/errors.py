"""Exception types shared across the toolkit."""


class TriptychError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(TriptychError, ValueError):
    """Array shapes or tensor dims do not fit the requested operation."""


class ValidationError(TriptychError, ValueError):
    """An input violates a documented precondition."""


class ConstructionError(TriptychError, ValueError):
    """A code space could not be built because its basis is not orthonormal."""

    def __init__(self, message, gram_deviation=None):
        super().__init__(message)
        self.gram_deviation = gram_deviation


class InvalidDensityError(ValidationError):
    """A matrix is not a valid density matrix (Hermitian, PSD, unit trace)."""


class RecoveryImpossible(TriptychError):
    """The candidate recovery map for the erased party is not unitary."""

    def __init__(self, erased, residual, message=None):
        self.erased = erased
        self.residual = residual
        super().__init__(
            message
            or f"no recovery unitary exists when {erased} is erased "
            f"(unitarity deviation {residual:.3g})"
        )


class InconsistencyError(TriptychError, ArithmeticError):
    """Two routes to the same quantity disagree beyond tolerance."""

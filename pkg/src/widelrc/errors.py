"""Exception types shared across the package."""


class WideLrcError(Exception):
    """Base class for all widelrc-specific errors."""


class ParameterError(WideLrcError, ValueError):
    """Invalid or inconsistent code/placement/model parameters."""


class FieldTooSmallError(ParameterError):
    """The requested code needs more distinct nonzero symbols than GF(2^8) has."""


class ConstructionError(WideLrcError, ValueError):
    """A matrix or code could not be constructed from the given inputs."""


class DecodeError(WideLrcError):
    """Erasure recovery is impossible for the given pattern."""


class SingularMatrixError(DecodeError):
    """A matrix that must be invertible is singular."""


class NotLocallyRepairableError(WideLrcError):
    """The block has no XOR repair group; caller must fall back to global decode."""


class ModelError(WideLrcError):
    """The reliability model is degenerate (e.g. zero rates)."""

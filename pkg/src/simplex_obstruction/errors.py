"""Exception types shared across the toolkit."""


class ObstructionError(Exception):
    """Base class for all toolkit errors."""


class SizeLimitError(ObstructionError, ValueError):
    """Requested n (or matrix size) exceeds what the toolkit enumerates."""


class DimensionError(ObstructionError, ValueError):
    """Operands live on different n, or matrix/vector shapes disagree."""


class ValidationError(ObstructionError, ValueError):
    """Malformed input value (bad permutation, non-prime modulus, ...)."""


class ConstructionError(ObstructionError, RuntimeError):
    """An internal invariant of a construction failed; indicates a bug."""


class ResolutionError(ObstructionError, ValueError):
    """Sampled path too coarse to lift the phase unambiguously."""


class CompositionError(ObstructionError, ValueError):
    """Paths cannot be concatenated: endpoints disagree."""


class InputError(ObstructionError, ValueError):
    """Input data violates the documented precondition."""

"""Exception types shared across the package."""


class MoonmaassError(Exception):
    """Base class for all package-specific errors."""


class MembershipViolation(MoonmaassError, ValueError):
    """A matrix tuple fails one of the group membership conditions."""


class DomainError(MoonmaassError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(MoonmaassError, ArithmeticError):
    """Evaluation was requested exactly at a pole."""


class UnsupportedGroup(MoonmaassError, ValueError):
    """No built-in profile exists for the requested level."""


class PullbackFailure(MoonmaassError, RuntimeError):
    """Pullback into the fundamental domain could not be completed."""


class IterationLimit(PullbackFailure):
    """The pullback loop exceeded its iteration cap."""


class RangeError(MoonmaassError, ValueError):
    """A query lies outside the verified range of the data."""


class MonotonicityViolation(MoonmaassError, ValueError):
    """A sequence that must be strictly increasing is not."""


class ConditioningFailure(MoonmaassError, RuntimeError):
    """No acceptably conditioned linear system exists in the allowed window."""


class SingularSystem(MoonmaassError, RuntimeError):
    """The linear system is rank-deficient beyond what a single eigenvalue explains."""


class InsufficientCoefficients(MoonmaassError, ValueError):
    """Not enough Fourier coefficients for any admissible multiplicative identity."""


class ZeroFirstCoefficient(MoonmaassError, ValueError):
    """The normalization coefficient vanishes."""


class EmptyInput(MoonmaassError, ValueError):
    """An operation that needs data received none."""


class InsufficientData(MoonmaassError, ValueError):
    """Too few samples for the requested statistic."""


class ConfigMismatch(MoonmaassError, ValueError):
    """A stored artifact does not match the configuration trying to re-use it."""

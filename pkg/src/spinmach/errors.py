"""Exception hierarchy shared by all spinmach modules."""

from __future__ import annotations


class SpinmachError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SpinmachError):
    """Malformed input text. Carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ValidationError(SpinmachError):
    """Input violates a documented invariant (finite, positive, ordered...)."""


class BoundsError(SpinmachError):
    """Requested ordinal/index or range outside the available data."""


class InsufficientDataError(SpinmachError):
    """Series too short for the requested operation."""


class DegenerateInputError(SpinmachError):
    """Input is structurally empty for the operation (e.g. no anchors)."""


class NotSiftableError(SpinmachError):
    """Signal lacks the extrema needed to build both envelopes."""


class NotDecomposableError(SpinmachError):
    """Layer input has too little maxima structure for an envelope."""


class InsufficientDepthError(SpinmachError):
    """Layer stack is shallower than the requested layer."""


class DegenerateTrainingError(SpinmachError):
    """Training set does not contain both classes."""


class DimensionError(SpinmachError):
    """Vector lengths do not match."""


class UndefinedAngleError(SpinmachError):
    """The origin has no angle; the diameter rule cannot classify it."""


class HyperbolicDomainError(SpinmachError):
    """arccosh argument below 1; distance undefined (reported, not clamped)."""


class UndefinedValueError(SpinmachError):
    """A ratio with zero denominator (zero signals / zero base accuracy)."""


class ConfigError(SpinmachError):
    """Unknown key, bad value type, or out-of-range configuration entry."""

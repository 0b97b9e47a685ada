"""Exception types shared across the package.

Every failure mode raised by library code derives from :class:`AkwsError`
so callers can catch the whole family with one clause; most are also
``ValueError`` subclasses because they signal bad arguments.
"""


class AkwsError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(AkwsError, ValueError):
    """Matrix dimensions do not line up for the requested operation."""


class DataError(AkwsError, ValueError):
    """Input data violates a value constraint (e.g. NaN/Inf entries)."""


class InvalidExpansionSizeError(AkwsError, ValueError):
    """Expansion size must exceed the input feature dimension."""


class InvalidDimensionError(AkwsError, ValueError):
    """Feature dimension must be at least one."""


class InvalidRegularizerError(AkwsError, ValueError):
    """Ridge parameter must be strictly positive."""


class ClassCollisionError(AkwsError, ValueError):
    """A batch declared class ids that are already registered."""


class UntrainedClassifierError(AkwsError, ValueError):
    """Prediction requested from a classifier with no classes."""


class ExtractorNotFrozenError(AkwsError, ValueError):
    """Feature extraction requires a frozen extractor."""


class InvalidPretrainSetError(AkwsError, ValueError):
    """Pretraining data must contain at least two classes."""


class InvalidLearningRateError(AkwsError, ValueError):
    """Learning rate must be strictly positive."""


class InvalidSplitError(AkwsError, ValueError):
    """Task split arithmetic does not cover the class set exactly."""


class EmptyTaskError(AkwsError, ValueError):
    """A task in the sequence has an empty training set."""


class MetricUndefinedError(AkwsError, ValueError):
    """Metric requested on an empty or too-short accuracy record."""


class ParseError(AkwsError, ValueError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ConfigError(AkwsError, ValueError):
    """Run configuration violates the schema; carries the field path."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class SnapshotFormatError(AkwsError, ValueError):
    """Classifier snapshot bytes are malformed or of unknown version."""

"""Exceptions raised by qevo.

Each error subclasses the closest builtin so callers that do not care about
qevo's taxonomy can keep catching `ValueError` and friends.
"""
from typing import Optional

__all__ = [
    "ConfigError",
    "ConfigParseError",
    "DimensionMismatch",
    "EmptyStudy",
    "EvalFailed",
    "GenerationStalled",
    "InvalidDiversity",
    "InvalidInput",
    "InvalidWire",
    "NotDensityMatrix",
    "NotNormalized",
    "NotWarm",
    "ParseError",
    "PassLimitExceeded",
    "QubitLimitExceeded",
    "RangeError",
    "TooShort",
    "TrialTimeout",
    "UnknownKey",
    "Unevaluated",
    "ValidationError",
]


# circuits and states


class InvalidWire(IndexError):
    pass


class QubitLimitExceeded(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class NotDensityMatrix(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class InvalidInput(ValueError):
    pass


class PassLimitExceeded(UserWarning):
    """The optimizer stopped before reaching a fixpoint."""


# evolution


class GenerationStalled(RuntimeError):
    pass


class Unevaluated(ValueError):
    """A candidate without a fitness report was used where one is needed."""


class TooShort(ValueError):
    pass


class InvalidDiversity(ValueError):
    pass


class NotWarm(RuntimeError):
    pass


class EvalFailed(RuntimeError):
    def __init__(self, index: int, cause: Optional[BaseException] = None):
        self.index = index
        self.cause = cause
        super().__init__(f"evaluation of candidate {index} failed twice: {cause!r}")


# files


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    def __init__(self, message: str, record_id: Optional[str] = None):
        self.record_id = record_id
        if record_id is not None:
            message = f"record '{record_id}': {message}"
        super().__init__(message)


# experiments


class EmptyStudy(ValueError):
    pass


class TrialTimeout(RuntimeError):
    pass


# configuration


class ConfigError(ValueError):
    pass


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message)


class UnknownKey(ConfigError):
    pass


class RangeError(ConfigError):
    pass

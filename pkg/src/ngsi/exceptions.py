from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Optional

from .enums import ErrorKind


class NgsiError(Exception):
    """Base error for the neurally-guided structure inference package."""


class GrammarError(NgsiError):
    pass


class ConfigError(NgsiError):
    pass


class TokenizeError(NgsiError):
    pass


class MalformedTreeError(NgsiError):
    pass


class BucketUnsatisfiableError(NgsiError):
    pass


class NonFiniteError(NgsiError):
    pass


class ModelMismatchError(NgsiError):
    def __init__(self, message: str = "model/grammar mismatch") -> None:
        super().__init__(message)


@dataclass
class TreeFormatError(NgsiError):
    message: str
    offset: Optional[int] = None

    def __post_init__(self) -> None:
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.offset is None:
            return self.message
        return f"{self.message} (offset={self.offset})"


@dataclass
class ModelFormatError(NgsiError):
    message: str
    offset: Optional[int] = None

    def __post_init__(self) -> None:
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.offset is None:
            return self.message
        return f"{self.message} (offset={self.offset})"


@dataclass
class TrainingDivergedError(NgsiError):
    message: str
    stage: Optional[int] = None

    def __post_init__(self) -> None:
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.stage is None:
            return self.message
        return f"{self.message} (stage={self.stage})"


class InferenceError(NgsiError):
    """Base for failures that end a single inference instance."""

    kind: ClassVar[ErrorKind] = ErrorKind.UNPARSEABLE


@dataclass
class UnparseableError(InferenceError):
    message: str
    position: Optional[int] = None

    kind: ClassVar[ErrorKind] = ErrorKind.UNPARSEABLE

    def __post_init__(self) -> None:
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.position is None:
            return self.message
        return f"{self.message} (position={self.position})"


class DepthLimitError(InferenceError):
    kind: ClassVar[ErrorKind] = ErrorKind.DEPTH_LIMIT


class InconsistentParseError(InferenceError):
    kind: ClassVar[ErrorKind] = ErrorKind.INCONSISTENT_PARSE

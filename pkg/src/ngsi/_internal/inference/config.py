from __future__ import annotations

from dataclasses import dataclass

from ...enums import InferMode
from ...exceptions import ConfigError

DEFAULT_BEAM_WIDTH = 4
DEFAULT_MAX_RECURSION_DEPTH = 64
DEFAULT_MAX_EXPANSIONS = 100_000


@dataclass(frozen=True, slots=True)
class InferConfig:
    """Guided-inference options.

    `max_expansions` caps the rule applications tried for one instance; running
    out ends the instance as unparseable. None removes the cap.
    """

    mode: InferMode = InferMode.Fallback
    beam_width: int = DEFAULT_BEAM_WIDTH
    max_recursion_depth: int = DEFAULT_MAX_RECURSION_DEPTH
    verify_reconstruction: bool = True
    max_expansions: int | None = DEFAULT_MAX_EXPANSIONS

    def __post_init__(self) -> None:
        if not isinstance(self.mode, InferMode):
            try:
                object.__setattr__(self, "mode", InferMode(self.mode))
            except ValueError:
                raise ConfigError(f"unknown inference mode {self.mode!r}") from None
        if self.beam_width < 1:
            raise ConfigError(f"beam_width must be >= 1, got {self.beam_width}")
        if self.max_recursion_depth < 1:
            raise ConfigError(f"max_recursion_depth must be >= 1, got {self.max_recursion_depth}")
        if self.max_expansions is not None and self.max_expansions < 1:
            raise ConfigError(f"max_expansions must be >= 1, got {self.max_expansions}")

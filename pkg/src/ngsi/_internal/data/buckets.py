from __future__ import annotations

from dataclasses import dataclass

from ...exceptions import ConfigError

# Shortest derivable program: "v0 = 0 ;".
MIN_PROGRAM_LENGTH = 4


@dataclass(frozen=True, slots=True)
class SampleBucket:
    """Length (token count) and depth (node count of the longest path) ranges, inclusive."""

    min_length: int
    max_length: int
    min_depth: int
    max_depth: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.min_length < MIN_PROGRAM_LENGTH:
            raise ConfigError(f"min_length must be >= {MIN_PROGRAM_LENGTH}, got {self.min_length}")
        if self.min_length > self.max_length:
            raise ConfigError(f"min_length {self.min_length} exceeds max_length {self.max_length}")
        if self.min_depth < 1:
            raise ConfigError(f"min_depth must be >= 1, got {self.min_depth}")
        if self.min_depth > self.max_depth:
            raise ConfigError(f"min_depth {self.min_depth} exceeds max_depth {self.max_depth}")
        if not (0 <= self.seed < 1 << 64):
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")

    @classmethod
    def parse(cls, text: str, *, seed: int = 0) -> "SampleBucket":
        """Parse `minlen:maxlen:mindepth:maxdepth`."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"bucket must be minlen:maxlen:mindepth:maxdepth, got {text!r}")
        try:
            lo_len, hi_len, lo_depth, hi_depth = (int(p) for p in parts)
        except ValueError:
            raise ConfigError(f"bucket fields must be integers, got {text!r}") from None
        return cls(lo_len, hi_len, lo_depth, hi_depth, seed=seed)

    def contains(self, *, length: int, depth: int) -> bool:
        return self.min_length <= length <= self.max_length and self.min_depth <= depth <= self.max_depth

    def __str__(self) -> str:
        return (
            f"length[{self.min_length},{self.max_length}]"
            f" depth[{self.min_depth},{self.max_depth}] seed={self.seed}"
        )

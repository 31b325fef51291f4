from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(slots=True)
class ParseContext:
    """Diagnostics collected while the reference parser backtracks; only the furthest failure is kept."""

    furthest: int = 0
    expected: set[str] = field(default_factory=set)
    attempts: int = 0

    def fail(self, position: int, expected: str) -> None:
        self.attempts += 1
        if position > self.furthest:
            self.furthest = position
            self.expected = {expected}
        elif position == self.furthest:
            self.expected.add(expected)

    def describe(self, words: list[str]) -> str:
        found = "end of input" if self.furthest >= len(words) else repr(words[self.furthest])
        wanted = " or ".join(sorted(self.expected)) or "nothing"
        return f"expected {wanted} at token {self.furthest}, found {found}"

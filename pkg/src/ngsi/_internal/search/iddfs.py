"""Iterative deepening depth-first search over leftmost derivations.

The unguided comparator: for depth limits 1, 2, ... it enumerates derivations
from the start symbol in rule-id order, leftmost nonterminal first, and stops
at the first tree whose yield is exactly the input. Partial derivations are cut
when their fixed terminal prefix disagrees with the input or when the grammar's
shortest completion, regardless of depth, is longer than the input.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from ...enums import ErrorKind, SearchStatus
from ...exceptions import ConfigError
from ..grammar.analysis import analyze
from ..grammar.symbols import Grammar, Nonterminal, Token
from ..grammar.while_lang import WHILE_GRAMMAR
from ..syntax.tree import Ast, TokenSeq, from_preorder

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 40
DEFAULT_TIME_LIMIT_SECONDS = 3600.0
# Clock reads are amortised over this many derivation steps.
_CLOCK_STRIDE = 1024


@dataclass(frozen=True, slots=True)
class SearchConfig:
    max_depth: int = DEFAULT_MAX_DEPTH
    time_limit_seconds: float | None = DEFAULT_TIME_LIMIT_SECONDS

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.time_limit_seconds is not None and not self.time_limit_seconds > 0:
            raise ConfigError(f"time_limit_seconds must be > 0, got {self.time_limit_seconds}")


@dataclass(frozen=True, slots=True)
class SearchOutcome:
    status: SearchStatus
    tree: Ast | None
    # Rule applications visited across all depth limits.
    steps: int
    seconds: float
    # Depth limit at which the search stopped.
    depth_limit: int

    @property
    def error_kind(self) -> ErrorKind | None:
        if self.status is SearchStatus.Found:
            return None
        if self.status is SearchStatus.Timeout:
            return ErrorKind.TIMEOUT
        return ErrorKind.UNPARSEABLE


class _Timeout(Exception):
    pass


class _Search:
    def __init__(self, d: TokenSeq, grammar: Grammar, deadline: float | None) -> None:
        self.d = d
        self.grammar = grammar
        self.analysis = analyze(grammar)
        self.deadline = deadline
        self.steps = 0
        self.rules: list[int] = []

    def check_clock(self) -> None:
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise _Timeout()

    def run(self, limit: int) -> bool:
        self.check_clock()
        start = self.grammar.start
        need = self.analysis.min_length[start.id]
        if need > len(self.d):
            return False
        return self._dfs([(start, limit)], 0, need)

    def _dfs(self, stack: list[tuple[Token | Nonterminal, int]], pos: int, need: float) -> bool:
        """`stack` holds pending symbols with their depth allowance, leftmost last.

        `need` is the shortest yield the pending symbols can produce, ignoring
        their depth allowances.
        """
        if not stack:
            return pos == len(self.d)

        sym, allowance = stack.pop()
        try:
            if isinstance(sym, Token):
                if pos < len(self.d) and self.d[pos] == sym.id:
                    return self._dfs(stack, pos + 1, need - 1)
                return False

            if allowance < 1:
                return False
            own = self.analysis.min_length[sym.id]
            for rule in self.grammar.rules_for(sym):
                total = need - own + self.analysis.rule_min_length(rule)
                if pos + total > len(self.d):
                    continue

                self.steps += 1
                if self.steps % _CLOCK_STRIDE == 0:
                    self.check_clock()

                pushed = len(stack)
                for child in reversed(rule.rhs):
                    stack.append((child, allowance - 1))
                self.rules.append(rule.id)
                if self._dfs(stack, pos, total):
                    return True
                self.rules.pop()
                del stack[pushed:]
            return False
        finally:
            stack.append((sym, allowance))


def iddfs_parse(d: TokenSeq, cfg: SearchConfig = SearchConfig(), grammar: Grammar = WHILE_GRAMMAR) -> SearchOutcome:
    """Timeouts and exhaustion are reported as outcomes, not raised."""
    if not d:
        return SearchOutcome(SearchStatus.Exhausted, None, 0, 0.0, 0)

    t0 = time.perf_counter()
    deadline = None if cfg.time_limit_seconds is None else t0 + cfg.time_limit_seconds
    search = _Search(d, grammar, deadline)
    limit = 0
    try:
        for limit in range(1, cfg.max_depth + 1):
            if search.run(limit):
                tree = from_preorder(search.rules, grammar)
                seconds = time.perf_counter() - t0
                logger.debug("found %d-token program at depth %d after %d steps", len(d), limit, search.steps)
                return SearchOutcome(SearchStatus.Found, tree, search.steps, seconds, limit)
    except _Timeout:
        return SearchOutcome(SearchStatus.Timeout, None, search.steps, time.perf_counter() - t0, limit)
    return SearchOutcome(SearchStatus.Exhausted, None, search.steps, time.perf_counter() - t0, limit)

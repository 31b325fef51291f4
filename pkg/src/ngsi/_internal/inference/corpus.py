from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from ...enums import ErrorKind
from ...exceptions import InferenceError, TokenizeError, TreeFormatError
from ..data.files import CorpusLine, iter_corpus_lines, parse_corpus_line
from ..syntax.tree import Ast, ast_equal
from .config import InferConfig
from .engine import Guide, infer_with_stats

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class InferRow:
    """Outcome for one corpus line. Exactly one of `tree` and `error` is set."""

    line_no: int
    tree: Ast | None
    error: ErrorKind | None
    message: str
    seconds: float
    expansions: int
    expected: Ast | None = None

    @property
    def ok(self) -> bool:
        return self.tree is not None

    @property
    def exact_match(self) -> bool | None:
        if self.expected is None:
            return None
        return self.tree is not None and ast_equal(self.tree, self.expected)


def infer_lines(lines: Iterable[CorpusLine], guide: Guide, cfg: InferConfig = InferConfig()) -> Iterator[InferRow]:
    """One row per line; a failing line becomes an error row and the run goes on.

    Lines may carry the generator's tree as a second column; it is kept as
    `expected`. Timing covers inference only.
    """
    grammar = guide.grammar
    for line in lines:
        try:
            tokens, expected = parse_corpus_line(line, grammar)
        except (TokenizeError, TreeFormatError) as e:
            logger.warning("line %d: %s", line.line_no, e)
            yield InferRow(line.line_no, None, ErrorKind.UNPARSEABLE, str(e), 0.0, 0)
            continue

        t0 = time.perf_counter()
        try:
            outcome = infer_with_stats(tokens, grammar.start, guide, cfg)
        except InferenceError as e:
            yield InferRow(line.line_no, None, e.kind, str(e), time.perf_counter() - t0, 0, expected)
            continue
        seconds = time.perf_counter() - t0
        yield InferRow(line.line_no, outcome.tree, None, "", seconds, outcome.expansions, expected)


def infer_file(path: str | Path, guide: Guide, cfg: InferConfig = InferConfig()) -> list[InferRow]:
    rows = list(infer_lines(iter_corpus_lines(path), guide, cfg))
    failed = sum(1 for r in rows if not r.ok)
    logger.info("inferred %d programs from %s, %d failed", len(rows), path, failed)
    return rows

"""Accuracy and latency over a grid of exact (depth, length) cells."""

from __future__ import annotations

import logging
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from ...enums import ErrorKind, InferMode, Method
from ...exceptions import BucketUnsatisfiableError, ConfigError, InferenceError
from ..data.buckets import MIN_PROGRAM_LENGTH, SampleBucket
from ..data.sampler import ProgramSampler
from ..grammar.analysis import analyze
from ..grammar.symbols import Grammar
from ..grammar.while_lang import WHILE_GRAMMAR
from ..guider.model import GuiderModel
from ..inference.config import InferConfig
from ..inference.engine import infer
from ..inference.selectors import OracleSelector
from ..search.iddfs import SearchConfig, iddfs_parse
from ..seeds import SeedDomain, derive_seed, require_domain
from ..syntax.tree import Ast, TokenSeq, ast_equal

logger = logging.getLogger(__name__)

DEFAULT_PER_CELL = 100
# Exact-depth cells are filled by rejection; deep short cells need more tries.
EVAL_MAX_ATTEMPTS = 20_000

_MODE_FOR = {
    Method.NgsiGreedy: InferMode.Greedy,
    Method.NgsiFallback: InferMode.Fallback,
    Method.NgsiBeam: InferMode.Beam,
}
_NEEDS_MODEL = frozenset({Method.Ngsi, Method.NgsiGreedy, Method.NgsiFallback, Method.NgsiBeam})


@dataclass(frozen=True)
class EvalRecord:
    method: str
    depth: int
    length: int
    count: int
    exact_match: float
    errors: dict[str, int] = field(default_factory=dict)
    mean_time_s: float | None = None
    p95_time_s: float | None = None

    def sort_key(self) -> tuple[str, int, int]:
        return (self.method, self.depth, self.length)


@dataclass(frozen=True)
class _CellTask:
    depth: int
    length: int
    per_cell: int
    seed: int
    methods: tuple[Method, ...]
    model: GuiderModel | None
    infer_cfg: InferConfig
    search_cfg: SearchConfig
    grammar: Grammar


def cell_seed(seed: int, depth: int, length: int) -> int:
    return derive_seed(seed, "eval", depth, length, domain=SeedDomain.Eval)


def sample_cell(
    depth: int, length: int, count: int, seed: int, grammar: Grammar = WHILE_GRAMMAR
) -> list[tuple[TokenSeq, Ast]]:
    """Up to `count` programs of exactly this depth and length, from the evaluation seed space."""
    require_domain(seed, SeedDomain.Eval)
    if length < MIN_PROGRAM_LENGTH or not analyze(grammar).cell_feasible(grammar.start, depth=depth, length=length):
        return []
    bucket = SampleBucket(length, length, depth, depth, seed=seed)
    sampler = ProgramSampler(grammar, max_attempts=EVAL_MAX_ATTEMPTS)
    rng = random.Random(seed)
    out: list[tuple[TokenSeq, Ast]] = []
    for _ in range(count):
        try:
            out.append(sampler.sample(bucket, rng))
        except BucketUnsatisfiableError:
            break
    return out


def _run_method(method: Method, tokens: TokenSeq, task: _CellTask) -> tuple[Ast | None, ErrorKind | None]:
    g = task.grammar
    if method is Method.Search:
        outcome = iddfs_parse(tokens, task.search_cfg, g)
        return outcome.tree, outcome.error_kind
    try:
        if method is Method.Oracle:
            return infer(tokens, g.start, OracleSelector(g), task.infer_cfg), None
        cfg = task.infer_cfg
        if method in _MODE_FOR:
            cfg = replace(cfg, mode=_MODE_FOR[method])
        assert task.model is not None
        return infer(tokens, g.start, task.model, cfg), None
    except InferenceError as e:
        return None, e.kind


def _summarize(method: Method, task: _CellTask, hits: int, errors: Counter, times: list[float]) -> EvalRecord:
    count = len(times)
    return EvalRecord(
        method=method.value,
        depth=task.depth,
        length=task.length,
        count=count,
        exact_match=hits / count if count else 0.0,
        errors=dict(sorted(errors.items())),
        mean_time_s=float(np.mean(times)) if count else None,
        p95_time_s=float(np.percentile(times, 95)) if count else None,
    )


def _evaluate_cell(task: _CellTask) -> list[EvalRecord]:
    programs = sample_cell(task.depth, task.length, task.per_cell, task.seed, task.grammar)
    if not programs:
        logger.warning("cell depth=%d length=%d is infeasible; reported empty", task.depth, task.length)
    elif len(programs) < task.per_cell:
        logger.warning(
            "cell depth=%d length=%d under-filled: %d of %d programs",
            task.depth,
            task.length,
            len(programs),
            task.per_cell,
        )

    records: list[EvalRecord] = []
    for method in task.methods:
        hits = 0
        errors: Counter = Counter()
        times: list[float] = []
        for tokens, expected in programs:
            t0 = time.perf_counter()
            tree, kind = _run_method(method, tokens, task)
            times.append(time.perf_counter() - t0)
            if tree is not None and ast_equal(tree, expected):
                hits += 1
            elif kind is not None:
                errors[kind.value] += 1
        rec = _summarize(method, task, hits, errors, times)
        if rec.count:
            logger.info(
                "%s depth=%d length=%d: %d/%d exact, mean %.4fs",
                rec.method,
                rec.depth,
                rec.length,
                hits,
                rec.count,
                rec.mean_time_s,
            )
        records.append(rec)
    return records


def parse_methods(text: str | Iterable[str]) -> tuple[Method, ...]:
    names = text.split(",") if isinstance(text, str) else list(text)
    out: list[Method] = []
    for name in names:
        name = name.strip()
        if not name:
            continue
        try:
            out.append(Method(name))
        except ValueError:
            valid = ", ".join(m.value for m in Method)
            raise ConfigError(f"unknown method {name!r} (expected one of {valid})") from None
    if not out:
        raise ConfigError("no evaluation methods given")
    return tuple(dict.fromkeys(out))


def evaluate_grid(
    model: GuiderModel | None,
    methods: Sequence[Method] | str,
    depths: Iterable[int],
    lengths: Iterable[int],
    per_cell: int = DEFAULT_PER_CELL,
    seed: int = 0,
    *,
    infer_cfg: InferConfig = InferConfig(),
    search_cfg: SearchConfig = SearchConfig(),
    grammar: Grammar = WHILE_GRAMMAR,
    jobs: int = 1,
) -> list[EvalRecord]:
    """One record per (method, depth, length), sorted in that order.

    Each cell draws `per_cell` fresh programs of exactly that depth and length
    from the evaluation seed space and scores every method by exact tree match.
    Cells the grammar cannot fill are reported with count 0.
    """
    if per_cell < 1:
        raise ConfigError(f"per_cell must be >= 1, got {per_cell}")
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    if not isinstance(methods, str):
        methods = [m.value if isinstance(m, Method) else m for m in methods]
    method_list = parse_methods(methods)
    if model is None and any(m in _NEEDS_MODEL for m in method_list):
        raise ConfigError("guided methods need a model")
    if model is not None:
        model.check_grammar(grammar)

    tasks = [
        _CellTask(
            depth=d,
            length=n,
            per_cell=per_cell,
            seed=cell_seed(seed, d, n),
            methods=method_list,
            model=model,
            infer_cfg=infer_cfg,
            search_cfg=search_cfg,
            grammar=grammar,
        )
        for d in sorted(set(depths))
        for n in sorted(set(lengths))
    ]

    records: list[EvalRecord] = []
    if jobs == 1:
        for task in tasks:
            records.extend(_evaluate_cell(task))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_evaluate_cell, tasks):
                records.extend(part)
    records.sort(key=EvalRecord.sort_key)
    return records

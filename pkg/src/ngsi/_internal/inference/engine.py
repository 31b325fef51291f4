"""Recursive guided inference.

At each layer the selector ranks the rules of the current nonterminal, the
decomposer splits the data for the chosen rule, and every component is
inferred recursively as the matching rhs nonterminal.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ...enums import InferMode
from ...exceptions import DepthLimitError, InconsistentParseError, UnparseableError
from ..grammar.symbols import Grammar, Nonterminal
from ..guider.model import GuiderModel
from ..syntax.decomposer import Decomposer, DecompositionFailure
from ..syntax.tree import Ast, TokenSeq, from_preorder, pretty_print
from .config import InferConfig
from .selectors import GuiderSelector, RuleSelector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class InferOutcome:
    tree: Ast
    # Sum of log-probabilities of the selected rules.
    score: float
    # SelectRule evaluations spent on this instance.
    expansions: int


class _BudgetExhausted(Exception):
    pass


class _Run:
    """Per-instance state: selector cache and effort counters."""

    def __init__(self, selector: RuleSelector, cfg: InferConfig) -> None:
        self.selector = selector
        self.grammar: Grammar = selector.grammar
        self.cfg = cfg
        self.decomposer = Decomposer(self.grammar)
        self.expansions = 0
        self.attempts = 0
        self._cache: dict[tuple[TokenSeq, int], np.ndarray] = {}

    def distribution(self, d: TokenSeq, nt: Nonterminal) -> np.ndarray:
        key = (d, nt.id)
        probs = self._cache.get(key)
        if probs is None:
            probs = self.selector.distribution(d, nt)
            self._cache[key] = probs
            self.expansions += 1
        return probs

    def ranked_rules(self, d: TokenSeq, nt: Nonterminal) -> list[tuple[int, float]]:
        """Applicable rules by descending probability, ties to the lower rule id."""
        probs = self.distribution(d, nt)
        ids = [r.id for r in self.grammar.rules_for(nt)]
        ids.sort(key=lambda i: (-probs[i], i))
        return [(i, float(probs[i])) for i in ids]

    def tick(self) -> None:
        self.attempts += 1
        if self.cfg.max_expansions is not None and self.attempts > self.cfg.max_expansions:
            raise _BudgetExhausted()

    def check_level(self, level: int, nt: Nonterminal) -> None:
        if level > self.cfg.max_recursion_depth:
            raise DepthLimitError(f"recursion depth limit {self.cfg.max_recursion_depth} exceeded at {nt.name}")


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else -math.inf


# --- Greedy ---


def _greedy(run: _Run, d: TokenSeq, nt: Nonterminal, level: int) -> tuple[Ast, float]:
    run.check_level(level, nt)
    run.tick()
    rule_id, p = run.ranked_rules(d, nt)[0]
    rule = run.grammar.rules[rule_id]
    parts = run.decomposer.decompose(d, rule)
    if isinstance(parts, DecompositionFailure):
        raise UnparseableError(f"unparseable: {parts}", position=parts.position)
    children: list[Ast] = []
    score = _log(p)
    for part, child_nt in zip(parts, rule.nonterminals):
        child, s = _greedy(run, part, child_nt, level + 1)
        children.append(child)
        score += s
    return Ast(rule_id, tuple(children)), score


# --- Rank fallback ---


def _fallback(run: _Run, d: TokenSeq, nt: Nonterminal, level: int) -> tuple[Ast, float]:
    run.check_level(level, nt)
    for rule_id, p in run.ranked_rules(d, nt):
        run.tick()
        rule = run.grammar.rules[rule_id]
        parts = run.decomposer.decompose(d, rule)
        if isinstance(parts, DecompositionFailure):
            continue
        children: list[Ast] = []
        score = _log(p)
        try:
            for part, child_nt in zip(parts, rule.nonterminals):
                child, s = _fallback(run, part, child_nt, level + 1)
                children.append(child)
                score += s
        except UnparseableError:
            continue
        tree = Ast(rule_id, tuple(children))
        if run.cfg.verify_reconstruction and pretty_print(tree, run.grammar) != d:
            continue
        return tree, score
    raise UnparseableError(f"unparseable: no {nt.name} rule fits {len(d)} tokens")


# --- Beam ---


@dataclass(frozen=True, slots=True)
class _Pending:
    data: TokenSeq
    nt: Nonterminal
    level: int


@dataclass(frozen=True, slots=True)
class _BeamState:
    score: float
    rules: tuple[int, ...]
    # Leftmost first.
    pending: tuple[_Pending, ...]
    greedy: bool

    @property
    def complete(self) -> bool:
        return not self.pending

    def sort_key(self) -> tuple[float, tuple[int, ...]]:
        return (-self.score, self.rules)


def _expand(run: _Run, state: _BeamState) -> tuple[list[_BeamState], bool]:
    """Successors of `state` through its leftmost pending nonterminal.

    The second value reports whether the depth limit cut this state off.
    """
    head, rest = state.pending[0], state.pending[1:]
    if head.level > run.cfg.max_recursion_depth:
        return [], True
    out: list[_BeamState] = []
    for rank, (rule_id, p) in enumerate(run.ranked_rules(head.data, head.nt)):
        if p <= 0.0:
            continue
        run.tick()
        rule = run.grammar.rules[rule_id]
        parts = run.decomposer.decompose(head.data, rule)
        if isinstance(parts, DecompositionFailure):
            continue
        children = tuple(_Pending(part, nt, head.level + 1) for part, nt in zip(parts, rule.nonterminals))
        out.append(
            _BeamState(
                score=state.score + math.log(p),
                rules=state.rules + (rule_id,),
                pending=children + rest,
                greedy=state.greedy and rank == 0,
            )
        )
    return out, False


def _beam(run: _Run, d: TokenSeq, nt: Nonterminal) -> tuple[Ast, float]:
    width = run.cfg.beam_width
    beam = [_BeamState(score=0.0, rules=(), pending=(_Pending(d, nt, 1),), greedy=True)]
    best: tuple[_BeamState, Ast] | None = None
    depth_hit = False

    while beam:
        candidates: list[_BeamState] = []
        for state in beam:
            successors, cut = _expand(run, state)
            depth_hit = depth_hit or cut
            candidates.extend(successors)

        survivors: list[_BeamState] = []
        for state in candidates:
            if not state.complete:
                survivors.append(state)
                continue
            tree = from_preorder(state.rules, run.grammar)
            if run.cfg.verify_reconstruction and pretty_print(tree, run.grammar) != d:
                continue
            if best is None or state.sort_key() < best[0].sort_key():
                best = (state, tree)

        survivors.sort(key=_BeamState.sort_key)
        beam = survivors[:width]
        # The greedy lineage always survives, so the beam never does worse than greedy.
        if not any(s.greedy for s in beam):
            pinned = next((s for s in survivors if s.greedy), None)
            if pinned is not None:
                beam[-1] = pinned

    if best is None:
        if depth_hit:
            raise DepthLimitError(f"recursion depth limit {run.cfg.max_recursion_depth} exceeded")
        raise UnparseableError(f"unparseable: beam of width {width} emptied")
    return best[1], best[0].score


# --- Entry points ---


Guide = Union[GuiderModel, RuleSelector]


def _selector(guide: Guide) -> RuleSelector:
    if isinstance(guide, GuiderModel):
        guide.check_grammar(guide.grammar)
        return GuiderSelector(guide)
    return guide


def infer_with_stats(
    d: TokenSeq,
    nt: Nonterminal | str,
    guide: Guide,
    cfg: InferConfig = InferConfig(),
) -> InferOutcome:
    """Infer the tree rooted at `nt` whose yield is `d`, with its score and effort."""
    run = _Run(_selector(guide), cfg)
    root = run.grammar.nonterminal(nt)
    if not d:
        raise UnparseableError("unparseable: empty input", position=0)

    try:
        if cfg.mode is InferMode.Greedy:
            tree, score = _greedy(run, d, root, 1)
        elif cfg.mode is InferMode.Fallback:
            tree, score = _fallback(run, d, root, 1)
        else:
            tree, score = _beam(run, d, root)
    except _BudgetExhausted:
        raise UnparseableError(f"unparseable: gave up after {run.attempts - 1} rule applications") from None

    if cfg.verify_reconstruction and pretty_print(tree, run.grammar) != d:
        raise InconsistentParseError("inferred tree does not reconstruct the input")
    logger.debug("inferred %d tokens with %d selector calls", len(d), run.expansions)
    return InferOutcome(tree=tree, score=score, expansions=run.expansions)


def infer(d: TokenSeq, nt: Nonterminal | str, guide: Guide, cfg: InferConfig = InferConfig()) -> Ast:
    return infer_with_stats(d, nt, guide, cfg).tree

"""Random program generation under length/depth constraints.

Generation expands the leftmost open nonterminal first. Each choice only
considers rules that still fit the bucket: the rule's minimum yield within the
remaining depth allowance, plus everything already emitted, plus the minimum
yield still owed to open siblings, must stay within `max_length`. That keeps
every draw inside the upper bounds with no dead ends; the lower bounds are met
by rejection.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from ...exceptions import BucketUnsatisfiableError
from ..grammar.analysis import GrammarAnalysis, analyze
from ..grammar.symbols import Grammar, Nonterminal, ProductionRule, Token
from ..grammar.while_lang import WHILE_GRAMMAR
from ..syntax.tree import Ast, TokenSeq, depth
from .buckets import SampleBucket

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 1000


@dataclass(slots=True)
class _DrawState:
    rng: random.Random
    target: int
    max_length: int
    tokens: list[int]


class ProgramSampler:
    """Top-down sampler biased toward a randomly drawn target length."""

    def __init__(
        self,
        grammar: Grammar = WHILE_GRAMMAR,
        *,
        max_attempts: int = DEFAULT_MAX_ATTEMPTS,
        grow_weight: float = 3.0,
        overshoot_weight: float = 0.2,
    ) -> None:
        self.grammar = grammar
        self.analysis: GrammarAnalysis = analyze(grammar)
        self.max_attempts = max_attempts
        self.grow_weight = grow_weight
        self.overshoot_weight = overshoot_weight
        self._need_cache: dict[tuple[int, int], int | None] = {}

    def _rule_need(self, rule: ProductionRule, allowance: int) -> int | None:
        key = (rule.id, allowance)
        if key not in self._need_cache:
            self._need_cache[key] = self.analysis.rule_min_length_within(rule, allowance)
        return self._need_cache[key]

    def _min_len(self, nt: Nonterminal, allowance: int) -> int:
        n = self.analysis.min_length_within(nt, allowance)
        if n is None:
            raise BucketUnsatisfiableError(f"{nt.name} cannot be derived within depth {allowance}")
        return n

    def _expand(self, nt: Nonterminal, allowance: int, reserve: int, st: _DrawState) -> Ast:
        emitted = len(st.tokens)
        candidates: list[tuple[ProductionRule, int]] = []
        for rule in self.grammar.rules_for(nt):
            need = self._rule_need(rule, allowance)
            if need is not None and emitted + need + reserve <= st.max_length:
                candidates.append((rule, need))
        if not candidates:
            # Unreachable while the caller keeps its reservation invariant.
            raise BucketUnsatisfiableError(f"no rule for {nt.name} fits the remaining budget")

        floor = min(need for _, need in candidates)
        slack = st.target - (emitted + reserve + floor)
        weights = []
        for _, need in candidates:
            extra = need - floor
            if extra == 0:
                weights.append(1.0)
            elif extra <= slack:
                weights.append(self.grow_weight)
            else:
                weights.append(self.overshoot_weight)
        rule = st.rng.choices(candidates, weights=weights, k=1)[0][0]

        children: list[Ast] = []
        rhs = rule.rhs
        for i, sym in enumerate(rhs):
            if isinstance(sym, Token):
                st.tokens.append(sym.id)
                continue
            owed = reserve
            for later in rhs[i + 1 :]:
                owed += 1 if isinstance(later, Token) else self._min_len(later, allowance - 1)
            children.append(self._expand(sym, allowance - 1, owed, st))
        return Ast(rule.id, tuple(children))

    def draw(self, bucket: SampleBucket, rng: random.Random) -> tuple[TokenSeq, Ast]:
        """One unconstrained-below draw: respects the upper bounds only."""
        st = _DrawState(
            rng=rng,
            target=rng.randint(bucket.min_length, bucket.max_length),
            max_length=bucket.max_length,
            tokens=[],
        )
        tree = self._expand(self.grammar.start, bucket.max_depth, 0, st)
        return tuple(st.tokens), tree

    def sample(self, bucket: SampleBucket, rng: random.Random | None = None) -> tuple[TokenSeq, Ast]:
        if rng is None:
            rng = random.Random(bucket.seed)

        start = self.grammar.start
        if not self.analysis.bucket_feasible(
            start,
            min_length=bucket.min_length,
            max_length=bucket.max_length,
            min_depth=bucket.min_depth,
            max_depth=bucket.max_depth,
        ):
            raise BucketUnsatisfiableError(f"bucket {bucket} admits no program")

        for _ in range(self.max_attempts):
            tokens, tree = self.draw(bucket, rng)
            if bucket.contains(length=len(tokens), depth=depth(tree)):
                return tokens, tree
        raise BucketUnsatisfiableError(f"bucket {bucket} not satisfied within {self.max_attempts} attempts")


_DEFAULT_SAMPLER: ProgramSampler | None = None


def _default_sampler() -> ProgramSampler:
    global _DEFAULT_SAMPLER
    if _DEFAULT_SAMPLER is None:
        _DEFAULT_SAMPLER = ProgramSampler()
    return _DEFAULT_SAMPLER


def sample_program(
    bucket: SampleBucket,
    rng: random.Random | None = None,
    *,
    grammar: Grammar = WHILE_GRAMMAR,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> tuple[TokenSeq, Ast]:
    """Draw one (program, tree) pair inside `bucket`.

    With `rng=None` the draw is seeded from `bucket.seed`, so equal buckets give
    equal programs.
    """
    if grammar is WHILE_GRAMMAR and max_attempts == DEFAULT_MAX_ATTEMPTS:
        sampler = _default_sampler()
    else:
        sampler = ProgramSampler(grammar, max_attempts=max_attempts)
    return sampler.sample(bucket, rng)

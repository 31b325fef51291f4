from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..grammar.symbols import Grammar, Nonterminal, Token
from ..grammar.while_lang import WHILE_GRAMMAR
from ..syntax.tree import Ast, TokenSeq


@dataclass(frozen=True, slots=True)
class TrainingPair:
    """One supervised SelectRule example: the yield of a subtree, its root type and rule."""

    input: TokenSeq
    nt: Nonterminal
    label: int


def extract_training_pairs(t: Ast, grammar: Grammar = WHILE_GRAMMAR) -> list[TrainingPair]:
    """One pair per node of `t`, in pre-order."""
    pairs: list[TrainingPair | None] = []

    def visit(node: Ast) -> TokenSeq:
        slot = len(pairs)
        pairs.append(None)
        rule = grammar.rules[node.rule]
        children = iter(node.children)
        out: list[int] = []
        for sym in rule.rhs:
            if isinstance(sym, Token):
                out.append(sym.id)
            else:
                out.extend(visit(next(children)))
        seq = tuple(out)
        pairs[slot] = TrainingPair(input=seq, nt=rule.lhs, label=rule.id)
        return seq

    visit(t)
    return [p for p in pairs if p is not None]


class BalancedPairSampler:
    """Minibatch sampler that is uniform over nonterminal classes.

    Chain rules (E3, T2, F2, F3) dominate raw subtree counts; drawing the class
    first keeps rare rule families such as conditions and loops visible.
    """

    def __init__(self, pairs: Sequence[TrainingPair]) -> None:
        groups: dict[int, list[TrainingPair]] = {}
        for p in pairs:
            groups.setdefault(p.nt.id, []).append(p)
        self._classes = sorted(groups)
        self._groups = [groups[k] for k in self._classes]
        self.size = len(pairs)

    @property
    def class_count(self) -> int:
        return len(self._classes)

    def batch(self, rng: np.random.Generator, size: int) -> list[TrainingPair]:
        if not self._groups:
            return []
        picks = rng.integers(0, len(self._groups), size=size)
        out: list[TrainingPair] = []
        for g in picks:
            group = self._groups[int(g)]
            out.append(group[int(rng.integers(0, len(group)))])
        return out

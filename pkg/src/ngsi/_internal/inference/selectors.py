"""SelectRule implementations: the trained guider and a parser-backed oracle."""

from __future__ import annotations

from typing import Protocol

import numpy as np

from ...exceptions import GrammarError, UnparseableError
from ..grammar.symbols import Grammar, Nonterminal
from ..grammar.while_lang import WHILE_GRAMMAR
from ..guider.model import GuiderModel, predict_rule_distribution, rule_masks
from ..syntax.reference_parser import reference_parse
from ..syntax.tree import TokenSeq


class RuleSelector(Protocol):
    grammar: Grammar

    def distribution(self, d: TokenSeq, nt: Nonterminal) -> np.ndarray:
        """Probabilities over all rule ids, zero on rules that do not expand `nt`."""
        ...


class GuiderSelector:
    def __init__(self, model: GuiderModel) -> None:
        self.model = model
        self.grammar = model.grammar

    def distribution(self, d: TokenSeq, nt: Nonterminal) -> np.ndarray:
        return predict_rule_distribution(d, nt, self.model)


class OracleSelector:
    """Point mass on the reference parser's root rule.

    Fragments the parser rejects get a uniform distribution over the
    applicable rules, so the engine still has something to try.
    """

    def __init__(self, grammar: Grammar = WHILE_GRAMMAR) -> None:
        if grammar.fingerprint() != WHILE_GRAMMAR.fingerprint():
            raise GrammarError("the oracle selector only supports the shipped grammar")
        self.grammar = grammar

    def distribution(self, d: TokenSeq, nt: Nonterminal) -> np.ndarray:
        mask = rule_masks(self.grammar)[nt.id]
        try:
            tree = reference_parse(d, nt)
        except UnparseableError:
            return mask / mask.sum()
        out = np.zeros(len(self.grammar.rules), dtype=np.float64)
        out[tree.rule] = 1.0
        return out

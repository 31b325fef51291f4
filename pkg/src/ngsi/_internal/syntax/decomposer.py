"""Hand-coded inverse of a rule application (DecomposeData).

Given a token sequence and a rule, split the sequence into one component per
rhs nonterminal. The split is one left-to-right scan: a terminal that follows a
nonterminal closes that nonterminal's component at its first occurrence at
nesting level zero, where `(`, `if` and `while` open a level and `)`, `endif`
and `endwhile` close one.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..grammar.symbols import Grammar, ProductionRule, Token
from ..grammar.while_lang import CLOSERS, OPENERS, WHILE_GRAMMAR
from .tree import TokenSeq


@dataclass(frozen=True, slots=True)
class DecompositionFailure:
    """Recoverable: the rule does not fit the data. The engine tries another rule."""

    rule: str
    reason: str
    position: int | None = None

    def __str__(self) -> str:
        if self.position is None:
            return f"{self.rule}: {self.reason}"
        return f"{self.rule}: {self.reason} (position={self.position})"


class Decomposer:
    """Rule-driven splitter bound to one grammar's bracket tokens."""

    def __init__(self, grammar: Grammar = WHILE_GRAMMAR) -> None:
        self.grammar = grammar
        self._openers = frozenset(t.id for t in grammar.vocabulary if t.text in OPENERS)
        self._closers = frozenset(t.id for t in grammar.vocabulary if t.text in CLOSERS)

    def _find_top_level(self, d: TokenSeq, start: int, target: int) -> int | None:
        level = 0
        for i in range(start, len(d)):
            tok = d[i]
            if level == 0 and tok == target:
                return i
            if tok in self._openers:
                level += 1
            elif tok in self._closers:
                level -= 1
                if level < 0:
                    return None
        return None

    def decompose(self, d: TokenSeq, rule: ProductionRule) -> tuple[TokenSeq, ...] | DecompositionFailure:
        if not d:
            return DecompositionFailure(rule.label, "empty input", 0)

        components: list[TokenSeq] = []
        pos = 0
        pending = False  # a nonterminal component starts at `pos` and is still open

        for sym in rule.rhs:
            if not isinstance(sym, Token):
                if pending:
                    # Two adjacent nonterminals cannot be split by a delimiter scan.
                    return DecompositionFailure(rule.label, "adjacent nonterminals in rhs")
                pending = True
                continue

            if pending:
                idx = self._find_top_level(d, pos, sym.id)
                if idx is None:
                    return DecompositionFailure(rule.label, f"{sym.text!r} not found at top level", pos)
                if idx == pos:
                    return DecompositionFailure(rule.label, f"empty component before {sym.text!r}", pos)
                components.append(d[pos:idx])
                pos = idx + 1
                pending = False
                continue

            if pos >= len(d) or d[pos] != sym.id:
                return DecompositionFailure(rule.label, f"expected {sym.text!r}", pos)
            pos += 1

        if pending:
            if pos >= len(d):
                return DecompositionFailure(rule.label, "empty trailing component", pos)
            components.append(d[pos:])
        elif pos != len(d):
            return DecompositionFailure(rule.label, "leftover tokens", pos)

        return tuple(components)


_DEFAULT = Decomposer()


def decompose(
    d: TokenSeq,
    rule: ProductionRule,
    grammar: Grammar = WHILE_GRAMMAR,
) -> tuple[TokenSeq, ...] | DecompositionFailure:
    """Split `d` into one component per rhs nonterminal of `rule`.

    Re-interleaving the components with the rule's rhs terminals reproduces `d`
    token for token whenever the result is not a DecompositionFailure.
    """
    splitter = _DEFAULT if grammar is WHILE_GRAMMAR else Decomposer(grammar)
    return splitter.decompose(d, rule)


def interleave(components: tuple[TokenSeq, ...], rule: ProductionRule) -> TokenSeq:
    """Inverse of decompose: put the rhs terminals back between components."""
    out: list[int] = []
    parts = iter(components)
    for sym in rule.rhs:
        if isinstance(sym, Token):
            out.append(sym.id)
        else:
            out.extend(next(parts))
    return tuple(out)

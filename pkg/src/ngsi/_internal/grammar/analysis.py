"""Yield-length and depth analysis of a grammar.

Length sets are kept as integer bitmasks (bit `n` set means a yield of `n`
tokens is derivable), capped at `LENGTH_CAP`. Depth is the node count of the
longest root-to-leaf path, with allowance `a` meaning depth <= a.
"""

from __future__ import annotations

import functools
import math

from .symbols import Grammar, Nonterminal, ProductionRule


LENGTH_CAP = 160
_CAP_MASK = (1 << (LENGTH_CAP + 1)) - 1


def _sumset(a: int, b: int) -> int:
    out = 0
    while a:
        low = a & -a
        out |= b << (low.bit_length() - 1)
        a ^= low
    return out & _CAP_MASK


def _lowest_bit(mask: int) -> int | None:
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1


class GrammarAnalysis:
    """Lazily extended per-depth tables for one grammar."""

    def __init__(self, grammar: Grammar) -> None:
        self.grammar = grammar
        n = len(grammar.nonterminals)
        # _le[a][nt]: lengths derivable with depth <= a; _exact[a][nt]: depth == a.
        self._le: list[list[int]] = [[0] * n]
        self._exact: list[list[int]] = [[0] * n]
        self.min_length: tuple[float, ...] = self._fixpoint_min_length()
        self.min_depth: tuple[float, ...] = self._fixpoint_min_depth()

    # --- Fixpoints over the whole grammar ---

    def _fixpoint_min_length(self) -> tuple[float, ...]:
        g = self.grammar
        best = [math.inf] * len(g.nonterminals)
        changed = True
        while changed:
            changed = False
            for rule in g.rules:
                cand = len(rule.terminals) + sum(best[c.id] for c in rule.nonterminals)
                if cand < best[rule.lhs.id]:
                    best[rule.lhs.id] = cand
                    changed = True
        return tuple(best)

    def _fixpoint_min_depth(self) -> tuple[float, ...]:
        g = self.grammar
        best = [math.inf] * len(g.nonterminals)
        changed = True
        while changed:
            changed = False
            for rule in g.rules:
                cand = 1 + max((best[c.id] for c in rule.nonterminals), default=0)
                if cand < best[rule.lhs.id]:
                    best[rule.lhs.id] = cand
                    changed = True
        return tuple(best)

    def rule_min_length(self, rule: ProductionRule) -> float:
        return len(rule.terminals) + sum(self.min_length[c.id] for c in rule.nonterminals)

    def rule_min_depth(self, rule: ProductionRule) -> float:
        return 1 + max((self.min_depth[c.id] for c in rule.nonterminals), default=0)

    # --- Depth-bounded tables ---

    def _extend_to(self, allowance: int) -> None:
        g = self.grammar
        while len(self._le) <= allowance:
            prev_le = self._le[-1]
            prev_exact = self._exact[-1]
            first_level = len(self._le) == 1
            le = [0] * len(g.nonterminals)
            exact = [0] * len(g.nonterminals)
            for rule in g.rules:
                base = 1 << len(rule.terminals)
                children = rule.nonterminals
                if not children:
                    le[rule.lhs.id] |= base
                    if first_level:
                        exact[rule.lhs.id] |= base
                    continue

                all_le = base
                for c in children:
                    all_le = _sumset(all_le, prev_le[c.id])
                le[rule.lhs.id] |= all_le

                for j in range(len(children)):
                    acc = base
                    for i, c in enumerate(children):
                        acc = _sumset(acc, prev_exact[c.id] if i == j else prev_le[c.id])
                        if acc == 0:
                            break
                    exact[rule.lhs.id] |= acc
            self._le.append(le)
            self._exact.append(exact)

    def lengths_at_most(self, nt: Nonterminal, allowance: int) -> int:
        """Bitmask of yield lengths of `nt` derivable with depth <= allowance."""
        if allowance <= 0:
            return 0
        self._extend_to(allowance)
        return self._le[allowance][nt.id]

    def lengths_exact(self, nt: Nonterminal, depth: int) -> int:
        if depth <= 0:
            return 0
        self._extend_to(depth)
        return self._exact[depth][nt.id]

    def min_length_within(self, nt: Nonterminal, allowance: int) -> int | None:
        """Smallest yield of `nt` within a depth allowance, or None if impossible."""
        return _lowest_bit(self.lengths_at_most(nt, allowance))

    def rule_min_length_within(self, rule: ProductionRule, allowance: int) -> int | None:
        total = len(rule.terminals)
        for c in rule.nonterminals:
            n = self.min_length_within(c, allowance - 1)
            if n is None:
                return None
            total += n
        return total

    def cell_feasible(self, nt: Nonterminal, *, depth: int, length: int) -> bool:
        if length > LENGTH_CAP:
            return False
        return bool((self.lengths_exact(nt, depth) >> length) & 1)

    def bucket_feasible(
        self,
        nt: Nonterminal,
        *,
        min_length: int,
        max_length: int,
        min_depth: int,
        max_depth: int,
    ) -> bool:
        hi = min(max_length, LENGTH_CAP)
        if hi < min_length:
            return False
        window = ((1 << (hi + 1)) - 1) ^ ((1 << min_length) - 1)
        for d in range(max(1, min_depth), max_depth + 1):
            if self.lengths_exact(nt, d) & window:
                return True
        return False


@functools.lru_cache(maxsize=8)
def analyze(grammar: Grammar) -> GrammarAnalysis:
    return GrammarAnalysis(grammar)

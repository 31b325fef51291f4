from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from ...exceptions import MalformedTreeError
from ..grammar.symbols import Grammar, Nonterminal, Token
from ..grammar.while_lang import WHILE_GRAMMAR


TokenSeq = tuple[int, ...]
"""A program fragment: ordered token ids of the grammar vocabulary."""


@dataclass(frozen=True, slots=True)
class Ast:
    """Rule-application tree.

    Nodes store rule ids only; terminals are implied by the rule. `children`
    holds one subtree per nonterminal of the rule's rhs, in rhs order.
    """

    rule: int
    children: tuple["Ast", ...] = ()


def check_node(t: Ast, grammar: Grammar = WHILE_GRAMMAR, *, expected: Nonterminal | None = None) -> None:
    """Validate one node against its rule (not recursive)."""
    if not (0 <= t.rule < len(grammar.rules)):
        raise MalformedTreeError(f"Unknown rule id {t.rule}")
    rule = grammar.rules[t.rule]
    if expected is not None and rule.lhs != expected:
        raise MalformedTreeError(f"{rule.label} has lhs {rule.lhs.name}, expected {expected.name}")
    wanted = rule.nonterminals
    if len(t.children) != len(wanted):
        raise MalformedTreeError(f"{rule.label} expects {len(wanted)} children, got {len(t.children)}")
    for child, nt in zip(t.children, wanted):
        if not (0 <= child.rule < len(grammar.rules)):
            raise MalformedTreeError(f"Unknown rule id {child.rule} under {rule.label}")
        child_rule = grammar.rules[child.rule]
        if child_rule.lhs != nt:
            raise MalformedTreeError(
                f"{rule.label}: child {child_rule.label} has lhs {child_rule.lhs.name}, expected {nt.name}"
            )


def validate_tree(t: Ast, grammar: Grammar = WHILE_GRAMMAR, *, root: Nonterminal | None = None) -> None:
    check_node(t, grammar, expected=root)
    for child in t.children:
        validate_tree(child, grammar)


def pretty_print(t: Ast, grammar: Grammar = WHILE_GRAMMAR) -> TokenSeq:
    """Terminal yield of the derivation rooted at `t`."""
    out: list[int] = []
    _emit(t, grammar, out)
    return tuple(out)


def _emit(t: Ast, grammar: Grammar, out: list[int]) -> None:
    check_node(t, grammar)
    children = iter(t.children)
    for sym in grammar.rules[t.rule].rhs:
        if isinstance(sym, Token):
            out.append(sym.id)
        else:
            _emit(next(children), grammar, out)


def depth(t: Ast) -> int:
    """Node count of the longest root-to-leaf path; chain nodes count."""
    if not t.children:
        return 1
    return 1 + max(depth(c) for c in t.children)


def node_count(t: Ast) -> int:
    return 1 + sum(node_count(c) for c in t.children)


def ast_equal(a: Ast, b: Ast) -> bool:
    if a.rule != b.rule or len(a.children) != len(b.children):
        return False
    return all(ast_equal(x, y) for x, y in zip(a.children, b.children))


def iter_preorder(t: Ast) -> Iterator[Ast]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def from_preorder(rule_ids: Sequence[int], grammar: Grammar = WHILE_GRAMMAR) -> Ast:
    """Rebuild a tree from its pre-order rule-id list (a leftmost derivation)."""
    pos = 0

    def build() -> Ast:
        nonlocal pos
        if pos >= len(rule_ids):
            raise MalformedTreeError("Pre-order rule list ended early")
        rule = grammar.rule_by_id(rule_ids[pos])
        pos += 1
        return Ast(rule.id, tuple(build() for _ in range(rule.arity)))

    tree = build()
    if pos != len(rule_ids):
        raise MalformedTreeError(f"Pre-order rule list has {len(rule_ids) - pos} trailing rules")
    return tree

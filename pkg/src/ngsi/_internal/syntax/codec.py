"""Text codecs: token strings and the parenthesized pre-order AST format.

AST text lists rule labels in pre-order, one parenthesized group per node:
`(S2 (A1 (V1) (E3 (T2 (F3 (C2))))))`.
"""

from __future__ import annotations

from ...exceptions import GrammarError, MalformedTreeError, TokenizeError, TreeFormatError
from ..grammar.symbols import Grammar, Nonterminal
from ..grammar.while_lang import WHILE_GRAMMAR
from .tree import Ast, TokenSeq, check_node


def tokenize(text: str, grammar: Grammar = WHILE_GRAMMAR) -> TokenSeq:
    """Split a whitespace-joined terminal string into token ids."""
    out: list[int] = []
    for i, word in enumerate(text.split()):
        tid = grammar.token_id(word)
        if tid is None:
            raise TokenizeError(f"Unknown terminal {word!r} at token {i}")
        out.append(tid)
    return tuple(out)


def detokenize(tokens: TokenSeq, grammar: Grammar = WHILE_GRAMMAR) -> str:
    vocab = grammar.vocabulary
    try:
        return " ".join(vocab[t].text for t in tokens)
    except IndexError:
        bad = next(t for t in tokens if not (0 <= t < len(vocab)))
        raise TokenizeError(f"Token id {bad} is outside the vocabulary") from None


def serialize(t: Ast, grammar: Grammar = WHILE_GRAMMAR) -> str:
    parts: list[str] = []

    def emit(node: Ast) -> None:
        check_node(node, grammar)
        parts.append("(" + grammar.rules[node.rule].label)
        for child in node.children:
            parts.append(" ")
            emit(child)
        parts.append(")")

    emit(t)
    return "".join(parts)


class _TreeTextReader:
    def __init__(self, text: str, grammar: Grammar) -> None:
        self._text = text
        self._pos = 0
        self._grammar = grammar

    def _skip_ws(self) -> None:
        while self._pos < len(self._text) and self._text[self._pos].isspace():
            self._pos += 1

    def _expect(self, ch: str) -> None:
        self._skip_ws()
        if self._pos >= len(self._text) or self._text[self._pos] != ch:
            found = "end of text" if self._pos >= len(self._text) else repr(self._text[self._pos])
            raise TreeFormatError(f"Expected {ch!r}, found {found}", offset=self._pos)
        self._pos += 1

    def _read_label(self) -> str:
        self._skip_ws()
        start = self._pos
        while self._pos < len(self._text) and self._text[self._pos].isalnum():
            self._pos += 1
        if start == self._pos:
            raise TreeFormatError("Expected a rule label", offset=start)
        return self._text[start : self._pos]

    def read_node(self, expected: Nonterminal | None) -> Ast:
        self._expect("(")
        label_offset = self._pos
        label = self._read_label()
        try:
            rule = self._grammar.rule_by_label(label)
        except GrammarError:
            raise TreeFormatError(f"Unknown rule label {label!r}", offset=label_offset) from None
        if expected is not None and rule.lhs != expected:
            raise TreeFormatError(
                f"{label} has lhs {rule.lhs.name}, expected {expected.name}", offset=label_offset
            )

        children: list[Ast] = []
        wanted = rule.nonterminals
        while True:
            self._skip_ws()
            if self._pos < len(self._text) and self._text[self._pos] == "(":
                if len(children) >= len(wanted):
                    raise TreeFormatError(f"{label} takes {len(wanted)} children", offset=self._pos)
                children.append(self.read_node(wanted[len(children)]))
                continue
            break
        self._expect(")")

        node = Ast(rule.id, tuple(children))
        try:
            check_node(node, self._grammar)
        except MalformedTreeError as e:
            raise TreeFormatError(str(e), offset=label_offset) from None
        return node

    def read(self, root: Nonterminal | None) -> Ast:
        tree = self.read_node(root)
        self._skip_ws()
        if self._pos != len(self._text):
            raise TreeFormatError("Trailing text after tree", offset=self._pos)
        return tree


def deserialize(text: str, grammar: Grammar = WHILE_GRAMMAR, *, root: Nonterminal | None = None) -> Ast:
    return _TreeTextReader(text, grammar).read(root)

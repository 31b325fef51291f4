"""Line-oriented dataset files.

Program corpus: `<space-joined tokens>\\t<AST text>` per line.
Training pairs: `<space-joined tokens>\\t<nonterminal name>\\t<rule label>` per line.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from ...exceptions import GrammarError, TreeFormatError
from ..grammar.symbols import Grammar
from ..grammar.while_lang import WHILE_GRAMMAR
from ..syntax.codec import deserialize, detokenize, serialize, tokenize
from ..syntax.tree import Ast, TokenSeq
from .pairs import TrainingPair


@dataclass(frozen=True, slots=True)
class CorpusLine:
    line_no: int
    tokens_text: str
    tree_text: str | None


def format_corpus_line(tokens: TokenSeq, tree: Ast, grammar: Grammar = WHILE_GRAMMAR) -> str:
    return f"{detokenize(tokens, grammar)}\t{serialize(tree, grammar)}"


def split_corpus_lines(lines: Iterable[str], *, keep_blank: bool = False) -> Iterator[CorpusLine]:
    """Raw corpus lines. Parsing is left to the caller.

    Blank lines are skipped unless `keep_blank` is set, in which case they come
    through with empty token text so that every input line gets an output row.
    """
    for i, line in enumerate(lines, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            if keep_blank:
                yield CorpusLine(line_no=i, tokens_text="", tree_text=None)
            continue
        tokens_text, sep, tree_text = line.partition("\t")
        yield CorpusLine(line_no=i, tokens_text=tokens_text, tree_text=tree_text if sep else None)


def iter_corpus_lines(path: str | Path) -> Iterator[CorpusLine]:
    with open(path, "r", encoding="utf-8") as f:
        yield from split_corpus_lines(f)


def parse_corpus_line(line: CorpusLine, grammar: Grammar = WHILE_GRAMMAR) -> tuple[TokenSeq, Ast | None]:
    tokens = tokenize(line.tokens_text, grammar)
    tree = None if line.tree_text is None else deserialize(line.tree_text, grammar, root=grammar.start)
    return tokens, tree


def write_corpus(path: str | Path, programs: Iterable[tuple[TokenSeq, Ast]], grammar: Grammar = WHILE_GRAMMAR) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for tokens, tree in programs:
            f.write(format_corpus_line(tokens, tree, grammar))
            f.write("\n")
            n += 1
    return n


def read_corpus(path: str | Path, grammar: Grammar = WHILE_GRAMMAR) -> list[tuple[TokenSeq, Ast]]:
    out: list[tuple[TokenSeq, Ast]] = []
    for line in iter_corpus_lines(path):
        tokens, tree = parse_corpus_line(line, grammar)
        if tree is None:
            raise TreeFormatError(f"line {line.line_no}: missing AST column")
        out.append((tokens, tree))
    return out


def format_pair_line(pair: TrainingPair, grammar: Grammar = WHILE_GRAMMAR) -> str:
    return f"{detokenize(pair.input, grammar)}\t{pair.nt.name}\t{grammar.rules[pair.label].label}"


def write_dataset(path: str | Path, pairs: Iterable[TrainingPair], grammar: Grammar = WHILE_GRAMMAR) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for pair in pairs:
            f.write(format_pair_line(pair, grammar))
            f.write("\n")
            n += 1
    return n


def read_dataset(path: str | Path, grammar: Grammar = WHILE_GRAMMAR) -> list[TrainingPair]:
    out: list[TrainingPair] = []
    with open(path, "r", encoding="utf-8") as f:
        for i, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise TreeFormatError(f"line {i}: expected 3 tab-separated fields, got {len(fields)}")
            tokens_text, nt_name, label = fields
            try:
                nt = grammar.nonterminal(nt_name)
                rule = grammar.rule_by_label(label)
            except GrammarError as e:
                raise TreeFormatError(f"line {i}: {e}") from None
            if rule.lhs != nt:
                raise TreeFormatError(f"line {i}: {label} does not expand {nt_name}")
            out.append(TrainingPair(input=tokenize(tokens_text, grammar), nt=nt, label=rule.id))
    return out

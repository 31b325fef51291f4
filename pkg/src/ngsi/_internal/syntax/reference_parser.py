"""Deterministic recursive-descent parser for the shipped grammar.

It is the ground truth for training labels and for checking the guided engine,
so it shares no code with the decomposer. Chain nodes (E3, T2, F2, F3) are
always emitted explicitly.
"""

from __future__ import annotations

from ...exceptions import UnparseableError
from ..grammar.symbols import Nonterminal
from ..grammar.while_lang import DIGITS, VARIABLES, WHILE_GRAMMAR
from .parse_context import ParseContext
from .tree import Ast, TokenSeq


_G = WHILE_GRAMMAR
_R = {r.label: r.id for r in _G.rules}

_VARIABLE_RULES = {v: _R[f"V{i + 1}"] for i, v in enumerate(VARIABLES)}
_DIGIT_RULES = {d: _R[f"C{i + 1}"] for i, d in enumerate(DIGITS)}
_STATEMENT_START = frozenset(VARIABLES) | {"if", "while"}


class _NoParse(Exception):
    pass


class _Cursor:
    def __init__(self, words: list[str], ctx: ParseContext) -> None:
        self.words = words
        self.pos = 0
        self.ctx = ctx

    def peek(self) -> str | None:
        return self.words[self.pos] if self.pos < len(self.words) else None

    def take(self, text: str) -> None:
        if self.peek() != text:
            self.fail(repr(text))
        self.pos += 1

    def fail(self, expected: str) -> None:
        self.ctx.fail(self.pos, expected)
        raise _NoParse()

    # --- Statements ---

    def stmt(self) -> Ast:
        simp = self.simp_stmt()
        self.take(";")
        if self.peek() in _STATEMENT_START:
            return Ast(_R["S1"], (simp, self.stmt()))
        return Ast(_R["S2"], (simp,))

    def simp_stmt(self) -> Ast:
        tok = self.peek()
        if tok in _VARIABLE_RULES:
            var = self.var()
            self.take("=")
            return Ast(_R["A1"], (var, self.aexpr()))
        if tok == "if":
            self.take("if")
            cond = self.bexpr()
            self.take("then")
            then_branch = self.stmt()
            self.take("else")
            else_branch = self.stmt()
            self.take("endif")
            return Ast(_R["I1"], (cond, then_branch, else_branch))
        if tok == "while":
            self.take("while")
            cond = self.bexpr()
            self.take("do")
            body = self.stmt()
            self.take("endwhile")
            return Ast(_R["W1"], (cond, body))
        self.fail("statement")
        raise AssertionError("unreachable")

    # --- Arithmetic ---

    def aexpr(self) -> Ast:
        term = self.aterm()
        op = self.peek()
        if op == "+":
            self.take("+")
            return Ast(_R["E1"], (term, self.aexpr()))
        if op == "-":
            self.take("-")
            return Ast(_R["E2"], (term, self.aexpr()))
        return Ast(_R["E3"], (term,))

    def aterm(self) -> Ast:
        factor = self.afactor()
        if self.peek() == "*":
            self.take("*")
            return Ast(_R["T1"], (factor, self.aterm()))
        return Ast(_R["T2"], (factor,))

    def afactor(self) -> Ast:
        tok = self.peek()
        if tok == "(":
            self.take("(")
            inner = self.aexpr()
            self.take(")")
            return Ast(_R["F1"], (inner,))
        if tok in _VARIABLE_RULES:
            return Ast(_R["F2"], (self.var(),))
        if tok in _DIGIT_RULES:
            return Ast(_R["F3"], (self.const(),))
        self.fail("expression")
        raise AssertionError("unreachable")

    # --- Conditions ---

    def bexpr(self) -> Ast:
        tok = self.peek()
        if tok == "not":
            self.take("not")
            return Ast(_R["B3"], (self.bexpr(),))

        if tok == "(":
            # "(" opens either a connective (B4/B5) or a parenthesized operand.
            saved = self.pos
            try:
                return self._connective()
            except _NoParse:
                self.pos = saved

        left = self.aexpr()
        op = self.peek()
        if op == "<":
            self.take("<")
            return Ast(_R["B1"], (left, self.aexpr()))
        if op == "==":
            self.take("==")
            return Ast(_R["B2"], (left, self.aexpr()))
        self.fail("'<' or '=='")
        raise AssertionError("unreachable")

    def _connective(self) -> Ast:
        self.take("(")
        left = self.bexpr()
        op = self.peek()
        if op not in ("and", "or"):
            self.fail("'and' or 'or'")
        self.pos += 1
        right = self.bexpr()
        self.take(")")
        return Ast(_R["B4"] if op == "and" else _R["B5"], (left, right))

    # --- Leaves ---

    def var(self) -> Ast:
        tok = self.peek()
        rule = _VARIABLE_RULES.get(tok) if tok is not None else None
        if rule is None:
            self.fail("variable")
        self.pos += 1
        return Ast(rule)

    def const(self) -> Ast:
        tok = self.peek()
        rule = _DIGIT_RULES.get(tok) if tok is not None else None
        if rule is None:
            self.fail("digit")
        self.pos += 1
        return Ast(rule)


_ENTRY = {
    "Stmt": _Cursor.stmt,
    "SimpStmt": _Cursor.simp_stmt,
    "AExpr": _Cursor.aexpr,
    "ATerm": _Cursor.aterm,
    "AFactor": _Cursor.afactor,
    "BExpr": _Cursor.bexpr,
    "Var": _Cursor.var,
    "Const": _Cursor.const,
}


def reference_parse(
    d: TokenSeq,
    nt: Nonterminal | str = "Stmt",
    *,
    ctx: ParseContext | None = None,
) -> Ast:
    """Return the unique tree rooted at `nt` whose yield is exactly `d`.

    Raises UnparseableError carrying the furthest token position reached.
    """
    if ctx is None:
        ctx = ParseContext()
    root = _G.nonterminal(nt)
    if not d:
        raise UnparseableError("unparseable: empty input", position=0)

    vocab = _G.vocabulary
    words = [vocab[t].text for t in d]
    cursor = _Cursor(words, ctx)
    try:
        tree = _ENTRY[root.name](cursor)
        if cursor.pos != len(words):
            cursor.fail("end of input")
    except _NoParse:
        raise UnparseableError(f"unparseable: {ctx.describe(words)}", position=ctx.furthest) from None
    return tree

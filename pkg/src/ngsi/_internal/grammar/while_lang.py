"""The shipped WHILE-style grammar.

Expressions are right-recursive and every compound construct is closed by an
explicit terminator (`endif`, `endwhile`, `)`), so each rule can be undone by a
single left-to-right scan with nesting counters.
"""

from __future__ import annotations

from .symbols import Grammar, RuleSpec


NONTERMINAL_NAMES: tuple[str, ...] = (
    "Stmt",
    "SimpStmt",
    "AExpr",
    "ATerm",
    "AFactor",
    "BExpr",
    "Var",
    "Const",
)

VARIABLES: tuple[str, ...] = tuple(f"v{i}" for i in range(5))
DIGITS: tuple[str, ...] = tuple(str(i) for i in range(10))

OPENERS: frozenset[str] = frozenset({"(", "if", "while"})
CLOSERS: frozenset[str] = frozenset({")", "endif", "endwhile"})


WHILE_RULES: tuple[RuleSpec, ...] = (
    ("S1", "Stmt", ("SimpStmt", ";", "Stmt")),
    ("S2", "Stmt", ("SimpStmt", ";")),
    ("A1", "SimpStmt", ("Var", "=", "AExpr")),
    ("I1", "SimpStmt", ("if", "BExpr", "then", "Stmt", "else", "Stmt", "endif")),
    ("W1", "SimpStmt", ("while", "BExpr", "do", "Stmt", "endwhile")),
    ("E1", "AExpr", ("ATerm", "+", "AExpr")),
    ("E2", "AExpr", ("ATerm", "-", "AExpr")),
    ("E3", "AExpr", ("ATerm",)),
    ("T1", "ATerm", ("AFactor", "*", "ATerm")),
    ("T2", "ATerm", ("AFactor",)),
    ("F1", "AFactor", ("(", "AExpr", ")")),
    ("F2", "AFactor", ("Var",)),
    ("F3", "AFactor", ("Const",)),
    ("B1", "BExpr", ("AExpr", "<", "AExpr")),
    ("B2", "BExpr", ("AExpr", "==", "AExpr")),
    ("B3", "BExpr", ("not", "BExpr")),
    ("B4", "BExpr", ("(", "BExpr", "and", "BExpr", ")")),
    ("B5", "BExpr", ("(", "BExpr", "or", "BExpr", ")")),
    *((f"V{i + 1}", "Var", (v,)) for i, v in enumerate(VARIABLES)),
    *((f"C{i + 1}", "Const", (d,)) for i, d in enumerate(DIGITS)),
)


WHILE_GRAMMAR: Grammar = Grammar.build(NONTERMINAL_NAMES, WHILE_RULES, start="Stmt")

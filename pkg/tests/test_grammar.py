from __future__ import annotations

import unittest

from tests._bootstrap import ensure_src_on_path

ensure_src_on_path()

from ngsi._internal.grammar import WHILE_GRAMMAR, Grammar, analyze, validate_grammar  # noqa: E402
from ngsi._internal.grammar.while_lang import NONTERMINAL_NAMES, WHILE_RULES  # noqa: E402
from ngsi.exceptions import GrammarError  # noqa: E402


class TestWhileGrammar(unittest.TestCase):
    def test_rule_table_shape(self) -> None:
        g = WHILE_GRAMMAR
        self.assertEqual(len(g.rules), 33)
        self.assertEqual(len(g.nonterminals), 8)
        self.assertEqual(len(g.vocabulary), 34)
        self.assertEqual(g.start.name, "Stmt")
        self.assertEqual([r.id for r in g.rules], list(range(33)))
        self.assertEqual(g.rule_by_label("S1").id, 0)
        self.assertEqual(g.rule_by_label("B5").id, 17)
        self.assertEqual(g.rule_by_label("C10").id, 32)

    def test_rules_for_keeps_id_order(self) -> None:
        labels = [r.label for r in WHILE_GRAMMAR.rules_for("Var")]
        self.assertEqual(labels, ["V1", "V2", "V3", "V4", "V5"])
        labels = [r.label for r in WHILE_GRAMMAR.rules_for("BExpr")]
        self.assertEqual(labels, ["B1", "B2", "B3", "B4", "B5"])

    def test_describe(self) -> None:
        self.assertEqual(WHILE_GRAMMAR.rule_by_label("F1").describe(), "AFactor -> ( AExpr )")

    def test_lookup_errors(self) -> None:
        with self.assertRaises(GrammarError):
            WHILE_GRAMMAR.nonterminal("Expr")
        with self.assertRaises(GrammarError):
            WHILE_GRAMMAR.rule_by_id(33)
        with self.assertRaises(GrammarError):
            WHILE_GRAMMAR.token("v9")
        self.assertIsNone(WHILE_GRAMMAR.token_id("v9"))

    def test_shipped_grammar_has_no_defects(self) -> None:
        self.assertEqual(validate_grammar(WHILE_GRAMMAR), [])

    def test_fingerprint_is_stable_and_sensitive(self) -> None:
        again = Grammar.build(NONTERMINAL_NAMES, WHILE_RULES, start="Stmt")
        self.assertEqual(again.fingerprint(), WHILE_GRAMMAR.fingerprint())
        extended = Grammar.build(NONTERMINAL_NAMES, WHILE_RULES + (("C11", "Const", ("x",)),), start="Stmt")
        self.assertNotEqual(extended.fingerprint(), WHILE_GRAMMAR.fingerprint())
        self.assertNotEqual(extended.vocab_fingerprint(), WHILE_GRAMMAR.vocab_fingerprint())


class TestGrammarBuild(unittest.TestCase):
    def test_duplicate_label_rejected(self) -> None:
        with self.assertRaises(GrammarError):
            Grammar.build(["S"], [("R1", "S", ("a",)), ("R1", "S", ("b",))], start="S")

    def test_unknown_lhs_rejected(self) -> None:
        with self.assertRaises(GrammarError):
            Grammar.build(["S"], [("R1", "T", ("a",))], start="S")

    def test_unknown_start_rejected(self) -> None:
        with self.assertRaises(GrammarError):
            Grammar.build(["S"], [("R1", "S", ("a",))], start="T")

    def test_defects_are_reported_not_raised(self) -> None:
        g = Grammar.build(
            ["S", "A", "B", "C"],
            [
                ("R1", "S", ("a", "A")),
                ("R2", "S", ("a", "A")),
                ("R3", "A", ("b",)),
                ("R4", "B", ("c",)),
                ("R5", "S", ("C",)),
            ],
            start="S",
        )
        kinds = {(d.kind, d.nonterminal) for d in validate_grammar(g)}
        self.assertIn(("unreachable", "B"), kinds)
        self.assertIn(("nonproductive", "C"), kinds)
        self.assertIn(("duplicate", "S"), kinds)
        self.assertNotIn(("unreachable", "A"), kinds)


class TestGrammarAnalysis(unittest.TestCase):
    def setUp(self) -> None:
        self.a = analyze(WHILE_GRAMMAR)
        self.stmt = WHILE_GRAMMAR.start

    def test_minimum_program(self) -> None:
        self.assertEqual(self.a.min_length[self.stmt.id], 4)
        self.assertEqual(self.a.min_depth[self.stmt.id], 6)
        self.assertEqual(self.a.min_length_within(self.stmt, 6), 4)
        self.assertIsNone(self.a.min_length_within(self.stmt, 5))

    def test_cell_feasibility(self) -> None:
        # "v0 = 1 ;" is the only shape at depth 6.
        self.assertTrue(self.a.cell_feasible(self.stmt, depth=6, length=4))
        self.assertFalse(self.a.cell_feasible(self.stmt, depth=6, length=6))
        # "v0 = 1 + 2 ;"
        self.assertTrue(self.a.cell_feasible(self.stmt, depth=7, length=6))
        # Straight-line programs have even length; loops start at eleven tokens.
        for depth in range(6, 12):
            self.assertFalse(self.a.cell_feasible(self.stmt, depth=depth, length=5))
            self.assertFalse(self.a.cell_feasible(self.stmt, depth=depth, length=7))

    def test_bucket_feasibility(self) -> None:
        self.assertTrue(
            self.a.bucket_feasible(self.stmt, min_length=5, max_length=7, min_depth=1, max_depth=7)
        )
        self.assertFalse(
            self.a.bucket_feasible(self.stmt, min_length=5, max_length=5, min_depth=1, max_depth=20)
        )

    def test_analysis_is_cached(self) -> None:
        self.assertIs(analyze(WHILE_GRAMMAR), self.a)


if __name__ == "__main__":
    unittest.main()

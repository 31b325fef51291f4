from __future__ import annotations

import random
import unittest

from tests._bootstrap import ensure_src_on_path

ensure_src_on_path()

from ngsi._internal.data import SampleBucket, sample_program  # noqa: E402
from ngsi._internal.grammar import WHILE_GRAMMAR  # noqa: E402
from ngsi._internal.syntax import (  # noqa: E402
    ParseContext,
    ast_equal,
    deserialize,
    pretty_print,
    reference_parse,
    serialize,
    tokenize,
)
from ngsi.exceptions import UnparseableError  # noqa: E402


def _parse(text: str, nt: str = "Stmt") -> str:
    return serialize(reference_parse(tokenize(text), nt))


class TestReferenceParser(unittest.TestCase):
    def test_assignment(self) -> None:
        self.assertEqual(_parse("v0 = 1 ;"), "(S2 (A1 (V1) (E3 (T2 (F3 (C2))))))")

    def test_statement_sequence_is_right_nested(self) -> None:
        self.assertEqual(
            _parse("v0 = 1 ; v1 = 2 ;"),
            "(S1 (A1 (V1) (E3 (T2 (F3 (C2))))) (S2 (A1 (V2) (E3 (T2 (F3 (C3)))))))",
        )

    def test_arithmetic_is_right_associative(self) -> None:
        self.assertEqual(
            _parse("v0 - 1 - 2", "AExpr"),
            "(E2 (T2 (F2 (V1))) (E2 (T2 (F3 (C2))) (E3 (T2 (F3 (C3))))))",
        )
        self.assertEqual(
            _parse("v0 * 2 + 1", "AExpr"),
            "(E1 (T1 (F2 (V1)) (T2 (F3 (C3)))) (E3 (T2 (F3 (C2)))))",
        )

    def test_if_statement(self) -> None:
        self.assertEqual(
            _parse("if v0 < 1 then v1 = 2 ; else v1 = 3 ; endif ;"),
            "(S2 (I1 (B1 (E3 (T2 (F2 (V1)))) (E3 (T2 (F3 (C2)))))"
            " (S2 (A1 (V2) (E3 (T2 (F3 (C3))))))"
            " (S2 (A1 (V2) (E3 (T2 (F3 (C4))))))))",
        )

    def test_while_statement(self) -> None:
        tree = reference_parse(tokenize("while not v0 == 3 do v0 = v0 + 1 ; endwhile ;"))
        self.assertEqual(WHILE_GRAMMAR.rules[tree.children[0].rule].label, "W1")
        self.assertEqual(WHILE_GRAMMAR.rules[tree.children[0].children[0].rule].label, "B3")

    def test_connectives(self) -> None:
        self.assertEqual(
            _parse("( v0 < 1 and not v1 == 2 )", "BExpr"),
            "(B4 (B1 (E3 (T2 (F2 (V1)))) (E3 (T2 (F3 (C2))))) (B3 (B2 (E3 (T2 (F2 (V2)))) (E3 (T2 (F3 (C3)))))))",
        )
        self.assertTrue(_parse("( v0 < 1 or v1 < 2 )", "BExpr").startswith("(B5 "))

    def test_parenthesized_operand_in_condition(self) -> None:
        self.assertEqual(
            _parse("( v0 ) < 1", "BExpr"),
            "(B1 (E3 (T2 (F1 (E3 (T2 (F2 (V1))))))) (E3 (T2 (F3 (C2)))))",
        )

    def test_leaf_nonterminals(self) -> None:
        self.assertEqual(_parse("v4", "Var"), "(V5)")
        self.assertEqual(_parse("9", "Const"), "(C10)")

    def test_unparseable_reports_furthest_position(self) -> None:
        with self.assertRaises(UnparseableError) as cm:
            reference_parse(tokenize("v0 = = ;"))
        self.assertEqual(cm.exception.position, 2)

        with self.assertRaises(UnparseableError) as cm:
            reference_parse(tokenize("v0 = 1"))
        self.assertEqual(cm.exception.position, 3)

    def test_empty_input(self) -> None:
        with self.assertRaises(UnparseableError) as cm:
            reference_parse(())
        self.assertEqual(cm.exception.position, 0)

    def test_context_collects_diagnostics(self) -> None:
        ctx = ParseContext()
        with self.assertRaises(UnparseableError):
            reference_parse(tokenize("v0 = 1 ; endif"), ctx=ctx)
        self.assertEqual(ctx.furthest, 4)
        self.assertGreater(ctx.attempts, 0)

    def test_round_trip_on_sampled_programs(self) -> None:
        rng = random.Random(7)
        bucket = SampleBucket(5, 30, 1, 12)
        for _ in range(200):
            tokens, tree = sample_program(bucket, rng)
            self.assertEqual(pretty_print(tree), tokens)
            parsed = reference_parse(tokens)
            self.assertTrue(ast_equal(parsed, tree), serialize(tree))
            self.assertEqual(deserialize(serialize(parsed)), parsed)


if __name__ == "__main__":
    unittest.main()

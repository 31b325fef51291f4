from __future__ import annotations

import random
import tempfile
import unittest
from pathlib import Path

import numpy as np

from tests._bootstrap import ensure_src_on_path

ensure_src_on_path()

from ngsi._internal.data import SampleBucket, sample_program, split_corpus_lines  # noqa: E402
from ngsi._internal.grammar import WHILE_GRAMMAR, Grammar  # noqa: E402
from ngsi._internal.grammar.while_lang import NONTERMINAL_NAMES, WHILE_RULES  # noqa: E402
from ngsi._internal.guider import GuiderModel, rule_masks, zero_model  # noqa: E402
from ngsi._internal.inference import (  # noqa: E402
    InferConfig,
    OracleSelector,
    infer,
    infer_file,
    infer_lines,
    infer_with_stats,
)
from ngsi._internal.syntax import (  # noqa: E402
    ast_equal,
    reference_parse,
    serialize,
    tokenize,
)
from ngsi.enums import ErrorKind, InferMode  # noqa: E402
from ngsi.exceptions import (  # noqa: E402
    ConfigError,
    DepthLimitError,
    GrammarError,
    ModelMismatchError,
    UnparseableError,
)

ORACLE = OracleSelector()
MODES = (InferMode.Greedy, InferMode.Fallback, InferMode.Beam)


class _NoisyOracle:
    """Right rule gets most of the mass; the rest is spread over the applicable rules."""

    grammar = WHILE_GRAMMAR

    def distribution(self, d, nt):
        mask = rule_masks(self.grammar)[nt.id]
        uniform = mask / mask.sum()
        try:
            rule = reference_parse(d, nt).rule
        except UnparseableError:
            return uniform
        out = 0.4 * uniform
        out[rule] += 0.6
        return out


class TestOracleGuidedInference(unittest.TestCase):
    def test_all_modes_recover_generated_trees(self) -> None:
        rng = random.Random(21)
        bucket = SampleBucket(5, 30, 1, 12)
        programs = [sample_program(bucket, rng) for _ in range(100)]
        for mode in MODES:
            cfg = InferConfig(mode=mode)
            for tokens, tree in programs:
                with self.subTest(mode=mode.value, program=serialize(tree)):
                    self.assertTrue(ast_equal(infer(tokens, "Stmt", ORACLE, cfg), tree))

    def test_expansions_count_selector_calls(self) -> None:
        outcome = infer_with_stats(tokenize("v0 = 1 ;"), "Stmt", ORACLE, InferConfig(mode="greedy"))
        self.assertEqual(outcome.expansions, 7)
        self.assertEqual(outcome.score, 0.0)

    def test_empty_input(self) -> None:
        for mode in MODES:
            with self.assertRaises(UnparseableError) as cm:
                infer((), "Stmt", ORACLE, InferConfig(mode=mode))
            self.assertEqual(cm.exception.position, 0)

    def test_unparseable_input(self) -> None:
        for mode in MODES:
            with self.subTest(mode=mode.value):
                with self.assertRaises(UnparseableError) as cm:
                    infer(tokenize("v0 = = ;"), "Stmt", ORACLE, InferConfig(mode=mode))
                self.assertIs(cm.exception.kind, ErrorKind.UNPARSEABLE)

    def test_depth_limit(self) -> None:
        for mode in MODES:
            with self.subTest(mode=mode.value):
                with self.assertRaises(DepthLimitError) as cm:
                    infer(tokenize("v0 = 1 ;"), "Stmt", ORACLE, InferConfig(mode=mode, max_recursion_depth=3))
                self.assertIs(cm.exception.kind, ErrorKind.DEPTH_LIMIT)
        tree = infer(tokenize("v0 = 1 ;"), "Stmt", ORACLE, InferConfig(max_recursion_depth=6))
        self.assertEqual(tree, reference_parse(tokenize("v0 = 1 ;")))

    def test_oracle_rejects_other_grammar(self) -> None:
        other = Grammar.build(NONTERMINAL_NAMES, WHILE_RULES + (("C11", "Const", ("x",)),), start="Stmt")
        with self.assertRaises(GrammarError):
            OracleSelector(other)


class TestModelGuidedInference(unittest.TestCase):
    def test_zero_model_leaf(self) -> None:
        m = zero_model(d_emb=4, d_h=4)
        tree = infer(tokenize("v0"), "Var", m, InferConfig(mode=InferMode.Fallback))
        self.assertEqual(WHILE_GRAMMAR.rules[tree.rule].label, "V1")

    def test_zero_model_greedy_fails_where_fallback_recovers(self) -> None:
        m = zero_model(d_emb=4, d_h=4)
        d = tokenize("v0 = 1 ;")
        # Ties go to S1, which cannot split a single statement.
        with self.assertRaises(UnparseableError):
            infer(d, "Stmt", m, InferConfig(mode=InferMode.Greedy))
        expected = reference_parse(d)
        self.assertEqual(infer(d, "Stmt", m, InferConfig(mode=InferMode.Fallback)), expected)
        self.assertEqual(infer(d, "Stmt", m, InferConfig(mode=InferMode.Beam)), expected)

    def test_expansion_budget(self) -> None:
        m = zero_model(d_emb=4, d_h=4)
        with self.assertRaises(UnparseableError):
            infer(tokenize("v0 = 1 ;"), "Stmt", m, InferConfig(max_expansions=1))

    def test_model_grammar_mismatch(self) -> None:
        base = zero_model(d_emb=2, d_h=2)
        stale = GuiderModel(base.params, grammar_fingerprint=1, vocab_fingerprint=2)
        with self.assertRaises(ModelMismatchError):
            infer(tokenize("v0"), "Var", stale)

    def test_beam_never_worse_than_greedy(self) -> None:
        rng = random.Random(5)
        bucket = SampleBucket(5, 20, 1, 10)
        noisy = _NoisyOracle()
        for _ in range(30):
            tokens, tree = sample_program(bucket, rng)
            greedy = infer_with_stats(tokens, "Stmt", noisy, InferConfig(mode=InferMode.Greedy))
            beam = infer_with_stats(tokens, "Stmt", noisy, InferConfig(mode=InferMode.Beam, beam_width=2))
            self.assertTrue(ast_equal(greedy.tree, tree))
            self.assertGreaterEqual(beam.score + 1e-9, greedy.score)

    def test_random_model_outcomes_are_consistent(self) -> None:
        rng = np.random.default_rng(3)
        base = zero_model(d_emb=6, d_h=6, dtype=np.float64)
        m = base.with_params({k: rng.normal(0.0, 0.5, size=v.shape) for k, v in base.params.items()})
        programs = [sample_program(SampleBucket(5, 12, 1, 8), random.Random(s)) for s in range(10)]
        for tokens, tree in programs:
            # The grammar is unambiguous: any reconstructing tree is the generator's.
            self.assertTrue(ast_equal(infer(tokens, "Stmt", m, InferConfig(mode=InferMode.Fallback)), tree))
            try:
                greedy = infer_with_stats(tokens, "Stmt", m, InferConfig(mode=InferMode.Greedy))
            except UnparseableError:
                continue
            beam = infer_with_stats(tokens, "Stmt", m, InferConfig(mode=InferMode.Beam))
            self.assertGreaterEqual(beam.score + 1e-9, greedy.score)
            self.assertTrue(ast_equal(beam.tree, tree))


class TestInferConfig(unittest.TestCase):
    def test_mode_from_string(self) -> None:
        self.assertIs(InferConfig(mode="beam").mode, InferMode.Beam)

    def test_invalid(self) -> None:
        with self.assertRaises(ConfigError):
            InferConfig(mode="sideways")
        with self.assertRaises(ConfigError):
            InferConfig(beam_width=0)
        with self.assertRaises(ConfigError):
            InferConfig(max_recursion_depth=0)


class TestCorpusInference(unittest.TestCase):
    def test_errors_are_isolated_per_line(self) -> None:
        lines = [
            "v0 = 1 ;\t(S2 (A1 (V1) (E3 (T2 (F3 (C2))))))",
            "v0 = = ;",
            "v0 = foo ;",
            "v0 = 1 ; v1 = 2 ;",
        ]
        rows = list(infer_lines(split_corpus_lines(lines), ORACLE))
        self.assertEqual([r.line_no for r in rows], [1, 2, 3, 4])
        self.assertEqual([r.ok for r in rows], [True, False, False, True])
        self.assertEqual(rows[1].error, ErrorKind.UNPARSEABLE)
        self.assertEqual(rows[2].error, ErrorKind.UNPARSEABLE)
        self.assertIs(rows[0].exact_match, True)
        self.assertIsNone(rows[3].exact_match)
        self.assertGreater(rows[3].expansions, 0)

    def test_infer_file(self) -> None:
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "corpus.txt"
            path.write_text("v0 = 1 ;\n\nwhile v0 < 2 do v0 = v0 + 1 ; endwhile ;\n", encoding="utf-8")
            rows = infer_file(path, ORACLE)
            self.assertEqual([r.line_no for r in rows], [1, 3])
            self.assertTrue(all(r.ok for r in rows))

            path.write_text("", encoding="utf-8")
            self.assertEqual(infer_file(path, ORACLE), [])


if __name__ == "__main__":
    unittest.main()

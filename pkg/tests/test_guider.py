from __future__ import annotations

import math
import random
import tempfile
import unittest
from pathlib import Path

import numpy as np

from tests._bootstrap import ensure_src_on_path

ensure_src_on_path()

from ngsi._internal.data import (  # noqa: E402
    SampleBucket,
    TrainingPair,
    curriculum_schedule,
    extract_training_pairs,
    sample_program,
)
from ngsi._internal.grammar import WHILE_GRAMMAR, Grammar  # noqa: E402
from ngsi._internal.grammar.while_lang import NONTERMINAL_NAMES, WHILE_RULES  # noqa: E402
from ngsi._internal.guider import (  # noqa: E402
    AdamState,
    GuiderModel,
    TrainConfig,
    TrainingLogRow,
    adam_step,
    batch_loss,
    build_model_summary,
    encode,
    encode_batch,
    gradient_check,
    init_model,
    load_model,
    loss_and_gradients,
    predict_batch,
    predict_rule_distribution,
    read_training_log,
    recurrent_cell,
    save_model,
    train,
    write_training_log,
    zero_model,
)
from ngsi._internal.guider.persistence import decode_model, encode_model  # noqa: E402
from ngsi._internal.syntax import tokenize  # noqa: E402
from ngsi.exceptions import (  # noqa: E402
    ConfigError,
    GrammarError,
    ModelFormatError,
    ModelMismatchError,
    NonFiniteError,
    TokenizeError,
    TrainingDivergedError,
)

G = WHILE_GRAMMAR


def _random_model(seed: int, *, d_emb: int = 4, d_h: int = 4, scale: float = 0.5) -> GuiderModel:
    rng = np.random.default_rng(seed)
    base = zero_model(d_emb=d_emb, d_h=d_h, dtype=np.float64)
    return base.with_params({k: rng.normal(0.0, scale, size=v.shape) for k, v in base.params.items()})


def _pairs(seed: int, count: int) -> list[TrainingPair]:
    rng = random.Random(seed)
    pool: list[TrainingPair] = []
    while len(pool) < 4 * count:
        _, tree = sample_program(SampleBucket(5, 15, 1, 9), rng)
        pool.extend(extract_training_pairs(tree))
    return rng.sample(pool, count)


def _sigmoid(v: float) -> float:
    return 1.0 / (1.0 + math.exp(-v))


def _scalar_cell(x: np.ndarray, h: np.ndarray, p: dict) -> list[float]:
    d_h = len(h)
    out = []
    z = [_sigmoid(sum(x[i] * p["W_z"][i, j] for i in range(len(x))) + sum(h[i] * p["U_z"][i, j] for i in range(d_h)) + p["b_z"][j]) for j in range(d_h)]
    r = [_sigmoid(sum(x[i] * p["W_r"][i, j] for i in range(len(x))) + sum(h[i] * p["U_r"][i, j] for i in range(d_h)) + p["b_r"][j]) for j in range(d_h)]
    for j in range(d_h):
        a = sum(x[i] * p["W_h"][i, j] for i in range(len(x)))
        a += sum(r[i] * h[i] * p["U_h"][i, j] for i in range(d_h))
        c = math.tanh(a + p["b_h"][j])
        out.append((1.0 - z[j]) * h[j] + z[j] * c)
    return out


class TestRecurrentCell(unittest.TestCase):
    def test_zero_parameters_halve_state(self) -> None:
        m = zero_model(d_emb=3, d_h=5, dtype=np.float64)
        h = np.array([1.0, -2.0, 0.5, 4.0, 0.0])
        out = recurrent_cell(np.ones(3), h, m.params)
        np.testing.assert_array_equal(out, 0.5 * h)
        np.testing.assert_array_equal(recurrent_cell(np.ones(3), np.zeros(5), m.params), np.zeros(5))

    def test_matches_scalar_definition(self) -> None:
        m = _random_model(3, d_emb=3, d_h=2)
        rng = np.random.default_rng(4)
        for _ in range(10):
            x = rng.normal(size=3)
            h = rng.normal(size=2)
            np.testing.assert_allclose(recurrent_cell(x, h, m.params), _scalar_cell(x, h, m.params), rtol=1e-12, atol=1e-12)

    def test_shape_and_finiteness_checks(self) -> None:
        m = zero_model(d_emb=3, d_h=2, dtype=np.float64)
        with self.assertRaises(ValueError):
            recurrent_cell(np.ones(4), np.zeros(2), m.params)
        with self.assertRaises(NonFiniteError):
            recurrent_cell(np.array([1.0, np.nan, 0.0]), np.zeros(2), m.params)


class TestEncoderAndClassifier(unittest.TestCase):
    def test_zero_model_encodes_to_zero(self) -> None:
        h = encode(tokenize("v0 = 1 ;"), zero_model(d_emb=4, d_h=6))
        np.testing.assert_array_equal(h, np.zeros(6))

    def test_order_matters(self) -> None:
        m = _random_model(5, d_emb=8, d_h=8)
        a = encode(tokenize("v0 = 1 ;"), m)
        b = encode(tokenize("; 1 = v0"), m)
        self.assertFalse(np.allclose(a, b))

    def test_empty_and_out_of_vocabulary(self) -> None:
        m = zero_model(d_emb=2, d_h=2)
        with self.assertRaises(TokenizeError):
            encode((), m)
        with self.assertRaises(TokenizeError):
            encode((0, len(G.vocabulary)), m)

    def test_zero_model_is_uniform_over_applicable_rules(self) -> None:
        m = zero_model(d_emb=4, d_h=4)
        p = predict_rule_distribution(tokenize("v0 = 1 ;"), "Stmt", m)
        self.assertEqual(p.shape, (33,))
        self.assertEqual(float(p[G.rule_by_label("S1").id]), 0.5)
        self.assertEqual(float(p[G.rule_by_label("S2").id]), 0.5)
        self.assertEqual(int(np.count_nonzero(p)), 2)

    def test_inapplicable_rules_are_exactly_zero(self) -> None:
        m = _random_model(6, d_emb=8, d_h=8, scale=1.0)
        rng = np.random.default_rng(7)
        vocab = len(G.vocabulary)
        for _ in range(200):
            d = tuple(int(t) for t in rng.integers(0, vocab, size=int(rng.integers(1, 20))))
            nt = G.nonterminals[int(rng.integers(0, len(G.nonterminals)))]
            p = predict_rule_distribution(d, nt, m)
            allowed = {r.id for r in G.rules_for(nt)}
            for rid in range(len(G.rules)):
                if rid not in allowed:
                    self.assertEqual(float(p[rid]), 0.0)
            self.assertAlmostEqual(float(p.sum()), 1.0, places=6)

    def test_batch_matches_single_sequence(self) -> None:
        m = _random_model(8, d_emb=6, d_h=5)
        seqs = [tokenize("v0 = 1 ;"), tokenize("v1"), tokenize("if v0 < 1 then v1 = 2 ; else v1 = 3 ; endif")]
        h, _ = encode_batch(seqs, m)
        for i, s in enumerate(seqs):
            np.testing.assert_allclose(h[i], encode(s, m), rtol=1e-10, atol=1e-12)
        nts = [G.nonterminal("Stmt"), G.nonterminal("Var"), G.nonterminal("SimpStmt")]
        probs = predict_batch(seqs, nts, m)
        for i, (s, nt) in enumerate(zip(seqs, nts)):
            np.testing.assert_allclose(probs[i], predict_rule_distribution(s, nt, m), rtol=1e-10, atol=1e-12)


class TestLoss(unittest.TestCase):
    def test_zero_model_loss_is_mean_log_rule_count(self) -> None:
        r = G.rule_by_label
        batch = [
            TrainingPair(tokenize("v0 = 1 ;"), G.nonterminal("Stmt"), r("S2").id),
            TrainingPair(tokenize("v3"), G.nonterminal("Var"), r("V4").id),
            TrainingPair(tokenize("1 + 2"), G.nonterminal("AExpr"), r("E1").id),
        ]
        expected = (math.log(2) + math.log(5) + math.log(3)) / 3
        self.assertAlmostEqual(batch_loss(batch, zero_model(d_emb=4, d_h=4)), expected, places=6)

    def test_duplicated_batch_has_same_loss(self) -> None:
        m = _random_model(9)
        batch = _pairs(10, 5)
        self.assertAlmostEqual(batch_loss(batch, m), batch_loss(batch + batch, m), places=12)
        loss, grads = loss_and_gradients(batch, m)
        loss2, grads2 = loss_and_gradients(batch + batch, m)
        self.assertAlmostEqual(loss, loss2, places=12)
        for name in grads:
            np.testing.assert_allclose(grads[name], grads2[name], rtol=1e-9, atol=1e-14)

    def test_inapplicable_label_rejected(self) -> None:
        bad = [TrainingPair(tokenize("v0"), G.nonterminal("Var"), G.rule_by_label("C1").id)]
        with self.assertRaises(GrammarError):
            batch_loss(bad, zero_model(d_emb=2, d_h=2))

    def test_gradients_match_central_differences_float64(self) -> None:
        for trial in range(20):
            with self.subTest(trial=trial):
                m = _random_model(100 + trial)
                worst = gradient_check(_pairs(trial, 3), m, samples_per_param=3, rng=np.random.default_rng(trial))
                self.assertLess(worst, 1e-6)

    def test_gradients_match_central_differences_float32(self) -> None:
        for trial in range(100):
            with self.subTest(trial=trial):
                m = _random_model(200 + trial).astype(np.float32)
                worst = gradient_check(_pairs(trial, 3), m, samples_per_param=3, rng=np.random.default_rng(trial))
                self.assertLess(worst, 1e-3)


class TestAdam(unittest.TestCase):
    def test_first_step_moves_by_learning_rate(self) -> None:
        params = {"w": np.array([0.0, 1.0])}
        state = AdamState.for_params(params)
        new, state2 = adam_step(params, {"w": np.array([0.3, 0.0])}, state)
        self.assertAlmostEqual(float(new["w"][0]), -1e-4, places=9)
        self.assertEqual(float(new["w"][1]), 1.0)
        self.assertEqual(state2.step, 1)
        self.assertEqual(state.step, 0)
        self.assertEqual(float(params["w"][0]), 0.0)

    def test_non_finite_gradient(self) -> None:
        params = {"w": np.zeros(2)}
        with self.assertRaises(NonFiniteError):
            adam_step(params, {"w": np.array([np.inf, 0.0])}, AdamState.for_params(params))

    def test_descends_quadratic(self) -> None:
        rng = np.random.default_rng(0)
        theta = {"w": rng.uniform(0.5, 2.0, size=10) * rng.choice([-1.0, 1.0], size=10)}
        state = AdamState.for_params(theta)
        prev = 0.5 * float(np.sum(theta["w"] ** 2))
        for _ in range(100):
            theta, state = adam_step(theta, {"w": theta["w"].copy()}, state)
            cur = 0.5 * float(np.sum(theta["w"] ** 2))
            self.assertLess(cur, prev)
            prev = cur


class TestPersistence(unittest.TestCase):
    def test_round_trip_is_bitwise(self) -> None:
        m = init_model(d_emb=6, d_h=7, seed=1)
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "model.bin"
            save_model(m, path)
            loaded = load_model(path)
        self.assertEqual(loaded.grammar_fingerprint, G.fingerprint())
        for name, value in m.params.items():
            self.assertEqual(loaded.params[name].dtype, np.float32)
            self.assertTrue(np.array_equal(loaded.params[name], value), name)
        seq = tokenize("while v0 < 1 do v0 = 2 ; endwhile ;")
        self.assertTrue(
            np.array_equal(predict_rule_distribution(seq, "Stmt", m), predict_rule_distribution(seq, "Stmt", loaded))
        )

    def test_bad_magic(self) -> None:
        data = bytearray(encode_model(zero_model(d_emb=2, d_h=2)))
        data[0:5] = b"XXXXX"
        with self.assertRaises(ModelFormatError) as cm:
            decode_model(bytes(data))
        self.assertEqual(cm.exception.offset, 0)

    def test_truncated(self) -> None:
        data = encode_model(zero_model(d_emb=2, d_h=2))
        with self.assertRaises(ModelFormatError):
            decode_model(data[:10])
        with self.assertRaises(ModelFormatError):
            decode_model(data[:-3])

    def test_grammar_mismatch(self) -> None:
        other = Grammar.build(NONTERMINAL_NAMES, WHILE_RULES + (("C11", "Const", ("x",)),), start="Stmt")
        data = encode_model(zero_model(d_emb=2, d_h=2))
        with self.assertRaises(ModelMismatchError):
            decode_model(data, other)

    def test_summary(self) -> None:
        summary = build_model_summary(zero_model(d_emb=3, d_h=4)).data
        self.assertEqual(summary["d_emb"], 3)
        self.assertEqual(summary["d_h"], 4)
        self.assertEqual(summary["tensors"]["classifier.weight"], [4, 33])
        self.assertEqual(summary["grammar_fingerprint"], f"{G.fingerprint():016x}")


class TestTraining(unittest.TestCase):
    def _config(self, **kw) -> TrainConfig:
        base = dict(
            d_emb=4,
            d_h=8,
            batch_size=8,
            iterations_per_stage=5,
            programs_per_stage=10,
            heldout_programs=5,
            eval_every=5,
            early_stop_accuracy=None,
        )
        base.update(kw)
        return TrainConfig(**base)

    def test_zero_iterations_returns_initial_model(self) -> None:
        m = init_model(d_emb=4, d_h=4, seed=3)
        result = train(curriculum_schedule(2, repeats=1), self._config(iterations_per_stage=0), model=m)
        self.assertIs(result.model, m)
        self.assertEqual(result.log, [])

    def test_training_is_deterministic(self) -> None:
        schedule = curriculum_schedule(2, seed=1, repeats=1)
        a = train(schedule, self._config(seed=1))
        b = train(schedule, self._config(seed=1))
        self.assertEqual(a.log, b.log)
        self.assertEqual(len(a.log), 2)
        for name in a.model.params:
            self.assertTrue(np.array_equal(a.model.params[name], b.model.params[name]), name)

    def test_divergence_is_reported_with_stage(self) -> None:
        m = zero_model(d_emb=2, d_h=2)
        params = dict(m.params)
        params["classifier.bias"] = np.full_like(params["classifier.bias"], np.nan)
        with np.errstate(invalid="ignore"):
            with self.assertRaises(TrainingDivergedError) as cm:
                train(curriculum_schedule(1, repeats=1), self._config(d_emb=2, d_h=2), model=m.with_params(params))
        self.assertEqual(cm.exception.stage, 0)

    def test_invalid_config(self) -> None:
        with self.assertRaises(ConfigError):
            TrainConfig(batch_size=0)
        with self.assertRaises(ConfigError):
            TrainConfig(beta2=1.0)
        with self.assertRaises(ConfigError):
            TrainConfig(dtype="float16")
        self.assertEqual(TrainConfig(conventional_beta2=True).effective_beta2, 0.999)
        self.assertEqual(TrainConfig().effective_beta2, 0.9)

    def test_training_log_round_trip(self) -> None:
        rows = [TrainingLogRow(0, 5, 1.25, 0.5), TrainingLogRow(1, 10, 0.75, 0.875)]
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "log.csv"
            write_training_log(rows, path)
            self.assertEqual(path.read_text(encoding="utf-8").splitlines()[0], "stage,iteration,loss,heldout_step_acc")
            self.assertEqual(read_training_log(path), rows)


if __name__ == "__main__":
    unittest.main()

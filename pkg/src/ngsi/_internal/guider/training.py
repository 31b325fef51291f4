"""Curriculum training loop and the training-log CSV."""

from __future__ import annotations

import csv
import logging
import math
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ...exceptions import ConfigError, NonFiniteError, TrainingDivergedError
from ..data.buckets import SampleBucket
from ..data.pairs import BalancedPairSampler, TrainingPair, extract_training_pairs
from ..data.sampler import ProgramSampler
from ..grammar.symbols import Grammar
from ..grammar.while_lang import WHILE_GRAMMAR
from ..seeds import derive_seed
from .adam import DEFAULT_BETA1, DEFAULT_BETA2, DEFAULT_EPSILON, DEFAULT_LEARNING_RATE, AdamState, adam_step
from .loss import loss_and_gradients
from .model import DEFAULT_D_EMB, DEFAULT_D_H, GuiderModel, init_model, predict_batch

logger = logging.getLogger(__name__)

CONVENTIONAL_BETA2 = 0.999
TRAINING_LOG_HEADER = ("stage", "iteration", "loss", "heldout_step_acc")
_DTYPES = {"float32": np.float32, "float64": np.float64}


@dataclass(frozen=True, slots=True)
class TrainConfig:
    seed: int = 0
    batch_size: int = 64
    learning_rate: float = DEFAULT_LEARNING_RATE
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    conventional_beta2: bool = False
    epsilon: float = DEFAULT_EPSILON
    iterations_per_stage: int = 2000
    programs_per_stage: int = 2000
    heldout_programs: int = 200
    eval_every: int = 250
    # Held-out step accuracy at which a stage ends early; None disables.
    early_stop_accuracy: float | None = 0.995
    d_emb: int = DEFAULT_D_EMB
    d_h: int = DEFAULT_D_H
    dtype: str = "float32"

    def __post_init__(self) -> None:
        for name in ("batch_size", "programs_per_stage", "heldout_programs", "eval_every", "d_emb", "d_h"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.iterations_per_stage < 0:
            raise ConfigError(f"iterations_per_stage must be >= 0, got {self.iterations_per_stage}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        for name in ("beta1", "beta2"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ConfigError(f"{name} must be in [0, 1), got {getattr(self, name)}")
        if self.early_stop_accuracy is not None and not 0.0 < self.early_stop_accuracy <= 1.0:
            raise ConfigError(f"early_stop_accuracy must be in (0, 1], got {self.early_stop_accuracy}")
        if self.dtype not in _DTYPES:
            raise ConfigError(f"dtype must be one of {', '.join(_DTYPES)}, got {self.dtype!r}")

    @property
    def effective_beta2(self) -> float:
        return CONVENTIONAL_BETA2 if self.conventional_beta2 else self.beta2

    @property
    def numpy_dtype(self) -> type:
        return _DTYPES[self.dtype]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, slots=True)
class TrainingLogRow:
    stage: int
    iteration: int
    loss: float
    heldout_step_acc: float


@dataclass(slots=True)
class TrainingResult:
    model: GuiderModel
    log: list[TrainingLogRow] = field(default_factory=list)


def step_accuracy(pairs: Sequence[TrainingPair], m: GuiderModel, *, chunk: int = 256) -> float:
    """Fraction of pairs whose argmax rule equals the label."""
    if not pairs:
        return float("nan")
    hits = 0
    for i in range(0, len(pairs), chunk):
        part = pairs[i : i + chunk]
        probs = predict_batch([p.input for p in part], [p.nt for p in part], m)
        hits += int(np.sum(np.argmax(probs, axis=1) == np.array([p.label for p in part])))
    return hits / len(pairs)


def _stage_pairs(
    sampler: ProgramSampler, bucket: SampleBucket, count: int, rng: random.Random, grammar: Grammar
) -> list[TrainingPair]:
    pairs: list[TrainingPair] = []
    for _ in range(count):
        _, tree = sampler.sample(bucket, rng)
        pairs.extend(extract_training_pairs(tree, grammar))
    return pairs


def train(
    schedule: Sequence[SampleBucket],
    config: TrainConfig = TrainConfig(),
    *,
    grammar: Grammar = WHILE_GRAMMAR,
    model: GuiderModel | None = None,
) -> TrainingResult:
    """Run minibatch Adam over each bucket of `schedule` in order.

    Each stage draws fresh programs from its bucket, trains on class-balanced
    batches of their training pairs and measures step accuracy on a held-out
    draw from the same bucket. With zero iterations per stage the initial
    model is returned unchanged.
    """
    if model is None:
        model = init_model(
            grammar,
            d_emb=config.d_emb,
            d_h=config.d_h,
            seed=derive_seed(config.seed, "init"),
            dtype=config.numpy_dtype,
        )
    else:
        model.check_grammar(grammar)

    result = TrainingResult(model=model)
    if config.iterations_per_stage == 0 or not schedule:
        return result

    sampler = ProgramSampler(grammar)
    state = AdamState.for_params(
        model.params,
        alpha=config.learning_rate,
        beta1=config.beta1,
        beta2=config.effective_beta2,
        eps=config.epsilon,
    )

    for stage, bucket in enumerate(schedule):
        train_pairs = _stage_pairs(sampler, bucket, config.programs_per_stage, random.Random(bucket.seed), grammar)
        heldout = _stage_pairs(
            sampler,
            bucket,
            config.heldout_programs,
            random.Random(derive_seed(config.seed, "heldout", stage)),
            grammar,
        )
        batches = BalancedPairSampler(train_pairs)
        batch_rng = np.random.default_rng(derive_seed(config.seed, "batches", stage))
        logger.info(
            "stage %d/%d: %s, %d training pairs, %d held-out pairs",
            stage + 1,
            len(schedule),
            bucket,
            len(train_pairs),
            len(heldout),
        )

        loss = float("nan")
        for it in range(1, config.iterations_per_stage + 1):
            batch = batches.batch(batch_rng, config.batch_size)
            loss, grads = loss_and_gradients(batch, model)
            if not math.isfinite(loss):
                raise TrainingDivergedError(f"loss became {loss} at iteration {it}", stage=stage)
            try:
                params, state = adam_step(model.params, grads, state)
            except NonFiniteError as e:
                raise TrainingDivergedError(f"{e} at iteration {it}", stage=stage) from None
            model = model.with_params(params)

            last = it == config.iterations_per_stage
            if it % config.eval_every == 0 or last:
                acc = step_accuracy(heldout, model)
                result.log.append(TrainingLogRow(stage, it, loss, acc))
                logger.info("stage %d iteration %d: loss=%.4f heldout_step_acc=%.4f", stage, it, loss, acc)
                if config.early_stop_accuracy is not None and acc >= config.early_stop_accuracy:
                    if not last:
                        logger.info("stage %d: early stop at iteration %d", stage, it)
                    break

    result.model = model
    return result


def write_training_log(rows: Iterable[TrainingLogRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(TRAINING_LOG_HEADER)
        for r in rows:
            w.writerow([r.stage, r.iteration, f"{r.loss:.6f}", f"{r.heldout_step_acc:.6f}"])


def read_training_log(path: str | Path) -> list[TrainingLogRow]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != TRAINING_LOG_HEADER:
            raise ConfigError(f"{path}: expected header {','.join(TRAINING_LOG_HEADER)}")
        return [
            TrainingLogRow(
                stage=int(row["stage"]),
                iteration=int(row["iteration"]),
                loss=float(row["loss"]),
                heldout_step_acc=float(row["heldout_step_acc"]),
            )
            for row in reader
        ]

"""Guider model: token embedding, GRU encoder and a masked linear rule classifier.

Row-vector convention throughout: `x @ W` with W shaped [in, out].
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ...exceptions import GrammarError, ModelMismatchError, NonFiniteError, TokenizeError
from ..grammar.symbols import Grammar, Nonterminal
from ..grammar.while_lang import WHILE_GRAMMAR
from ..syntax.tree import TokenSeq

DEFAULT_D_EMB = 64
DEFAULT_D_H = 256

GATES = ("z", "r", "h")
PARAM_NAMES: tuple[str, ...] = (
    "embedding",
    "W_z",
    "W_r",
    "W_h",
    "U_z",
    "U_r",
    "U_h",
    "b_z",
    "b_r",
    "b_h",
    "classifier.weight",
    "classifier.bias",
)

Params = dict[str, np.ndarray]


def sigmoid(x: np.ndarray) -> np.ndarray:
    # tanh form never overflows and gives sigmoid(0) == 0.5 exactly.
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def param_shapes(vocab_size: int, rule_count: int, d_emb: int, d_h: int) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {"embedding": (vocab_size, d_emb)}
    for g in GATES:
        shapes[f"W_{g}"] = (d_emb, d_h)
    for g in GATES:
        shapes[f"U_{g}"] = (d_h, d_h)
    for g in GATES:
        shapes[f"b_{g}"] = (d_h,)
    shapes["classifier.weight"] = (d_h, rule_count)
    shapes["classifier.bias"] = (rule_count,)
    return shapes


@dataclass
class GuiderModel:
    """All learnable parameters plus the fingerprints of the grammar they were trained on."""

    params: Params
    grammar_fingerprint: int
    vocab_fingerprint: int
    grammar: Grammar = field(default=WHILE_GRAMMAR, repr=False, compare=False)

    @property
    def d_emb(self) -> int:
        return int(self.params["embedding"].shape[1])

    @property
    def d_h(self) -> int:
        return int(self.params["U_z"].shape[0])

    @property
    def dtype(self) -> np.dtype:
        return self.params["embedding"].dtype

    @property
    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    def validate(self) -> None:
        missing = [n for n in PARAM_NAMES if n not in self.params]
        if missing:
            raise ValueError(f"missing parameters: {', '.join(missing)}")
        expected = param_shapes(len(self.grammar.vocabulary), len(self.grammar.rules), self.d_emb, self.d_h)
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                raise ValueError(f"{name} has shape {self.params[name].shape}, expected {shape}")
            if not np.all(np.isfinite(self.params[name])):
                raise NonFiniteError(f"{name} contains non-finite entries")

    def check_grammar(self, grammar: Grammar) -> None:
        if (
            self.grammar_fingerprint != grammar.fingerprint()
            or self.vocab_fingerprint != grammar.vocab_fingerprint()
        ):
            raise ModelMismatchError(
                "model/grammar mismatch: "
                f"model grammar={self.grammar_fingerprint:016x} vocab={self.vocab_fingerprint:016x}, "
                f"grammar={grammar.fingerprint():016x} vocab={grammar.vocab_fingerprint():016x}"
            )

    def with_params(self, params: Params) -> "GuiderModel":
        return GuiderModel(
            params=params,
            grammar_fingerprint=self.grammar_fingerprint,
            vocab_fingerprint=self.vocab_fingerprint,
            grammar=self.grammar,
        )

    def astype(self, dtype: np.dtype | type) -> "GuiderModel":
        return self.with_params({k: v.astype(dtype) for k, v in self.params.items()})

    def copy(self) -> "GuiderModel":
        return self.with_params({k: v.copy() for k, v in self.params.items()})


def init_model(
    grammar: Grammar = WHILE_GRAMMAR,
    *,
    d_emb: int = DEFAULT_D_EMB,
    d_h: int = DEFAULT_D_H,
    seed: int = 0,
    dtype: np.dtype | type = np.float32,
) -> GuiderModel:
    """Matrices uniform in [-1/sqrt(d_h), 1/sqrt(d_h)], biases zero."""
    rng = np.random.default_rng(seed)
    bound = 1.0 / np.sqrt(d_h)
    params: Params = {}
    for name, shape in param_shapes(len(grammar.vocabulary), len(grammar.rules), d_emb, d_h).items():
        if len(shape) == 1:
            params[name] = np.zeros(shape, dtype=dtype)
        else:
            params[name] = rng.uniform(-bound, bound, size=shape).astype(dtype)
    return GuiderModel(params, grammar.fingerprint(), grammar.vocab_fingerprint(), grammar)


def zero_model(
    grammar: Grammar = WHILE_GRAMMAR,
    *,
    d_emb: int = DEFAULT_D_EMB,
    d_h: int = DEFAULT_D_H,
    dtype: np.dtype | type = np.float32,
) -> GuiderModel:
    params = {
        name: np.zeros(shape, dtype=dtype)
        for name, shape in param_shapes(len(grammar.vocabulary), len(grammar.rules), d_emb, d_h).items()
    }
    return GuiderModel(params, grammar.fingerprint(), grammar.vocab_fingerprint(), grammar)


@functools.lru_cache(maxsize=8)
def rule_masks(grammar: Grammar) -> np.ndarray:
    """Boolean [nonterminals, rules] table: True where the rule expands the nonterminal."""
    mask = np.zeros((len(grammar.nonterminals), len(grammar.rules)), dtype=bool)
    for rule in grammar.rules:
        mask[rule.lhs.id, rule.id] = True
    mask.setflags(write=False)
    return mask


def applicable_mask(grammar: Grammar, nt: Nonterminal) -> np.ndarray:
    row = rule_masks(grammar)[grammar.nonterminal(nt).id]
    if not row.any():
        raise GrammarError(f"{nt.name} has no rules")
    return row


def masked_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Softmax over `mask`; entries outside the mask are exactly 0."""
    z = np.where(mask, logits.astype(np.float64), -np.inf)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


# --- Single-sequence path ---


def recurrent_cell(x: np.ndarray, h: np.ndarray, params: Mapping[str, np.ndarray]) -> np.ndarray:
    """One GRU step.

    z = sigmoid(x W_z + h U_z + b_z), r = sigmoid(x W_r + h U_r + b_r),
    c = tanh(x W_h + (r*h) U_h + b_h), output (1-z)*h + z*c.
    """
    if x.shape != (params["W_z"].shape[0],) or h.shape != (params["U_z"].shape[0],):
        raise ValueError(f"cell expects x{params['W_z'].shape[:1]} and h{params['U_z'].shape[:1]}, got {x.shape}, {h.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(h))):
        raise NonFiniteError("recurrent cell input contains non-finite entries")

    z = sigmoid(x @ params["W_z"] + h @ params["U_z"] + params["b_z"])
    r = sigmoid(x @ params["W_r"] + h @ params["U_r"] + params["b_r"])
    c = np.tanh(x @ params["W_h"] + (r * h) @ params["U_h"] + params["b_h"])
    return (1.0 - z) * h + z * c


def _check_tokens(d: TokenSeq, vocab_size: int) -> None:
    if not d:
        raise TokenizeError("cannot encode an empty token sequence")
    for t in d:
        if not (0 <= t < vocab_size):
            raise TokenizeError(f"token id {t} is outside the vocabulary")


def encode(d: TokenSeq, m: GuiderModel) -> np.ndarray:
    """Final hidden state after folding the cell over the embedded tokens from h0 = 0."""
    emb = m.params["embedding"]
    _check_tokens(d, emb.shape[0])
    h = np.zeros(m.d_h, dtype=m.dtype)
    for t in d:
        h = recurrent_cell(emb[t], h, m.params)
    return h


def rule_logits(h: np.ndarray, m: GuiderModel) -> np.ndarray:
    return h @ m.params["classifier.weight"] + m.params["classifier.bias"]


def predict_rule_distribution(d: TokenSeq, nt: Nonterminal | str, m: GuiderModel) -> np.ndarray:
    """Probability over all rule ids; zero exactly on rules that do not expand `nt`."""
    mask = applicable_mask(m.grammar, m.grammar.nonterminal(nt))
    return masked_softmax(rule_logits(encode(d, m), m), mask)


# --- Batched path (training and bulk scoring) ---


@dataclass(slots=True)
class EncoderCache:
    ids: np.ndarray  # [B, T] token ids, 0 where padded
    mask: np.ndarray  # [B, T, 1] 1.0 on real tokens
    xs: np.ndarray  # [B, T, d_emb]
    h_prev: list[np.ndarray]
    z: list[np.ndarray]
    r: list[np.ndarray]
    c: list[np.ndarray]


def encode_batch(seqs: Sequence[TokenSeq], m: GuiderModel) -> tuple[np.ndarray, EncoderCache]:
    """Right-padded batch encode; a sequence's state is frozen once it ends."""
    p = m.params
    vocab_size = p["embedding"].shape[0]
    for s in seqs:
        _check_tokens(s, vocab_size)

    batch = len(seqs)
    steps = max(len(s) for s in seqs)
    ids = np.zeros((batch, steps), dtype=np.int64)
    mask = np.zeros((batch, steps, 1), dtype=m.dtype)
    for i, s in enumerate(seqs):
        ids[i, : len(s)] = s
        mask[i, : len(s), 0] = 1.0

    xs = p["embedding"][ids]
    xz = xs @ p["W_z"] + p["b_z"]
    xr = xs @ p["W_r"] + p["b_r"]
    xh = xs @ p["W_h"] + p["b_h"]

    h = np.zeros((batch, m.d_h), dtype=m.dtype)
    cache = EncoderCache(ids=ids, mask=mask, xs=xs, h_prev=[], z=[], r=[], c=[])
    for t in range(steps):
        z = sigmoid(xz[:, t] + h @ p["U_z"])
        r = sigmoid(xr[:, t] + h @ p["U_r"])
        c = np.tanh(xh[:, t] + (r * h) @ p["U_h"])
        cache.h_prev.append(h)
        cache.z.append(z)
        cache.r.append(r)
        cache.c.append(c)
        mt = mask[:, t]
        h = mt * ((1.0 - z) * h + z * c) + (1.0 - mt) * h
    return h, cache


def predict_batch(seqs: Sequence[TokenSeq], nts: Sequence[Nonterminal], m: GuiderModel) -> np.ndarray:
    """[B, R] masked distributions for many (input, nonterminal) queries at once."""
    h, _ = encode_batch(seqs, m)
    masks = rule_masks(m.grammar)[[m.grammar.nonterminal(nt).id for nt in nts]]
    return masked_softmax(rule_logits(h, m), masks)

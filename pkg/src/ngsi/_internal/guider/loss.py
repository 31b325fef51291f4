"""Cross-entropy over masked rule distributions with full backpropagation through time."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ...exceptions import GrammarError
from ..data.pairs import TrainingPair
from .model import GuiderModel, Params, encode_batch, masked_softmax, rule_logits, rule_masks


def _labels_and_masks(batch: Sequence[TrainingPair], m: GuiderModel) -> tuple[np.ndarray, np.ndarray]:
    masks = rule_masks(m.grammar)
    rows = np.array([p.nt.id for p in batch], dtype=np.int64)
    labels = np.array([p.label for p in batch], dtype=np.int64)
    batch_masks = masks[rows]
    bad = ~batch_masks[np.arange(len(batch)), labels]
    if bad.any():
        p = batch[int(np.flatnonzero(bad)[0])]
        raise GrammarError(f"rule {m.grammar.rules[p.label].label} does not expand {p.nt.name}")
    return labels, batch_masks


def batch_loss(batch: Sequence[TrainingPair], m: GuiderModel) -> float:
    """Mean negative log-probability of the labelled rule."""
    if not batch:
        raise ValueError("empty batch")
    labels, masks = _labels_and_masks(batch, m)
    h, _ = encode_batch([p.input for p in batch], m)
    probs = masked_softmax(rule_logits(h, m), masks)
    return float(-np.mean(np.log(probs[np.arange(len(batch)), labels])))


def loss_and_gradients(batch: Sequence[TrainingPair], m: GuiderModel) -> tuple[float, Params]:
    """Loss and its exact gradient with respect to every parameter."""
    if not batch:
        raise ValueError("empty batch")
    labels, masks = _labels_and_masks(batch, m)
    p = m.params
    n = len(batch)

    h_last, cache = encode_batch([pair.input for pair in batch], m)
    logits = rule_logits(h_last, m)
    probs = masked_softmax(logits, masks)
    loss = float(-np.mean(np.log(probs[np.arange(n), labels])))

    dlogits = probs.copy()
    dlogits[np.arange(n), labels] -= 1.0
    dlogits = (dlogits / n).astype(m.dtype)

    grads: Params = {k: np.zeros_like(v) for k, v in p.items()}
    grads["classifier.weight"] = h_last.T @ dlogits
    grads["classifier.bias"] = dlogits.sum(axis=0)

    dh = dlogits @ p["classifier.weight"].T
    for t in reversed(range(len(cache.z))):
        mt = cache.mask[:, t]
        h, z, r, c = cache.h_prev[t], cache.z[t], cache.r[t], cache.c[t]
        x = cache.xs[:, t]

        dh_new = mt * dh
        dh_prev = (1.0 - mt) * dh + dh_new * (1.0 - z)
        dz = dh_new * (c - h)
        dc = dh_new * z

        da_h = dc * (1.0 - c * c)
        rh = r * h
        grads["W_h"] += x.T @ da_h
        grads["U_h"] += rh.T @ da_h
        grads["b_h"] += da_h.sum(axis=0)
        drh = da_h @ p["U_h"].T
        dr = drh * h
        dh_prev += drh * r

        da_r = dr * r * (1.0 - r)
        da_z = dz * z * (1.0 - z)
        grads["W_r"] += x.T @ da_r
        grads["U_r"] += h.T @ da_r
        grads["b_r"] += da_r.sum(axis=0)
        grads["W_z"] += x.T @ da_z
        grads["U_z"] += h.T @ da_z
        grads["b_z"] += da_z.sum(axis=0)
        dh_prev += da_z @ p["U_z"].T + da_r @ p["U_r"].T

        dx = da_z @ p["W_z"].T + da_r @ p["W_r"].T + da_h @ p["W_h"].T
        np.add.at(grads["embedding"], cache.ids[:, t], dx)
        dh = dh_prev

    return loss, grads


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float) -> np.ndarray:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / denom


def gradient_check(
    batch: Sequence[TrainingPair],
    m: GuiderModel,
    *,
    eps: float = 1e-5,
    samples_per_param: int = 8,
    floor: float = 1e-2,
    rng: np.random.Generator | None = None,
) -> float:
    """Worst relative error between analytic gradients and central differences.

    Analytic gradients are taken at the model's own precision; the central
    differences always run on a float64 copy.
    """
    rng = rng or np.random.default_rng(0)
    _, grads = loss_and_gradients(batch, m)
    ref = m.astype(np.float64)

    worst = 0.0
    for name, value in ref.params.items():
        flat = value.reshape(-1)
        k = min(samples_per_param, flat.size)
        for idx in rng.choice(flat.size, size=k, replace=False):
            saved = flat[idx]
            flat[idx] = saved + eps
            up = batch_loss(batch, ref)
            flat[idx] = saved - eps
            down = batch_loss(batch, ref)
            flat[idx] = saved
            numeric = (up - down) / (2.0 * eps)
            analytic = float(grads[name].reshape(-1)[idx])
            err = float(relative_error(np.array(analytic), np.array(numeric), floor))
            worst = max(worst, err)
    return worst
